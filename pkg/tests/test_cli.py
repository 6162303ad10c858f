import json

import pytest

from folkit import jsonio
from folkit.cli import run
from folkit.kernel import check


def run_cli(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_fmt(capsys):
    code, out, _ = run_cli(capsys, "fmt", "--formula", "forall x. P(x) -> Q(x)")
    assert code == 0
    assert json.loads(out)["pretty"] == "forall x0. P(x0) -> Q(x0)"


def test_fmt_malformed_exit_2(capsys):
    code, out, err = run_cli(capsys, "fmt", "--formula", "P(x0,")
    assert code == 2
    assert "1:6" in err


def test_prove_emits_checking_derivation(capsys):
    code, out, _ = run_cli(capsys, "prove", "--formula", "p -> p")
    assert code == 0
    d = jsonio.deriv_from_json(json.loads(out)["deriv"])
    check(d)
    assert d.calc == "ljt"


def test_prove_negative_exit_1(capsys):
    code, out, _ = run_cli(capsys, "prove", "--formula", "((p->q)->p)->p",
                           "--budget", "8")
    assert code == 1


def test_countermodel_kripke(capsys):
    code, out, _ = run_cli(capsys, "countermodel", "--kripke",
                           "--formula", "((p->q)->p)->p",
                           "--max-domain", "1", "--max-worlds", "2")
    assert code == 0
    data = json.loads(out)
    assert data["found"] and data["model"]["worlds"] <= 2
    code, _, _ = run_cli(capsys, "countermodel", "--kripke", "--formula", "p -> p")
    assert code == 1


def test_translate(capsys):
    code, out, _ = run_cli(capsys, "translate", "--demorgan",
                           "--formula", "p \\/ ~p")
    assert code == 0
    assert json.loads(out)["pretty"] == "~p -> ~p"
    code, out, _ = run_cli(capsys, "translate", "--close",
                           "--formula", "P(x0, x1)")
    assert json.loads(out)["pretty"] == "P(c0, c1)"


def test_check_round_trip(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "prove", "--formula", "p -> q -> p")
    blob = json.loads(out)["deriv"]
    path = tmp_path / "d.json"
    path.write_text(json.dumps(blob))
    code, out, _ = run_cli(capsys, "check", "--calc", "ljt",
                           "--input", str(path))
    assert code == 0
    assert json.loads(out)["calc"] == "ljt"


def test_normalize_cli(capsys, tmp_path):
    from folkit.kernel import nd_assume, nd_ii, nd_ie
    from folkit.syntax import Atom, Impl
    p = Atom("p")
    inner = nd_ii(nd_assume("ndi", (p,), p))
    wrap = nd_ii(nd_assume("ndi", (Impl(p, p),), Impl(p, p)))
    d = nd_ie(wrap, inner)
    path = tmp_path / "d.json"
    path.write_text(json.dumps(jsonio.deriv_to_json(d)))
    code, out, _ = run_cli(capsys, "normalize", "--input", str(path))
    assert code == 0
    norm = jsonio.deriv_from_json(json.loads(out)["deriv"])
    assert norm.calc == "ljt" and norm.rule == "IR"


def test_wkl_encode_cli(capsys, tmp_path):
    tree = {"nodes": [[], [True], [True, True], [True, False]], "depth": 2}
    path = tmp_path / "tree.json"
    path.write_text(json.dumps(tree))
    code, out, _ = run_cli(capsys, "wkl-encode", "--tree", str(path),
                           "--depth", "2")
    assert code == 0
    assert json.loads(out)["pretty"] == "P0 /\\ P1 \\/ P0 /\\ ~P1"


def test_eval_model_cli(capsys, tmp_path):
    model = {"domain": 2, "bot": False, "funcs": {},
             "preds": {"P": {"arity": 1, "table": [True, False]}}}
    path = tmp_path / "m.json"
    path.write_text(json.dumps(model))
    code, out, _ = run_cli(capsys, "eval", "--model", str(path),
                           "--formula", "exists x. P(x)")
    assert code == 0 and json.loads(out)["value"] is True


def test_game_scripted(capsys):
    code, out, _ = run_cli(capsys, "game", "--variant", "e",
                           "--formula", "false -> P", "--script", "m0")
    assert code == 0
    snap = json.loads(out)
    assert snap["status"] == "proponent_won"


def test_json_envelope(capsys):
    code, out, _ = run_cli(capsys, "--json", "prove", "--formula", "p -> p")
    assert code == 0
    data = json.loads(out)
    assert data["ok"] is True and "result" in data
    code, out, _ = run_cli(capsys, "--json", "prove", "--formula",
                           "((p->q)->p)->p", "--budget", "6")
    assert code == 1
    data = json.loads(out)
    assert data["ok"] is False


def test_determinism(capsys):
    cmds = [
        ("fmt", "--formula", "p /\\ q -> q"),
        ("prove", "--formula", "p -> q -> p"),
        ("countermodel", "--kripke", "--formula", "~~p -> p",
         "--max-domain", "1", "--max-worlds", "2"),
        ("translate", "--dn", "--formula", "p \\/ q"),
    ]
    for cmd in cmds:
        _, out1, _ = run_cli(capsys, *cmd)
        _, out2, _ = run_cli(capsys, *cmd)
        assert out1 == out2, cmd


def test_game_interactive_loop(capsys, monkeypatch):
    import io
    # the human plays the only legal opening, then the engine wins
    monkeypatch.setattr("sys.stdin", io.StringIO("m0\n"))
    monkeypatch.setattr("builtins.input", lambda prompt="": "m0")
    code = run(["game", "--variant", "e", "--formula", "false -> P"])
    out = capsys.readouterr().out
    assert code == 0
    assert "proponent wins" in out
    assert "[m0]" in out  # the legal move list was printed


def test_game_interactive_illegal_then_quit(capsys, monkeypatch):
    answers = iter(["m42", "q"])
    monkeypatch.setattr("builtins.input", lambda prompt="": next(answers))
    code = run(["game", "--variant", "e", "--formula", "p -> p"])
    out = capsys.readouterr().out
    assert code == 0
    assert "illegal move" in out
    assert '"abandoned"' in out


def test_translate_close_then_sig_drop_round_trip(capsys):
    from folkit.jsonio import formula_from_json
    from folkit.surface import parse

    original = "forall x0. P(x0, x1)"
    code, out, _ = run_cli(capsys, "translate", "--close",
                           "--formula", original)
    assert code == 0
    closed = json.loads(out)["pretty"]
    assert "c1" in closed  # the free variable became a fresh constant
    code, out, _ = run_cli(capsys, "translate", "--sig-drop", "0",
                           "--formula", closed)
    assert code == 0
    assert formula_from_json(json.loads(out)["formula"]) == parse(original)
