"""Command-line front door.

Exit codes: 0 success, 1 negative mathematical result (countermodel found,
or budget exhausted where a proof was requested), 2 usage error.  Output is
deterministic; --json wraps results as {"ok": bool, "result"|"error": ...}.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import jsonio
from .dialogues import IllegalMove
from .heyting import eval_formula
from .kernel import CheckError, check
from .models import (Environment, TreeOracle, countermodel_search_kripke,
                     countermodel_search_tarski, ksat, sat, wkl_encode)
from .nbe import NotFragment, normalize
from .search import ProofSearchBudget, ljt_search
from .sessions import (SessionError, legal_opponent_moves, new_game,
                       opponent_move)
from .surface import ParseError, parse, parse_term, print_formula
from .syntax import (MalformedSyntaxError, close, de_morgan, dn_translate,
                     sig_drop)


class UsageError(Exception):
    pass


class NegativeResult(Exception):
    def __init__(self, payload):
        super().__init__("negative result")
        self.payload = payload


def _read_input(args) -> str:
    if getattr(args, "input", None):
        with open(args.input) as fh:
            return fh.read()
    return sys.stdin.read()


def _formula_arg(args) -> object:
    if getattr(args, "formula", None):
        text = args.formula
    else:
        text = _read_input(args).strip()
    try:
        return parse(text)
    except ParseError as err:
        raise UsageError(f"cannot parse formula: {err}")


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def cmd_fmt(args):
    phi = _formula_arg(args)
    return {"pretty": print_formula(phi), "formula": jsonio.formula_to_json(phi)}


def cmd_check(args):
    data = _load_json(args.input) if args.input else json.load(sys.stdin)
    d = jsonio.deriv_from_json(data)
    if args.calc and d.calc != args.calc:
        raise UsageError(f"derivation is {d.calc}, expected {args.calc}")
    end = check(d)
    return {"calc": d.calc, "end": jsonio._judgment_to_json(end)}


def cmd_normalize(args):
    data = _load_json(args.input) if args.input else json.load(sys.stdin)
    d = jsonio.deriv_from_json(data)
    out = normalize(d)
    return {"deriv": jsonio.deriv_to_json(out)}


def cmd_prove(args):
    phi = _formula_arg(args)
    budget = ProofSearchBudget(max_depth=args.budget)
    d = ljt_search((), phi, budget)
    if d is None:
        raise NegativeResult({"provable": None,
                              "note": f"budget exhausted at depth {args.budget}"})
    return {"deriv": jsonio.deriv_to_json(d)}


def cmd_eval(args):
    phi = _formula_arg(args)
    rho = Environment()
    if args.env:
        rho = jsonio.environment_from_json(json.loads(args.env))
    if args.model:
        m = jsonio.model_from_json(_load_json(args.model))
        return {"value": sat(m, rho, phi)}
    if args.kripke:
        k = jsonio.kripke_from_json(_load_json(args.kripke))
        return {"value": ksat(k, args.world, rho, phi)}
    if args.algebra:
        h = jsonio.algebra_from_json(_load_json(args.algebra))
        interp = jsonio.interp_from_json(
            _load_json(args.interp) if args.interp else {})
        return {"value": eval_formula(h, interp, phi)}
    raise UsageError("eval needs one of --model, --kripke, --algebra")


def cmd_countermodel(args):
    phi = _formula_arg(args)
    if args.tarski:
        got = countermodel_search_tarski(phi, args.max_domain)
        if got is None:
            raise NegativeResult({"found": False, "note": "bounds exhausted"})
        m, rho = got
        return {"found": True, "model": jsonio.model_to_json(m),
                "env": jsonio.environment_to_json(rho)}
    got = countermodel_search_kripke(phi, args.max_worlds, args.max_domain)
    if got is None:
        raise NegativeResult({"found": False, "note": "bounds exhausted"})
    k, rho, w = got
    return {"found": True, "model": jsonio.kripke_to_json(k),
            "env": jsonio.environment_to_json(rho), "world": w}


def cmd_translate(args):
    phi = _formula_arg(args)
    if args.demorgan:
        out = de_morgan(phi)
    elif args.dn:
        out = dn_translate(phi)
    elif args.close:
        out = close(phi)
    elif args.sig_drop is not None:
        out = sig_drop(args.sig_drop, phi)
    else:
        raise UsageError("translate needs one of --demorgan, --dn, --close, --sig-drop")
    return {"pretty": print_formula(out), "formula": jsonio.formula_to_json(out)}


def cmd_wkl_encode(args):
    data = _load_json(args.tree)
    nodes = frozenset(tuple(bool(b) for b in node) for node in data["nodes"])
    tau = TreeOracle(nodes, data.get("depth", max((len(n) for n in nodes),
                                                  default=0)))
    phi = wkl_encode(tau, args.depth)
    return {"pretty": print_formula(phi), "formula": jsonio.formula_to_json(phi)}


def cmd_game(args):
    phi = _formula_arg(args)
    proof = None
    if args.proof:
        proof = jsonio.deriv_from_json(_load_json(args.proof))
    try:
        session = new_game(args.variant, phi, proof)
    except SessionError as err:
        raise NegativeResult({"hosted": False, "note": str(err)})
    if args.script is not None:
        # scripted play: semicolon-separated "move_id[:term]" entries;
        # a finished game simply stops consuming the script
        for step in [s for s in args.script.split(";") if s]:
            if session.status != "open":
                break
            move_id, _, term = step.partition(":")
            opponent_move(session, move_id.strip(), term.strip() or None)
        return _local_snapshot(session)
    # interactive terminal fallback
    print(f"playing {args.variant.upper()}-dialogue on {print_formula(phi)}")
    while session.status == "open":
        moves = legal_opponent_moves(session)
        if not moves:
            break
        for m in moves:
            extra = " (type: m<id> <term>)" if m.needs_term else ""
            print(f"  [{m.id}] {m.rule}: {m.description}{extra}")
        line = input("your move> ").strip()
        if not line:
            continue
        if line in ("q", "quit", "exit"):
            return {"status": "abandoned"}
        parts = line.split(None, 1)
        try:
            result = opponent_move(session, parts[0],
                                   parts[1] if len(parts) > 1 else None)
        except IllegalMove as err:
            print(f"illegal move: {err}")
            continue
        print(f"  engine: {jsonio.dumps(result['engine'])}")
    print("the proponent wins — no legal moves remain")
    return _local_snapshot(session)


def _local_snapshot(session):
    # terminal games have no session registry; the random id is omitted so
    # identical runs stay byte-identical
    snap = session.snapshot()
    snap.pop("id", None)
    return snap


def cmd_serve(args):
    from .service import serve
    serve(args.addr, args.persist_dir, args.ttl, args.cors_origin, args.ui_dir)
    return {}


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="folkit",
                                  description="first-order logic workbench")
    top.add_argument("--json", action="store_true",
                     help="wrap output in a machine-readable envelope")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fmt", help="parse and pretty-print a formula")
    p.add_argument("--formula")
    p.add_argument("--input")
    p.set_defaults(fn=cmd_fmt)

    p = sub.add_parser("check", help="check a derivation (JSON)")
    p.add_argument("--calc", choices=["ndi", "ndc", "ljt", "lj", "ljd"])
    p.add_argument("--input")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("normalize", help="NBE cut-elimination of an NDi derivation")
    p.add_argument("--input")
    p.set_defaults(fn=cmd_normalize)

    p = sub.add_parser("prove", help="bounded LJT proof search")
    p.add_argument("--formula")
    p.add_argument("--input")
    p.add_argument("--budget", type=int, default=10)
    p.add_argument("--calc", choices=["ljt"], default="ljt")
    p.set_defaults(fn=cmd_prove)

    p = sub.add_parser("eval", help="evaluate a formula in a finite structure")
    p.add_argument("--formula")
    p.add_argument("--input")
    p.add_argument("--model", help="Tarski model JSON file")
    p.add_argument("--kripke", help="Kripke model JSON file")
    p.add_argument("--algebra", help="Heyting algebra JSON file")
    p.add_argument("--interp", help="atom interpretation JSON file")
    p.add_argument("--env", help="environment JSON inline")
    p.add_argument("--world", type=int, default=0)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("countermodel", help="bounded countermodel search")
    p.add_argument("--formula")
    p.add_argument("--input")
    p.add_argument("--tarski", action="store_true")
    p.add_argument("--kripke", action="store_true")
    p.add_argument("--max-domain", type=int, default=2)
    p.add_argument("--max-worlds", type=int, default=2)
    p.set_defaults(fn=cmd_countermodel)

    p = sub.add_parser("translate", help="syntactic translations")
    p.add_argument("--formula")
    p.add_argument("--input")
    p.add_argument("--demorgan", action="store_true")
    p.add_argument("--dn", action="store_true")
    p.add_argument("--close", action="store_true")
    p.add_argument("--sig-drop", type=int, default=None)
    p.set_defaults(fn=cmd_translate)

    p = sub.add_parser("wkl-encode", help="encode a binary tree level as a formula")
    p.add_argument("--tree", required=True, help='JSON {"nodes": [[bits]...]}')
    p.add_argument("--depth", type=int, required=True)
    p.set_defaults(fn=cmd_wkl_encode)

    p = sub.add_parser("game", help="play a dialogue game in the terminal")
    p.add_argument("--variant", choices=["e", "d", "s"], default="e")
    p.add_argument("--formula")
    p.add_argument("--input")
    p.add_argument("--proof", help="derivation JSON file (LJ or LJD)")
    p.add_argument("--script", help="semicolon-separated move ids for scripted play")
    p.set_defaults(fn=cmd_game)

    p = sub.add_parser("serve", help="run the HTTP JSON service")
    p.add_argument("--addr", default="127.0.0.1:8421")
    p.add_argument("--persist-dir")
    p.add_argument("--ttl", type=float)
    p.add_argument("--cors-origin")
    p.add_argument("--ui-dir", help="serve static UI assets from this directory")
    p.set_defaults(fn=cmd_serve)

    return top


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return 2 if err.code not in (0, None) else 0
    envelope = args.json
    try:
        result = args.fn(args)
    except NegativeResult as err:
        _emit(envelope, ok=False, payload=err.payload)
        return 1
    except UsageError as err:
        _emit(envelope, ok=False, payload={"error": str(err)}, to_stderr=not envelope)
        return 2
    except (ParseError, jsonio.DecodeError, MalformedSyntaxError, CheckError,
            NotFragment, IllegalMove, SessionError, FileNotFoundError,
            json.JSONDecodeError) as err:
        _emit(envelope, ok=False, payload={"error": str(err)}, to_stderr=not envelope)
        return 2
    _emit(envelope, ok=True, payload=result)
    return 0


def _emit(envelope: bool, ok: bool, payload, to_stderr: bool = False) -> None:
    if envelope:
        key = "result" if ok else "error"
        print(jsonio.dumps({"ok": ok, key: payload}))
    else:
        out = jsonio.dumps(payload)
        print(out, file=sys.stderr if to_stderr else sys.stdout)


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
