import pytest

from folkit.dialogues import IllegalMove
from folkit.kernel import check
from folkit.sessions import (SessionError, SessionStore, engine_state,
                             legal_opponent_moves, new_game, opponent_move,
                             replay)
from folkit.surface import parse


def play_to_end(session, pick=0):
    while session.status == "open":
        moves = legal_opponent_moves(session)
        if not moves:
            break
        m = moves[pick % len(moves)]
        term = "c" if m.needs_term else None
        opponent_move(session, m.id, term)
    return session


def test_false_implies_p_trace():
    s = new_game("e", parse("false -> P"))
    moves = legal_opponent_moves(s)
    assert len(moves) == 1
    out = opponent_move(s, "m0")
    # engine attacks the admitted falsity, opponent has nothing
    assert out["engine"]["type"] == "attack"
    assert out["engine"]["attack"]["kind"] == "bot"
    assert out["status"] == "proponent_won"
    assert s.status == "proponent_won"


def test_forall_term_slot():
    s = new_game("e", parse("forall x. P(x) -> P(x)"))
    moves = legal_opponent_moves(s)
    assert moves[0].needs_term
    with pytest.raises(IllegalMove):
        opponent_move(s, "m0")  # term missing
    out = opponent_move(s, "m0", "f(c)")
    # engine defends with the instance implication
    assert out["engine"]["type"] == "defend"
    s2 = play_to_end(s)
    assert s2.status == "proponent_won"
    assert replay(s2)


def test_illegal_term_is_parse_error():
    s = new_game("e", parse("forall x. P(x) -> P(x)"))
    with pytest.raises(IllegalMove):
        opponent_move(s, "m0", "P(")


def test_stale_move_id():
    s = new_game("e", parse("p -> p"))
    with pytest.raises(IllegalMove) as err:
        opponent_move(s, "m99")
    assert "legal" in str(err.value)


def test_refuses_unprovable_without_proof():
    with pytest.raises(SessionError):
        new_game("e", parse("((p -> q) -> p) -> p"))


def test_proof_must_conclude_formula():
    from folkit.dialogues import e_win_search, ljd_from_estrategy
    from folkit.search import ProofSearchBudget
    d = ljd_from_estrategy(e_win_search(parse("p -> p"),
                                        ProofSearchBudget(max_depth=4)))
    with pytest.raises(SessionError):
        new_game("e", parse("q -> q"), proof=d)


def test_lj_proof_accepted():
    from folkit.dialogues import e_win_search, lj_from_ljd, ljd_from_estrategy
    from folkit.search import ProofSearchBudget
    phi = parse("p -> p")
    lj = lj_from_ljd(ljd_from_estrategy(
        e_win_search(phi, ProofSearchBudget(max_depth=4))))
    s = new_game("d", phi, proof=lj)
    s = play_to_end(s)
    assert s.status == "proponent_won"


def test_all_variants_play_and_replay():
    for variant in ("e", "d", "s"):
        for text in ("p -> p", "p /\\ q -> q /\\ p", "false -> P",
                     "p -> p \\/ q", "~(p /\\ ~p)"):
            s = new_game(variant, parse(text))
            play_to_end(s, pick=1)
            assert s.status == "proponent_won", (variant, text)
            assert replay(s), (variant, text)


def test_history_replays_to_state():
    s = new_game("d", parse("(p \\/ q) -> (q \\/ p)"))
    play_to_end(s)
    assert replay(s)
    snap = engine_state(s)
    assert snap["status"] == s.status
    assert snap["history"] == s.history


def test_session_store_roundtrip(tmp_path):
    store = SessionStore(persist_dir=str(tmp_path))
    s = new_game("e", parse("p -> p"))
    store.add(s)
    assert store.get(s.id) is s
    with pytest.raises(KeyError):
        store.get("nope")
    play_to_end(s)
    store.persist(s)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    import json
    blob = json.loads(files[0].read_text())
    assert blob["status"] == "proponent_won"
    from folkit import jsonio
    d = jsonio.deriv_from_json(blob["deriv"])
    check(d)
