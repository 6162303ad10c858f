"""Playable game sessions: a human opponent against the engine's winning
strategy, in any of the three dialogue variants.

The engine replies synchronously after every opponent move; the history is
append-only and replays to the current state under the transition rules.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass, field

from . import jsonio
from .dialogues import (Attack, DState, EState, IllegalMove, LjdEngine,
                        OAttack, ODefend, OMove, PAttack, PDefend, PMove,
                        SState, attack_defenses, attack_kinds, admission,
                        attack_ok, d_apply_o, d_apply_p, default_menu,
                        e_check_omove, e_win_search, ljd_from_estrategy,
                        ljd_from_lj, s_apply_o, s_apply_p, _opt_cons)
from .kernel import FiniteSet, LjdSeq, TermIndexed, check
from .search import ProofSearchBudget
from .surface import ParseError, parse_term, print_formula, print_term
from .syntax import Formula, Term, inst


class SessionError(Exception):
    pass


@dataclass
class LegalMove:
    id: str
    rule: str                  # opening | OA | OD | OC
    description: str
    needs_term: bool
    omove: OMove | None        # concrete move, or a template when needs_term
    template: tuple | None = None

    def to_json(self):
        out = {"id": self.id, "rule": self.rule, "description": self.description,
               "needs_term": self.needs_term}
        if self.omove is not None:
            out["move"] = jsonio.omove_to_json(self.omove)
        return out


@dataclass
class GameSession:
    id: str
    variant: str
    formula: Formula
    deriv: object
    engine: LjdEngine
    term_menu: tuple[Term, ...]
    state: object = None            # None until the opening move
    pending: PMove | None = None    # E-games: the engine's last move
    history: list = field(default_factory=list)
    status: str = "open"

    def snapshot(self):
        return {
            "id": self.id,
            "variant": self.variant,
            "formula": print_formula(self.formula),
            "status": self.status,
            "state": jsonio.gamestate_to_json(self.state),
            "engine_pending": jsonio.pmove_to_json(self.pending)
            if self.pending is not None else None,
            "history": list(self.history),
            "legal_moves": [m.to_json() for m in legal_opponent_moves(self)],
        }


def new_game(variant: str, formula: Formula, proof=None,
             term_menu: tuple[Term, ...] = (),
             budget: ProofSearchBudget = ProofSearchBudget(max_depth=10),
             ) -> GameSession:
    if variant not in ("e", "d", "s"):
        raise SessionError(f"unknown variant {variant!r}")
    menu = default_menu(formula) + tuple(term_menu)
    if proof is not None:
        check(proof)
        if proof.calc == "lj":
            proof = ljd_from_lj(proof)
        if proof.calc != "ljd" or proof.end != LjdSeq((), FiniteSet((formula,))):
            raise SessionError("proof must conclude the game formula "
                               "(LJ or LJD, empty context)")
        deriv = proof
    else:
        strategy = e_win_search(formula, budget, menu)
        if strategy is None:
            raise SessionError("no winning strategy found within the budget; "
                               "supply a proof to play this formula")
        deriv = ljd_from_estrategy(strategy)
    engine = LjdEngine(deriv, formula)
    return GameSession(secrets.token_urlsafe(16), variant, formula, deriv,
                       engine, menu)


def _describe_attack(a: Attack) -> str:
    out = f"attack {print_formula(a.target)} [{a.kind}]"
    if a.term is not None:
        out += f" at {print_term(a.term)}"
    return out


def legal_opponent_moves(session: GameSession) -> list[LegalMove]:
    if session.status != "open":
        return []
    moves: list[LegalMove] = []

    def add(rule, description, omove=None, template=None):
        moves.append(LegalMove(f"m{len(moves)}", rule, description,
                               omove is None, omove, template))

    if session.state is None:
        for kind in attack_kinds(session.formula):
            if kind == "all":
                add("opening", f"attack the claim [{kind}] (needs a term)",
                    template=("opening", kind))
            else:
                add("opening", f"attack the claim [{kind}]",
                    OAttack(Attack(session.formula, kind)))
        return moves

    if session.variant == "e":
        move = session.pending
        if isinstance(move, PDefend):
            _add_attack_options(add, "OA", move.formula)
        else:
            _add_defense_options(add, "OD", move.attack)
            adm = admission(move.attack)
            if adm is not None:
                _add_attack_options(add, "OC", adm)
        return moves

    if session.variant == "d":
        st: DState = session.state
        if st.o_challenges:
            _add_defense_options(add, "OD", st.o_challenges[0])
        for k, phi in enumerate(st.p_admissions):
            _add_attack_options(add, "OA", phi, k)
        return moves

    st: SState = session.state
    if st.deferrals:
        _add_defense_options(add, "OD", st.deferrals[0][0])
    for k, phi in enumerate(st.p_admissions):
        _add_attack_options(add, "OA", phi, k)
    return moves


def _add_attack_options(add, rule, phi: Formula, index: int = 0):
    for kind in attack_kinds(phi):
        if kind == "all":
            add(rule, f"attack {print_formula(phi)} [all] (needs a term)",
                template=("attack", phi, kind, index))
        else:
            add(rule, f"attack {print_formula(phi)} [{kind}]",
                OAttack(Attack(phi, kind), index))


def _add_defense_options(add, rule, a: Attack):
    s = attack_defenses(a)
    if isinstance(s, FiniteSet):
        for phi in s.formulas:
            add(rule, f"admit {print_formula(phi)}", ODefend(phi))
    else:
        add(rule, f"admit an instance of {print_formula(a.target)} (needs a term)",
            template=("defend", a))


def resolve_move(session: GameSession, move_id: str, term_text: str | None
                 ) -> OMove:
    moves = legal_opponent_moves(session)
    for m in moves:
        if m.id == move_id:
            if not m.needs_term:
                return m.omove
            if term_text is None:
                raise IllegalMove("this move needs a term", m.rule)
            try:
                t = parse_term(term_text)
            except ParseError as err:
                raise IllegalMove(f"bad term: {err}", m.rule)
            return _fill_template(m.template, t)
    raise IllegalMove("no such move (stale id? the legal moves are "
                      + ", ".join(m.id for m in moves) + ")",
                      "legal-moves")


def _fill_template(template, t: Term) -> OMove:
    tag = template[0]
    if tag == "opening":
        _, kind = template
        return OAttack(Attack(None, kind, t))  # target filled by caller
    if tag == "attack":
        _, phi, kind, index = template
        return OAttack(Attack(phi, kind, t), index)
    _, a = template
    s = attack_defenses(a)
    return ODefend(inst(s.body, t), t)


def opponent_move(session: GameSession, move_id: str,
                  term_text: str | None = None) -> dict:
    """Apply one opponent move; the engine replies immediately.  Returns
    {opponent, engine, state, status}."""
    if session.status != "open":
        raise SessionError("game is finished")
    omove = resolve_move(session, move_id, term_text)

    if session.state is None:
        a = omove.attack
        if a.target is None:
            a = Attack(session.formula, a.kind, a.term)
        if not attack_ok(a) or a.target != session.formula:
            raise IllegalMove("the opening must attack the claim", "opening")
        session.engine.opening(a)
        if session.variant == "e":
            session.state = EState(_opt_cons(admission(a), ()), a)
        elif session.variant == "d":
            session.state = DState((), (a,), _opt_cons(admission(a), ()), ())
        else:
            session.state = SState((), _opt_cons(admission(a), ()), (), a)
        session.pending = None
        _record(session, "opponent", jsonio.omove_to_json(OAttack(a)))
    else:
        omove = _apply_opponent(session, omove)
        _record(session, "opponent", jsonio.omove_to_json(omove))
        session.engine.opponent(omove)

    reply = session.engine.propose()
    if session.variant == "d":
        session.state = d_apply_p(session.state, reply)
    elif session.variant == "s":
        session.state = s_apply_p(session.state, reply)
    else:
        session.pending = reply
    _record(session, "engine", jsonio.pmove_to_json(reply))
    if not legal_opponent_moves(session):
        session.status = "proponent_won"
    return {"opponent": session.history[-2]["move"],
            "engine": session.history[-1]["move"],
            "state": jsonio.gamestate_to_json(session.state),
            "status": session.status}


def _apply_opponent(session: GameSession, omove: OMove) -> OMove:
    if session.variant == "e":
        session.state = e_check_omove(session.state, session.pending, omove,
                                      session.term_menu)
        session.pending = None
        return omove
    if session.variant == "d":
        session.state = d_apply_o(session.state, omove)
        return omove
    session.state = s_apply_o(session.state, omove)
    return omove


def _record(session: GameSession, mover: str, move_json) -> None:
    session.history.append({
        "mover": mover,
        "move": move_json,
        "state": jsonio.gamestate_to_json(session.state),
    })


def engine_state(session: GameSession) -> dict:
    return session.snapshot()


def replay(session: GameSession) -> bool:
    """Re-drive a fresh session with the recorded opponent moves and check
    every snapshot matches (the storage integrity invariant)."""
    fresh = GameSession(session.id, session.variant, session.formula,
                        session.deriv, LjdEngine(session.deriv, session.formula),
                        session.term_menu)
    idx = 0
    for entry in session.history:
        if entry["mover"] != "opponent":
            continue
        omove = jsonio.omove_from_json(entry["move"])
        moves = legal_opponent_moves(fresh)
        picked = None
        for m in moves:
            if m.omove == omove:
                picked = m
                break
            if m.needs_term and m.template is not None:
                cand = _match_template(m.template, omove, fresh)
                if cand is not None:
                    picked = m
                    break
        if picked is None:
            return False
        if picked.needs_term:
            term = _term_of(omove)
            opponent_move(fresh, picked.id, print_term(term))
        else:
            opponent_move(fresh, picked.id)
    return [e["state"] for e in fresh.history] == \
        [e["state"] for e in session.history] and fresh.status == session.status


def _term_of(omove: OMove) -> Term:
    if isinstance(omove, ODefend):
        return omove.witness
    return omove.attack.term


def _match_template(template, omove, session) -> OMove | None:
    t = _term_of(omove)
    if t is None:
        return None
    cand = _fill_template(template, t)
    if isinstance(cand, OAttack) and cand.attack.target is None:
        cand = OAttack(Attack(session.formula, cand.attack.kind,
                              cand.attack.term), cand.index)
    return cand if cand == omove else None


# ---------------------------------------------------------------------------
# session store


class SessionStore:
    """In-memory session map with optional per-session event-log
    persistence; per-session operations are serialized by a lock."""

    def __init__(self, persist_dir: str | None = None, ttl: float | None = None):
        import threading
        import time
        self._lock = threading.Lock()
        self._sessions: dict[str, GameSession] = {}
        self._locks: dict[str, object] = {}
        self._touched: dict[str, float] = {}
        self._threading = threading
        self._time = time
        self.persist_dir = persist_dir
        self.ttl = ttl
        if persist_dir:
            import os
            os.makedirs(persist_dir, exist_ok=True)

    def add(self, session: GameSession) -> None:
        with self._lock:
            self._sessions[session.id] = session
            self._locks[session.id] = self._threading.Lock()
            self._touched[session.id] = self._time.monotonic()
        self._persist(session)

    def get(self, session_id: str) -> GameSession:
        with self._lock:
            self._expire()
            session = self._sessions.get(session_id)
        if session is None:
            raise KeyError(session_id)
        return session

    def lock(self, session_id: str):
        with self._lock:
            if session_id not in self._locks:
                raise KeyError(session_id)
            self._touched[session_id] = self._time.monotonic()
            return self._locks[session_id]

    def _expire(self):
        if self.ttl is None:
            return
        now = self._time.monotonic()
        dead = [sid for sid, ts in self._touched.items() if now - ts > self.ttl]
        for sid in dead:
            self._sessions.pop(sid, None)
            self._locks.pop(sid, None)
            self._touched.pop(sid, None)

    def _persist(self, session: GameSession) -> None:
        if not self.persist_dir:
            return
        import os
        path = os.path.join(self.persist_dir, f"{session.id}.json")
        with open(path, "w") as fh:
            fh.write(jsonio.dumps({
                "variant": session.variant,
                "formula": jsonio.formula_to_json(session.formula),
                "deriv": jsonio.deriv_to_json(session.deriv),
                "history": session.history,
                "status": session.status,
            }))

    def persist(self, session: GameSession) -> None:
        self._persist(session)
