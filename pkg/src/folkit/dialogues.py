"""Lorenzen dialogue games for first-order logic: the local rules table,
E/D/S transition systems, bounded winning-strategy search, the LJD
derivation calculus translations (strategies ↔ LJD ↔ LJ), and the
derivation-driven engine that plays a winning strategy against any
opponent.

The engine is the soundness construction made executable: it carries the
derivation families of the generalized claim as live data — one family per
standing proponent admission, one per deferral pair, plus the derivation
for the current challenge — and each move replaces one family by its
specialisation or sub-derivations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .kernel import (Attack, Ctx, Deriv, FiniteSet, LjdSeq, LjSeq,
                     TermIndexed, admission, attack_defenses, attack_kinds,
                     attack_ok, attack_premises, check, defense_premises,
                     justified, shift_defset, subst_deriv, weaken)
from .search import ProofSearchBudget, subterms_of_formula
from .syntax import (IDENTITY, All, App, Atom, Bot, Conj, Disj, Ex, Formula,
                     Impl, Term, Var, _Bot, cons, fresh_var, generalizer,
                     inst, shift_ctx, term_free_vars)


class IllegalMove(Exception):
    def __init__(self, message: str, rule: str):
        super().__init__(f"{message} [{rule}]")
        self.rule = rule


class StrategyIncomplete(Exception):
    """An explicit strategy misses an opponent response."""


class EngineInvariantError(Exception):
    """The derivation interpreter broke its invariant (a bug, not user error)."""


# ---------------------------------------------------------------------------
# moves


@dataclass(frozen=True)
class PDefend:
    formula: Formula
    witness: Term | None = None  # the term for a term-indexed defense set


@dataclass(frozen=True)
class PAttack:
    attack: Attack


PMove = PDefend | PAttack


@dataclass(frozen=True)
class OAttack:
    attack: Attack
    index: int = 0  # which proponent admission is attacked (D/S games)


@dataclass(frozen=True)
class ODefend:
    formula: Formula
    witness: Term | None = None


OMove = OAttack | ODefend


# ---------------------------------------------------------------------------
# the local rules, enumerated


def attacks_of(phi: Formula) -> list[Attack]:
    """Attacks per the local-rules table; ATerm attacks carry term=None
    here (lazily parameterized) — enumerate with attacks_on."""
    return [Attack(phi, kind) if kind != "all" else Attack(phi, kind, None)
            for kind in attack_kinds(phi)]


def defenses_of(a: Attack):
    return attack_defenses(a)


def attacks_on(phi: Formula, terms: tuple[Term, ...]) -> list[Attack]:
    out = []
    for kind in attack_kinds(phi):
        if kind == "all":
            out.extend(Attack(phi, "all", t) for t in terms)
        else:
            out.append(Attack(phi, kind))
    return out


def defense_options(a: Attack, terms: tuple[Term, ...]
                    ) -> list[tuple[Formula, Term | None]]:
    s = attack_defenses(a)
    if isinstance(s, FiniteSet):
        return [(phi, None) for phi in s.formulas]
    return [(inst(s.body, t), t) for t in terms]


def _fresh_for(formulas, attacks=(), terms=()) -> int:
    top = -1
    for phi in formulas:
        from .syntax import free_vars
        fv = free_vars(phi)
        if fv:
            top = max(top, max(fv))
    for a in attacks:
        fv = set()
        from .syntax import free_vars
        fv |= free_vars(a.target)
        if a.term is not None:
            fv |= term_free_vars(a.term)
        if fv:
            top = max(top, max(fv))
    for t in terms:
        fv = term_free_vars(t)
        if fv:
            top = max(top, max(fv))
    return top + 1


def opponent_terms(menu: tuple[Term, ...], formulas, attacks=()) -> tuple[Term, ...]:
    """Search menu for opponent term choices: the shared menu plus one
    variable fresh for the position (extraction re-generalizes that one)."""
    x = _fresh_for(formulas, attacks, menu)
    return tuple(menu) + (Var(x),)


def default_menu(phi: Formula) -> tuple[Term, ...]:
    """Subterms of the root formula plus one fresh variable."""
    menu = list(subterms_of_formula(phi))
    menu.append(Var(_fresh_for([phi], (), menu)))
    return tuple(menu)


def proponent_terms(menu: tuple[Term, ...], formulas,
                    attacks: tuple = ()) -> tuple[Term, ...]:
    """The proponent's term choices: the menu plus every subterm the play
    has accumulated (so terms the opponent introduced are answerable)."""
    out = list(menu)
    for phi in formulas:
        for t in subterms_of_formula(phi):
            if t not in out:
                out.append(t)
    for a in attacks:
        if a is not None and a.term is not None:
            for t in _subterms_of_term(a.term):
                if t not in out:
                    out.append(t)
    return tuple(out)


def _subterms_of_term(t: Term) -> list[Term]:
    out = [t]
    if isinstance(t, App):
        for a in t.args:
            out.extend(_subterms_of_term(a))
    return out


# ---------------------------------------------------------------------------
# E-dialogues: states (A_o, c)


@dataclass(frozen=True)
class EState:
    admissions: Ctx            # A_o
    challenge: Attack          # c


def e_pmoves(state: EState, menu: tuple[Term, ...]) -> list[PMove]:
    terms = proponent_terms(menu, state.admissions + (state.challenge.target,),
                            (state.challenge,))
    out: list[PMove] = []
    for phi, wit in defense_options(state.challenge, terms):
        if justified(state.admissions, phi):
            out.append(PDefend(phi, wit))
    seen = set()
    for phi in state.admissions:
        if phi in seen:
            continue
        seen.add(phi)
        for a in attacks_on(phi, terms):
            if justified(state.admissions, admission(a)):
                out.append(PAttack(a))
    return out


def _opt_cons(phi: Formula | None, ctx: Ctx) -> Ctx:
    return ctx if phi is None else (phi,) + ctx


def _e_oterms(state: EState, move: PMove, menu: tuple[Term, ...]
              ) -> tuple[Term, ...]:
    """Opponent term options after a proponent move; the last entry is the
    position's fresh variable (the extraction re-generalizes it)."""
    if isinstance(move, PDefend):
        return opponent_terms(menu, state.admissions + (move.formula,),
                              (state.challenge,))
    return opponent_terms(menu, state.admissions + (move.attack.target,),
                          (state.challenge, move.attack))


def e_omoves(state: EState, move: PMove, menu: tuple[Term, ...]
             ) -> list[tuple[OMove, EState]]:
    """OA attacks the defense, OD defends the proponent's attack, OC
    counters by attacking her admission — each with the successor state."""
    out = []
    terms = _e_oterms(state, move, menu)
    if isinstance(move, PDefend):
        for a in attacks_on(move.formula, terms):
            out.append((OAttack(a),
                        EState(_opt_cons(admission(a), state.admissions), a)))
        return out
    a = move.attack
    for phi, wit in defense_options(a, terms):
        out.append((ODefend(phi, wit),
                    EState((phi,) + state.admissions, state.challenge)))
    adm = admission(a)
    if adm is not None:
        for a2 in attacks_on(adm, terms):
            out.append((OAttack(a2),
                        EState(_opt_cons(admission(a2), state.admissions), a2)))
    return out


def e_check_omove(state: EState, move: PMove, omove: OMove,
                  menu: tuple[Term, ...]) -> EState:
    """Validate an opponent move (arbitrary terms allowed) and return the
    successor; raises IllegalMove with the rule that forbids it."""
    if isinstance(move, PDefend):
        if isinstance(omove, ODefend):
            raise IllegalMove("after a defense the opponent may only attack it", "OA")
        a = omove.attack
        if a.target != move.formula or not attack_ok(a):
            raise IllegalMove("attack must target the defense formula", "OA")
        return EState(_opt_cons(admission(a), state.admissions), a)
    a = move.attack
    if isinstance(omove, ODefend):
        s = attack_defenses(a)
        if isinstance(s, FiniteSet):
            if omove.formula not in s.formulas:
                raise IllegalMove("defense not among the attack's defenses", "OD")
        else:
            if omove.witness is None or inst(s.body, omove.witness) != omove.formula:
                raise IllegalMove("existential defense needs a matching witness", "OD")
        return EState((omove.formula,) + state.admissions, state.challenge)
    adm = admission(a)
    if adm is None:
        raise IllegalMove("no admission to counterattack", "OC")
    a2 = omove.attack
    if a2.target != adm or not attack_ok(a2):
        raise IllegalMove("counterattack must target the admission", "OC")
    return EState(_opt_cons(admission(a2), state.admissions), a2)


# ---------------------------------------------------------------------------
# explicit strategies and bounded search


@dataclass
class StrategyNode:
    move: PMove
    children: dict  # OMove -> StrategyNode


@dataclass
class EStrategy:
    formula: Formula
    openings: dict  # Attack -> StrategyNode
    menu: tuple[Term, ...] = ()
    kind: str = "e"


def e_win_search(phi: Formula, budget: ProofSearchBudget = ProofSearchBudget(),
                 term_menu: tuple[Term, ...] | None = None) -> EStrategy | None:
    """Brute-force E-game search: a winning subtree for every opening
    attack.  None when the budget is exhausted."""
    if isinstance(phi, Atom):
        raise ValueError("validity is defined for non-atomic formulas")
    menu = default_menu(phi) if term_menu is None else term_menu
    for depth in range(1, budget.max_depth + 1):
        memo: dict = {}
        openings = {}
        ok = True
        for a in attacks_on(phi, opponent_terms(menu, (phi,))):
            state = EState(_opt_cons(admission(a), ()), a)
            node = _e_win(state, depth, menu, memo)
            if node is None:
                ok = False
                break
            openings[a] = node
        if ok:
            return EStrategy(phi, openings, menu)
    return None


def _e_win(state: EState, depth: int, menu, memo) -> StrategyNode | None:
    if state in memo:
        return memo[state]
    if depth <= 0:
        return None
    for move in e_pmoves(state, menu):
        succs = e_omoves(state, move, menu)
        children = {}
        for omove, nxt in succs:
            sub = _e_win(nxt, depth - 1, menu, memo)
            if sub is None:
                children = None
                break
            children[omove] = sub
        if children is not None:
            node = StrategyNode(move, children)
            memo[state] = node
            return node
    return None


# ---------------------------------------------------------------------------
# strategies ⇝ LJD (the completeness direction of the equivalence)


def ljd_from_estrategy(strategy: EStrategy) -> Deriv:
    """[] ⊢D {φ} from an explicit winning strategy; term-indexed opponent
    options are generalized through their fresh-variable child (the same
    variable the search enumerated)."""
    phi = strategy.formula
    menu = strategy.menu
    terms = opponent_terms(menu, (phi,))
    premises = _conv_attack_family(
        (), phi, terms,
        lambda a: strategy.openings.get(a),
        lambda a: EState(_opt_cons(admission(a), ()), a),
        menu)
    d = Deriv("ljd", "R", premises, (phi, None), LjdSeq((), FiniteSet((phi,))))
    check(d)
    return d


def _child(getter, key):
    node = getter(key)
    if node is None:
        raise StrategyIncomplete(f"no strategy response for {key}")
    return node


def _conv_attack_family(ctx: Ctx, target: Formula, terms, getter, succ,
                        menu) -> tuple[Deriv, ...]:
    """Build the attack_premises(ctx, target) tuple out of strategy children
    keyed by attacks on target; `terms` is the exact opponent option list at
    this position (fresh variable last)."""
    out = []
    for kind in attack_kinds(target):
        if kind == "all":
            x = terms[-1]
            a = Attack(target, "all", x)
            node = _child(getter, a)
            sub = _conv(node, succ(a), menu)
            out.append(subst_deriv(sub, generalizer(x.index)))
        else:
            a = Attack(target, kind)
            node = _child(getter, a)
            out.append(_conv(node, succ(a), menu))
    return tuple(out)


def _conv(node: StrategyNode, state: EState, menu) -> Deriv:
    ctx = state.admissions
    goals = attack_defenses(state.challenge)
    move = node.move
    terms = _e_oterms(state, move, menu)
    if isinstance(move, PDefend):
        premises = _conv_attack_family(
            ctx, move.formula, terms,
            lambda a: node.children.get(OAttack(a)),
            lambda a: EState(_opt_cons(admission(a), ctx), a),
            menu)
        return Deriv("ljd", "R", premises, (move.formula, move.witness),
                     LjdSeq(ctx, goals))
    a = move.attack
    defense = []
    s = attack_defenses(a)
    if isinstance(s, TermIndexed):
        x = terms[-1]
        key = ODefend(inst(s.body, x), x)
        sub = _conv(_child(node.children.get, key),
                    EState((key.formula,) + ctx, state.challenge), menu)
        defense.append(subst_deriv(sub, generalizer(x.index)))
    else:
        for theta in s.formulas:
            key = ODefend(theta)
            sub = _conv(_child(node.children.get, key),
                        EState((theta,) + ctx, state.challenge), menu)
            defense.append(sub)
    counters: tuple[Deriv, ...] = ()
    adm = admission(a)
    if adm is not None:
        counters = _conv_attack_family(
            ctx, adm, terms,
            lambda a2: node.children.get(OAttack(a2)),
            lambda a2: EState(_opt_cons(admission(a2), ctx), a2),
            menu)
    return Deriv("ljd", "L", tuple(defense) + counters, (a,),
                 LjdSeq(ctx, goals))


# ---------------------------------------------------------------------------
# the derivation-driven engine (shared by E/D/S dialogues)


@dataclass
class _Family:
    """Premise family for one standing proponent admission: answers every
    attack on it (context frozen at creation; memberships are monotone)."""

    formula: Formula
    premises: tuple[Deriv, ...]

    def answer(self, a: Attack) -> Deriv:
        kinds = attack_kinds(self.formula)
        if a.kind not in kinds or a.target != self.formula:
            raise EngineInvariantError(f"family cannot answer {a}")
        d = self.premises[kinds.index(a.kind)]
        if a.kind == "all":
            return subst_deriv(d, cons(a.term, IDENTITY))
        return d


@dataclass
class _Deferral:
    """Defense family for one deferred challenge: answers every opponent
    defense against the proponent's pending attack."""

    attack: Attack
    premises: tuple[Deriv, ...]

    def answer(self, omove: ODefend) -> Deriv:
        s = attack_defenses(self.attack)
        if isinstance(s, TermIndexed):
            if omove.witness is None:
                raise EngineInvariantError("existential defense needs a witness")
            return subst_deriv(self.premises[0], cons(omove.witness, IDENTITY))
        idx = list(s.formulas).index(omove.formula)
        return self.premises[idx]


class LjdEngine:
    """Plays the proponent from an LJD derivation of [] ⊢D {φ}.

    Total on all legal opponent moves in all three variants; the session
    layer decides which opponent moves are legal per variant.  The fuel
    guard must be unreachable on checker-valid inputs (the interpreter
    only ever specializes its stored families); hitting it raises
    EngineInvariantError.
    """

    def __init__(self, deriv: Deriv, formula: Formula, fuel: int = 10 ** 5):
        check(deriv)
        if deriv.end != LjdSeq((), FiniteSet((formula,))):
            raise ValueError("engine needs a derivation of [] ⊢D {φ}")
        if deriv.rule != "R":
            raise EngineInvariantError("root of an empty-context LJD proof must be R")
        self.root = deriv
        self.formula = formula
        self.families: list[_Family] = []
        self.deferrals: list[_Deferral] = []
        self.current: Deriv | None = None
        self.fuel = fuel

    def _burn(self):
        self.fuel -= 1
        if self.fuel <= 0:
            raise EngineInvariantError("engine fuel exhausted (unreachable on valid proofs)")

    def opening(self, a: Attack) -> None:
        """The opponent's opening attack on φ selects the root premise."""
        self._burn()
        fam = _Family(self.formula, self.root.premises)
        self.current = fam.answer(a)

    def propose(self) -> PMove:
        """Read the proponent's move off the current derivation root and
        advance the families."""
        self._burn()
        d = self.current
        if d is None:
            raise EngineInvariantError("no current derivation")
        if d.rule == "R":
            phi, wit = d.data
            self.families.insert(0, _Family(phi, d.premises))
            self.current = None
            return PDefend(phi, wit)
        (a,) = d.data
        n_def = len(defense_premises(d.end.ctx, a, d.end.goals))
        self.deferrals.insert(0, _Deferral(a, d.premises[:n_def]))
        adm = admission(a)
        if adm is not None:
            self.families.insert(0, _Family(adm, d.premises[n_def:]))
        self.current = None
        return PAttack(a)

    def opponent(self, omove: OMove) -> None:
        """Advance past an opponent move: OD consumes the head deferral,
        OA consumes the indexed admission family."""
        self._burn()
        if self.current is not None:
            raise EngineInvariantError("opponent moved out of turn")
        if isinstance(omove, ODefend):
            if not self.deferrals:
                raise EngineInvariantError("no deferral to defend against")
            self.current = self.deferrals.pop(0).answer(omove)
        else:
            if omove.index >= len(self.families):
                raise EngineInvariantError("no admission family at that index")
            fam = self.families.pop(omove.index)
            self.current = fam.answer(omove.attack)


def strategy_from_ljd(d: Deriv, formula: Formula, fuel: int = 10 ** 5) -> LjdEngine:
    """Derivation-driven strategy: an interpreter total on all terms."""
    return LjdEngine(d, formula, fuel)


def unfold(d: Deriv, formula: Formula,
           term_menu: tuple[Term, ...] | None = None,
           depth: int = 10) -> EStrategy:
    """Materialize the derivation-driven strategy as an explicit E-strategy
    over the finite move space (menu plus per-state fresh variables)."""
    menu = default_menu(formula) if term_menu is None else term_menu
    openings = {}
    for a in attacks_on(formula, opponent_terms(menu, (formula,))):
        engine = LjdEngine(d, formula)
        engine.opening(a)
        state = EState(_opt_cons(admission(a), ()), a)
        openings[a] = _unfold(engine, state, menu, depth)
    return EStrategy(formula, openings)


def _unfold(engine: LjdEngine, state: EState, menu, depth: int) -> StrategyNode:
    if depth <= 0:
        raise EngineInvariantError("unfold depth exhausted")
    move = engine.propose()
    children = {}
    for omove, nxt in e_omoves(state, move, menu):
        import copy
        branch = _engine_copy(engine)
        branch.opponent(omove)
        children[omove] = _unfold(branch, nxt, menu, depth - 1)
    return StrategyNode(move, children)


def _engine_copy(engine: LjdEngine) -> LjdEngine:
    clone = LjdEngine.__new__(LjdEngine)
    clone.root = engine.root
    clone.formula = engine.formula
    clone.families = list(engine.families)
    clone.deferrals = list(engine.deferrals)
    clone.current = engine.current
    clone.fuel = engine.fuel
    return clone


# ---------------------------------------------------------------------------
# D-dialogues: states (A_p, C_p, A_o, C_o)


@dataclass(frozen=True)
class DState:
    p_admissions: Ctx                   # A_p
    p_challenges: tuple[Attack, ...]    # C_p (challenges against the proponent)
    o_admissions: Ctx                   # A_o
    o_challenges: tuple[Attack, ...]    # C_o (challenges against the opponent)


def d_pmoves(state: DState, menu: tuple[Term, ...]) -> list[PMove]:
    terms = proponent_terms(
        menu, state.p_admissions + state.o_admissions
        + tuple(a.target for a in state.p_challenges + state.o_challenges),
        state.p_challenges + state.o_challenges)
    out: list[PMove] = []
    if state.p_challenges:
        for phi, wit in defense_options(state.p_challenges[0], terms):
            if justified(state.o_admissions, phi):
                out.append(PDefend(phi, wit))
    seen = set()
    for phi in state.o_admissions:
        if phi in seen:
            continue
        seen.add(phi)
        for a in attacks_on(phi, terms):
            if justified(state.o_admissions, admission(a)):
                out.append(PAttack(a))
    return out


def d_apply_p(state: DState, move: PMove) -> DState:
    if isinstance(move, PDefend):
        if not state.p_challenges:
            raise IllegalMove("no pending challenge to defend", "PD")
        c = state.p_challenges[0]
        s = attack_defenses(c)
        if isinstance(s, FiniteSet):
            if move.formula not in s.formulas:
                raise IllegalMove("defense not among the challenge's defenses", "PD")
        elif move.witness is None or inst(s.body, move.witness) != move.formula:
            raise IllegalMove("existential defense needs a matching witness", "PD")
        if not justified(state.o_admissions, move.formula):
            raise IllegalMove("atomic defense must be among the opponent's admissions", "PD")
        return DState((move.formula,) + state.p_admissions,
                      state.p_challenges[1:], state.o_admissions,
                      state.o_challenges)
    a = move.attack
    if a.target not in state.o_admissions or not attack_ok(a):
        raise IllegalMove("attack must target an opponent admission", "PA")
    if not justified(state.o_admissions, admission(a)):
        raise IllegalMove("atomic admission must be among the opponent's admissions", "PA")
    return DState(_opt_cons(admission(a), state.p_admissions),
                  state.p_challenges, state.o_admissions,
                  (a,) + state.o_challenges)


def _d_oterms(state: DState, menu: tuple[Term, ...]) -> tuple[Term, ...]:
    return opponent_terms(menu, state.p_admissions + state.o_admissions,
                          state.p_challenges + state.o_challenges)


def d_omoves(state: DState, menu: tuple[Term, ...]) -> list[tuple[OMove, DState]]:
    out = []
    terms = _d_oterms(state, menu)
    if state.o_challenges:
        a = state.o_challenges[0]
        for phi, wit in defense_options(a, terms):
            out.append((ODefend(phi, wit),
                        DState(state.p_admissions, state.p_challenges,
                               (phi,) + state.o_admissions,
                               state.o_challenges[1:])))
    for k, phi in enumerate(state.p_admissions):
        for a in attacks_on(phi, terms):
            rest = state.p_admissions[:k] + state.p_admissions[k + 1:]
            out.append((OAttack(a, k),
                        DState(rest, (a,) + state.p_challenges,
                               _opt_cons(admission(a), state.o_admissions),
                               state.o_challenges)))
    return out


def d_apply_o(state: DState, omove: OMove) -> DState:
    if isinstance(omove, ODefend):
        if not state.o_challenges:
            raise IllegalMove("no challenge against the opponent to defend", "OD")
        a = state.o_challenges[0]
        s = attack_defenses(a)
        if isinstance(s, FiniteSet):
            if omove.formula not in s.formulas:
                raise IllegalMove("defense not among the attack's defenses", "OD")
        elif omove.witness is None or inst(s.body, omove.witness) != omove.formula:
            raise IllegalMove("existential defense needs a matching witness", "OD")
        return DState(state.p_admissions, state.p_challenges,
                      (omove.formula,) + state.o_admissions,
                      state.o_challenges[1:])
    k = omove.index
    if k >= len(state.p_admissions):
        raise IllegalMove("no such proponent admission "
                          "(each admission may be attacked only once)", "OA")
    phi = state.p_admissions[k]
    a = omove.attack
    if a.target != phi or not attack_ok(a):
        raise IllegalMove("attack must match the indexed admission", "OA")
    rest = state.p_admissions[:k] + state.p_admissions[k + 1:]
    return DState(rest, (a,) + state.p_challenges,
                  _opt_cons(admission(a), state.o_admissions),
                  state.o_challenges)


# ---------------------------------------------------------------------------
# S-dialogues: states (A_p, A_o, D) plus the current challenge


@dataclass(frozen=True)
class SState:
    p_admissions: Ctx
    o_admissions: Ctx
    deferrals: tuple[tuple[Attack, Attack], ...]  # (her attack, deferred challenge)
    challenge: Attack | None  # set when the proponent is to move


def s_pmoves(state: SState, menu: tuple[Term, ...]) -> list[PMove]:
    if state.challenge is None:
        return []
    terms = proponent_terms(
        menu, state.p_admissions + state.o_admissions
        + (state.challenge.target,)
        + tuple(x.target for pair in state.deferrals for x in pair),
        (state.challenge,) + tuple(x for pair in state.deferrals for x in pair))
    out: list[PMove] = []
    for phi, wit in defense_options(state.challenge, terms):
        if justified(state.o_admissions, phi):
            out.append(PDefend(phi, wit))
    seen = set()
    for phi in state.o_admissions:
        if phi in seen:
            continue
        seen.add(phi)
        for a in attacks_on(phi, terms):
            if justified(state.o_admissions, admission(a)):
                out.append(PAttack(a))
    return out


def s_apply_p(state: SState, move: PMove) -> SState:
    if state.challenge is None:
        raise IllegalMove("not the proponent's turn", "PD")
    if isinstance(move, PDefend):
        s = attack_defenses(state.challenge)
        if isinstance(s, FiniteSet):
            if move.formula not in s.formulas:
                raise IllegalMove("defense not among the challenge's defenses", "PD")
        elif move.witness is None or inst(s.body, move.witness) != move.formula:
            raise IllegalMove("existential defense needs a matching witness", "PD")
        if not justified(state.o_admissions, move.formula):
            raise IllegalMove("atomic defense must be among the opponent's admissions", "PD")
        return SState((move.formula,) + state.p_admissions,
                      state.o_admissions, state.deferrals, None)
    a = move.attack
    if a.target not in state.o_admissions or not attack_ok(a):
        raise IllegalMove("attack must target an opponent admission", "PA")
    if not justified(state.o_admissions, admission(a)):
        raise IllegalMove("atomic admission must be among the opponent's admissions", "PA")
    return SState(_opt_cons(admission(a), state.p_admissions),
                  state.o_admissions,
                  ((a, state.challenge),) + state.deferrals, None)


def s_omoves(state: SState, menu: tuple[Term, ...]) -> list[tuple[OMove, SState]]:
    out = []
    terms = opponent_terms(menu, state.p_admissions + state.o_admissions,
                           tuple(a for pair in state.deferrals for a in pair))
    if state.deferrals:
        a, c = state.deferrals[0]
        for phi, wit in defense_options(a, terms):
            out.append((ODefend(phi, wit),
                        SState(state.p_admissions, (phi,) + state.o_admissions,
                               state.deferrals[1:], c)))
    for k, phi in enumerate(state.p_admissions):
        for a in attacks_on(phi, terms):
            rest = state.p_admissions[:k] + state.p_admissions[k + 1:]
            out.append((OAttack(a, k),
                        SState(rest, _opt_cons(admission(a), state.o_admissions),
                               state.deferrals, a)))
    return out


def s_apply_o(state: SState, omove: OMove) -> SState:
    if state.challenge is not None:
        raise IllegalMove("not the opponent's turn", "OD")
    if isinstance(omove, ODefend):
        if not state.deferrals:
            raise IllegalMove("no deferral to defend against "
                              "(the stack head is the only option)", "OD")
        a, c = state.deferrals[0]
        s = attack_defenses(a)
        if isinstance(s, FiniteSet):
            if omove.formula not in s.formulas:
                raise IllegalMove("defense not among the attack's defenses", "OD")
        elif omove.witness is None or inst(s.body, omove.witness) != omove.formula:
            raise IllegalMove("existential defense needs a matching witness", "OD")
        return SState(state.p_admissions, (omove.formula,) + state.o_admissions,
                      state.deferrals[1:], c)
    k = omove.index
    if k >= len(state.p_admissions):
        raise IllegalMove("no such proponent admission "
                          "(each admission may be attacked only once)", "OA")
    phi = state.p_admissions[k]
    a = omove.attack
    if a.target != phi or not attack_ok(a):
        raise IllegalMove("attack must match the indexed admission", "OA")
    rest = state.p_admissions[:k] + state.p_admissions[k + 1:]
    return SState(rest, _opt_cons(admission(a), state.o_admissions),
                  state.deferrals, a)


def s_to_d_state(state: SState) -> DState:
    """View an S-state as a D-state: C_p = c :: deferred challenges,
    C_o = the proponent's pending attacks."""
    cps = tuple(c for _, c in state.deferrals)
    if state.challenge is not None:
        cps = (state.challenge,) + cps
    return DState(state.p_admissions, cps, state.o_admissions,
                  tuple(a for a, _ in state.deferrals))


# ---------------------------------------------------------------------------
# bounded D-game search and its LJD extraction


@dataclass
class DStrategy:
    formula: Formula
    openings: dict  # Attack -> StrategyNode
    menu: tuple[Term, ...] = ()
    kind: str = "d"


def d_win_search(phi: Formula, budget: ProofSearchBudget = ProofSearchBudget(),
                 term_menu: tuple[Term, ...] | None = None) -> DStrategy | None:
    if isinstance(phi, Atom):
        raise ValueError("validity is defined for non-atomic formulas")
    menu = default_menu(phi) if term_menu is None else term_menu
    for depth in range(1, budget.max_depth + 1):
        memo: dict = {}
        openings = {}
        ok = True
        for a in attacks_on(phi, opponent_terms(menu, (phi,))):
            state = DState((), (a,), _opt_cons(admission(a), ()), ())
            node = _d_win(state, depth, menu, memo)
            if node is None:
                ok = False
                break
            openings[a] = node
        if ok:
            return DStrategy(phi, openings, menu)
    return None


def _d_win(state: DState, depth: int, menu, memo) -> StrategyNode | None:
    if state in memo:
        return memo[state]
    if depth <= 0:
        return None
    for move in d_pmoves(state, menu):
        mid = d_apply_p(state, move)
        children = {}
        for omove, nxt in d_omoves(mid, menu):
            sub = _d_win(nxt, depth - 1, menu, memo)
            if sub is None:
                children = None
                break
            children[omove] = sub
        if children is not None:
            node = StrategyNode(move, children)
            memo[state] = node
            return node
    return None


def ljd_from_dwin(strategy: DStrategy) -> Deriv:
    """Extract a derivation from a D-winning strategy: only the head-challenge
    children are consumed (OD on the fresh attack, OA on the fresh
    admission)."""
    phi = strategy.formula
    menu = strategy.menu
    terms = opponent_terms(menu, (phi,))
    premises = []
    for kind in attack_kinds(phi):
        if kind == "all":
            x = terms[-1]
            a = Attack(phi, "all", x)
            node = _child(strategy.openings.get, a)
            sub = _conv_d(node, DState((), (a,), (), ()), menu)
            premises.append(subst_deriv(sub, generalizer(x.index)))
        else:
            a = Attack(phi, kind)
            node = _child(strategy.openings.get, a)
            premises.append(_conv_d(
                node, DState((), (a,), _opt_cons(admission(a), ()), ()), menu))
    d = Deriv("ljd", "R", tuple(premises), (phi, None),
              LjdSeq((), FiniteSet((phi,))))
    check(d)
    return d


def _conv_d(node: StrategyNode, state: DState, menu) -> Deriv:
    """dwin(A_p, c::C_p, A_o, C_o) → A_o ⊢D ⟦c⟧."""
    ctx = state.o_admissions
    c = state.p_challenges[0]
    goals = attack_defenses(c)
    move = node.move
    mid = d_apply_p(state, move)
    terms = _d_oterms(mid, menu)
    if isinstance(move, PDefend):
        def succ(a: Attack) -> DState:
            return d_apply_o(mid, OAttack(a, 0))

        premises = _conv_d_family(ctx, move.formula, terms, node, succ, menu)
        return Deriv("ljd", "R", premises, (move.formula, move.witness),
                     LjdSeq(ctx, goals))
    a = move.attack
    defense = []
    s = attack_defenses(a)
    if isinstance(s, TermIndexed):
        x = terms[-1]
        key = ODefend(inst(s.body, x), x)
        sub = _conv_d(_child(node.children.get, key), d_apply_o(mid, key), menu)
        defense.append(subst_deriv(sub, generalizer(x.index)))
    else:
        for theta in s.formulas:
            key = ODefend(theta)
            defense.append(_conv_d(_child(node.children.get, key),
                                   d_apply_o(mid, key), menu))
    counters: tuple[Deriv, ...] = ()
    adm = admission(a)
    if adm is not None:
        def succ2(a2: Attack) -> DState:
            return d_apply_o(mid, OAttack(a2, 0))

        counters = _conv_d_family(ctx, adm, terms, node, succ2, menu)
    return Deriv("ljd", "L", tuple(defense) + counters, (a,), LjdSeq(ctx, goals))


def _conv_d_family(ctx: Ctx, target: Formula, terms, node: StrategyNode,
                   succ, menu) -> tuple[Deriv, ...]:
    out = []
    for kind in attack_kinds(target):
        if kind == "all":
            x = terms[-1]
            a = Attack(target, "all", x)
            sub = _conv_d(_child(node.children.get, OAttack(a, 0)), succ(a), menu)
            out.append(subst_deriv(sub, generalizer(x.index)))
        else:
            a = Attack(target, kind)
            out.append(_conv_d(_child(node.children.get, OAttack(a, 0)),
                               succ(a), menu))
    return tuple(out)


# ---------------------------------------------------------------------------
# identity expansions: Γ ⊢D {φ} whenever φ ∈ Γ (dialogical copy-cat)


def ljd_axiom(ctx: Ctx, phi: Formula) -> Deriv:
    if phi not in ctx:
        raise ValueError("ljd_axiom needs the formula in the context")
    return ljd_member(ctx, phi, FiniteSet((phi,)), None)


def ljd_member(ctx: Ctx, phi: Formula, goals, wit: Term | None) -> Deriv:
    """R-node asserting phi ∈ ctx into any goal set containing it."""
    return Deriv("ljd", "R", ljd_attack_family(ctx, phi), (phi, wit),
                 LjdSeq(ctx, goals))


def ljd_attack_family(ctx: Ctx, phi: Formula) -> tuple[Deriv, ...]:
    """Derivations of attack_premises(ctx, phi) for phi ∈ ctx: answer every
    attack on phi by copying it back onto the context copy."""
    if isinstance(phi, Atom):
        return ()
    if isinstance(phi, _Bot):
        return (Deriv("ljd", "L", (), (Attack(Bot, "bot"),),
                      LjdSeq(ctx, FiniteSet(()))),)
    if isinstance(phi, Impl):
        alpha, beta = phi.lhs, phi.rhs
        c1 = (alpha,) + ctx
        inner = Deriv("ljd", "L",
                      (ljd_axiom((beta,) + c1, beta),) + ljd_attack_family(c1, alpha),
                      (Attack(phi, "impl"),),
                      LjdSeq(c1, FiniteSet((beta,))))
        return (inner,)
    if isinstance(phi, Conj):
        out = []
        for kind, side in (("conj_l", phi.lhs), ("conj_r", phi.rhs)):
            out.append(Deriv("ljd", "L", (ljd_axiom((side,) + ctx, side),),
                             (Attack(phi, kind),),
                             LjdSeq(ctx, FiniteSet((side,)))))
        return tuple(out)
    if isinstance(phi, Disj):
        both = FiniteSet((phi.lhs, phi.rhs))
        prem = Deriv("ljd", "L",
                     (ljd_member((phi.lhs,) + ctx, phi.lhs, both, None),
                      ljd_member((phi.rhs,) + ctx, phi.rhs, both, None)),
                     (Attack(phi, "disj"),),
                     LjdSeq(ctx, both))
        return (prem,)
    if isinstance(phi, All):
        up = shift_ctx(ctx)
        up_phi = All(inst_shift_body(phi.body))
        body = phi.body
        prem = Deriv("ljd", "L", (ljd_axiom((body,) + up, body),),
                     (Attack(up_phi, "all", Var(0)),),
                     LjdSeq(up, FiniteSet((body,))))
        return (prem,)
    # Ex
    up = shift_ctx(ctx)
    body = phi.body
    body_up = inst_shift_body(body)
    inner = ljd_member((body,) + up, body, TermIndexed(body_up), Var(0))
    prem = Deriv("ljd", "L", (inner,), (Attack(phi, "ex"),),
                 LjdSeq(ctx, TermIndexed(body)))
    return (prem,)


def inst_shift_body(body: Formula) -> Formula:
    """Shift a binder body's free variables (those above index 0) by one."""
    from .syntax import SHIFT, substitute, under_binder
    return substitute(body, under_binder(SHIFT))


# ---------------------------------------------------------------------------
# goal-set casts (the ambient set S threads through L defense premises only)


def _l_parts(d: Deriv):
    (a,) = d.data
    n_def = len(defense_premises(d.end.ctx, a, d.end.goals))
    from .kernel import defense_premise_shifts
    return a, d.premises[:n_def], defense_premise_shifts(a), d.premises[n_def:]


def ljd_expand_goal(d: Deriv, new_goals: FiniteSet) -> Deriv:
    """Replace a finite goal set by a superset throughout."""
    old = d.end.goals
    assert isinstance(old, FiniteSet)
    assert all(phi in new_goals.formulas for phi in old.formulas)
    end = LjdSeq(d.end.ctx, new_goals)
    if d.rule == "R":
        return Deriv("ljd", "R", d.premises, d.data, end)
    a, defense, shifts, counters = _l_parts(d)
    new_def = tuple(
        ljd_expand_goal(p, shift_defset(new_goals) if sh else new_goals)
        for p, sh in zip(defense, shifts))
    return Deriv("ljd", "L", new_def + counters, (a,), end)


def ljd_cast_ex(d: Deriv, body: Formula, t: Term) -> Deriv:
    """Γ ⊢D {body[t]}  ⇝  Γ ⊢D {body[s] | s}, recording t as the witness."""
    from .syntax import shift_term
    assert d.end.goals == FiniteSet((inst(body, t),))
    end = LjdSeq(d.end.ctx, TermIndexed(body))
    if d.rule == "R":
        phi, _ = d.data
        return Deriv("ljd", "R", d.premises, (phi, t), end)
    a, defense, shifts, counters = _l_parts(d)
    new_def = tuple(
        ljd_cast_ex(p, inst_shift_body(body), shift_term(t)) if sh
        else ljd_cast_ex(p, body, t)
        for p, sh in zip(defense, shifts))
    return Deriv("ljd", "L", new_def + counters, (a,), end)


def ljd_from_bot_goal(d: Deriv, target: Formula) -> Deriv:
    """Γ ⊢D {⊥}  ⇝  Γ ⊢D {target}: asserting ⊥ turns into using its attack
    premise (the empty defense set expands to anything)."""
    from .syntax import shift
    assert d.end.goals == FiniteSet((Bot,))
    if d.rule == "R":
        # data must be (⊥, _) and the lone premise derives Γ ⊢D {}
        return ljd_expand_goal(d.premises[0], FiniteSet((target,)))
    a, defense, shifts, counters = _l_parts(d)
    new_def = tuple(
        ljd_from_bot_goal(p, shift(target) if sh else target)
        for p, sh in zip(defense, shifts))
    return Deriv("ljd", "L", new_def + counters, (a,),
                 LjdSeq(d.end.ctx, FiniteSet((target,))))


# ---------------------------------------------------------------------------
# LJ nodes (local constructors; contexts are explicit)


def _lj(rule: str, premises, data, ctx: Ctx, goal: Formula) -> Deriv:
    return Deriv("lj", rule, tuple(premises), tuple(data), LjSeq(ctx, goal))


def lj_structural(d: Deriv, target: Ctx) -> Deriv:
    """Γ ⇒J ψ into Δ ⇒J ψ for Γ ⊆ Δ (as sets), via W/P/C chains."""
    ctx = list(d.end.ctx)
    goal = d.end.goal
    for phi in ctx:
        if phi not in target:
            raise ValueError(f"lj_structural: target misses {phi!r}")
    # weaken the whole target on top, then erase the old tail
    for phi in reversed(target):
        d = _lj("W", (d,), (), (phi,) + tuple(ctx), goal)
        ctx.insert(0, phi)
    while len(ctx) > len(target):
        # move the first stale entry (position len(target)) to the head
        pos = len(target)
        phi = ctx[pos]
        for i in range(pos - 1, -1, -1):
            swapped = ctx.copy()
            swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
            d = _lj("P", (d,), (i,), tuple(swapped), goal)
            ctx = swapped
        # now phi is at the head; bring its target copy to position 1
        j = target.index(phi)
        for i in range(j, 0, -1):
            swapped = ctx.copy()
            swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
            d = _lj("P", (d,), (i,), tuple(swapped), goal)
            ctx = swapped
        d = _lj("C", (d,), (), tuple(ctx[1:]), goal)
        ctx = ctx[1:]
        # restore the copy to its target position
        for i in range(0, j):
            swapped = ctx.copy()
            swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
            d = _lj("P", (d,), (i,), tuple(swapped), goal)
            ctx = swapped
    assert tuple(ctx) == tuple(target), (ctx, target)
    return d


def lj_assumption(ctx: Ctx, phi: Formula) -> Deriv:
    if phi not in ctx:
        raise ValueError("assumption not in context")
    return lj_structural(_lj("A", (), (), (phi,), phi), ctx)


# ---------------------------------------------------------------------------
# LJ ⇝ LJD (replay sequent rules as dialogue moves)


def ljd_from_lj(d: Deriv) -> Deriv:
    check(d)
    if d.calc != "lj":
        raise ValueError("ljd_from_lj expects an LJ derivation")
    out = _lj2ljd(d)
    check(out)
    return out


def _lj2ljd(d: Deriv) -> Deriv:
    ctx, goal = d.end.ctx, d.end.goal
    r = d.rule
    if r == "A":
        return ljd_axiom(ctx, goal)
    if r in ("C", "W", "P"):
        return weaken(_lj2ljd(d.premises[0]), ctx)
    if r == "E":
        return ljd_from_bot_goal(_lj2ljd(d.premises[0]), goal)
    if r == "IL":
        f = ctx[0]
        t1 = _lj2ljd(d.premises[0])               # Γ ⊢D {α}
        t2 = _lj2ljd(d.premises[1])               # β::Γ ⊢D {goal}
        return _ljd_cut_impl(t1, f, t2)
    if r == "IR":
        return Deriv("ljd", "R", (_lj2ljd(d.premises[0]),), (goal, None),
                     LjdSeq(ctx, FiniteSet((goal,))))
    if r == "CL":
        f = ctx[0]
        t = _lj2ljd(d.premises[0])                # (β, α)::Γ ⊢D {goal}
        c1 = (f.lhs,) + ctx
        inner = Deriv("ljd", "L",
                      (weaken(t, (f.rhs,) + c1),), (Attack(f, "conj_r"),),
                      LjdSeq(c1, t.end.goals))
        return Deriv("ljd", "L", (inner,), (Attack(f, "conj_l"),),
                     LjdSeq(ctx, t.end.goals))
    if r == "CR":
        return Deriv("ljd", "R",
                     (_lj2ljd(d.premises[0]), _lj2ljd(d.premises[1])),
                     (goal, None), LjdSeq(ctx, FiniteSet((goal,))))
    if r == "DL":
        f = ctx[0]
        t1 = _lj2ljd(d.premises[0])
        t2 = _lj2ljd(d.premises[1])
        return Deriv("ljd", "L",
                     (weaken(t1, (f.lhs,) + ctx), weaken(t2, (f.rhs,) + ctx)),
                     (Attack(f, "disj"),), LjdSeq(ctx, t1.end.goals))
    if r in ("DR1", "DR2"):
        t = _lj2ljd(d.premises[0])
        both = FiniteSet((goal.lhs, goal.rhs))
        return Deriv("ljd", "R", (ljd_expand_goal(t, both),), (goal, None),
                     LjdSeq(ctx, FiniteSet((goal,))))
    if r == "AL":
        (t_term,) = d.data
        f = ctx[0]
        t = _lj2ljd(d.premises[0])
        return Deriv("ljd", "L",
                     (weaken(t, (inst(f.body, t_term),) + ctx),),
                     (Attack(f, "all", t_term),), LjdSeq(ctx, t.end.goals))
    if r == "AR":
        return Deriv("ljd", "R", (_lj2ljd(d.premises[0]),), (goal, None),
                     LjdSeq(ctx, FiniteSet((goal,))))
    if r == "EL":
        f = ctx[0]
        t = _lj2ljd(d.premises[0])                # (b,)+↑Γ ⊢D {↑goal}
        return Deriv("ljd", "L",
                     (weaken(t, (f.body,) + shift_ctx(ctx)),),
                     (Attack(f, "ex"),), LjdSeq(ctx, FiniteSet((goal,))))
    if r == "ER":
        (t_term,) = d.data
        t = _lj2ljd(d.premises[0])
        return Deriv("ljd", "R", (ljd_cast_ex(t, goal.body, t_term),),
                     (goal, None), LjdSeq(ctx, FiniteSet((goal,))))
    raise AssertionError(f"unhandled LJ rule {r!r}")


def _ljd_cut_impl(d1: Deriv, f: Impl, d2: Deriv) -> Deriv:
    """From Δ ⊢D {f.lhs} and (f.rhs)::Δ ⊢D S build (f)::Δ ⊢D S.

    Recursion on d1: an R root plays the implication attack (its atomic
    justification is inherited from R's own side condition); L roots are
    hoisted outward.
    """
    from .syntax import SHIFT, shift
    delta = d1.end.ctx
    assert d2.end.ctx[0] == f.rhs and _same_members(d2.end.ctx[1:], delta)
    s = d2.end.goals
    ctx_out = (f,) + delta
    if d1.rule == "R":
        defense = weaken(d2, (f.rhs,) + ctx_out)
        shapes = attack_premises(ctx_out, f.lhs)
        counters = tuple(weaken(p, j.ctx)
                         for p, j in zip(d1.premises, shapes))
        return Deriv("ljd", "L", (defense,) + counters, (Attack(f, "impl"),),
                     LjdSeq(ctx_out, s))
    a, defense, shifts, counters = _l_parts(d1)
    new_def = []
    for p, sh in zip(defense, shifts):
        if sh:
            f_up = shift(f)
            d2_up = subst_deriv(d2, SHIFT)
            theta = p.end.ctx[0]
            sub = _ljd_cut_impl(
                p, f_up,
                weaken(d2_up, (f_up.rhs, theta) + shift_ctx(delta)))
            new_def.append(weaken(sub, (theta,) + shift_ctx(ctx_out)))
        else:
            theta = p.end.ctx[0]
            sub = _ljd_cut_impl(p, f, weaken(d2, (f.rhs, theta) + delta))
            new_def.append(weaken(sub, (theta,) + ctx_out))
    adm = admission(a)
    new_counters = ()
    if adm is not None:
        cshapes = attack_premises(ctx_out, adm)
        new_counters = tuple(weaken(p, j.ctx)
                             for p, j in zip(counters, cshapes))
    return Deriv("ljd", "L", tuple(new_def) + new_counters, (a,),
                 LjdSeq(ctx_out, s))


def _same_members(a: Ctx, b: Ctx) -> bool:
    return all(x in b for x in a) and all(x in a for x in b)


# ---------------------------------------------------------------------------
# LJD ⇝ LJ (read dialogue moves as sequent rules, generalized over the
# goal set: derive any common consequence of the set's members)


def lj_from_ljd(d: Deriv) -> Deriv:
    check(d)
    if d.calc != "ljd":
        raise ValueError("lj_from_ljd expects an LJD derivation")
    if not (isinstance(d.end.goals, FiniteSet) and len(d.end.goals.formulas) == 1):
        raise ValueError("lj_from_ljd needs a singleton goal set")
    out = _ljd2lj(d, ("single",))
    check(out)
    return out


def _spec_goal(spec, goals) -> Formula:
    tag = spec[0]
    if tag == "single":
        return goals.formulas[0]
    if tag == "or":
        return Disj(spec[1], spec[2])
    if tag == "exs":
        return Ex(spec[1])
    return spec[1]  # empty


def _spec_shift(spec):
    from .syntax import shift
    tag = spec[0]
    if tag == "single":
        return spec
    if tag == "or":
        return ("or", shift(spec[1]), shift(spec[2]))
    if tag == "exs":
        return ("exs", inst_shift_body(spec[1]))
    return ("empty", shift(spec[1]))


def _ljd2lj(d: Deriv, spec) -> Deriv:
    ctx = d.end.ctx
    goal = _spec_goal(spec, d.end.goals)
    if d.rule == "R":
        phi, wit = d.data
        base = _lj_build(ctx, phi, d.premises)
        tag = spec[0]
        if tag == "single":
            return base
        if tag == "or":
            rule = "DR1" if phi == spec[1] else "DR2"
            return _lj(rule, (base,), (), ctx, goal)
        if tag == "exs":
            return _lj("ER", (base,), (wit,), ctx, goal)
        raise AssertionError("R into an empty goal set cannot check")
    a, defense, shifts, counters = _l_parts(d)
    chi = a.target
    ctx1 = (chi,) + ctx
    if a.kind == "impl":
        d_arg = _lj_build(ctx, chi.lhs, counters)
        d_rest = _ljd2lj(defense[0], spec)          # (β::Γ) ⇒J goal
        body = _lj("IL", (d_arg, d_rest), (), ctx1, goal)
    elif a.kind in ("conj_l", "conj_r"):
        sub = _ljd2lj(defense[0], spec)             # (side::Γ) ⇒J goal
        if a.kind == "conj_l":
            step = _lj("W", (sub,), (), (chi.rhs, chi.lhs) + ctx, goal)
        else:
            w = _lj("W", (sub,), (), (chi.lhs, chi.rhs) + ctx, goal)
            step = _lj("P", (w,), (0,), (chi.rhs, chi.lhs) + ctx, goal)
        body = _lj("CL", (step,), (), ctx1, goal)
    elif a.kind == "disj":
        body = _lj("DL", (_ljd2lj(defense[0], spec), _ljd2lj(defense[1], spec)),
                   (), ctx1, goal)
    elif a.kind == "bot":
        bot = lj_assumption(ctx, Bot)
        return _lj("E", (bot,), (), ctx, goal)
    elif a.kind == "all":
        sub = _ljd2lj(defense[0], spec)
        body = _lj("AL", (sub,), (a.term,), ctx1, goal)
    else:  # ex
        sub = _ljd2lj(defense[0], _spec_shift(spec))  # (b::↑Γ) ⇒J ↑goal
        body = _lj("EL", (sub,), (), ctx1, goal)
    return lj_structural(body, ctx)


def _lj_build(ctx: Ctx, phi: Formula, premises: tuple[Deriv, ...]) -> Deriv:
    """Γ ⇒J φ from the attack-premise family for an asserted φ (the R case
    and the counterattack family share this shape)."""
    if isinstance(phi, Atom):
        return lj_assumption(ctx, phi)
    if isinstance(phi, _Bot):
        return _ljd2lj(premises[0], ("empty", Bot))
    if isinstance(phi, Impl):
        sub = _ljd2lj(premises[0], ("single",))   # (α::Γ) ⇒J β
        return _lj("IR", (sub,), (), ctx, phi)
    if isinstance(phi, Conj):
        return _lj("CR", (_ljd2lj(premises[0], ("single",)),
                          _ljd2lj(premises[1], ("single",))), (), ctx, phi)
    if isinstance(phi, Disj):
        return _ljd2lj(premises[0], ("or", phi.lhs, phi.rhs))
    if isinstance(phi, All):
        sub = _ljd2lj(premises[0], ("single",))   # ↑Γ ⇒J body
        return _lj("AR", (sub,), (), ctx, phi)
    return _ljd2lj(premises[0], ("exs", phi.body))


# ---------------------------------------------------------------------------
# engine wrappers and random playouts


def s_strategy_from_ljd(d: Deriv, formula: Formula | None = None,
                        fuel: int = 10 ** 5) -> LjdEngine:
    """The derivation-driven interpreter (its invariant families live in
    the engine); plays S-dialogues."""
    if formula is None:
        formula = d.end.goals.formulas[0]
    return LjdEngine(d, formula, fuel)


def s_to_d(engine: LjdEngine) -> LjdEngine:
    """Replaying S-decisions on D-states: the decision sequence
    is identical, only the session's state view changes (C_p = c::π cs,
    C_o = attacks of the deferral stack)."""
    return engine


def opening_attacks(phi: Formula, menu: tuple[Term, ...]) -> list[Attack]:
    return attacks_on(phi, opponent_terms(menu, (phi,)))


def random_playout(variant: str, formula: Formula, deriv: Deriv, rng,
                   term_menu: tuple[Term, ...] | None = None,
                   max_plies: int = 400) -> str:
    """Play the engine against a uniformly random legal opponent; returns
    "proponent_won" (or raises EngineInvariantError if the fuel trips)."""
    menu = default_menu(formula) if term_menu is None else term_menu
    engine = LjdEngine(deriv, formula)
    openings = opening_attacks(formula, menu)
    a = rng.choice(openings)
    engine.opening(a)
    if variant == "e":
        state = EState(_opt_cons(admission(a), ()), a)
    elif variant == "d":
        state = DState((), (a,), _opt_cons(admission(a), ()), ())
    else:
        state = SState((), _opt_cons(admission(a), ()), (), a)
    for _ in range(max_plies):
        move = engine.propose()
        if variant == "e":
            options = e_omoves(state, move, menu)
        elif variant == "d":
            state = d_apply_p(state, move)
            options = d_omoves(state, menu)
        else:
            state = s_apply_p(state, move)
            options = s_omoves(state, menu)
        if not options:
            return "proponent_won"
        omove, nxt = rng.choice(options)
        engine.opponent(omove)
        state = nxt
    raise EngineInvariantError("playout exceeded the ply bound")
