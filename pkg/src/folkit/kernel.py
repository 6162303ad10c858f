"""Proof trees and checkers for NDi, NDc, LJT, LJ and LJD, plus the
derivation transformers: weakening, substitution, named opening, the
LJT→ND reading, and the de Morgan / double-negation proof translations.

Contexts are lists (tuples) with duplicate-tolerant membership; Γ,φ means
φ::Γ.  Every node stores its end judgment, so checking is local and
syntax-directed.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

from .syntax import (IDENTITY, SHIFT, All, Atom, Bot, Conj, Disj, Ex,
                     Formula, Impl, Neg, Subst, Term, Var, _Bot, cons,
                     de_morgan, de_morgan_ctx, dn_translate,
                     dn_translate_ctx, free_vars, fresh_var, generalizer,
                     inst, is_fragment, shift, shift_ctx, subst_term,
                     substitute, under_binder)

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

Ctx = tuple[Formula, ...]


class CheckError(Exception):
    def __init__(self, path: tuple[int, ...], message: str):
        super().__init__(f"at {'/'.join(map(str, path)) or 'root'}: {message}")
        self.path = path
        self.message = message


# ---------------------------------------------------------------------------
# judgments


@dataclass(frozen=True)
class NdSeq:
    ctx: Ctx
    goal: Formula


@dataclass(frozen=True)
class LjtSeq:
    ctx: Ctx
    goal: Formula


@dataclass(frozen=True)
class LjtFocus:
    ctx: Ctx
    focus: Formula
    goal: Formula


@dataclass(frozen=True)
class LjSeq:
    ctx: Ctx
    goal: Formula


@dataclass(frozen=True)
class FiniteSet:
    formulas: tuple[Formula, ...]


@dataclass(frozen=True)
class TermIndexed:
    """The defense set {body[t] | t}; body has de Bruijn 0 bound."""

    body: Formula


DefenseSet = FiniteSet | TermIndexed


@dataclass(frozen=True)
class LjdSeq:
    ctx: Ctx
    goals: DefenseSet


Judgment = NdSeq | LjtSeq | LjtFocus | LjSeq | LjdSeq


def subst_defset(s: DefenseSet, sigma: Subst) -> DefenseSet:
    if isinstance(s, FiniteSet):
        return FiniteSet(tuple(substitute(phi, sigma) for phi in s.formulas))
    return TermIndexed(substitute(s.body, under_binder(sigma)))


def shift_defset(s: DefenseSet) -> DefenseSet:
    return subst_defset(s, SHIFT)


# ---------------------------------------------------------------------------
# the local rules of the first-order dialogue table, shared with the games


@dataclass(frozen=True)
class Attack:
    target: Formula
    kind: str  # impl | conj_l | conj_r | disj | bot | all | ex
    term: Term | None = None


_KINDS = {
    "impl": Impl, "conj_l": Conj, "conj_r": Conj, "disj": Disj,
    "bot": _Bot, "all": All, "ex": Ex,
}


def attack_ok(a: Attack) -> bool:
    if not isinstance(a.target, _KINDS.get(a.kind, ())):
        return False
    return (a.term is not None) == (a.kind == "all")


def admission(a: Attack) -> Formula | None:
    """The formula the attacker admits (only implication attacks admit)."""
    return a.target.lhs if a.kind == "impl" else None


def attack_defenses(a: Attack) -> DefenseSet:
    t = a.target
    if a.kind == "impl":
        return FiniteSet((t.rhs,))
    if a.kind == "conj_l":
        return FiniteSet((t.lhs,))
    if a.kind == "conj_r":
        return FiniteSet((t.rhs,))
    if a.kind == "disj":
        return FiniteSet((t.lhs, t.rhs))
    if a.kind == "bot":
        return FiniteSet(())
    if a.kind == "all":
        return FiniteSet((inst(t.body, a.term),))
    return TermIndexed(t.body)


def attack_kinds(phi: Formula) -> list[str]:
    """Attack kinds applicable to phi; atoms have none, "all" needs a term."""
    if isinstance(phi, Impl):
        return ["impl"]
    if isinstance(phi, Conj):
        return ["conj_l", "conj_r"]
    if isinstance(phi, Disj):
        return ["disj"]
    if isinstance(phi, _Bot):
        return ["bot"]
    if isinstance(phi, All):
        return ["all"]
    if isinstance(phi, Ex):
        return ["ex"]
    return []


def justified(ctx: Ctx, phi: Formula | None) -> bool:
    """Atomic admissions must already be among the opponent's admissions."""
    if phi is None:
        return True
    return not isinstance(phi, Atom) or phi in ctx


def attack_premises(ctx: Ctx, phi: Formula) -> tuple[LjdSeq, ...]:
    """One judgment per possible attack on an asserted phi; the attacker's
    admission (if any) joins the context.  Term-indexed attacks on ∀ are
    represented by the single shifted generic premise."""
    if isinstance(phi, _Bot):
        return (LjdSeq(ctx, FiniteSet(())),)
    if isinstance(phi, Atom):
        return ()
    if isinstance(phi, Impl):
        return (LjdSeq((phi.lhs,) + ctx, FiniteSet((phi.rhs,))),)
    if isinstance(phi, Conj):
        return (LjdSeq(ctx, FiniteSet((phi.lhs,))),
                LjdSeq(ctx, FiniteSet((phi.rhs,))))
    if isinstance(phi, Disj):
        return (LjdSeq(ctx, FiniteSet((phi.lhs, phi.rhs))),)
    if isinstance(phi, All):
        return (LjdSeq(shift_ctx(ctx), FiniteSet((phi.body,))),)
    return (LjdSeq(ctx, TermIndexed(phi.body)),)


def defense_premises(ctx: Ctx, a: Attack, s: DefenseSet) -> tuple[LjdSeq, ...]:
    """One judgment per opponent defense against attack a, the goal set s
    carried along; a_∃ defenses are the shifted generic premise."""
    t = a.target
    if a.kind == "impl":
        return (LjdSeq((t.rhs,) + ctx, s),)
    if a.kind == "conj_l":
        return (LjdSeq((t.lhs,) + ctx, s),)
    if a.kind == "conj_r":
        return (LjdSeq((t.rhs,) + ctx, s),)
    if a.kind == "disj":
        return (LjdSeq((t.lhs,) + ctx, s), LjdSeq((t.rhs,) + ctx, s))
    if a.kind == "bot":
        return ()
    if a.kind == "all":
        return (LjdSeq((inst(t.body, a.term),) + ctx, s),)
    return (LjdSeq((t.body,) + shift_ctx(ctx), shift_defset(s)),)


def defset_member(s: DefenseSet, phi: Formula, witness: Term | None) -> bool:
    if isinstance(s, FiniteSet):
        return phi in s.formulas
    return witness is not None and inst(s.body, witness) == phi


# ---------------------------------------------------------------------------
# derivations


@dataclass(frozen=True)
class Deriv:
    calc: str  # ndi | ndc | ljt | lj | ljd
    rule: str
    premises: tuple["Deriv", ...]
    data: tuple
    end: Judgment


def _fail(path, msg):
    raise CheckError(tuple(path), msg)


def check(d: Deriv) -> Judgment:
    """Validate every node against its rule schema; returns the end judgment."""
    _check(d, [])
    return d.end


def _expect(cond, path, msg):
    if not cond:
        _fail(path, msg)


def _check(d: Deriv, path: list[int]) -> None:
    if d.calc in ("ndi", "ndc"):
        _check_nd(d, path)
    elif d.calc == "ljt":
        _check_ljt(d, path)
    elif d.calc == "lj":
        _check_lj(d, path)
    elif d.calc == "ljd":
        _check_ljd(d, path)
    else:
        _fail(path, f"unknown calculus {d.calc!r}")
    for i, p in enumerate(d.premises):
        if p.calc != d.calc:
            _fail(path + [i], f"premise calculus {p.calc!r} under {d.calc!r}")
        _check(p, path + [i])


def _premise_ends(d: Deriv) -> list[Judgment]:
    return [p.end for p in d.premises]


def _check_nd(d: Deriv, path) -> None:
    end = d.end
    _expect(isinstance(end, NdSeq), path, "ND node must end in a sequent")
    ctx, goal = end.ctx, end.goal
    ends = _premise_ends(d)
    r = d.rule
    if r == "C":
        _expect(not ends, path, "C takes no premises")
        _expect(goal in ctx, path, "C: goal not in context")
    elif r == "E":
        _expect(ends == [NdSeq(ctx, Bot)], path, "E: premise must derive falsity")
    elif r == "II":
        _expect(isinstance(goal, Impl), path, "II: goal must be an implication")
        _expect(ends == [NdSeq((goal.lhs,) + ctx, goal.rhs)], path,
                "II: premise context/goal mismatch")
    elif r == "IE":
        _expect(len(ends) == 2, path, "IE takes two premises")
        fun, arg = ends
        _expect(isinstance(fun, NdSeq) and isinstance(fun.goal, Impl)
                and fun.ctx == ctx and arg == NdSeq(ctx, fun.goal.lhs)
                and fun.goal.rhs == goal, path, "IE: premise shapes mismatch")
    elif r == "CI":
        _expect(isinstance(goal, Conj), path, "CI: goal must be a conjunction")
        _expect(ends == [NdSeq(ctx, goal.lhs), NdSeq(ctx, goal.rhs)], path,
                "CI: premises mismatch")
    elif r in ("CE1", "CE2"):
        _expect(len(ends) == 1 and isinstance(ends[0], NdSeq)
                and isinstance(ends[0].goal, Conj) and ends[0].ctx == ctx, path,
                "CE: premise must derive a conjunction")
        side = ends[0].goal.lhs if r == "CE1" else ends[0].goal.rhs
        _expect(side == goal, path, "CE: wrong component")
    elif r in ("DI1", "DI2"):
        _expect(isinstance(goal, Disj), path, "DI: goal must be a disjunction")
        side = goal.lhs if r == "DI1" else goal.rhs
        _expect(ends == [NdSeq(ctx, side)], path, "DI: premise mismatch")
    elif r == "DE":
        _expect(len(ends) == 3, path, "DE takes three premises")
        dj, l, rr = ends
        _expect(isinstance(dj, NdSeq) and isinstance(dj.goal, Disj)
                and dj.ctx == ctx
                and l == NdSeq((dj.goal.lhs,) + ctx, goal)
                and rr == NdSeq((dj.goal.rhs,) + ctx, goal), path,
                "DE: premise shapes mismatch")
    elif r == "AI":
        _expect(isinstance(goal, All), path, "AI: goal must be universal")
        _expect(ends == [NdSeq(shift_ctx(ctx), goal.body)], path,
                "AI: premise context must be the shifted context")
    elif r == "AE":
        (t,) = d.data
        _expect(len(ends) == 1 and isinstance(ends[0], NdSeq)
                and isinstance(ends[0].goal, All) and ends[0].ctx == ctx, path,
                "AE: premise must derive a universal")
        _expect(inst(ends[0].goal.body, t) == goal, path,
                "AE: goal is not the premise instantiated at the witness")
    elif r == "EI":
        (t,) = d.data
        _expect(isinstance(goal, Ex), path, "EI: goal must be existential")
        _expect(ends == [NdSeq(ctx, inst(goal.body, t))], path,
                "EI: premise is not the instance at the witness")
    elif r == "EE":
        _expect(len(ends) == 2, path, "EE takes two premises")
        ex, body = ends
        _expect(isinstance(ex, NdSeq) and isinstance(ex.goal, Ex)
                and ex.ctx == ctx
                and body == NdSeq((ex.goal.body,) + shift_ctx(ctx), shift(goal)),
                path, "EE: premise shapes mismatch")
    elif r == "P":
        _expect(d.calc == "ndc", path, "Peirce is classical-only")
        _expect(not ends, path, "P takes no premises")
        g = goal
        _expect(isinstance(g, Impl) and isinstance(g.lhs, Impl)
                and isinstance(g.lhs.lhs, Impl)
                and g.lhs.rhs == g.rhs == g.lhs.lhs.lhs, path,
                "P: goal is not a Peirce instance")
    else:
        _fail(path, f"unknown ND rule {r!r}")


def _check_ljt(d: Deriv, path) -> None:
    end = d.end
    ends = _premise_ends(d)
    r = d.rule
    for phi in _ljt_formulas(end):
        _expect(is_fragment(phi), path, "LJT judgments live in the fragment")
    if r == "A":
        _expect(isinstance(end, LjtFocus) and end.focus == end.goal and not ends,
                path, "A: focus must equal the goal")
    elif r == "C":
        (a,) = d.data
        _expect(isinstance(end, LjtSeq) and a in end.ctx, path,
                "C: focused formula not in context")
        _expect(ends == [LjtFocus(end.ctx, a, end.goal)], path,
                "C: premise mismatch")
    elif r == "IL":
        _expect(isinstance(end, LjtFocus) and isinstance(end.focus, Impl), path,
                "IL: focus must be an implication")
        _expect(ends == [LjtSeq(end.ctx, end.focus.lhs),
                         LjtFocus(end.ctx, end.focus.rhs, end.goal)], path,
                "IL: premise shapes mismatch")
    elif r == "IR":
        _expect(isinstance(end, LjtSeq) and isinstance(end.goal, Impl), path,
                "IR: goal must be an implication")
        _expect(ends == [LjtSeq((end.goal.lhs,) + end.ctx, end.goal.rhs)], path,
                "IR: premise mismatch")
    elif r == "AL":
        (t,) = d.data
        _expect(isinstance(end, LjtFocus) and isinstance(end.focus, All), path,
                "AL: focus must be universal")
        _expect(ends == [LjtFocus(end.ctx, inst(end.focus.body, t), end.goal)],
                path, "AL: premise is not the instance at the witness")
    elif r == "AR":
        _expect(isinstance(end, LjtSeq) and isinstance(end.goal, All), path,
                "AR: goal must be universal")
        _expect(ends == [LjtSeq(shift_ctx(end.ctx), end.goal.body)], path,
                "AR: premise context must be the shifted context")
    elif r == "E":
        _expect(isinstance(end, LjtSeq), path, "E ends in a sequent")
        _expect(ends == [LjtSeq(end.ctx, Bot)], path, "E: premise must derive falsity")
    else:
        _fail(path, f"unknown LJT rule {r!r}")


def _ljt_formulas(j: Judgment):
    if isinstance(j, LjtSeq):
        return j.ctx + (j.goal,)
    return j.ctx + (j.focus, j.goal)


def _check_lj(d: Deriv, path) -> None:
    end = d.end
    _expect(isinstance(end, LjSeq), path, "LJ node must end in a sequent")
    ctx, goal = end.ctx, end.goal
    ends = _premise_ends(d)
    r = d.rule
    if r == "A":
        _expect(not ends and ctx and ctx[0] == goal, path,
                "A: head of context must be the goal")
    elif r == "C":
        _expect(bool(ctx), path, "C needs a head formula")
        _expect(ends == [LjSeq((ctx[0],) + ctx, goal)], path,
                "C: premise must duplicate the head")
    elif r == "W":
        _expect(bool(ctx), path, "W needs a head formula")
        _expect(ends == [LjSeq(ctx[1:], goal)], path, "W: premise mismatch")
    elif r == "P":
        (i,) = d.data
        _expect(0 <= i < len(ctx) - 1, path, "P: swap index out of range")
        swapped = list(ctx)
        swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
        _expect(ends == [LjSeq(tuple(swapped), goal)], path, "P: premise mismatch")
    elif r == "E":
        _expect(ends == [LjSeq(ctx, Bot)], path, "E: premise must derive falsity")
    elif r == "IL":
        _expect(bool(ctx) and isinstance(ctx[0], Impl), path,
                "IL: head must be an implication")
        _expect(ends == [LjSeq(ctx[1:], ctx[0].lhs),
                         LjSeq((ctx[0].rhs,) + ctx[1:], goal)], path,
                "IL: premise shapes mismatch")
    elif r == "IR":
        _expect(isinstance(goal, Impl), path, "IR: goal must be an implication")
        _expect(ends == [LjSeq((goal.lhs,) + ctx, goal.rhs)], path,
                "IR: premise mismatch")
    elif r == "CL":
        _expect(bool(ctx) and isinstance(ctx[0], Conj), path,
                "CL: head must be a conjunction")
        _expect(ends == [LjSeq((ctx[0].rhs, ctx[0].lhs) + ctx[1:], goal)], path,
                "CL: premise mismatch")
    elif r == "CR":
        _expect(isinstance(goal, Conj), path, "CR: goal must be a conjunction")
        _expect(ends == [LjSeq(ctx, goal.lhs), LjSeq(ctx, goal.rhs)], path,
                "CR: premises mismatch")
    elif r == "DL":
        _expect(bool(ctx) and isinstance(ctx[0], Disj), path,
                "DL: head must be a disjunction")
        _expect(ends == [LjSeq((ctx[0].lhs,) + ctx[1:], goal),
                         LjSeq((ctx[0].rhs,) + ctx[1:], goal)], path,
                "DL: premise shapes mismatch")
    elif r in ("DR1", "DR2"):
        _expect(isinstance(goal, Disj), path, "DR: goal must be a disjunction")
        side = goal.lhs if r == "DR1" else goal.rhs
        _expect(ends == [LjSeq(ctx, side)], path, "DR: premise mismatch")
    elif r == "AL":
        (t,) = d.data
        _expect(bool(ctx) and isinstance(ctx[0], All), path,
                "AL: head must be universal")
        _expect(ends == [LjSeq((inst(ctx[0].body, t),) + ctx[1:], goal)], path,
                "AL: premise is not the instance at the witness")
    elif r == "AR":
        _expect(isinstance(goal, All), path, "AR: goal must be universal")
        _expect(ends == [LjSeq(shift_ctx(ctx), goal.body)], path,
                "AR: premise context must be the shifted context")
    elif r == "EL":
        _expect(bool(ctx) and isinstance(ctx[0], Ex), path,
                "EL: head must be existential")
        _expect(ends == [LjSeq((ctx[0].body,) + shift_ctx(ctx[1:]), shift(goal))],
                path, "EL: premise shapes mismatch")
    elif r == "ER":
        (t,) = d.data
        _expect(isinstance(goal, Ex), path, "ER: goal must be existential")
        _expect(ends == [LjSeq(ctx, inst(goal.body, t))], path,
                "ER: premise is not the instance at the witness")
    else:
        _fail(path, f"unknown LJ rule {r!r}")


def _check_ljd(d: Deriv, path) -> None:
    end = d.end
    _expect(isinstance(end, LjdSeq), path, "LJD node must end in a goal-set sequent")
    ctx, s = end.ctx, end.goals
    ends = _premise_ends(d)
    r = d.rule
    if r == "R":
        phi, wit = d.data
        _expect(defset_member(s, phi, wit), path, "R: defense not in the goal set")
        _expect(justified(ctx, phi), path, "R: atomic defense not justified")
        _expect(tuple(ends) == attack_premises(ctx, phi), path,
                "R: premises must answer every attack on the defense")
    elif r == "L":
        (a,) = d.data
        _expect(isinstance(a, Attack) and attack_ok(a), path, "L: malformed attack")
        _expect(a.target in ctx, path, "L: attacked formula not in context")
        adm = admission(a)
        _expect(justified(ctx, adm), path, "L: atomic admission not justified")
        want = defense_premises(ctx, a, s)
        if adm is not None:
            want = want + attack_premises(ctx, adm)
        _expect(tuple(ends) == want, path,
                "L: premises must cover the defenses and counterattacks")
    else:
        _fail(path, f"unknown LJD rule {r!r}")


# ---------------------------------------------------------------------------
# node builders (compute ends; light sanity checks so misuse fails fast)


def nd_assume(calc: str, ctx: Ctx, phi: Formula) -> Deriv:
    assert phi in ctx, (phi, ctx)
    return Deriv(calc, "C", (), (), NdSeq(ctx, phi))


def nd_e(d: Deriv, goal: Formula) -> Deriv:
    assert d.end.goal == Bot
    return Deriv(d.calc, "E", (d,), (), NdSeq(d.end.ctx, goal))


def nd_ii(d: Deriv) -> Deriv:
    ctx = d.end.ctx
    assert ctx, "II needs a hypothesis at the context head"
    return Deriv(d.calc, "II", (d,), (), NdSeq(ctx[1:], Impl(ctx[0], d.end.goal)))


def nd_ie(d1: Deriv, d2: Deriv) -> Deriv:
    g = d1.end.goal
    assert isinstance(g, Impl) and g.lhs == d2.end.goal and d1.end.ctx == d2.end.ctx
    return Deriv(d1.calc, "IE", (d1, d2), (), NdSeq(d1.end.ctx, g.rhs))


def nd_ci(d1: Deriv, d2: Deriv) -> Deriv:
    return Deriv(d1.calc, "CI", (d1, d2), (),
                 NdSeq(d1.end.ctx, Conj(d1.end.goal, d2.end.goal)))


def nd_ce1(d: Deriv) -> Deriv:
    return Deriv(d.calc, "CE1", (d,), (), NdSeq(d.end.ctx, d.end.goal.lhs))


def nd_ce2(d: Deriv) -> Deriv:
    return Deriv(d.calc, "CE2", (d,), (), NdSeq(d.end.ctx, d.end.goal.rhs))


def nd_di1(d: Deriv, rhs: Formula) -> Deriv:
    return Deriv(d.calc, "DI1", (d,), (), NdSeq(d.end.ctx, Disj(d.end.goal, rhs)))


def nd_di2(d: Deriv, lhs: Formula) -> Deriv:
    return Deriv(d.calc, "DI2", (d,), (), NdSeq(d.end.ctx, Disj(lhs, d.end.goal)))


def nd_de(dj: Deriv, dl: Deriv, dr: Deriv) -> Deriv:
    return Deriv(dj.calc, "DE", (dj, dl, dr), (), NdSeq(dj.end.ctx, dl.end.goal))


def nd_ai(d: Deriv, ctx: Ctx) -> Deriv:
    assert d.end.ctx == shift_ctx(ctx)
    return Deriv(d.calc, "AI", (d,), (), NdSeq(ctx, All(d.end.goal)))


def nd_ae(d: Deriv, t: Term) -> Deriv:
    g = d.end.goal
    assert isinstance(g, All)
    return Deriv(d.calc, "AE", (d,), (t,), NdSeq(d.end.ctx, inst(g.body, t)))


def nd_ei(d: Deriv, body: Formula, t: Term) -> Deriv:
    assert d.end.goal == inst(body, t)
    return Deriv(d.calc, "EI", (d,), (t,), NdSeq(d.end.ctx, Ex(body)))


def nd_ee(dex: Deriv, dbody: Deriv, goal: Formula) -> Deriv:
    assert dbody.end.goal == shift(goal)
    return Deriv(dex.calc, "EE", (dex, dbody), (), NdSeq(dex.end.ctx, goal))


def nd_peirce(ctx: Ctx, a: Formula, b: Formula) -> Deriv:
    return Deriv("ndc", "P", (), (),
                 NdSeq(ctx, Impl(Impl(Impl(a, b), a), a)))


def ljt_axiom(ctx: Ctx, phi: Formula) -> Deriv:
    return Deriv("ljt", "A", (), (), LjtFocus(ctx, phi, phi))


def ljt_contract(d: Deriv) -> Deriv:
    end = d.end
    assert isinstance(end, LjtFocus) and end.focus in end.ctx
    return Deriv("ljt", "C", (d,), (end.focus,), LjtSeq(end.ctx, end.goal))


def ljt_il(darg: Deriv, dfoc: Deriv) -> Deriv:
    assert isinstance(darg.end, LjtSeq) and isinstance(dfoc.end, LjtFocus)
    return Deriv("ljt", "IL", (darg, dfoc), (),
                 LjtFocus(darg.end.ctx, Impl(darg.end.goal, dfoc.end.focus),
                          dfoc.end.goal))


def ljt_ir(d: Deriv) -> Deriv:
    end = d.end
    return Deriv("ljt", "IR", (d,), (),
                 LjtSeq(end.ctx[1:], Impl(end.ctx[0], end.goal)))


def ljt_al(d: Deriv, body: Formula, t: Term) -> Deriv:
    end = d.end
    assert end.focus == inst(body, t)
    return Deriv("ljt", "AL", (d,), (t,), LjtFocus(end.ctx, All(body), end.goal))


def ljt_ar(d: Deriv, ctx: Ctx) -> Deriv:
    assert d.end.ctx == shift_ctx(ctx)
    return Deriv("ljt", "AR", (d,), (), LjtSeq(ctx, All(d.end.goal)))


def ljt_e(d: Deriv, goal: Formula) -> Deriv:
    assert d.end.goal == Bot
    return Deriv("ljt", "E", (d,), (), LjtSeq(d.end.ctx, goal))


# ---------------------------------------------------------------------------
# weakening and substitution


def weaken(d: Deriv, new_ctx: Ctx) -> Deriv:
    """Rebuild d over a context that contains (as a set) the old one."""
    old = _ctx_of(d.end)
    missing = [phi for phi in old if phi not in new_ctx]
    if missing:
        raise ValueError(f"weaken: new context misses {missing[0]!r}")
    return _weaken(d, new_ctx)


def _ctx_of(j: Judgment) -> Ctx:
    return j.ctx


def _weaken(d: Deriv, ctx: Ctx) -> Deriv:
    if d.calc in ("ndi", "ndc"):
        return _weaken_nd(d, ctx)
    if d.calc == "ljt":
        return _weaken_ljt(d, ctx)
    if d.calc == "ljd":
        return _weaken_ljd(d, ctx)
    raise ValueError(f"weaken unsupported for calculus {d.calc!r} "
                     "(LJ uses explicit structural rules)")


def _weaken_nd(d: Deriv, ctx: Ctx) -> Deriv:
    r = d.rule
    end = NdSeq(ctx, d.end.goal)
    if r in ("C", "P"):
        return Deriv(d.calc, r, (), d.data, end)
    if r in ("E", "IE", "CI", "CE1", "CE2", "DI1", "DI2", "AE", "EI"):
        return Deriv(d.calc, r, tuple(_weaken_nd(p, ctx) for p in d.premises),
                     d.data, end)
    if r == "II":
        hyp = d.end.goal.lhs
        return Deriv(d.calc, r, (_weaken_nd(d.premises[0], (hyp,) + ctx),),
                     d.data, end)
    if r == "DE":
        dj = _weaken_nd(d.premises[0], ctx)
        a, b = d.premises[0].end.goal.lhs, d.premises[0].end.goal.rhs
        return Deriv(d.calc, r,
                     (dj, _weaken_nd(d.premises[1], (a,) + ctx),
                      _weaken_nd(d.premises[2], (b,) + ctx)), d.data, end)
    if r == "AI":
        return Deriv(d.calc, r, (_weaken_nd(d.premises[0], shift_ctx(ctx)),),
                     d.data, end)
    if r == "EE":
        a = d.premises[0].end.goal.body
        return Deriv(d.calc, r,
                     (_weaken_nd(d.premises[0], ctx),
                      _weaken_nd(d.premises[1], (a,) + shift_ctx(ctx))),
                     d.data, end)
    raise AssertionError(f"unhandled ND rule {r!r}")


def _weaken_ljt(d: Deriv, ctx: Ctx) -> Deriv:
    r = d.rule
    if isinstance(d.end, LjtFocus):
        end = LjtFocus(ctx, d.end.focus, d.end.goal)
    else:
        end = LjtSeq(ctx, d.end.goal)
    if r == "A":
        return Deriv("ljt", r, (), d.data, end)
    if r in ("C", "IL", "AL", "E"):
        return Deriv("ljt", r, tuple(_weaken_ljt(p, ctx) for p in d.premises),
                     d.data, end)
    if r == "IR":
        hyp = d.end.goal.lhs
        return Deriv("ljt", r, (_weaken_ljt(d.premises[0], (hyp,) + ctx),),
                     d.data, end)
    if r == "AR":
        return Deriv("ljt", r, (_weaken_ljt(d.premises[0], shift_ctx(ctx)),),
                     d.data, end)
    raise AssertionError(f"unhandled LJT rule {r!r}")


def _weaken_ljd(d: Deriv, ctx: Ctx) -> Deriv:
    end = LjdSeq(ctx, d.end.goals)
    want_old = (attack_premises(d.end.ctx, d.data[0]) if d.rule == "R" else
                defense_premises(d.end.ctx, d.data[0], d.end.goals)
                + (attack_premises(d.end.ctx, admission(d.data[0]))
                   if admission(d.data[0]) is not None else ()))
    want_new = (attack_premises(ctx, d.data[0]) if d.rule == "R" else
                defense_premises(ctx, d.data[0], d.end.goals)
                + (attack_premises(ctx, admission(d.data[0]))
                   if admission(d.data[0]) is not None else ()))
    premises = tuple(_weaken_ljd(p, j.ctx)
                     for p, j in zip(d.premises, want_new))
    assert len(want_old) == len(d.premises)
    return Deriv("ljd", d.rule, premises, d.data, end)


def subst_deriv(d: Deriv, sigma: Subst) -> Deriv:
    """Γ[σ] ⊢ φ[σ] from Γ ⊢ φ, mirroring the substitutivity induction."""
    if d.calc in ("ndi", "ndc"):
        return _subst_nd(d, sigma)
    if d.calc == "ljt":
        return _subst_ljt(d, sigma)
    if d.calc == "ljd":
        return _subst_ljd(d, sigma)
    raise ValueError(f"subst_deriv unsupported for calculus {d.calc!r}")


def _subst_judg_nd(j: NdSeq, sigma: Subst) -> NdSeq:
    return NdSeq(tuple(substitute(p, sigma) for p in j.ctx),
                 substitute(j.goal, sigma))


def _subst_nd(d: Deriv, sigma: Subst) -> Deriv:
    r = d.rule
    end = _subst_judg_nd(d.end, sigma)
    if r in ("C", "P"):
        return Deriv(d.calc, r, (), (), end)
    if r in ("AE", "EI"):
        (t,) = d.data
        return Deriv(d.calc, r, (_subst_nd(d.premises[0], sigma),),
                     (subst_term(t, sigma),), end)
    if r in ("AI",):
        return Deriv(d.calc, r, (_subst_nd(d.premises[0], under_binder(sigma)),),
                     (), end)
    if r == "EE":
        return Deriv(d.calc, r,
                     (_subst_nd(d.premises[0], sigma),
                      _subst_nd(d.premises[1], under_binder(sigma))), (), end)
    return Deriv(d.calc, r, tuple(_subst_nd(p, sigma) for p in d.premises),
                 d.data, end)


def _subst_ljt(d: Deriv, sigma: Subst) -> Deriv:
    r = d.rule
    if isinstance(d.end, LjtFocus):
        end = LjtFocus(tuple(substitute(p, sigma) for p in d.end.ctx),
                       substitute(d.end.focus, sigma),
                       substitute(d.end.goal, sigma))
    else:
        end = LjtSeq(tuple(substitute(p, sigma) for p in d.end.ctx),
                     substitute(d.end.goal, sigma))
    if r == "A":
        return Deriv("ljt", r, (), (), end)
    if r == "C":
        return Deriv("ljt", r, (_subst_ljt(d.premises[0], sigma),),
                     (substitute(d.data[0], sigma),), end)
    if r == "AL":
        (t,) = d.data
        return Deriv("ljt", r, (_subst_ljt(d.premises[0], sigma),),
                     (subst_term(t, sigma),), end)
    if r == "AR":
        return Deriv("ljt", r, (_subst_ljt(d.premises[0], under_binder(sigma)),),
                     (), end)
    return Deriv("ljt", r, tuple(_subst_ljt(p, sigma) for p in d.premises),
                 d.data, end)


def attack_premise_shifts(phi: Formula) -> tuple[bool, ...]:
    """Which attack premises are the shifted generic ones (∀-attacks)."""
    if isinstance(phi, Atom):
        return ()
    if isinstance(phi, Conj):
        return (False, False)
    if isinstance(phi, All):
        return (True,)
    return (False,)


def defense_premise_shifts(a: Attack) -> tuple[bool, ...]:
    """Which defense premises are the shifted generic ones (∃-defenses)."""
    if a.kind == "bot":
        return ()
    if a.kind == "disj":
        return (False, False)
    if a.kind == "ex":
        return (True,)
    return (False,)


def _ljd_premise_shifts(d: Deriv) -> tuple[bool, ...]:
    if d.rule == "R":
        return attack_premise_shifts(d.data[0])
    (a,) = d.data
    shifts = defense_premise_shifts(a)
    adm = admission(a)
    if adm is not None:
        shifts = shifts + attack_premise_shifts(adm)
    return shifts


def _subst_ljd(d: Deriv, sigma: Subst) -> Deriv:
    end = LjdSeq(tuple(substitute(p, sigma) for p in d.end.ctx),
                 subst_defset(d.end.goals, sigma))
    if d.rule == "R":
        phi, wit = d.data
        data = (substitute(phi, sigma),
                subst_term(wit, sigma) if wit is not None else None)
    else:
        (a,) = d.data
        data = (Attack(substitute(a.target, sigma), a.kind,
                       subst_term(a.term, sigma) if a.term is not None else None),)
    premises = tuple(
        _subst_ljd(p, under_binder(sigma) if shifted else sigma)
        for p, shifted in zip(d.premises, _ljd_premise_shifts(d)))
    return Deriv("ljd", d.rule, premises, data, end)


# ---------------------------------------------------------------------------
# named opening: trade the shifted context for a fresh variable


def named_open(d: Deriv, x: int | None = None) -> tuple[Deriv, int]:
    """↑Γ ⊢ φ  ⇝  Γ ⊢ φ[x] for a computed fresh x (ND and LJT)."""
    end = d.end
    ctx = end.ctx
    if any(0 in free_vars(phi) for phi in ctx):
        raise ValueError("named_open: context is not a shifted context")
    lowered = tuple(inst(phi, Var(0)) for phi in ctx)  # un-shift
    goal = end.goal
    fresh = fresh_var(lowered + (All(goal),))
    if x is None:
        x = fresh
    elif x < fresh:
        raise ValueError(f"named_open: {x} is not fresh")
    return subst_deriv(d, cons(Var(x), IDENTITY)), x


def named_close(d: Deriv, x: int) -> Deriv:
    """Γ ⊢ φ[x]  ⇝  ↑Γ ⊢ φ-generic, for x fresh for Γ (ND and LJT)."""
    if any(x in free_vars(phi) for phi in d.end.ctx):
        raise ValueError(f"named_close: {x} occurs free in the context")
    return subst_deriv(d, generalizer(x))


def named_open_ee(d: Deriv, x: int | None = None) -> tuple[Deriv, int]:
    """↑Γ,φ ⊢ ↑ψ  ⇝  Γ,φ[x] ⊢ ψ (the existential-elimination shape)."""
    end = d.end
    if not end.ctx:
        raise ValueError("named_open_ee needs a hypothesis at the head")
    tail = end.ctx[1:]
    lowered = tuple(inst(phi, Var(0)) for phi in tail)
    fresh = fresh_var(lowered + (All(end.ctx[0]), All(end.goal)))
    if x is None:
        x = fresh
    elif x < fresh:
        raise ValueError(f"named_open_ee: {x} is not fresh")
    return subst_deriv(d, cons(Var(x), IDENTITY)), x


# ---------------------------------------------------------------------------
# LJT into normal natural deduction


def ljt_to_nd(d: Deriv) -> Deriv:
    """Translate Γ ⇒ φ into an NDi derivation Γ ⊢ φ; focused sequents read
    as functions from Γ ⊢ focus to Γ ⊢ goal."""
    if not isinstance(d.end, LjtSeq):
        raise ValueError("ljt_to_nd expects an unfocused sequent")
    return _ljt_seq(d)


def _ljt_seq(d: Deriv) -> Deriv:
    r = d.rule
    if r == "C":
        (a,) = d.data
        return _ljt_focus(d.premises[0])(nd_assume("ndi", d.end.ctx, a))
    if r == "IR":
        return nd_ii(_ljt_seq(d.premises[0]))
    if r == "AR":
        return nd_ai(_ljt_seq(d.premises[0]), d.end.ctx)
    if r == "E":
        return nd_e(_ljt_seq(d.premises[0]), d.end.goal)
    raise AssertionError(f"not a sequent rule: {r!r}")


def _ljt_focus(d: Deriv):
    r = d.rule
    if r == "A":
        return lambda k: k
    if r == "IL":
        arg = _ljt_seq(d.premises[0])
        rest = _ljt_focus(d.premises[1])
        return lambda k: rest(nd_ie(k, arg))
    if r == "AL":
        (t,) = d.data
        rest = _ljt_focus(d.premises[0])
        return lambda k: rest(nd_ae(k, t))
    raise AssertionError(f"not a focus rule: {r!r}")


# ---------------------------------------------------------------------------
# small classical schemas


def dn_elim(ctx: Ctx, a: Formula) -> Deriv:
    """NDc derivation of ctx ⊢ ¬¬a → a via the Peirce rule."""
    nna = Neg(Neg(a))
    c1 = (nna,) + ctx
    c2 = (Neg(a),) + c1
    bot = nd_ie(nd_assume("ndc", c2, nna), nd_assume("ndc", c2, Neg(a)))
    inner = nd_ii(nd_e(bot, a))          # c1 ⊢ ¬a → a
    peirce = nd_peirce(c1, a, Bot)       # ((a→⊥)→a)→a
    return nd_ii(nd_ie(peirce, inner))


def nd_retag(d: Deriv, calc: str) -> Deriv:
    """Reuse an NDi derivation as NDc (every NDi rule is an NDc rule)."""
    if d.calc == calc:
        return d
    assert not (d.rule == "P" and calc == "ndi"), "Peirce is classical-only"
    return Deriv(calc, d.rule, tuple(nd_retag(p, calc) for p in d.premises),
                 d.data, d.end)


# ---------------------------------------------------------------------------
# de Morgan proof translation: Γ ⊢c φ  ⇝  Γ^M ⊢c φ^M


def demorgan_transform(d: Deriv) -> Deriv:
    if d.calc != "ndc":
        raise ValueError("demorgan_transform expects a classical derivation")
    check(d)
    return _dm(d)


def _dm(d: Deriv) -> Deriv:
    ctx = de_morgan_ctx(d.end.ctx)
    goal = de_morgan(d.end.goal)
    r = d.rule
    if r == "C":
        return nd_assume("ndc", ctx, goal)
    if r == "P":
        g = d.end.goal
        return nd_peirce(ctx, de_morgan(g.rhs), de_morgan(g.lhs.lhs.rhs))
    if r == "E":
        return nd_e(_dm(d.premises[0]), goal)
    if r == "II":
        return nd_ii(_dm(d.premises[0]))
    if r == "IE":
        return nd_ie(_dm(d.premises[0]), _dm(d.premises[1]))
    if r == "AI":
        return nd_ai(_dm(d.premises[0]), ctx)
    if r == "AE":
        return nd_ae(_dm(d.premises[0]), d.data[0])
    if r == "CI":
        # goal = ¬(a^M → ¬b^M)
        da, db = _dm(d.premises[0]), _dm(d.premises[1])
        a, b = da.end.goal, db.end.goal
        hyp = Impl(a, Neg(b))
        c1 = (hyp,) + ctx
        bot = nd_ie(nd_ie(nd_assume("ndc", c1, hyp), weaken(da, c1)),
                    weaken(db, c1))
        return nd_ii(bot)
    if r in ("CE1", "CE2"):
        dd = _dm(d.premises[0])
        # dd : ctx ⊢ ¬(a → ¬b); recover a (CE1) or b (CE2) classically
        conj = dd.end.goal.lhs
        a, b = conj.lhs, conj.rhs.lhs
        want = a if r == "CE1" else b
        c1 = (Neg(want),) + ctx
        if r == "CE1":
            # ¬a ⟹ a → ¬b by explosion
            c2 = (a,) + c1
            inner = nd_ii(nd_e(nd_ie(nd_assume("ndc", c2, Neg(a)),
                                     nd_assume("ndc", c2, a)), Neg(b)))
        else:
            # ¬b ⟹ a → ¬b by constant
            c2 = (a,) + c1
            inner = nd_ii(weaken(nd_assume("ndc", c1, Neg(b)), c2))
        nn = nd_ii(nd_ie(weaken(dd, c1), inner))
        return nd_ie(dn_elim(ctx, want), nn)
    if r in ("DI1", "DI2"):
        dd = _dm(d.premises[0])
        g = d.end.goal
        a, b = de_morgan(g.lhs), de_morgan(g.rhs)
        c1 = (Neg(a),) + ctx
        if r == "DI1":
            body = nd_e(nd_ie(nd_assume("ndc", c1, Neg(a)), weaken(dd, c1)), b)
        else:
            body = weaken(dd, c1)
        return nd_ii(body)  # ¬a → b
    if r == "DE":
        dj = _dm(d.premises[0])   # ctx ⊢ ¬a → b
        dl = _dm(d.premises[1])   # a::ctx ⊢ goal
        dr = _dm(d.premises[2])   # b::ctx ⊢ goal
        a = dl.end.ctx[0]
        b = dr.end.ctx[0]
        c1 = (Neg(goal),) + ctx
        # ¬goal ⟹ ¬a, via dl
        c2 = (a,) + c1
        na = nd_ii(nd_ie(nd_assume("ndc", c2, Neg(goal)),
                         weaken(dl, c2)))
        got_b = nd_ie(weaken(dj, c1), na)
        got_goal = nd_ie(nd_ii(weaken(dr, (b,) + c1)), got_b)
        bot = nd_ie(nd_assume("ndc", c1, Neg(goal)), got_goal)
        return nd_ie(dn_elim(ctx, goal), nd_ii(bot))
    if r == "EI":
        (t,) = d.data
        dd = _dm(d.premises[0])
        body = de_morgan(d.end.goal.body)
        hyp = All(Neg(body))
        c1 = (hyp,) + ctx
        bot = nd_ie(nd_ae(nd_assume("ndc", c1, hyp), t), weaken(dd, c1))
        return nd_ii(bot)  # ¬∀¬body
    if r == "EE":
        dex = _dm(d.premises[0])   # ctx ⊢ ¬∀¬a
        dbody = _dm(d.premises[1])  # a::↑ctx ⊢ ↑goal
        a = dbody.end.ctx[0]
        c1 = (Neg(goal),) + ctx
        up = shift_ctx(c1)
        c2 = (a,) + up
        bot = nd_ie(nd_assume("ndc", c2, shift(Neg(goal))),
                    weaken(dbody, c2))
        alln = nd_ai(nd_ii(bot), c1)  # c1 ⊢ ∀¬a
        bot2 = nd_ie(weaken(dex, c1), alln)
        return nd_ie(dn_elim(ctx, goal), nd_ii(bot2))
    raise AssertionError(f"unhandled NDc rule {r!r}")


# ---------------------------------------------------------------------------
# double-negation proof translation:
# fragment Γ ⊢c φ  ⇝  NDi Γ^N ⊢ φ^N


def dn_transform(d: Deriv) -> Deriv:
    if d.calc != "ndc":
        raise ValueError("dn_transform expects a classical derivation")
    check(d)
    for phi in d.end.ctx + (d.end.goal,):
        if not is_fragment(phi):
            raise ValueError("dn_transform handles the fragment; "
                             "route full syntax through demorgan_transform first")
    return _dn(d)


def _dn(d: Deriv) -> Deriv:
    ctx = dn_translate_ctx(d.end.ctx)
    r = d.rule
    if r == "C":
        return nd_assume("ndi", ctx, dn_translate(d.end.goal))
    if r == "E":
        return nd_e(_dn(d.premises[0]), dn_translate(d.end.goal))
    if r == "II":
        return nd_ii(_dn(d.premises[0]))
    if r == "IE":
        return nd_ie(_dn(d.premises[0]), _dn(d.premises[1]))
    if r == "AI":
        return nd_ai(_dn(d.premises[0]), ctx)
    if r == "AE":
        return nd_ae(_dn(d.premises[0]), d.data[0])
    if r == "P":
        g = d.end.goal
        return peirce_n(ctx, g.rhs, g.lhs.lhs.rhs)
    raise AssertionError(f"unhandled fragment NDc rule {r!r}")


def gg_stable(ctx: Ctx, phi: Formula) -> Deriv:
    """NDi derivation of ctx ⊢ ¬¬(φ^N) → φ^N for fragment φ."""
    a = dn_translate(phi)
    nna = Neg(Neg(a))
    c1 = (nna,) + ctx
    if isinstance(phi, _Bot):
        # a = ⊥: from ¬¬⊥ and ¬⊥ get ⊥
        not_bot = nd_ii(nd_assume("ndi", (Bot,) + c1, Bot))
        return nd_ii(nd_ie(nd_assume("ndi", c1, nna), not_bot))
    if isinstance(phi, Atom):
        # a = ¬¬p: assume np : ¬p, derive ⊥ from ¬¬(¬¬p):
        # λ nna np. nna (λ nnp. nnp np)
        np_ = Neg(phi)
        c2 = (np_,) + c1
        c3 = (a,) + c2  # a = ¬¬p
        bot3 = nd_ie(nd_assume("ndi", c3, a), nd_assume("ndi", c3, np_))
        not_a = nd_ii(bot3)  # c2 ⊢ ¬(¬¬p)
        bot2 = nd_ie(nd_assume("ndi", c2, nna), not_a)
        return nd_ii(nd_ii(bot2))
    if isinstance(phi, Impl):
        b2 = dn_translate(phi.rhs)
        a1 = dn_translate(phi.lhs)
        st2 = gg_stable(ctx, phi.rhs)
        c2 = (a1,) + c1
        # ¬¬b2 from nna and the hypothesis a1
        c3 = (Neg(b2),) + c2
        c4 = (a,) + c3
        bot4 = nd_ie(nd_assume("ndi", c4, Neg(b2)),
                     nd_ie(nd_assume("ndi", c4, a), nd_assume("ndi", c4, a1)))
        bot3 = nd_ie(nd_assume("ndi", c3, nna), nd_ii(bot4))
        nnb2 = nd_ii(bot3)  # c2 ⊢ ¬¬b2
        body = nd_ie(weaken(st2, c2), nnb2)
        return nd_ii(nd_ii(body))
    if isinstance(phi, All):
        body_pre = phi.body
        bn = dn_translate(body_pre)          # a = ∀ bn
        up = shift_ctx(c1)
        upa = shift(a)                       # ∀ (bn shifted below the binder)
        st = gg_stable(up, body_pre)         # ↑c1 ⊢ ¬¬bn → bn
        c2 = (Neg(bn),) + up
        c3 = (upa,) + c2
        inst_b = nd_ae(nd_assume("ndi", c3, upa), Var(0))
        bot3 = nd_ie(nd_assume("ndi", c3, Neg(bn)), inst_b)
        not_upa = nd_ii(bot3)                # c2 ⊢ ¬(↑a)
        bot2 = nd_ie(nd_assume("ndi", c2, shift(nna)), not_upa)
        nnb = nd_ii(bot2)                    # ↑c1 ⊢ ¬¬bn
        body = nd_ie(st, nnb)                # ↑c1 ⊢ bn
        return nd_ii(nd_ai(body, c1))
    raise AssertionError("gg_stable expects fragment formulas")


def peirce_n(ctx: Ctx, a_pre: Formula, b_pre: Formula) -> Deriv:
    """NDi derivation of ctx ⊢ (((a→b)→a)→a)^N, the image of a Peirce axiom."""
    a = dn_translate(a_pre)
    b = dn_translate(b_pre)
    h = Impl(Impl(a, b), a)
    c1 = (h,) + ctx
    st = gg_stable(c1, a_pre)  # c1 ⊢ ¬¬a → a
    c2 = (Neg(a),) + c1
    # a → b from ¬a by explosion
    c3 = (a,) + c2
    ab = nd_ii(nd_e(nd_ie(nd_assume("ndi", c3, Neg(a)),
                          nd_assume("ndi", c3, a)), b))
    got_a = nd_ie(nd_assume("ndi", c2, h), ab)
    bot2 = nd_ie(nd_assume("ndi", c2, Neg(a)), got_a)
    nn_a = nd_ii(bot2)  # c1 ⊢ ¬¬a
    return nd_ii(nd_ie(st, nn_a))
