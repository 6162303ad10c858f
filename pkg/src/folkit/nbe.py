"""Semantic cut-elimination: evaluate fragment NDi derivations in the
universal context-indexed Kripke model and reify cut-free LJT derivations.

Worlds are contexts preordered by inclusion; at base formulas a value *is*
an LJT derivation, at → it is a monotone function space, at ∀ a function
out of terms.  Values are indexed by the world and the formula instance
they inhabit; monotone transport rebuilds only the base-level derivations
via weakening.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable

from .kernel import (Ctx, Deriv, LjtFocus, LjtSeq, NdSeq, check, ljt_al,
                     ljt_ar, ljt_axiom, ljt_e, ljt_il, ljt_ir, ljt_to_nd,
                     named_close, subst_deriv, weaken)
from .syntax import (IDENTITY, All, Atom, Bot, Formula, Impl, Subst, Term,
                     Var, _Bot, cons, fresh_var, inst, is_fragment,
                     subst_term, substitute)


class ResourceLimit(Exception):
    """The evaluation node guard tripped (runaway recursion)."""


_state = threading.local()
DEFAULT_NODE_LIMIT = 10 ** 6


def _tick():
    count = getattr(_state, "count", None)
    if count is None:
        return
    _state.count += 1
    if _state.count > _state.limit:
        raise ResourceLimit(f"evaluation exceeded {_state.limit} nodes")


class SemValue:
    __slots__ = ("world", "formula")


class AtBase(SemValue):
    """Value at ⊥ or an atom: a cut-free derivation of world ⇒ formula."""

    def __init__(self, world: Ctx, formula: Formula, deriv: Deriv):
        self.world = world
        self.formula = formula
        self.deriv = deriv


class AtImpl(SemValue):
    def __init__(self, world: Ctx, formula: Impl,
                 fn: Callable[[Ctx, SemValue], SemValue]):
        self.world = world
        self.formula = formula
        self.fn = fn

    def apply(self, world: Ctx, arg: SemValue) -> SemValue:
        return self.fn(world, arg)


class AtAll(SemValue):
    """Lazy in the term argument: queried only at demanded terms."""

    def __init__(self, world: Ctx, formula: All, fn: Callable[[Term], SemValue]):
        self.world = world
        self.formula = formula
        self.fn = fn

    def at(self, t: Term) -> SemValue:
        return self.fn(t)


def transport(v: SemValue, world: Ctx) -> SemValue:
    """Monotonicity: move a value to a superset context."""
    _tick()
    if v.world == world:
        return v
    if isinstance(v, AtBase):
        return AtBase(world, v.formula, weaken(v.deriv, world))
    if isinstance(v, AtImpl):
        return AtImpl(world, v.formula, v.fn)
    return AtAll(world, v.formula, v.fn)


def reify(v: SemValue) -> Deriv:
    """Quote a semantic value back into a cut-free derivation: Γ ⊩ φ → Γ ⇒ φ."""
    _tick()
    if isinstance(v, AtBase):
        return v.deriv
    if isinstance(v, AtImpl):
        alpha, beta = v.formula.lhs, v.formula.rhs
        hyp_world = (alpha,) + v.world
        hyp = reflect(alpha, hyp_world)
        return ljt_ir(reify(v.apply(hyp_world, hyp)))
    # universal: reify at a fresh variable and re-generalize
    x = fresh_var(v.world + (v.formula,))
    d = reify(v.at(Var(x)))
    return ljt_ar(named_close(d, x), v.world)


def reflect(phi: Formula, world: Ctx, k=None) -> SemValue:
    """Unquote: (∀Δ⊇Γ. Δ;φ ⇒ ψ → Δ ⇒ ψ) → Γ ⊩ φ.

    The default continuation is hypothesis use: compose with the C rule,
    which requires phi ∈ world.
    """
    _tick()
    if k is None:
        if phi not in world:
            raise ValueError("default reflection needs the formula in the context")

        def k(delta: Ctx, fd: Deriv) -> Deriv:
            return Deriv("ljt", "C", (fd,), (phi,), LjtSeq(delta, fd.end.goal))

    if isinstance(phi, (_Bot, Atom)):
        return AtBase(world, phi, k(world, ljt_axiom(world, phi)))
    if isinstance(phi, Impl):
        alpha, beta = phi.lhs, phi.rhs

        def fn(delta: Ctx, arg: SemValue) -> SemValue:
            def k2(delta2: Ctx, fd: Deriv) -> Deriv:
                return k(delta2, ljt_il(reify(transport(arg, delta2)), fd))
            return reflect(beta, delta, k2)

        return AtImpl(world, phi, fn)
    if isinstance(phi, All):
        body = phi.body

        def fn(t: Term) -> SemValue:
            def kt(delta: Ctx, fd: Deriv) -> Deriv:
                return k(delta, ljt_al(fd, body, t))
            return reflect(inst(body, t), world, kt)

        return AtAll(world, phi, fn)
    raise ValueError("reflect expects fragment formulas")


def explode(dbot: Deriv, phi: Formula, world: Ctx) -> SemValue:
    """From world ⇒ ⊥ inhabit any fragment formula (the model explodes)."""
    _tick()
    d = weaken(dbot, world) if dbot.end.ctx != world else dbot
    if isinstance(phi, _Bot):
        return AtBase(world, phi, d)
    if isinstance(phi, Atom):
        return AtBase(world, phi, ljt_e(d, phi))
    if isinstance(phi, Impl):
        return AtImpl(world, phi, lambda delta, _arg: explode(d, phi.rhs, delta))
    if isinstance(phi, All):
        return AtAll(world, phi, lambda t: explode(d, inst(phi.body, t), world))
    raise ValueError("explode expects fragment formulas")


def eval_deriv(d: Deriv, world: Ctx, sigma: Subst,
               env: tuple[SemValue, ...]) -> SemValue:
    """Clause-by-clause soundness evaluation: env gives a value at
    world for each context formula instantiated along sigma."""
    _tick()
    ctx, goal = d.end.ctx, d.end.goal
    r = d.rule
    if r == "C":
        return env[ctx.index(goal)]
    if r == "II":
        phi = substitute(goal, sigma)

        def fn(delta: Ctx, arg: SemValue) -> SemValue:
            moved = (arg,) + tuple(transport(e, delta) for e in env)
            return eval_deriv(d.premises[0], delta, sigma, moved)

        return AtImpl(world, phi, fn)
    if r == "IE":
        fun = eval_deriv(d.premises[0], world, sigma, env)
        arg = eval_deriv(d.premises[1], world, sigma, env)
        return fun.apply(world, arg)
    if r == "AI":
        phi = substitute(goal, sigma)

        def fn(t: Term) -> SemValue:
            return eval_deriv(d.premises[0], world, cons(t, sigma), env)

        return AtAll(world, phi, fn)
    if r == "AE":
        (t,) = d.data
        v = eval_deriv(d.premises[0], world, sigma, env)
        return v.at(subst_term(t, sigma))
    if r == "E":
        v = eval_deriv(d.premises[0], world, sigma, env)
        return explode(v.deriv, substitute(goal, sigma), world)
    raise ValueError(f"eval_deriv: non-fragment NDi rule {r!r}")


class NotFragment(ValueError):
    pass


def normalize(d: Deriv, node_limit: int = DEFAULT_NODE_LIMIT) -> Deriv:
    """NDi fragment derivation Γ ⊢ φ into a cut-free LJT derivation Γ ⇒ φ.

    Classical or full-syntax inputs must be routed through the de Morgan
    translation first.
    """
    if d.calc != "ndi":
        raise NotFragment("normalize expects an NDi derivation; "
                          "pre-compose demorgan_transform/dn_transform")
    check(d)
    ctx, goal = d.end.ctx, d.end.goal
    for phi in ctx + (goal,):
        if not is_fragment(phi):
            raise NotFragment("normalize handles the →,∀,⊥ fragment; "
                              "pre-compose the de Morgan translation")
    _state.count = 0
    _state.limit = node_limit
    try:
        env = tuple(reflect(phi, ctx) for phi in ctx)
        out = reify(eval_deriv(d, ctx, IDENTITY, env))
    finally:
        _state.count = None
    assert out.end == LjtSeq(ctx, goal), "end sequent must be preserved"
    assert cut_free(out)
    check(out)
    return out


LJT_RULES = {"A", "C", "IL", "IR", "AL", "AR", "E"}


def cut_free(d: Deriv) -> bool:
    """Structural scan: LJT has no cut rule, asserted as a schema check."""
    return d.rule in LJT_RULES and all(cut_free(p) for p in d.premises)


def cut(d1: Deriv, d2: Deriv, node_limit: int = DEFAULT_NODE_LIMIT) -> Deriv:
    """Semantic cut: from Γ ⇒ φ and Γ;φ ⇒ ψ build Γ ⇒ ψ by
    translating to ND, recombining, and normalizing."""
    check(d1)
    check(d2)
    if not (isinstance(d1.end, LjtSeq) and isinstance(d2.end, LjtFocus)):
        raise ValueError("cut expects a sequent and a focused sequent")
    if d1.end.goal != d2.end.focus or d1.end.ctx != d2.end.ctx:
        raise ValueError("cut formula or contexts mismatch")
    from .kernel import _ljt_focus
    nd = _ljt_focus(d2)(ljt_to_nd(d1))
    out = normalize(nd, node_limit)
    assert out.end == LjtSeq(d1.end.ctx, d2.end.goal)
    return out
