"""Bounded, iterative-deepening proof search for the focused calculus LJT,
and theory provability over finite contexts or enumerated theories.

The search is sound (every hit is checker-valid and cut-free by the shape
of LJT); completeness is only relative to the depth budget and the term
menu used for AL instantiation.  Budget exhaustion is reported as None and
never claims refutation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .kernel import (Deriv, LjtSeq, ljt_al, ljt_axiom, ljt_e, ljt_il, ljt_ir,
                     ljt_ar, check)
from .syntax import (All, App, Atom, Bot, Conj, Disj, Ex, Formula, Impl,
                     Term, Var, _Bot, FiniteCtx, Theory, fresh_var, inst,
                     is_fragment, shift_ctx, term_size)

Ctx = tuple[Formula, ...]


@dataclass(frozen=True)
class ProofSearchBudget:
    max_depth: int = 10
    max_term_size: int = 3
    term_menu: tuple[Term, ...] = ()

    def __post_init__(self):
        if self.max_depth < 1 or self.max_term_size < 1:
            raise ValueError("budget bounds must be at least 1")


def subterms_of_formula(phi: Formula) -> list[Term]:
    out: list[Term] = []

    def walk_term(t: Term):
        if t not in out:
            out.append(t)
        if isinstance(t, App):
            for a in t.args:
                walk_term(a)

    def walk(f: Formula):
        if isinstance(f, Atom):
            for a in f.args:
                walk_term(a)
        elif isinstance(f, (Impl, Conj, Disj)):
            walk(f.lhs)
            walk(f.rhs)
        elif isinstance(f, (All, Ex)):
            walk(f.body)

    walk(phi)
    return out


def default_term_menu(ctx: Ctx, goal: Formula,
                      extra: tuple[Term, ...] = ()) -> tuple[Term, ...]:
    """All subterms of the goal sequent plus one fresh variable."""
    menu: list[Term] = []
    for phi in ctx + (goal,):
        for t in subterms_of_formula(phi):
            if t not in menu:
                menu.append(t)
    for t in extra:
        if t not in menu:
            menu.append(t)
    menu.append(Var(fresh_var(ctx + (goal,))))
    return tuple(menu)


class _Searcher:
    def __init__(self, budget: ProofSearchBudget, menu: tuple[Term, ...]):
        self.budget = budget
        self.menu = tuple(t for t in menu if term_size(t) <= budget.max_term_size)
        self.fail: dict = {}   # state -> depth at which it already failed
        self.hits: dict = {}   # state -> derivation

    def seq(self, ctx: Ctx, goal: Formula, depth: int) -> Deriv | None:
        key = ("s", ctx, goal)
        if key in self.hits:
            return self.hits[key]
        if depth <= 0 or self.fail.get(key, -1) >= depth:
            return None
        d = self._seq(ctx, goal, depth)
        if d is None:
            self.fail[key] = depth
        else:
            self.hits[key] = d
        return d

    def _seq(self, ctx: Ctx, goal: Formula, depth: int) -> Deriv | None:
        if isinstance(goal, Impl):
            sub = self.seq((goal.lhs,) + ctx, goal.rhs, depth - 1)
            if sub is not None:
                return ljt_ir(sub)
        if isinstance(goal, All):
            sub = self.seq(shift_ctx(ctx), goal.body, depth - 1)
            if sub is not None:
                return ljt_ar(sub, ctx)
        seen = set()
        for phi in ctx:
            if phi in seen:
                continue
            seen.add(phi)
            sub = self.focus(ctx, phi, goal, depth - 1)
            if sub is not None:
                return Deriv("ljt", "C", (sub,), (phi,), LjtSeq(ctx, goal))
        if not isinstance(goal, _Bot):
            sub = self.seq(ctx, Bot, depth - 1)
            if sub is not None:
                return ljt_e(sub, goal)
        return None

    def focus(self, ctx: Ctx, focus: Formula, goal: Formula, depth: int
              ) -> Deriv | None:
        key = ("f", ctx, focus, goal)
        if key in self.hits:
            return self.hits[key]
        if depth < 0 or self.fail.get(key, -1) >= depth:
            return None
        d = self._focus(ctx, focus, goal, depth)
        if d is None:
            self.fail[key] = depth
        else:
            self.hits[key] = d
        return d

    def _focus(self, ctx: Ctx, focus: Formula, goal: Formula, depth: int
               ) -> Deriv | None:
        if focus == goal:
            return ljt_axiom(ctx, goal)
        if isinstance(focus, Impl):
            rest = self.focus(ctx, focus.rhs, goal, depth - 1)
            if rest is not None:
                arg = self.seq(ctx, focus.lhs, depth - 1)
                if arg is not None:
                    return ljt_il(arg, rest)
        if isinstance(focus, All):
            for t in self.menu:
                sub = self.focus(ctx, inst(focus.body, t), goal, depth - 1)
                if sub is not None:
                    return ljt_al(sub, focus.body, t)
        return None


def ljt_search(ctx: Ctx, goal: Formula,
               budget: ProofSearchBudget = ProofSearchBudget(),
               ) -> Deriv | None:
    """Iterative-deepening LJT search; None means the budget was exhausted."""
    for phi in ctx + (goal,):
        if not is_fragment(phi):
            raise ValueError("ljt_search handles fragment sequents only")
    menu = budget.term_menu or default_term_menu(ctx, goal)
    for depth in range(1, budget.max_depth + 1):
        searcher = _Searcher(budget, menu)
        d = searcher.seq(tuple(ctx), goal, depth)
        if d is not None:
            check(d)
            return d
    return None


def ljt_search_focus(ctx: Ctx, focus: Formula, goal: Formula,
                     budget: ProofSearchBudget = ProofSearchBudget(),
                     ) -> Deriv | None:
    """Bounded search for a focused sequent Γ;focus ⇒ goal."""
    menu = budget.term_menu or default_term_menu(ctx + (focus,), goal)
    for depth in range(1, budget.max_depth + 1):
        searcher = _Searcher(budget, menu)
        d = searcher.focus(tuple(ctx), focus, goal, depth)
        if d is not None:
            check(d)
            return d
    return None


def theory_prove(theory: Theory, goal: Formula,
                 budget: ProofSearchBudget = ProofSearchBudget(),
                 prefix_limit: int = 128,
                 ) -> tuple[Ctx, Deriv] | None:
    """Find a finite subcontext Γ ⊆ theory with a checking NDi derivation of
    Γ ⊢ goal.  Enumerated theories are searched over growing prefixes."""
    from .kernel import ljt_to_nd, nd_assume

    if isinstance(theory, FiniteCtx):
        prefixes = [theory.formulas]
    else:
        prefixes = [theory.prefix(n) for n in _growth(prefix_limit)]
    for ctx in prefixes:
        if goal in ctx:
            return (goal,), nd_assume("ndi", (goal,), goal)
        if not all(is_fragment(phi) for phi in ctx + (goal,)):
            continue
        d = ljt_search(ctx, goal, budget)
        if d is not None:
            return ctx, ljt_to_nd(d)
    return None


def _growth(limit: int):
    n = 1
    while n < limit:
        yield n
        n *= 2
    yield limit
