"""Finite Heyting and Boolean algebras: axiom and distributivity checks,
MacNeille completion, formula evaluation with syntactic atom
interpretations, the soundness harness, and the Lindenbaum semi-decision.

≤ is a preorder; equalities hold only up to ≡ (mutual ≤).  Every finite
algebra passing check_heyting is complete: the fold of binary meets
satisfies the arbitrary-meet clause, which the checker verifies
exhaustively.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .kernel import Deriv, check, ljt_to_nd
from .search import ProofSearchBudget, ljt_search
from .syntax import (All, App, Atom, Bot, Conj, Disj, Ex, Formula, Impl,
                     Term, Var, _Bot, enumerate_terms, formula_size,
                     free_vars, fresh_var, inst, is_fragment)


@dataclass(frozen=True)
class FiniteHeyting:
    size: int
    le: tuple[tuple[bool, ...], ...]
    bot: int
    meet: tuple[tuple[int, ...], ...]
    join: tuple[tuple[int, ...], ...]
    impl: tuple[tuple[int, ...], ...]

    def equiv(self, x: int, y: int) -> bool:
        return self.le[x][y] and self.le[y][x]

    def top(self) -> int:
        # x ⇒ x is a greatest element in every Heyting algebra
        return self.impl[0][0] if self.size else 0

    def big_meet(self, elems) -> int:
        out = self.top()
        for x in elems:
            out = self.meet[out][x]
        return out

    def big_join(self, elems) -> int:
        out = self.bot
        for x in elems:
            out = self.join[out][x]
        return out


def check_heyting(h: FiniteHeyting) -> list[str]:
    """Exhaustive verification of the Heyting axioms plus the completeness
    clause for the derived big meet; returns every violated instance."""
    bad: list[str] = []
    n = h.size
    rng = range(n)
    for x in rng:
        if not h.le[x][x]:
            bad.append(f"≤ not reflexive at {x}")
    for x in rng:
        for y in rng:
            for z in rng:
                if h.le[x][y] and h.le[y][z] and not h.le[x][z]:
                    bad.append(f"≤ not transitive at {(x, y, z)}")
    for x in rng:
        if not h.le[h.bot][x]:
            bad.append(f"axiom 1: 0 ≰ {x}")
    for z in rng:
        for x in rng:
            for y in rng:
                if h.le[h.meet[z][x]][y] != h.le[z][h.impl[x][y]]:
                    bad.append(f"axiom 2 fails at {(z, x, y)}")
                if (h.le[z][x] and h.le[z][y]) != h.le[z][h.meet[x][y]]:
                    bad.append(f"axiom 3 fails at {(z, x, y)}")
                if (h.le[x][z] and h.le[y][z]) != h.le[h.join[x][y]][z]:
                    bad.append(f"axiom 4 fails at {(x, y, z)}")
    if not bad and n <= 12:
        # completeness clause: (∀y∈P. x ≤ y) ↔ x ≤ ⨅P, all subsets
        for bits in itertools.product((False, True), repeat=n):
            subset = [i for i in rng if bits[i]]
            m = h.big_meet(subset)
            for x in rng:
                if all(h.le[x][y] for y in subset) != h.le[x][m]:
                    bad.append(f"big-meet clause fails at {x}, {subset}")
        # derived join law: (∀y∈P. y ≤ x) ↔ ⨆P ≤ x
        for bits in itertools.product((False, True), repeat=n):
            subset = [i for i in rng if bits[i]]
            j = h.big_join(subset)
            for x in rng:
                if all(h.le[y][x] for y in subset) != h.le[j][x]:
                    bad.append(f"big-join clause fails at {x}, {subset}")
    return bad


def is_boolean(h: FiniteHeyting) -> bool:
    """(x ⇒ y) ⇒ x ≤ x for all x, y."""
    return all(h.le[h.impl[h.impl[x][y]][x]][x]
               for x in range(h.size) for y in range(h.size))


def distributivity_check(h: FiniteHeyting) -> list[str]:
    """Binary and indexed meet-join distributivity, exhaustively."""
    bad: list[str] = []
    rng = range(h.size)
    for x in rng:
        for y in rng:
            for z in rng:
                lhs = h.meet[x][h.join[y][z]]
                rhs = h.join[h.meet[x][y]][h.meet[x][z]]
                if not h.equiv(lhs, rhs):
                    bad.append(f"binary distributivity fails at {(x, y, z)}")
    for bits in itertools.product((False, True), repeat=h.size):
        fam = [i for i in rng if bits[i]]
        for x in rng:
            lhs = h.meet[x][h.big_join(fam)]
            rhs = h.big_join([h.meet[x][i] for i in fam])
            if not h.equiv(lhs, rhs):
                bad.append(f"indexed distributivity fails at {x}, {fam}")
    return bad


# ---------------------------------------------------------------------------
# MacNeille completion (down-complete sets ordered by inclusion)


def _lower(h: FiniteHeyting, s: frozenset) -> frozenset:
    return frozenset(x for x in range(h.size) if all(h.le[x][y] for y in s))


def _upper(h: FiniteHeyting, s: frozenset) -> frozenset:
    return frozenset(x for x in range(h.size) if all(h.le[y][x] for y in s))


def _down(h: FiniteHeyting, x: int) -> frozenset:
    return frozenset(y for y in range(h.size) if h.le[y][x])


def macneille(h: FiniteHeyting) -> tuple[FiniteHeyting, tuple[int, ...]]:
    """The completion by down-complete sets and the embedding x ↦ x↓."""
    carrier: list[frozenset] = []
    for bits in itertools.product((False, True), repeat=h.size):
        s = frozenset(i for i in range(h.size) if bits[i])
        if _lower(h, _upper(h, s)) <= s:
            carrier.append(s)
    carrier.sort(key=lambda s: sorted(s))
    index = {s: i for i, s in enumerate(carrier)}
    n = len(carrier)

    def closed_join(a: frozenset, b: frozenset) -> frozenset:
        return _lower(h, _upper(h, a | b))

    le = tuple(tuple(carrier[i] <= carrier[j] for j in range(n)) for i in range(n))
    meet = tuple(tuple(index[carrier[i] & carrier[j]] for j in range(n))
                 for i in range(n))
    join = tuple(tuple(index[closed_join(carrier[i], carrier[j])]
                       for j in range(n)) for i in range(n))

    def imp(a: frozenset, b: frozenset) -> frozenset:
        return frozenset(x for x in range(h.size)
                         if all(h.meet[x][y] in b for y in a))

    impl = tuple(tuple(index[imp(carrier[i], carrier[j])] for j in range(n))
                 for i in range(n))
    bot = index[_down(h, h.bot)]
    hc = FiniteHeyting(n, le, bot, meet, join, impl)
    embed = tuple(index[_down(h, x)] for x in range(h.size))
    return hc, embed


# ---------------------------------------------------------------------------
# algebra construction and enumeration


def chain(n: int) -> FiniteHeyting:
    """The n-element chain 0 < 1 < ... < n-1 as a Heyting algebra."""
    le = tuple(tuple(i <= j for j in range(n)) for i in range(n))
    meet = tuple(tuple(min(i, j) for j in range(n)) for i in range(n))
    join = tuple(tuple(max(i, j) for j in range(n)) for i in range(n))
    impl = tuple(tuple(n - 1 if i <= j else j for j in range(n)) for i in range(n))
    return FiniteHeyting(n, le, 0, meet, join, impl)


def powerset_boolean(atoms: int) -> FiniteHeyting:
    """The Boolean algebra of subsets of {0..atoms-1} (free enumeration)."""
    n = 1 << atoms
    full = n - 1
    le = tuple(tuple((i & ~j) == 0 for j in range(n)) for i in range(n))
    meet = tuple(tuple(i & j for j in range(n)) for i in range(n))
    join = tuple(tuple(i | j for j in range(n)) for i in range(n))
    impl = tuple(tuple((full & ~i) | j for j in range(n)) for i in range(n))
    return FiniteHeyting(n, le, 0, meet, join, impl)


def lattice_from_poset(le) -> FiniteHeyting | None:
    """Build meet/join/impl tables over a partial order; None when some
    pair lacks a greatest lower bound / least upper bound, or some pair has
    no greatest relative pseudo-complement candidate."""
    n = len(le)
    meet = [[None] * n for _ in range(n)]
    join = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            lbs = [k for k in range(n) if le[k][i] and le[k][j]]
            glb = [m for m in lbs if all(le[k][m] for k in lbs)]
            ubs = [k for k in range(n) if le[i][k] and le[j][k]]
            lub = [m for m in ubs if all(le[m][k] for k in ubs)]
            if not glb or not lub:
                return None
            meet[i][j] = glb[0]
            join[i][j] = lub[0]
    bots = [i for i in range(n) if all(le[i][j] for j in range(n))]
    if not bots:
        return None
    impl = [[None] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            cands = [z for z in range(n) if le[meet[z][x]][y]]
            best = [z for z in cands if all(le[w][z] for w in cands)]
            if not best:
                return None
            impl[x][y] = best[0]
    return FiniteHeyting(n, tuple(tuple(row) for row in le), bots[0],
                         tuple(tuple(r) for r in meet),
                         tuple(tuple(r) for r in join),
                         tuple(tuple(r) for r in impl))


_LATTICE_CACHE: dict[int, list] = {}


def enumerate_lattices(max_size: int):
    """All lattices on ≤ max_size labeled elements with a monotone labeling
    (every finite lattice is isomorphic to one of these), classified by
    check_heyting.  Returns (size, FiniteHeyting | None, is_heyting) rows;
    None marks posets where no implication table exists."""
    if max_size in _LATTICE_CACHE:
        return _LATTICE_CACHE[max_size]
    rows = []
    for n in range(1, max_size + 1):
        pairs = [(i, j) for i in range(n) for j in range(n) if i < j]
        for bits in itertools.product((False, True), repeat=len(pairs)):
            le = [[i == j for j in range(n)] for i in range(n)]
            for (i, j), b in zip(pairs, bits):
                le[i][j] = b
            ok = True
            for i in range(n):
                for j in range(n):
                    if le[i][j]:
                        for k in range(n):
                            if le[j][k] and not le[i][k]:
                                ok = False
            if not ok:
                continue
            # lattice filter: all pairwise glbs and lubs exist
            h = lattice_from_poset(le)
            if h is None:
                if _is_lattice(le):
                    rows.append((n, None, False))
                continue
            rows.append((n, h, not check_heyting(h)))
    _LATTICE_CACHE[max_size] = rows
    return rows


def _is_lattice(le) -> bool:
    n = len(le)
    for i in range(n):
        for j in range(n):
            lbs = [k for k in range(n) if le[k][i] and le[k][j]]
            if not any(all(le[k][m] for k in lbs) for m in lbs):
                return False
            ubs = [k for k in range(n) if le[i][k] and le[j][k]]
            if not any(all(le[m][k] for k in ubs) for m in ubs):
                return False
    return True


# ---------------------------------------------------------------------------
# evaluation (size recursion; quantifiers over a finite representative set)


@dataclass(frozen=True)
class AtomInterp:
    """Finite-support mapping from ground atoms to algebra elements."""

    support: tuple[tuple[tuple[str, tuple[Term, ...]], int], ...]
    default: int

    def __post_init__(self):
        for (pred, args), _ in self.support:
            for t in args:
                if _term_has_var(t):
                    raise ValueError("support keys must be ground atoms")

    def lookup(self, pred: str, args: tuple[Term, ...]) -> int:
        for (p, a), v in self.support:
            if p == pred and a == args:
                return v
        return self.default

    def support_terms(self) -> list[Term]:
        out: list[Term] = []

        def walk(t: Term):
            if t not in out:
                out.append(t)
            if isinstance(t, App):
                for a in t.args:
                    walk(a)

        for (_, args), _ in self.support:
            for t in args:
                walk(t)
        return out


def _term_has_var(t: Term) -> bool:
    if isinstance(t, Var):
        return True
    return any(_term_has_var(a) for a in t.args)


def representative_terms(phi: Formula, interp: AtomInterp) -> list[Term]:
    """Subterms of the interpretation's support keys plus one fresh
    variable; instances outside this set all evaluate alike, so the finite
    meet/join below equals the one over all terms."""
    reps = interp.support_terms()
    fresh = fresh_var([phi] + reps)
    return reps + [Var(fresh)]


def eval_formula(h: FiniteHeyting, interp: AtomInterp, phi: Formula) -> int:
    if isinstance(phi, _Bot):
        return h.bot
    if isinstance(phi, Atom):
        return interp.lookup(phi.pred, phi.args)
    if isinstance(phi, Impl):
        return h.impl[eval_formula(h, interp, phi.lhs)][eval_formula(h, interp, phi.rhs)]
    if isinstance(phi, Conj):
        return h.meet[eval_formula(h, interp, phi.lhs)][eval_formula(h, interp, phi.rhs)]
    if isinstance(phi, Disj):
        return h.join[eval_formula(h, interp, phi.lhs)][eval_formula(h, interp, phi.rhs)]
    reps = representative_terms(phi, interp)
    values = [eval_formula(h, interp, inst(phi.body, t)) for t in reps]
    if isinstance(phi, All):
        return h.big_meet(values)
    return h.big_join(values)


def eval_ctx(h: FiniteHeyting, interp: AtomInterp, ctx) -> int:
    return h.big_meet(eval_formula(h, interp, phi) for phi in ctx)


def algebra_soundness_harness(d: Deriv, h: FiniteHeyting,
                              interp: AtomInterp) -> bool:
    """⟦Γ⟧ ≤ ⟦φ⟧ for a checked derivation; classical derivations require a
    Boolean algebra."""
    check(d)
    if d.calc == "ndc" and not is_boolean(h):
        raise ValueError("classical derivations need a Boolean algebra")
    if d.calc not in ("ndi", "ndc"):
        raise ValueError("the harness evaluates natural deduction derivations")
    lhs = eval_ctx(h, interp, d.end.ctx)
    return h.le[lhs][eval_formula(h, interp, d.end.goal)]


# ---------------------------------------------------------------------------
# Lindenbaum preorder, bounded semi-decision


def lindenbaum_le(phi: Formula, psi: Formula,
                  budget: ProofSearchBudget = ProofSearchBudget(max_depth=8),
                  ) -> tuple[str, Deriv | None]:
    """Semi-decide [φ] ⊢ ψ.  "yes" carries a checking derivation (NDi via
    LJT on fragment inputs, LJD via the dialogue engine otherwise);
    "unknown" on budget exhaustion.  Never answers no."""
    if is_fragment(phi) and is_fragment(psi):
        d = ljt_search((phi,), psi, budget)
        if d is not None:
            return "yes", ljt_to_nd(d)
        return "unknown", None
    from .dialogues import e_win_search, ljd_from_estrategy
    strat = e_win_search(Impl(phi, psi), budget)
    if strat is None:
        return "unknown", None
    d = ljd_from_estrategy(strat)
    # the root defends φ→ψ; its single premise is exactly [φ] ⊢D {ψ}
    inner = d.premises[0]
    check(inner)
    return "yes", inner
