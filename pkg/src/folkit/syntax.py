"""de Bruijn terms and formulas over a signature, parallel substitution,
syntactic translations, and a stratified formula enumerator.

Variables are indices: a bound variable counts the quantifiers between its
occurrence and its binder.  Everything here is immutable and hashable, so
values can be shared freely (also across threads) and used as dict keys.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache


class MalformedSyntaxError(Exception):
    """Arity mismatch or unknown symbol relative to the ambient signature."""


class ConfigurationError(Exception):
    """Bad signature setup (reserved namespace collisions and the like)."""


# ---------------------------------------------------------------------------
# signatures


@dataclass(frozen=True)
class Signature:
    """Function and predicate symbols with arities.

    kind "finite" uses the explicit symbol lists; kind "sigma-nat" is the
    countable propositional signature (no functions, 0-ary P0, P1, ...),
    materialized lazily; "sigma-pair" is the maximal signature with
    f{i}_{k} / P{i}_{k} of arity k for every i, k.
    """

    funcs: tuple[tuple[str, int], ...] = ()
    preds: tuple[tuple[str, int], ...] = ()
    kind: str = "finite"

    def __post_init__(self):
        names = [n for n, _ in self.funcs]
        if len(set(names)) != len(names):
            raise ConfigurationError("duplicate function symbol")
        names = [n for n, _ in self.preds]
        if len(set(names)) != len(names):
            raise ConfigurationError("duplicate predicate symbol")
        if self.kind == "sigma-nat" and (self.funcs or self.preds):
            raise ConfigurationError("sigma-nat signature fixes its symbols")

    def func_arity(self, name: str) -> int:
        if self.kind == "sigma-pair":
            ar = _pair_symbol_arity(name, "f")
            if ar is not None:
                return ar
        for n, a in self.funcs:
            if n == name:
                return a
        raise MalformedSyntaxError(f"unknown function symbol {name!r}")

    def pred_arity(self, name: str) -> int:
        if self.kind == "sigma-nat":
            if name.startswith("P") and name[1:].isdigit():
                return 0
            raise MalformedSyntaxError(f"unknown predicate symbol {name!r}")
        if self.kind == "sigma-pair":
            ar = _pair_symbol_arity(name, "P")
            if ar is not None:
                return ar
        for n, a in self.preds:
            if n == name:
                return a
        raise MalformedSyntaxError(f"unknown predicate symbol {name!r}")

    def has_func(self, name: str) -> bool:
        try:
            self.func_arity(name)
            return True
        except MalformedSyntaxError:
            return False

    def has_pred(self, name: str) -> bool:
        try:
            self.pred_arity(name)
            return True
        except MalformedSyntaxError:
            return False


def _pair_symbol_arity(name: str, prefix: str) -> int | None:
    # shape: f{i}_{k} / P{i}_{k}, arity k (the second projection)
    if not name.startswith(prefix):
        return None
    rest = name[len(prefix):]
    if "_" not in rest:
        return None
    i, _, k = rest.partition("_")
    if i.isdigit() and k.isdigit():
        return int(k)
    return None


SIGMA_NAT = Signature(kind="sigma-nat")
SIGMA_PAIR = Signature(kind="sigma-pair")


# ---------------------------------------------------------------------------
# terms and formulas


class Term:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Var(Term):
    index: int


@dataclass(frozen=True, slots=True)
class App(Term):
    func: str
    args: tuple[Term, ...] = ()


class Formula:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class _Bot(Formula):
    pass


Bot = _Bot()


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    pred: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True, slots=True)
class Impl(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True, slots=True)
class Conj(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True, slots=True)
class Disj(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True, slots=True)
class All(Formula):
    body: Formula


@dataclass(frozen=True, slots=True)
class Ex(Formula):
    body: Formula


def Neg(phi: Formula) -> Formula:
    return Impl(phi, Bot)


# empty-conjunction/disjunction conventions used by the tree encoder
Top = Impl(Bot, Bot)


def is_neg(phi: Formula) -> bool:
    return isinstance(phi, Impl) and phi.rhs == Bot


def is_fragment(phi: Formula) -> bool:
    """True iff phi lives in the →,∀,⊥ fragment."""
    if isinstance(phi, (_Bot, Atom)):
        return True
    if isinstance(phi, Impl):
        return is_fragment(phi.lhs) and is_fragment(phi.rhs)
    if isinstance(phi, All):
        return is_fragment(phi.body)
    return False


def formula_size(phi: Formula) -> int:
    """Node count, terms included."""
    if isinstance(phi, _Bot):
        return 1
    if isinstance(phi, Atom):
        return 1 + sum(term_size(t) for t in phi.args)
    if isinstance(phi, (Impl, Conj, Disj)):
        return 1 + formula_size(phi.lhs) + formula_size(phi.rhs)
    return 1 + formula_size(phi.body)


def term_size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(term_size(a) for a in t.args)


def validate_term(sig: Signature, t: Term) -> None:
    if isinstance(t, Var):
        return
    if sig.func_arity(t.func) != len(t.args):
        raise MalformedSyntaxError(
            f"function {t.func!r} expects arity {sig.func_arity(t.func)}, got {len(t.args)}")
    for a in t.args:
        validate_term(sig, a)


def validate_formula(sig: Signature, phi: Formula) -> None:
    if isinstance(phi, _Bot):
        return
    if isinstance(phi, Atom):
        if sig.pred_arity(phi.pred) != len(phi.args):
            raise MalformedSyntaxError(
                f"predicate {phi.pred!r} expects arity {sig.pred_arity(phi.pred)}, got {len(phi.args)}")
        for a in phi.args:
            validate_term(sig, a)
        return
    if isinstance(phi, (Impl, Conj, Disj)):
        validate_formula(sig, phi.lhs)
        validate_formula(sig, phi.rhs)
        return
    validate_formula(sig, phi.body)


# ---------------------------------------------------------------------------
# substitution: finite prefix + uniform variable tail


@dataclass(frozen=True)
class Subst:
    """σ(x) = prefix[x] for x < |prefix|, else Var(x - |prefix| + tail).

    Canonical: the last prefix entry never equals its tail pattern, so equal
    denotations are structurally equal.
    """

    prefix: tuple[Term, ...] = ()
    tail: int = 0

    def __post_init__(self):
        # dropping the last entry shortens the prefix region by one, so the
        # denotation is preserved only when the entry equals Var(tail-1) and
        # the tail offset is decremented along with it
        prefix = list(self.prefix)
        tail = self.tail
        while prefix and tail >= 1 and prefix[-1] == Var(tail - 1):
            prefix.pop()
            tail -= 1
        object.__setattr__(self, "prefix", tuple(prefix))
        object.__setattr__(self, "tail", tail)

    def get(self, x: int) -> Term:
        if x < len(self.prefix):
            return self.prefix[x]
        return Var(x - len(self.prefix) + self.tail)

    def is_identity(self) -> bool:
        return not self.prefix and self.tail == 0


IDENTITY = Subst()
SHIFT = Subst((), 1)


def cons(t: Term, sigma: Subst) -> Subst:
    """t;σ maps 0 to t and n+1 to σ(n)."""
    return Subst((t,) + sigma.prefix, sigma.tail)


def under_binder(sigma: Subst) -> Subst:
    """0 ; shift∘σ — the substitution pushed below one quantifier."""
    return Subst((Var(0),) + tuple(subst_term(t, SHIFT) for t in sigma.prefix),
                 sigma.tail + 1)


def compose(sigma: Subst, tau: Subst) -> Subst:
    """(σ;τ)(x) = (σ x)[τ]."""
    prefix = [subst_term(t, tau) for t in sigma.prefix]
    if sigma.tail < len(tau.prefix):
        prefix.extend(tau.prefix[sigma.tail:])
        return Subst(tuple(prefix), tau.tail)
    return Subst(tuple(prefix), sigma.tail - len(tau.prefix) + tau.tail)


def subst_term(t: Term, sigma: Subst) -> Term:
    if sigma.is_identity():
        return t
    if isinstance(t, Var):
        return sigma.get(t.index)
    return App(t.func, tuple(subst_term(a, sigma) for a in t.args))


def substitute(phi: Formula, sigma: Subst) -> Formula:
    if sigma.is_identity():
        return phi
    if isinstance(phi, _Bot):
        return phi
    if isinstance(phi, Atom):
        return Atom(phi.pred, tuple(subst_term(a, sigma) for a in phi.args))
    if isinstance(phi, Impl):
        return Impl(substitute(phi.lhs, sigma), substitute(phi.rhs, sigma))
    if isinstance(phi, Conj):
        return Conj(substitute(phi.lhs, sigma), substitute(phi.rhs, sigma))
    if isinstance(phi, Disj):
        return Disj(substitute(phi.lhs, sigma), substitute(phi.rhs, sigma))
    inner = substitute(phi.body, under_binder(sigma))
    return All(inner) if isinstance(phi, All) else Ex(inner)


def shift(phi: Formula) -> Formula:
    return substitute(phi, SHIFT)


def shift_term(t: Term) -> Term:
    return subst_term(t, SHIFT)


def inst(phi: Formula, t: Term) -> Formula:
    """phi[t] — plug t for the outermost bound variable."""
    return substitute(phi, cons(t, IDENTITY))


def shift_ctx(ctx: tuple[Formula, ...]) -> tuple[Formula, ...]:
    return tuple(shift(phi) for phi in ctx)


def generalizer(x: int) -> Subst:
    """x ↦ Var 0, every other variable shifted up by one.

    Inverse of named opening: turns Γ ⊢ φ[x] (x fresh)
    into material for ↑Γ ⊢ φ.
    """
    return Subst(tuple(Var(y + 1) for y in range(x)) + (Var(0),), x + 2)


# ---------------------------------------------------------------------------
# free variables


def term_free_vars(t: Term, depth: int = 0) -> set[int]:
    if isinstance(t, Var):
        return {t.index - depth} if t.index >= depth else set()
    out: set[int] = set()
    for a in t.args:
        out |= term_free_vars(a, depth)
    return out


def free_vars(phi: Formula, depth: int = 0) -> set[int]:
    if isinstance(phi, _Bot):
        return set()
    if isinstance(phi, Atom):
        out: set[int] = set()
        for a in phi.args:
            out |= term_free_vars(a, depth)
        return out
    if isinstance(phi, (Impl, Conj, Disj)):
        return free_vars(phi.lhs, depth) | free_vars(phi.rhs, depth)
    return free_vars(phi.body, depth + 1)


def is_closed(phi: Formula) -> bool:
    return not free_vars(phi)


def fresh_var(items) -> int:
    """1 + max free variable over formulas and terms in items, 0 if all closed."""
    top = -1
    for it in items:
        fv = free_vars(it) if isinstance(it, Formula) else term_free_vars(it)
        if fv:
            top = max(top, max(fv))
    return top + 1


# ---------------------------------------------------------------------------
# translations


def de_morgan(phi: Formula) -> Formula:
    """φ^M: encode ∧, ∨, ∃ inside the →,∀,⊥ fragment."""
    if isinstance(phi, (_Bot, Atom)):
        return phi
    if isinstance(phi, Impl):
        return Impl(de_morgan(phi.lhs), de_morgan(phi.rhs))
    if isinstance(phi, Conj):
        return Neg(Impl(de_morgan(phi.lhs), Neg(de_morgan(phi.rhs))))
    if isinstance(phi, Disj):
        return Impl(Neg(de_morgan(phi.lhs)), de_morgan(phi.rhs))
    if isinstance(phi, All):
        return All(de_morgan(phi.body))
    return Neg(All(Neg(de_morgan(phi.body))))


def de_morgan_ctx(ctx: tuple[Formula, ...]) -> tuple[Formula, ...]:
    return tuple(de_morgan(phi) for phi in ctx)


def dn_translate(phi: Formula) -> Formula:
    """φ^N: Gödel–Gentzen style double-negation translation into the fragment.

    Atoms are double negated; →, ∀ are homomorphic; ∧ and the ∨/∃ clauses
    are routed through the de Morgan encodings of their negative renderings.
    """
    if isinstance(phi, _Bot):
        return Bot
    if isinstance(phi, Atom):
        return Neg(Neg(phi))
    if isinstance(phi, Impl):
        return Impl(dn_translate(phi.lhs), dn_translate(phi.rhs))
    if isinstance(phi, Conj):
        return Neg(Impl(dn_translate(phi.lhs), Neg(dn_translate(phi.rhs))))
    if isinstance(phi, Disj):
        # ¬(¬φ^N ∧ ¬ψ^N), conjunction de-Morganed into the fragment
        return Neg(Neg(Impl(Neg(dn_translate(phi.lhs)),
                            Neg(Neg(dn_translate(phi.rhs))))))
    if isinstance(phi, All):
        return All(dn_translate(phi.body))
    return Neg(All(Neg(dn_translate(phi.body))))


def dn_translate_ctx(ctx: tuple[Formula, ...]) -> tuple[Formula, ...]:
    return tuple(dn_translate(phi) for phi in ctx)


# ---------------------------------------------------------------------------
# signature closing: Σ_c adds fresh constants c0, c1, ...

CONST_PREFIX = "c"


def _const(n: int) -> Term:
    return App(f"{CONST_PREFIX}{n}", ())


def _const_index(name: str) -> int | None:
    if name.startswith(CONST_PREFIX) and name[len(CONST_PREFIX):].isdigit():
        return int(name[len(CONST_PREFIX):])
    return None


def sig_close(sig: Signature, count: int) -> Signature:
    """Σ plus fresh constants c0..c{count-1}; rejects namespace collisions."""
    if sig.kind != "finite":
        raise ConfigurationError("only finite signatures can be closed with constants")
    for n, _ in sig.funcs:
        if _const_index(n) is not None:
            raise ConfigurationError(f"signature already reserves constant name {n!r}")
    extra = tuple((f"{CONST_PREFIX}{i}", 0) for i in range(count))
    return Signature(sig.funcs + extra, sig.preds)


def sig_lift(phi: Formula) -> Formula:
    """⇑φ — the identity embedding of Σ-formulas into Σ_c."""
    return phi


def close(phi: Formula) -> Formula:
    """(⇑φ)[c₋]: substitute the constant c_x for every free variable x."""
    m = fresh_var([phi])
    sigma = Subst(tuple(_const(i) for i in range(m)), 0) if m else IDENTITY
    return substitute(sig_lift(phi), sigma)


def sig_drop_term(m: int, t: Term) -> Term:
    if isinstance(t, Var):
        return t
    n = _const_index(t.func)
    if n is not None and not t.args:
        return Var(m + n)
    return App(t.func, tuple(sig_drop_term(m, a) for a in t.args))


def sig_drop(m: int, phi: Formula) -> Formula:
    """⇓^m: replace each constant c_n with the variable m+n."""
    if isinstance(phi, _Bot):
        return phi
    if isinstance(phi, Atom):
        return Atom(phi.pred, tuple(sig_drop_term(m, a) for a in phi.args))
    if isinstance(phi, Impl):
        return Impl(sig_drop(m, phi.lhs), sig_drop(m, phi.rhs))
    if isinstance(phi, Conj):
        return Conj(sig_drop(m, phi.lhs), sig_drop(m, phi.rhs))
    if isinstance(phi, Disj):
        return Disj(sig_drop(m, phi.lhs), sig_drop(m, phi.rhs))
    inner = sig_drop(m + 1, phi.body)
    return All(inner) if isinstance(phi, All) else Ex(inner)


# ---------------------------------------------------------------------------
# signature morphisms (invertible embeddings)


@dataclass(frozen=True)
class SignatureMorphism:
    source: Signature
    target: Signature
    func_map: tuple[tuple[str, str], ...]
    pred_map: tuple[tuple[str, str], ...]

    def __post_init__(self):
        for mapping, arity_src, arity_tgt in (
                (self.func_map, self.source.func_arity, self.target.func_arity),
                (self.pred_map, self.source.pred_arity, self.target.pred_arity)):
            images = [b for _, b in mapping]
            if len(set(images)) != len(images):
                raise ConfigurationError("morphism not injective on symbols")
            for a, b in mapping:
                if arity_src(a) != arity_tgt(b):
                    raise ConfigurationError(f"morphism breaks arity at {a!r} -> {b!r}")

    def map_func(self, name: str) -> str:
        for a, b in self.func_map:
            if a == name:
                return b
        raise MalformedSyntaxError(f"morphism undefined on function {name!r}")

    def map_pred(self, name: str) -> str:
        for a, b in self.pred_map:
            if a == name:
                return b
        raise MalformedSyntaxError(f"morphism undefined on predicate {name!r}")

    def unmap_func(self, name: str) -> str:
        for a, b in self.func_map:
            if b == name:
                return a
        raise MalformedSyntaxError(f"morphism image missing function {name!r}")

    def unmap_pred(self, name: str) -> str:
        for a, b in self.pred_map:
            if b == name:
                return a
        raise MalformedSyntaxError(f"morphism image missing predicate {name!r}")


def identity_morphism(sig: Signature) -> SignatureMorphism:
    return SignatureMorphism(sig, sig,
                             tuple((n, n) for n, _ in sig.funcs),
                             tuple((n, n) for n, _ in sig.preds))


def into_sigma_pair(sig: Signature) -> SignatureMorphism:
    """Embed a finite signature into the maximal ℕ²-indexed signature."""
    fm = tuple((n, f"f{i}_{a}") for i, (n, a) in enumerate(sig.funcs))
    pm = tuple((n, f"P{i}_{a}") for i, (n, a) in enumerate(sig.preds))
    return SignatureMorphism(sig, SIGMA_PAIR, fm, pm)


def _embed_term(iota: SignatureMorphism, t: Term, un: bool) -> Term:
    if isinstance(t, Var):
        return t
    name = iota.unmap_func(t.func) if un else iota.map_func(t.func)
    return App(name, tuple(_embed_term(iota, a, un) for a in t.args))


def _embed(iota: SignatureMorphism, phi: Formula, un: bool) -> Formula:
    if isinstance(phi, _Bot):
        return phi
    if isinstance(phi, Atom):
        name = iota.unmap_pred(phi.pred) if un else iota.map_pred(phi.pred)
        return Atom(name, tuple(_embed_term(iota, a, un) for a in phi.args))
    if isinstance(phi, Impl):
        return Impl(_embed(iota, phi.lhs, un), _embed(iota, phi.rhs, un))
    if isinstance(phi, Conj):
        return Conj(_embed(iota, phi.lhs, un), _embed(iota, phi.rhs, un))
    if isinstance(phi, Disj):
        return Disj(_embed(iota, phi.lhs, un), _embed(iota, phi.rhs, un))
    inner = _embed(iota, phi.body, un)
    return All(inner) if isinstance(phi, All) else Ex(inner)


def embed(iota: SignatureMorphism, phi: Formula) -> Formula:
    return _embed(iota, phi, un=False)


def unembed(iota: SignatureMorphism, phi: Formula) -> Formula:
    return _embed(iota, phi, un=True)


# ---------------------------------------------------------------------------
# fragment enumeration with the index-bounded freshness property


class FormulaEnumerator:
    """Enumerate all F* formulas over an enumerable signature.

    Stratified by rank(phi) = max(size, max_free+2 if open, symbol stage);
    the concatenation of the rank blocks is surjective and guarantees
    free_vars(formula(n)) ⊆ {0..n-1}: a rank-s formula sits at index ≥ s-1
    because every lower block is non-empty (the ∀...∀⊥ towers), while its
    free variables are ≤ s-2.
    """

    def __init__(self, sig: Signature):
        if sig.kind not in ("finite", "sigma-nat"):
            raise ConfigurationError("enumeration needs a finite or sigma-nat signature")
        self.sig = sig
        self._blocks: list[list[Formula]] = [[]]  # rank 0 is empty
        self._flat: list[Formula] = []

    # --- symbol stages ---
    def _preds_at(self, stage: int) -> list[tuple[str, int]]:
        if self.sig.kind == "sigma-nat":
            return [(f"P{i}", 0) for i in range(stage)]
        return list(self.sig.preds)

    def _funcs_at(self, stage: int) -> list[tuple[str, int]]:
        if self.sig.kind == "sigma-nat":
            return []
        return list(self.sig.funcs)

    def _terms_of_size(self, k: int, stage: int) -> list[Term]:
        if k <= 0:
            return []
        out: list[Term] = []
        if k == 1:
            out.extend(Var(i) for i in range(max(0, stage - 1)))
            out.extend(App(n, ()) for n, a in self._funcs_at(stage) if a == 0)
            return out
        for n, a in self._funcs_at(stage):
            if a == 0:
                continue
            for sizes in _compositions(k - 1, a):
                for args in itertools.product(
                        *(self._terms_of_size(s, stage) for s in sizes)):
                    out.append(App(n, args))
        return out

    def _formulas_of_size(self, k: int, stage: int) -> list[Formula]:
        if k <= 0:
            return []
        out: list[Formula] = []
        if k == 1:
            out.append(Bot)
            out.extend(Atom(n, ()) for n, a in self._preds_at(stage) if a == 0)
        for n, a in self._preds_at(stage):
            if a == 0 or k < 1 + a:
                continue
            for sizes in _compositions(k - 1, a):
                for args in itertools.product(
                        *(self._terms_of_size(s, stage) for s in sizes)):
                    out.append(Atom(n, args))
        for l in range(1, k - 1):
            for lhs in self._formulas_of_size(l, stage):
                for rhs in self._formulas_of_size(k - 1 - l, stage):
                    out.append(Impl(lhs, rhs))
        for body in self._formulas_of_size(k - 1, stage):
            out.append(All(body))
        return out

    def _rank(self, phi: Formula) -> int:
        fv = free_vars(phi)
        r = formula_size(phi)
        if fv:
            r = max(r, max(fv) + 2)
        if self.sig.kind == "sigma-nat":
            idx = [int(p[1:]) for p in _pred_names(phi)]
            if idx:
                r = max(r, max(idx) + 1)
        return r

    def _block(self, s: int) -> list[Formula]:
        while len(self._blocks) <= s:
            stage = len(self._blocks)
            block = [phi for k in range(1, stage + 1)
                     for phi in self._formulas_of_size(k, stage)
                     if self._rank(phi) == stage]
            block.sort(key=repr)
            self._blocks.append(block)
            self._flat.extend(block)
        return self._blocks[s]

    def formula(self, n: int) -> Formula:
        s = 1
        while len(self._flat) <= n:
            self._block(s)
            s = len(self._blocks)
        return self._flat[n]

    def index_bound_for_size(self, size: int) -> int:
        """Index K such that every closed-rank formula of size ≤ size with
        variables < size appears among the first K outputs."""
        self._block(size + 1)
        return sum(len(b) for b in self._blocks[:size + 2])


def _pred_names(phi: Formula) -> set[str]:
    if isinstance(phi, Atom):
        return {phi.pred}
    if isinstance(phi, (Impl, Conj, Disj)):
        return _pred_names(phi.lhs) | _pred_names(phi.rhs)
    if isinstance(phi, (All, Ex)):
        return _pred_names(phi.body)
    return set()


@lru_cache(maxsize=None)
def _compositions(total: int, parts: int) -> tuple[tuple[int, ...], ...]:
    """All ways to write total as an ordered sum of `parts` positive ints."""
    if parts == 0:
        return ((),) if total == 0 else ()
    if parts == 1:
        return ((total,),) if total >= 1 else ()
    out = []
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return tuple(out)


def enumerate_terms(funcs: dict, max_size: int, max_var: int) -> list[Term]:
    """All terms of node size ≤ max_size over the given function symbols
    (name -> arity) and variables below max_var; deterministic order."""
    by_size: dict[int, list[Term]] = {}
    names = sorted(funcs)
    for k in range(1, max_size + 1):
        layer: list[Term] = []
        if k == 1:
            layer.extend(Var(i) for i in range(max_var))
            layer.extend(App(n, ()) for n in names if funcs[n] == 0)
        for n in names:
            ar = funcs[n]
            if ar == 0 or k < 1 + ar:
                continue
            for sizes in _compositions(k - 1, ar):
                for args in itertools.product(*(by_size.get(s, []) for s in sizes)):
                    layer.append(App(n, args))
        by_size[k] = layer
    return [t for k in sorted(by_size) for t in by_size[k]]


# ---------------------------------------------------------------------------
# theories


@dataclass(frozen=True)
class FiniteCtx:
    formulas: tuple[Formula, ...]

    def member(self, phi: Formula) -> bool:
        return phi in self.formulas

    def prefix(self, n: int) -> tuple[Formula, ...]:
        return self.formulas[:n]


@dataclass(frozen=True)
class Enumerated:
    """Theory given by a generator index ↦ optional formula."""

    gen: object  # callable int -> Formula | None
    description: str = ""

    def prefix(self, n: int) -> tuple[Formula, ...]:
        out = []
        for i in range(n):
            phi = self.gen(i)
            if phi is not None:
                out.append(phi)
        return tuple(out)


Theory = FiniteCtx | Enumerated
