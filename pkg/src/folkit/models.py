"""Finite Tarski and Kripke models, satisfaction, countermodel search,
Henkin-style theory extension steps, and the binary-tree-to-theory encoder
with its satisfiability oracle.

Models are table backed, so satisfaction is a total boolean function (the
decidable/omniscient case) and every model validates Peirce's law.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .syntax import (SIGMA_NAT, All, App, Atom, Bot, Conj, Disj, Enumerated,
                     Ex, FiniteCtx, Formula, Impl, Neg, Signature, Term,
                     Theory, Top, Var, _Bot, free_vars, inst, is_closed,
                     is_fragment)
from .search import ProofSearchBudget, ljt_search
from .syntax import FormulaEnumerator


class SignatureMismatch(Exception):
    pass


# ---------------------------------------------------------------------------
# environments: prefix + default, finitely representable


@dataclass(frozen=True)
class Environment:
    prefix: tuple[int, ...] = ()
    default: int = 0

    def get(self, x: int) -> int:
        return self.prefix[x] if x < len(self.prefix) else self.default

    def push(self, a: int) -> "Environment":
        return Environment((a,) + self.prefix, self.default)


# ---------------------------------------------------------------------------
# Tarski models


@dataclass(frozen=True)
class FiniteModel:
    domain: int
    funcs: dict
    preds: dict
    bot: bool = False  # the exploding parameter; standard model when False

    def __post_init__(self):
        if self.domain < 1:
            raise ValueError("domain must be non-empty")

    def func(self, name: str, args: tuple[int, ...]) -> int:
        table = self.funcs.get(name)
        if table is None or args not in table:
            raise SignatureMismatch(f"no table entry for {name}{args}")
        return table[args]

    def pred(self, name: str, args: tuple[int, ...]) -> bool:
        table = self.preds.get(name)
        if table is None or args not in table:
            raise SignatureMismatch(f"no table entry for {name}{args}")
        return table[args]


def eval_term(m: FiniteModel, rho: Environment, t: Term) -> int:
    if isinstance(t, Var):
        return rho.get(t.index)
    return m.func(t.func, tuple(eval_term(m, rho, a) for a in t.args))


def sat(m: FiniteModel, rho: Environment, phi: Formula) -> bool:
    """Table satisfaction; ⊥ reads the exploding flag, quantifiers range
    over the finite domain."""
    if isinstance(phi, _Bot):
        return m.bot
    if isinstance(phi, Atom):
        return m.pred(phi.pred, tuple(eval_term(m, rho, a) for a in phi.args))
    if isinstance(phi, Impl):
        return (not sat(m, rho, phi.lhs)) or sat(m, rho, phi.rhs)
    if isinstance(phi, Conj):
        return sat(m, rho, phi.lhs) and sat(m, rho, phi.rhs)
    if isinstance(phi, Disj):
        return sat(m, rho, phi.lhs) or sat(m, rho, phi.rhs)
    if isinstance(phi, All):
        return all(sat(m, rho.push(a), phi.body) for a in range(m.domain))
    return any(sat(m, rho.push(a), phi.body) for a in range(m.domain))


# ---------------------------------------------------------------------------
# Kripke models


@dataclass(frozen=True)
class FiniteKripke:
    worlds: int
    order: tuple[tuple[bool, ...], ...]  # reflexive-transitive
    domain: int
    funcs: dict
    preds: dict          # name -> per-world table dict[args] -> bool
    bot_table: tuple[bool, ...] = None

    def __post_init__(self):
        if self.bot_table is None:
            object.__setattr__(self, "bot_table", (False,) * self.worlds)
        _check_preorder(self.order)
        for v in range(self.worlds):
            for w in range(self.worlds):
                if not self.order[v][w]:
                    continue
                if self.bot_table[v] and not self.bot_table[w]:
                    raise ValueError("bot table not monotone")
                for name, tables in self.preds.items():
                    for args, val in tables[v].items():
                        if val and not tables[w][args]:
                            raise ValueError(f"{name} not monotone at {args}")

    def le(self, v: int, w: int) -> bool:
        return self.order[v][w]

    def func(self, name: str, args: tuple[int, ...]) -> int:
        table = self.funcs.get(name)
        if table is None or args not in table:
            raise SignatureMismatch(f"no table entry for {name}{args}")
        return table[args]

    def pred(self, w: int, name: str, args: tuple[int, ...]) -> bool:
        tables = self.preds.get(name)
        if tables is None or args not in tables[w]:
            raise SignatureMismatch(f"no table entry for {name}@{w}{args}")
        return tables[w][args]

    def is_exploding(self) -> bool:
        """Worlds with true ⊥ must satisfy everything, so all their
        predicate entries must be true."""
        for w in range(self.worlds):
            if self.bot_table[w]:
                for tables in self.preds.values():
                    if not all(tables[w].values()):
                        return False
        return True

    def is_standard(self) -> bool:
        return not any(self.bot_table)


def _check_preorder(order):
    n = len(order)
    for i in range(n):
        if not order[i][i]:
            raise ValueError("order not reflexive")
        for j in range(n):
            for k in range(n):
                if order[i][j] and order[j][k] and not order[i][k]:
                    raise ValueError("order not transitive")


def keval_term(k: FiniteKripke, rho: Environment, t: Term) -> int:
    if isinstance(t, Var):
        return rho.get(t.index)
    return k.func(t.func, tuple(keval_term(k, rho, a) for a in t.args))


def ksat(k: FiniteKripke, w: int, rho: Environment, phi: Formula) -> bool:
    """Kripke satisfaction; implication quantifies over future worlds.
    The ∧/∨/∃ clauses extend the fragment semantics in the standard way
    (monotonicity still lifts to all formulas)."""
    if isinstance(phi, _Bot):
        return k.bot_table[w]
    if isinstance(phi, Atom):
        return k.pred(w, phi.pred, tuple(keval_term(k, rho, a) for a in phi.args))
    if isinstance(phi, Impl):
        return all((not ksat(k, v, rho, phi.lhs)) or ksat(k, v, rho, phi.rhs)
                   for v in range(k.worlds) if k.le(w, v))
    if isinstance(phi, Conj):
        return ksat(k, w, rho, phi.lhs) and ksat(k, w, rho, phi.rhs)
    if isinstance(phi, Disj):
        return ksat(k, w, rho, phi.lhs) or ksat(k, w, rho, phi.rhs)
    if isinstance(phi, All):
        return all(ksat(k, w, rho.push(a), phi.body) for a in range(k.domain))
    return any(ksat(k, w, rho.push(a), phi.body) for a in range(k.domain))


# ---------------------------------------------------------------------------
# countermodel search


def _symbols(phi: Formula, funcs: dict, preds: dict):
    if isinstance(phi, Atom):
        preds[phi.pred] = len(phi.args)
        for a in phi.args:
            _term_symbols(a, funcs)
    elif isinstance(phi, (Impl, Conj, Disj)):
        _symbols(phi.lhs, funcs, preds)
        _symbols(phi.rhs, funcs, preds)
    elif isinstance(phi, (All, Ex)):
        _symbols(phi.body, funcs, preds)


def _term_symbols(t: Term, funcs: dict):
    if isinstance(t, App):
        funcs[t.func] = len(t.args)
        for a in t.args:
            _term_symbols(a, funcs)


def _tuples(domain: int, arity: int):
    return itertools.product(range(domain), repeat=arity)


def _all_func_tables(domain: int, arity: int):
    keys = list(_tuples(domain, arity))
    for values in itertools.product(range(domain), repeat=len(keys)):
        yield dict(zip(keys, values))


def _all_pred_tables(domain: int, arity: int):
    keys = list(_tuples(domain, arity))
    for values in itertools.product((False, True), repeat=len(keys)):
        yield dict(zip(keys, values))


def enumerate_models(phi: Formula, max_domain: int):
    """All standard finite models over phi's symbols, by increasing domain
    then lexicographic tables; deterministic."""
    funcs: dict = {}
    preds: dict = {}
    _symbols(phi, funcs, preds)
    for domain in range(1, max_domain + 1):
        fnames = sorted(funcs)
        pnames = sorted(preds)
        for ftables in itertools.product(
                *(_all_func_tables(domain, funcs[n]) for n in fnames)):
            for ptables in itertools.product(
                    *(_all_pred_tables(domain, preds[n]) for n in pnames)):
                yield FiniteModel(domain, dict(zip(fnames, ftables)),
                                  dict(zip(pnames, ptables)), bot=False)


def _environments(phi: Formula, domain: int):
    fv = sorted(free_vars(phi))
    width = (max(fv) + 1) if fv else 0
    for prefix in itertools.product(range(domain), repeat=width):
        yield Environment(tuple(prefix), 0)


def countermodel_search_tarski(phi: Formula, max_domain: int = 3
                               ) -> tuple[FiniteModel, Environment] | None:
    """Falsifying (model, assignment) or None when the bounds are exhausted
    (not a validity proof)."""
    for m in enumerate_models(phi, max_domain):
        for rho in _environments(phi, m.domain):
            if not sat(m, rho, phi):
                return m, rho
    return None


def _all_preorders(n: int):
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    for bits in itertools.product((False, True), repeat=len(pairs)):
        order = [[i == j for j in range(n)] for i in range(n)]
        for (i, j), b in zip(pairs, bits):
            order[i][j] = b
        ok = True
        for i in range(n):
            for j in range(n):
                if not order[i][j]:
                    continue
                for k in range(n):
                    if order[j][k] and not order[i][k]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            yield tuple(tuple(row) for row in order)


def _monotone_pred_tables(order, domain: int, arity: int):
    n = len(order)
    keys = list(_tuples(domain, arity))
    cells = [(w, k) for w in range(n) for k in keys]
    for bits in itertools.product((False, True), repeat=len(cells)):
        tables = [dict() for _ in range(n)]
        for (w, k), b in zip(cells, bits):
            tables[w][k] = b
        ok = all(not tables[v][k] or tables[w][k]
                 for v in range(n) for w in range(n) if order[v][w]
                 for k in keys)
        if ok:
            yield tables


def enumerate_kripke(phi: Formula, max_worlds: int, max_domain: int):
    """All standard monotone Kripke models over phi's symbols, smallest
    first; deterministic."""
    funcs: dict = {}
    preds: dict = {}
    _symbols(phi, funcs, preds)
    for worlds in range(1, max_worlds + 1):
        for domain in range(1, max_domain + 1):
            for order in _all_preorders(worlds):
                fnames = sorted(funcs)
                pnames = sorted(preds)
                for ftables in itertools.product(
                        *(_all_func_tables(domain, funcs[n]) for n in fnames)):
                    for ptabless in itertools.product(
                            *(_monotone_pred_tables(order, domain, preds[n])
                              for n in pnames)):
                        yield FiniteKripke(
                            worlds, order, domain,
                            dict(zip(fnames, ftables)),
                            dict(zip(pnames, ptabless)))


def countermodel_search_kripke(phi: Formula, max_worlds: int = 2,
                               max_domain: int = 1
                               ) -> tuple[FiniteKripke, Environment, int] | None:
    """Falsifying (model, assignment, world) over standard Kripke models,
    or None when the bounds are exhausted."""
    for k in enumerate_kripke(phi, max_worlds, max_domain):
        for rho in _environments(phi, k.domain):
            for w in range(k.worlds):
                if not ksat(k, w, rho, phi):
                    return k, rho, w
    return None


# ---------------------------------------------------------------------------
# Henkin-style theory extension steps: explosion and witness axioms


def _theory_gen(theory: Theory):
    if isinstance(theory, FiniteCtx):
        return lambda i: theory.formulas[i] if i < len(theory.formulas) else None
    return theory.gen


def _check_closed_prefix(theory: Theory, n: int = 64):
    if isinstance(theory, FiniteCtx):
        for phi in theory.formulas:
            if not is_closed(phi):
                raise ValueError(f"theory member not closed: {phi!r}")
    else:
        for phi in theory.prefix(n):
            if not is_closed(phi):
                raise ValueError(f"theory member not closed: {phi!r}")


def henkin_step(theory: Theory, step: str, sig: Signature = SIGMA_NAT,
                phi_bot: Formula = Bot) -> Enumerated:
    """One theory extension step.

    step "explode": interleave the axioms phi_bot → φ for every closed
    enumerated φ.  step "henkin": interleave φ_n[n] → ∀φ_n.
    """
    _check_closed_prefix(theory)
    base = _theory_gen(theory)
    enum = FormulaEnumerator(sig)

    if step == "explode":
        if not is_closed(phi_bot):
            raise ValueError("the falsity substitute must be closed")

        def axiom(i: int) -> Formula | None:
            phi = enum.formula(i)
            return Impl(phi_bot, phi) if is_closed(phi) else None

        label = "explode"
    elif step == "henkin":
        def axiom(i: int) -> Formula | None:
            phi = enum.formula(i)
            return Impl(inst(phi, Var(i)), All(phi))

        label = "henkin"
    else:
        raise ValueError(f"unknown extension step {step!r}")

    def gen(i: int) -> Formula | None:
        return base(i // 2) if i % 2 == 0 else axiom(i // 2)

    return Enumerated(gen, description=f"{label} extension")


def henkin_axiom(sig: Signature, n: int) -> Formula:
    """The n-th Henkin axiom φ_n[n] → ∀φ_n of the extension stream."""
    phi = FormulaEnumerator(sig).formula(n)
    return Impl(inst(phi, Var(n)), All(phi))


def omega_approx(theory: Theory, phi_bot: Formula, n_stages: int,
                 budget: ProofSearchBudget = ProofSearchBudget(max_depth=6),
                 sig: Signature = SIGMA_NAT) -> tuple[FiniteCtx, bool]:
    """Bounded approximation of the maximal extension step (c): stage k adds
    φ_k when the budgeted prover cannot derive phi_bot from Ω_k ∪ {φ_k}, or
    already derives it from Ω_k.  The exact step needs a provability
    decider, so the result is always flagged approximate (True)."""
    if not is_closed(phi_bot) or not is_fragment(phi_bot):
        raise ValueError("the falsity substitute must be closed and in the fragment")
    enum = FormulaEnumerator(sig)
    if isinstance(theory, FiniteCtx):
        omega = list(theory.formulas)
    else:
        omega = list(theory.prefix(n_stages))
    for k in range(n_stages):
        phi_k = enum.formula(k)
        if not is_fragment(phi_k):
            continue
        base_proves = ljt_search(tuple(omega), phi_bot, budget) is not None
        with_proves = ljt_search((phi_k,) + tuple(omega), phi_bot, budget) is not None
        if base_proves or not with_proves:
            omega.append(phi_k)
    return FiniteCtx(tuple(omega)), True


# ---------------------------------------------------------------------------
# the binary-tree-to-theory encoder over the countable propositional signature


@dataclass(frozen=True)
class TreeOracle:
    """A binary tree as an explicit node set up to a depth bound."""

    nodes: frozenset
    depth: int

    def __post_init__(self):
        if () not in self.nodes:
            raise ValueError("tree must contain the root")
        for node in self.nodes:
            if len(node) > self.depth:
                raise ValueError("node exceeds the stated depth bound")
            if node and node[:-1] not in self.nodes:
                raise ValueError(f"tree not prefix-closed at {node}")

    def member(self, node: tuple[bool, ...]) -> bool:
        return node in self.nodes

    def nodes_of_length(self, n: int) -> list[tuple[bool, ...]]:
        # lexicographic with tt sorting before ff
        out = [node for node in self.nodes if len(node) == n]
        out.sort(key=lambda node: tuple(0 if b else 1 for b in node))
        return out

    def has_node_of_length(self, n: int) -> bool:
        return any(len(node) == n for node in self.nodes)


def full_tree(depth: int) -> TreeOracle:
    nodes = [()]
    for n in range(1, depth + 1):
        nodes.extend(itertools.product((True, False), repeat=n))
    return TreeOracle(frozenset(nodes), depth)


def tt_rooted_tree(depth: int = 3) -> TreeOracle:
    """The tree of the root plus every node starting with tt."""
    nodes = [()]
    for n in range(1, depth + 1):
        nodes.extend((True,) + rest
                     for rest in itertools.product((True, False), repeat=n - 1))
    return TreeOracle(frozenset(nodes), depth)


def big_conj(formulas: list[Formula]) -> Formula:
    if not formulas:
        return Top
    out = formulas[-1]
    for phi in reversed(formulas[:-1]):
        out = Conj(phi, out)
    return out


def big_disj(formulas: list[Formula]) -> Formula:
    if not formulas:
        return Bot
    out = formulas[-1]
    for phi in reversed(formulas[:-1]):
        out = Disj(phi, out)
    return out


def _literal(i: int, b: bool) -> Formula:
    return Atom(f"P{i}") if b else Neg(Atom(f"P{i}"))


def wkl_encode(tau: TreeOracle, n: int) -> Formula:
    """φ_n: one disjunct per length-n node, literals P_i^(b) in position
    order; empty disjunction is ⊥."""
    if n > tau.depth:
        raise ValueError(f"depth {n} exceeds the oracle bound {tau.depth}")
    disjuncts = [big_conj([_literal(i, b) for i, b in enumerate(node)])
                 for node in tau.nodes_of_length(n)]
    return big_disj(disjuncts)


def wkl_theory(tau: TreeOracle) -> Enumerated:
    return Enumerated(lambda n: wkl_encode(tau, n) if n <= tau.depth else None,
                      description="tree encoding theory")


def _prop_index(phi: Formula, bound: int):
    for name in _prop_names(phi):
        if not (name.startswith("P") and name[1:].isdigit()):
            raise SignatureMismatch(f"not a Σ_ℕ proposition: {name!r}")
        if int(name[1:]) >= bound:
            raise SignatureMismatch(f"predicate index {name} out of range {bound}")


def _prop_names(phi: Formula) -> set[str]:
    if isinstance(phi, Atom):
        if phi.args:
            raise SignatureMismatch("Σ_ℕ predicates are nullary")
        return {phi.pred}
    if isinstance(phi, (Impl, Conj, Disj)):
        return _prop_names(phi.lhs) | _prop_names(phi.rhs)
    if isinstance(phi, (All, Ex)):
        return _prop_names(phi.body)
    return set()


def wkl_sat(phi: Formula, assignment: tuple[bool, ...]) -> bool:
    """Truth-table evaluation of a Σ_ℕ formula using P_0..P_{k-1}."""
    _prop_index(phi, len(assignment))
    return _wkl_eval(phi, assignment)


def _wkl_eval(phi: Formula, assignment) -> bool:
    if isinstance(phi, _Bot):
        return False
    if isinstance(phi, Atom):
        return assignment[int(phi.pred[1:])]
    if isinstance(phi, Impl):
        return (not _wkl_eval(phi.lhs, assignment)) or _wkl_eval(phi.rhs, assignment)
    if isinstance(phi, Conj):
        return _wkl_eval(phi.lhs, assignment) and _wkl_eval(phi.rhs, assignment)
    if isinstance(phi, Disj):
        return _wkl_eval(phi.lhs, assignment) or _wkl_eval(phi.rhs, assignment)
    raise SignatureMismatch("Σ_ℕ evaluation is propositional")


def wkl_sat_any(phi: Formula, k: int) -> tuple[bool, ...] | None:
    """Brute-force over the 2^k assignments; the satisfiability oracle."""
    for bits in itertools.product((True, False), repeat=k):
        if wkl_sat(phi, bits):
            return bits
    return None


# ---------------------------------------------------------------------------
# random model generators for the soundness fuzz harnesses


def random_model(rng, symbols: tuple[dict, dict], domain_range=(1, 3),
                 exploding: bool = False) -> FiniteModel:
    funcs, preds = symbols
    domain = rng.randrange(domain_range[0], domain_range[1] + 1)
    ftables = {}
    for name, ar in funcs.items():
        ftables[name] = {k: rng.randrange(domain) for k in _tuples(domain, ar)}
    bot = exploding and rng.random() < 0.5
    ptables = {}
    for name, ar in preds.items():
        ptables[name] = {k: (True if bot else rng.random() < 0.5)
                         for k in _tuples(domain, ar)}
    return FiniteModel(domain, ftables, ptables, bot=bot)


def random_kripke(rng, symbols: tuple[dict, dict], max_worlds: int = 3,
                  domain_range=(1, 2), exploding: bool = False) -> FiniteKripke:
    """A random monotone Kripke model; when exploding, worlds with true ⊥
    get all-true predicate tables so the explosion clause holds."""
    funcs, preds = symbols
    worlds = rng.randrange(1, max_worlds + 1)
    domain = rng.randrange(domain_range[0], domain_range[1] + 1)
    # random preorder: closure of a random relation
    rel = [[i == j or rng.random() < 0.4 for j in range(worlds)]
           for i in range(worlds)]
    for k in range(worlds):
        for i in range(worlds):
            for j in range(worlds):
                if rel[i][k] and rel[k][j]:
                    rel[i][j] = True
    order = tuple(tuple(row) for row in rel)
    ftables = {name: {k: rng.randrange(domain) for k in _tuples(domain, ar)}
               for name, ar in funcs.items()}
    bot_row = [False] * worlds
    if exploding:
        seed_bots = [w for w in range(worlds) if rng.random() < 0.3]
        for w in seed_bots:
            for v in range(worlds):
                if order[w][v]:
                    bot_row[v] = True
    ptables = {}
    for name, ar in preds.items():
        tables = [dict() for _ in range(worlds)]
        keys = list(_tuples(domain, ar))
        for key in keys:
            true_at = [w for w in range(worlds) if rng.random() < 0.4]
            cells = [False] * worlds
            for w in true_at:
                for v in range(worlds):
                    if order[w][v]:
                        cells[v] = True
            for w in range(worlds):
                if bot_row[w]:
                    cells[w] = True
            for w in range(worlds):
                tables[w][key] = cells[w]
        ptables[name] = tables
    k = FiniteKripke(worlds, order, domain, ftables, ptables, tuple(bot_row))
    assert k.is_exploding()
    return k


def formula_symbols(*formulas: Formula) -> tuple[dict, dict]:
    funcs: dict = {}
    preds: dict = {}
    for phi in formulas:
        _symbols(phi, funcs, preds)
    return funcs, preds
