"""The acceptance suite: one test per criterion, exact tolerances, one
pass line printed per criterion (run with -s to see them)."""

import itertools
import random
import sys

import pytest

sys.path.insert(0, "tests")

from folkit import jsonio
from folkit.dialogues import (d_win_search, e_win_search, lj_from_ljd,
                              ljd_from_dwin, ljd_from_estrategy, ljd_from_lj,
                              random_playout, unfold)
from folkit.heyting import (AtomInterp, algebra_soundness_harness, chain,
                            check_heyting, distributivity_check,
                            enumerate_lattices, eval_formula, is_boolean,
                            macneille, powerset_boolean)
from folkit.kernel import (FiniteSet, LjdSeq, LjSeq, LjtSeq, check)
from folkit.models import (Environment, countermodel_search_kripke,
                           countermodel_search_tarski, formula_symbols, ksat,
                           tt_rooted_tree, random_kripke, random_model, sat,
                           wkl_encode, wkl_sat, wkl_sat_any, TreeOracle,
                           big_conj, big_disj)
from folkit.nbe import cut, cut_free, normalize
from folkit.search import ProofSearchBudget, ljt_search
from folkit.surface import parse, print_formula
from folkit.syntax import (All, App, Atom, Bot, Conj, Disj, Ex, Impl, Neg,
                           Subst, Var, compose, de_morgan, free_vars, inst,
                           substitute, IDENTITY)

from corpus import gen_cut_pairs, ndc_corpus, ndi_fragment_corpus

p, q = Atom("p"), Atom("q")
P2 = lambda s, t: Atom("P", (s, t))
PEIRCE = Impl(Impl(Impl(p, q), p), p)


def report(name):
    print(f"PASS {name}")


# -- criterion 1: substitution algebra ---------------------------------------

def _fragment_formulas_exhaustive(max_size):
    """All F* formulas of node size <= max_size over P(2)/f(1)."""
    f = lambda t: App("f", (t,))
    terms = {1: [Var(0), Var(1)]}
    for k in range(2, max_size):
        terms[k] = [f(t) for t in terms[k - 1]]

    def formulas(k, extra_vars):
        tms = {1: [Var(i) for i in range(2 + extra_vars)]}
        for j in range(2, k):
            tms[j] = [f(t) for t in tms[j - 1]]
        if k < 1:
            return []
        out = []
        if k == 1:
            out.append(Bot)
        for s1 in range(1, k - 1):
            s2 = k - 1 - s1
            if s1 in tms and s2 in tms:
                out.extend(Atom("P", (t1, t2)) for t1 in tms[s1] for t2 in tms[s2])
        for s1 in range(1, k - 1):
            for lhs in formulas(s1, extra_vars):
                for rhs in formulas(k - 1 - s1, extra_vars):
                    out.append(Impl(lhs, rhs))
        out.extend(All(b) for b in formulas(k - 1, extra_vars + 1))
        return out

    return [phi for k in range(1, max_size + 1) for phi in formulas(k, 0)]


def test_acceptance_substitution_algebra():
    corpus = _fragment_formulas_exhaustive(5)
    assert len(corpus) == 92  # every fragment formula of node size ≤ 5
    f = lambda t: App("f", (t,))
    subs = [IDENTITY, Subst((), 1), Subst((f(Var(0)),), 0),
            Subst((Var(1), f(Var(2))), 3), Subst((f(f(Var(0))), Var(0)), 1)]
    cases = 0
    for phi in corpus:
        assert substitute(phi, IDENTITY) == phi
        for sigma in subs:
            for tau in subs:
                assert substitute(substitute(phi, sigma), tau) == \
                    substitute(phi, compose(sigma, tau))
                cases += 1
    assert cases >= 2000  # thousands of exhaustive cases
    rng = random.Random(60422)

    def rand_term(depth, maxvar):
        if depth == 0 or rng.random() < 0.5:
            return Var(rng.randrange(maxvar))
        return f(rand_term(depth - 1, maxvar))

    def rand_formula(size, maxvar):
        if size <= 1:
            return rng.choice([Bot, Atom("P", (rand_term(1, maxvar),
                                               rand_term(1, maxvar)))])
        if rng.random() < 0.5 and size >= 3:
            ls = rng.randrange(1, size - 1)
            return Impl(rand_formula(ls, maxvar), rand_formula(size - 1 - ls, maxvar))
        return All(rand_formula(size - 1, maxvar + 1))

    def rand_subst():
        n = rng.randrange(0, 3)
        return Subst(tuple(rand_term(2, 3) for _ in range(n)), rng.randrange(0, 3))

    for _ in range(500):
        phi = rand_formula(rng.randrange(6, 10), 2)
        sigma, tau = rand_subst(), rand_subst()
        assert substitute(substitute(phi, sigma), tau) == \
            substitute(phi, compose(sigma, tau))
    report("substitution algebra (exhaustive ≤5 + randomized ≤9)")


# -- criterion 2: golden display reproduction --------------------------------

def test_acceptance_golden_displays():
    # the de Bruijn reading of the golden surface formula
    phi = parse("P(x7, x4) -> forall x. exists y. P(x, y)")
    assert phi == Impl(P2(Var(7), Var(4)), All(Ex(P2(Var(1), Var(0)))))
    # de Morgan clauses, verbatim on symbolic inputs
    a, b = Atom("a"), Atom("b")
    u = Atom("U", (Var(0),))
    assert de_morgan(Conj(a, b)) == Neg(Impl(a, Neg(b)))
    assert de_morgan(Disj(a, b)) == Impl(Neg(a), b)
    assert de_morgan(Ex(u)) == Neg(All(Neg(u)))
    # φ₃ of the displayed tree: four disjuncts, exact literal pattern
    tau = tt_rooted_tree(3)
    phi3 = wkl_encode(tau, 3)
    P = lambda i: Atom(f"P{i}")
    want = big_disj([
        big_conj([P(0), P(1), P(2)]),
        big_conj([P(0), P(1), Neg(P(2))]),
        big_conj([P(0), Neg(P(1)), P(2)]),
        big_conj([P(0), Neg(P(1)), Neg(P(2))]),
    ])
    assert phi3 == want
    report("golden display reproduction (de Bruijn reading, translation clauses, φ₃)")


# -- criterion 3: NBE cut-elimination ----------------------------------------

def test_acceptance_nbe():
    corpus = ndi_fragment_corpus()
    assert len(corpus) == 50
    detours = sum(1 for d in corpus if _has_detour(d))
    e_users = sum(1 for d in corpus if _uses_e(d))
    assert detours >= 10 and e_users >= 5
    for d in corpus:
        out = normalize(d)
        check(out)
        assert cut_free(out)
        assert out.end == LjtSeq(d.end.ctx, d.end.goal)
    pairs = gen_cut_pairs(random.Random(424242), 200)
    assert len(pairs) == 200
    for d1, d2 in pairs:
        out = cut(d1, d2)
        check(out)
        assert cut_free(out)
        assert out.end == LjtSeq(d1.end.ctx, d2.end.goal)
    report("NBE cut-elimination (50-proof corpus + 200 cut pairs)")


def _has_detour(d):
    if d.rule == "IE" and d.premises[0].rule == "II":
        return True
    return any(_has_detour(p) for p in d.premises)


def _uses_e(d):
    return d.rule == "E" or any(_uses_e(p) for p in d.premises)


# -- criterion 4: soundness fuzz ----------------------------------------------

def _all_envs(domain, formulas):
    """Every environment of the prefix family: all prefix fills over the
    free variables crossed with all default values."""
    width = max([v + 1 for phi in formulas for v in free_vars(phi)] or [0])
    return [Environment(prefix, default)
            for prefix in itertools.product(range(domain), repeat=width)
            for default in range(domain)]


def test_acceptance_soundness_fuzz():
    rng = random.Random(777001)
    violations = 0
    for d in ndc_corpus():
        ctx, goal = d.end.ctx, d.end.goal
        sym = formula_symbols(goal, *ctx)
        for _ in range(200):
            m = random_model(rng, sym)
            for rho in _all_envs(m.domain, ctx + (goal,)):
                if all(sat(m, rho, h) for h in ctx) and not sat(m, rho, goal):
                    violations += 1
    for d in ndi_fragment_corpus():
        ctx, goal = d.end.ctx, d.end.goal
        sym = formula_symbols(goal, *ctx)
        for _ in range(200):
            k = random_kripke(rng, sym, exploding=True)
            assert k.is_exploding()
            for rho in _all_envs(k.domain, ctx + (goal,)):
                for w in range(k.worlds):
                    if all(ksat(k, w, rho, h) for h in ctx) \
                            and not ksat(k, w, rho, goal):
                        violations += 1
    assert violations == 0
    report("soundness fuzz (classical/Tarski and intuitionistic/Kripke; "
           "200 models each, all worlds, all prefix-family environments, "
           "0 violations)")


# -- criterion 5: countermodel battery ----------------------------------------

def test_acceptance_countermodels():
    for phi in (PEIRCE, Impl(Neg(Neg(p)), p), Disj(p, Neg(p))):
        got = countermodel_search_kripke(phi, max_worlds=2, max_domain=1)
        assert got is not None, phi
        k, rho, w = got
        assert k.worlds <= 2 and k.domain == 1
        assert not ksat(k, w, rho, phi)
    # formulas with checking derivations are never refuted at any tested bound
    provable = [Impl(p, p), Impl(Bot, p), Impl(p, Impl(q, p)),
                Impl(Neg(Neg(Neg(p))), Neg(p)),
                de_morgan(Disj(p, Neg(p)))]
    for phi in provable:
        assert ljt_search((), phi, ProofSearchBudget(max_depth=14)) is not None
        assert countermodel_search_kripke(phi, 2, 2) is None
        assert countermodel_search_tarski(phi, 2) is None
    report("countermodel battery (Peirce, ¬¬p→p, p∨¬p; no false refutations)")


# -- criterion 6: Heyting suite -----------------------------------------------

def test_acceptance_heyting():
    rows = enumerate_lattices(5)
    assert rows
    n_heyting = 0
    for _, h, ok in rows:
        if ok:
            n_heyting += 1
            assert not check_heyting(h)
            assert not distributivity_check(h)
            hc, f = macneille(h)
            assert not check_heyting(hc)
            # completion embedding laws up to ≡, plus order reflection
            for x in range(h.size):
                for y in range(h.size):
                    assert h.le[x][y] == hc.le[f[x]][f[y]]
                    assert hc.equiv(f[h.meet[x][y]], hc.meet[f[x]][f[y]])
                    assert hc.equiv(f[h.join[x][y]], hc.join[f[x]][f[y]])
                    assert hc.equiv(f[h.impl[x][y]], hc.impl[f[x]][f[y]])
            assert hc.equiv(f[h.bot], hc.bot)
        elif h is not None:
            assert check_heyting(h)  # classified no, with a report
    assert n_heyting >= 8
    for atoms in (0, 1, 2, 3):  # Boolean algebras of size ≤ 8
        b = powerset_boolean(atoms)
        bc, _ = macneille(b)
        assert is_boolean(bc)
        assert not check_heyting(bc)
    report("Heyting suite (≤5 classified; distributivity; completion; Boolean ≤8)")


# -- criterion 7: quantifier-representative contract ---------------------------

def test_acceptance_quantifier_representatives():
    from folkit.syntax import enumerate_terms
    rng = random.Random(9632)
    algebras = [chain(2), chain(3), chain(4), powerset_boolean(2)]
    c0, c1 = App("c0", ()), App("c1", ())
    f = lambda t: App("f", (t,))
    ground = [c0, c1, f(c0), f(c1), f(f(c0))]
    all_terms = enumerate_terms({"c0": 0, "c1": 0, "f": 1}, 6, 2)
    P1 = lambda t: Atom("P", (t,))
    bodies = [P1(Var(0)), Impl(P1(Var(0)), p), Conj(p, P1(Var(0))),
              Disj(P1(Var(0)), q), Impl(P1(f(Var(0))), Bot),
              Conj(P1(Var(0)), P1(f(Var(0))))]
    mismatches = 0
    for i in range(500):
        h = rng.choice(algebras)
        support = []
        for _k in range(rng.randrange(0, 4)):
            support.append((("P", (rng.choice(ground),)), rng.randrange(h.size)))
        for name in ("p", "q"):
            if rng.random() < 0.7:
                support.append(((name, ()), rng.randrange(h.size)))
        interp = AtomInterp(tuple(support), rng.randrange(h.size))
        body = rng.choice(bodies)
        quant = All if rng.random() < 0.5 else Ex
        phi = quant(body)
        got = eval_formula(h, interp, phi)
        values = [eval_formula(h, interp, inst(body, t)) for t in all_terms]
        want = h.big_meet(values) if quant is All else h.big_join(values)
        if not h.equiv(got, want):
            mismatches += 1
    assert mismatches == 0
    report("quantifier-representative contract (500 triples, 0 mismatches)")


# -- criterion 8: dialogue equivalences at desk scale ---------------------------

def _propositional_corpus(max_size):
    leaves = [Bot, p, q]
    by_size = {1: list(leaves)}
    for k in range(2, max_size + 1):
        layer = []
        for s1 in range(1, k - 1):
            for lhs in by_size.get(s1, []):
                for rhs in by_size.get(k - 1 - s1, []):
                    layer.extend([Impl(lhs, rhs), Conj(lhs, rhs), Disj(lhs, rhs)])
        by_size[k] = layer
    return [phi for k in by_size for phi in by_size[k]]


def test_acceptance_dialogue_equivalences():
    corpus = [phi for phi in _propositional_corpus(5)
              if not isinstance(phi, Atom) and phi is not Bot]
    assert len(corpus) > 450
    ljt_budget = ProofSearchBudget(max_depth=14)
    game_budget = ProofSearchBudget(max_depth=12)
    agree = 0
    from folkit.syntax import is_fragment
    for phi in corpus:
        e = e_win_search(phi, game_budget)
        d = d_win_search(phi, game_budget)
        assert (e is None) == (d is None), print_formula(phi)
        # LJT applies on the fragment part of the corpus (the de Morgan
        # image is only classically faithful, so it is no LJT oracle here)
        if is_fragment(phi):
            direct = ljt_search((), phi, ljt_budget) is not None
            assert direct == (e is not None), print_formula(phi)
        if e is not None:
            deriv = ljd_from_estrategy(e)
            check(deriv)
            lj = lj_from_ljd(deriv)
            assert check(lj) == LjSeq((), phi)
            back = ljd_from_lj(lj)
            assert check(back) == deriv.end
            deriv_d = ljd_from_dwin(d)
            assert check(deriv_d) == LjdSeq((), FiniteSet((phi,)))
            agree += 1
    assert agree > 100
    report(f"dialogue equivalences (size ≤5 corpus of {len(corpus)}, "
           f"{agree} provable, all four notions agree)")


# -- criterion 9: strategy robustness ------------------------------------------

THEOREM_CORPUS = [
    Impl(p, p), Impl(Bot, p), Impl(p, Impl(q, p)),
    Impl(Conj(p, q), Conj(q, p)), Impl(p, Disj(p, q)),
    Impl(Disj(p, q), Disj(q, p)), Neg(Conj(p, Neg(p))),
    Impl(All(Atom("P", (Var(0),))), Ex(Atom("P", (Var(0),)))),
    Impl(Ex(Atom("P", (Var(0),))), Ex(Atom("P", (Var(0),)))),
    All(Impl(Atom("P", (Var(0),)), Atom("P", (Var(0),)))),
]


def test_acceptance_strategy_robustness():
    rng = random.Random(11011)
    for phi in THEOREM_CORPUS:
        strategy = e_win_search(phi, ProofSearchBudget(max_depth=10))
        assert strategy is not None, print_formula(phi)
        deriv = ljd_from_estrategy(strategy)
        for variant in ("e", "d", "s"):
            for _ in range(1000):
                assert random_playout(variant, phi, deriv, rng) == "proponent_won"
    report("strategy robustness (10 theorems × 3 variants × 1000 playouts)")


# -- criterion 10: WKL encoder --------------------------------------------------

def test_acceptance_wkl_encoder():
    rng = random.Random(3341)
    checked = 0
    for _ in range(200):
        depth = rng.randrange(1, 9)
        nodes = {()}
        frontier = [()]
        for _level in range(depth):
            nxt = []
            for node in frontier:
                for b in (True, False):
                    if rng.random() < 0.62:
                        child = node + (b,)
                        nodes.add(child)
                        nxt.append(child)
            frontier = nxt
        tau = TreeOracle(frozenset(nodes), depth)
        n = rng.randrange(0, depth + 1)
        phi = wkl_encode(tau, n)
        if n == 0:
            satisfiable = wkl_sat(phi, ())
        else:
            satisfiable = wkl_sat_any(phi, n) is not None
        assert satisfiable == tau.has_node_of_length(n)
        checked += 1
    assert checked == 200
    report("WKL encoder (200 random trees ≤ depth 8, exact agreement)")


# -- criterion 11: CLI determinism ----------------------------------------------

def test_acceptance_cli_determinism(capsys, tmp_path):
    import json as _json

    from folkit.cli import run

    from folkit.kernel import nd_assume, nd_ii, nd_ie

    inner = nd_ii(nd_assume("ndi", (p,), p))
    wrap = nd_ii(nd_assume("ndi", (Impl(p, p),), Impl(p, p)))
    dpath = tmp_path / "d.json"
    dpath.write_text(_json.dumps(jsonio.deriv_to_json(nd_ie(wrap, inner))))
    tree = tmp_path / "tree.json"
    tree.write_text(_json.dumps(
        {"nodes": [[], [True], [True, True], [True, False]], "depth": 2}))
    model = tmp_path / "m.json"
    model.write_text(_json.dumps(
        {"domain": 2, "bot": False, "funcs": {},
         "preds": {"P": {"arity": 1, "table": [True, False]}}}))

    commands = [
        ["fmt", "--formula", "forall x. P(x) -> Q(x)"],
        ["prove", "--formula", "p -> q -> p"],
        ["prove", "--formula", "((p->q)->p)->p", "--budget", "6"],
        ["check", "--input", str(dpath)],
        ["normalize", "--input", str(dpath)],
        ["countermodel", "--kripke", "--formula", "~~p -> p",
         "--max-domain", "1", "--max-worlds", "2"],
        ["countermodel", "--tarski", "--formula",
         "(exists x. P(x)) -> forall x. P(x)", "--max-domain", "2"],
        ["translate", "--demorgan", "--formula", "p \\/ ~p"],
        ["translate", "--dn", "--formula", "p \\/ q"],
        ["translate", "--close", "--formula", "P(x0, x1)"],
        ["wkl-encode", "--tree", str(tree), "--depth", "2"],
        ["eval", "--model", str(model), "--formula", "exists x. P(x)"],
        ["game", "--variant", "e", "--formula", "false -> P",
         "--script", "m0"],
        ["--json", "prove", "--formula", "p -> p"],
    ]
    for argv in commands:
        code1 = run(list(argv))
        out1 = capsys.readouterr().out
        code2 = run(list(argv))
        out2 = capsys.readouterr().out
        assert code1 == code2
        assert out1 == out2, argv
        # emitted derivations re-check when piped back
        try:
            payload = _json.loads(out1)
        except _json.JSONDecodeError:
            payload = None
        if isinstance(payload, dict) and "deriv" in payload:
            check(jsonio.deriv_from_json(payload["deriv"]))
    report("CLI determinism (byte-identical runs; derivations re-check)")
