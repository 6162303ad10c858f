import random

import pytest

from folkit.kernel import (Deriv, LjtFocus, LjtSeq, NdSeq, check, ljt_to_nd,
                           nd_assume, nd_ae, nd_ai, nd_e, nd_ie, nd_ii,
                           weaken)
from folkit.nbe import (NotFragment, cut, cut_free, normalize, reflect, reify,
                        transport)
from folkit.search import ProofSearchBudget, ljt_search, ljt_search_focus
from folkit.syntax import (All, App, Atom, Bot, Disj, Impl, Neg, Var, inst,
                           shift, shift_ctx)

p, q, r = Atom("p"), Atom("q"), Atom("r")
P1 = lambda t: Atom("P", (t,))


def detour_identity(phi):
    """IE(II(C0), II(C0)) : ⊢ φ→φ with an explicit beta detour."""
    inner = nd_ii(nd_assume("ndi", (phi,), phi))          # ⊢ φ→φ
    wrap = nd_ii(nd_assume("ndi", (Impl(phi, phi),), Impl(phi, phi)))
    return nd_ie(wrap, inner)


def test_normalize_identity_detour():
    d = detour_identity(p)
    assert check(d) == NdSeq((), Impl(p, p))
    out = normalize(d)
    assert out.end == LjtSeq((), Impl(p, p))
    assert cut_free(out)
    # the beta detour is gone: direct IR; C; A
    assert out.rule == "IR"


def test_normalize_preserves_end_sequents():
    samples = [
        nd_ii(nd_assume("ndi", (p,), p)),
        nd_ii(nd_ii(nd_assume("ndi", (q, p), p))),
        detour_identity(Impl(p, q)),
        nd_ii(nd_e(nd_assume("ndi", (Bot,), Bot), q)),   # ⊥ → q via E
    ]
    for d in samples:
        out = normalize(d)
        assert isinstance(out.end, LjtSeq)
        assert out.end == LjtSeq(d.end.ctx, d.end.goal)
        check(out)


def test_normalize_quantifiers():
    # ⊢ (∀x.Px) → (∀y.Py) with an AE/AI redex inside
    allp = All(P1(Var(0)))
    ctx = (allp,)
    inner = nd_ae(nd_assume("ndi", shift_ctx(ctx), shift(allp)), Var(0))
    d = nd_ii(nd_ai(inner, ctx))
    assert check(d) == NdSeq((), Impl(allp, allp))
    out = normalize(d)
    assert out.end == LjtSeq((), Impl(allp, allp))
    check(out)


def test_normalize_rejects_full_syntax():
    d = Deriv("ndi", "DI1", (nd_assume("ndi", (p,), p),), (),
              NdSeq((p,), Disj(p, q)))
    with pytest.raises(NotFragment):
        normalize(d)


def test_round_trip_provability():
    d = detour_identity(p)
    out = normalize(d)
    back = ljt_to_nd(out)
    assert check(back) == NdSeq(d.end.ctx, d.end.goal)
    # idempotence at the sequent level
    again = normalize(back)
    assert again.end == out.end


def test_reflect_hypothesis_use():
    # reflecting p→q and applying to reflected p reifies to an IL proof
    ctx = (p, Impl(p, q))
    vf = reflect(Impl(p, q), ctx)
    va = reflect(p, ctx)
    d = reify(vf.apply(ctx, va))
    assert d.end == LjtSeq(ctx, q)
    check(d)


def test_explosion_via_reflect():
    # a ⊥ hypothesis makes every goal reachable
    ctx = (Bot,)
    for goal in (p, Impl(p, q), All(P1(Var(0)))):
        d = nd_e(nd_assume("ndi", ctx, Bot), goal)
        out = normalize(d)
        assert out.end == LjtSeq(ctx, goal)
        check(out)


def test_monotonicity_transport():
    ctx = (p, Impl(p, q))
    bigger = (r,) + ctx
    v = reflect(Impl(p, q), ctx)
    moved = transport(v, bigger)
    d_direct = reify(moved.apply(bigger, reflect(p, bigger)))
    assert d_direct.end == LjtSeq(bigger, q)
    check(d_direct)
    d_small = reify(v.apply(ctx, reflect(p, ctx)))
    d_weak = weaken(d_small, bigger)
    assert d_weak.end == d_direct.end
    check(d_weak)


def test_cut_axiom_cases():
    # d2 = A axiom: cut gives back d1's sequent
    d1 = ljt_search((), Impl(p, p))
    ax = Deriv("ljt", "A", (), (), LjtFocus((), Impl(p, p), Impl(p, p)))
    out = cut(d1, ax)
    assert out.end == LjtSeq((), Impl(p, p))
    check(out)


def test_cut_random_pairs():
    from corpus import gen_cut_pairs
    rng = random.Random(99)
    pairs = gen_cut_pairs(rng, 60)
    assert len(pairs) == 60
    for d1, d2 in pairs:
        out = cut(d1, d2)
        assert out.end == LjtSeq(d1.end.ctx, d2.end.goal)
        assert cut_free(out)
        check(out)


def test_normalize_idempotent_on_ljt_corpus():
    # normalize(ljt_to_nd(e)) ends at e's sequent for searched LJT proofs
    from folkit.syntax import All, Var
    P1 = lambda t: Atom("P", (t,))
    goals = [Impl(p, p), Impl(Bot, p), Impl(p, Impl(q, p)),
             Impl(Neg(Neg(Neg(p))), Neg(p)),
             Impl(All(P1(Var(0))), All(P1(Var(0))))]
    for goal in goals:
        e = ljt_search((), goal)
        assert e is not None
        again = normalize(ljt_to_nd(e))
        assert again.end == e.end


def test_full_classical_pipeline_to_cut_free():
    # full-syntax classical proofs route: demorgan → dn → normalize
    import sys
    sys.path.insert(0, "tests")
    from corpus import ndc_corpus
    from folkit.kernel import demorgan_transform, dn_transform
    from folkit.syntax import de_morgan, dn_translate, de_morgan_ctx

    done = 0
    for d in ndc_corpus():
        dm = demorgan_transform(d)
        assert dm.end.goal == de_morgan(d.end.goal)
        dn = dn_transform(dm)
        assert dn.calc == "ndi"
        check(dn)
        out = normalize(dn)
        assert cut_free(out)
        assert out.end == LjtSeq(dn.end.ctx, dn.end.goal)
        done += 1
    assert done >= 15
