import random
from fractions import Fraction

import mpmath
import pytest
from mpmath import mp

from k43 import coxeter, relations
from k43.cosets import perm_matrix
from k43.errors import DegeneratePointError, IllegalTypeError, NotInGroupError
from k43.exactlin import A, B, C, D, E, F, G
from k43.relations import (
    KEvaluator,
    PointContext,
    alpha,
    beta,
    build_relation,
    canonical_relation,
    gamma_coeff,
    monomial_count_check,
    monomial_counts,
    stratified_sample,
    triples_by_type,
    two_term_suite,
    verify_relation,
)
from k43.sf import recip_gamma

from .conftest import sample_point

EVAL_TOL = mpmath.mpf("1e-16")
REL_TOL = mpmath.mpf("1e-10")


@pytest.fixture(scope="module")
def evaluator():
    return KEvaluator(tol=EVAL_TOL)


def random_v_point(rng):
    vals = [mpmath.mpc(mpmath.mpf(rng.uniform(0.1, 0.9)), mpmath.mpf(rng.uniform(-0.5, 0.5)))
            for _ in range(6)]
    a, b, c, d, e, f = vals
    return (a, b, c, d, e, f, 1 + a + b + c + d - e - f)


def test_canonical_sine_normalization():
    s1, f1 = relations.canonical_sine(B - C)
    s2, f2 = relations.canonical_sine(C - B)
    assert f1.key() == f2.key() and s1 == -s2  # opposite orientations merge
    s3, f3 = relations.canonical_sine(3 + C - B)
    assert f3.key() == f1.key() and s3 == s1  # sin(pi(3+x)) = -sin(pi x)
    s4, f4 = relations.canonical_sine(2 + C - B)
    assert f4.key() == f1.key() and s4 == s2  # 2-periodicity
    # numerical consistency of the normalization on a sample point
    x = sample_point()
    ctx = PointContext(x)
    for form, (s, g) in (((B - C), (s1, f1)), ((3 + C - B), (s3, f3))):
        lhs = ctx.sin(form)
        rhs = s * ctx.sin(g)
        assert abs(lhs - rhs) < mpmath.mpf("1e-30")


def test_alpha_vanishes_at_equal_bc(x_star):
    a, b, c, d, e, f, g = x_star
    x = (a, b, b, d, e, f, 1 + a + 2 * b + d - e - f)
    assert abs(alpha(x)) < mpmath.mpf("1e-30")


def test_gamma_coeff_degenerate_denominator_raises(x_star):
    a, b, c, d, e, f, g = x_star
    x = (a, b, b, d, e, f, 1 + a + 2 * b + d - e - f)
    with pytest.raises(DegeneratePointError):
        gamma_coeff(x)


def test_beta_is_reciprocal_gamma_product(x_star):
    a, b, c, d, e, f, g = x_star
    want = (recip_gamma(a) * recip_gamma(1 + b - e) * recip_gamma(f - c)
            * recip_gamma(f - d) * recip_gamma(g - c) * recip_gamma(g - d))
    got = beta(x_star)
    assert abs(got - want) / abs(want) < mpmath.mpf("1e-30")


def test_trig_identity_on_thousand_points():
    rng = random.Random(17)
    worst = mpmath.mpf(0)
    for _ in range(1000):
        worst = max(worst, relations.trig_identity_residual(random_v_point(rng)))
    assert worst <= mpmath.mpf("1e-25")


def test_canonical_types_and_triples(tables):
    want = {
        (2, 2, 2): ("p0", "p1", "p2"),
        (2, 2, 4): ("p0", "p1", "n4"),
        (2, 4, 4): ("p0", "n4", "n8"),
        (4, 4, 4): ("p0", "n4", "p5"),
        (2, 4, 6): ("p0", "n4", "p4"),
    }
    for t, names in want.items():
        cert = canonical_relation(t, tables)
        assert cert.triple_names == names
        assert relations.classify_reps(cert.triple) == t


def test_canonical_relation_rejects_bad_type(tables):
    with pytest.raises(IllegalTypeError):
        canonical_relation((2, 2, 6), tables)


def test_canonical_monomial_counts_exact(tables):
    # 2^(n-1) monomials opposite a pair at Hamming distance 2n
    want = {
        (2, 2, 2): (1, 1, 1),
        (2, 2, 4): (1, 2, 1),
        (2, 4, 4): (1, 2, 2),
        (4, 4, 4): (2, 2, 2),
        (2, 4, 6): (4, 1, 2),
    }
    for t, counts in want.items():
        cert = canonical_relation(t, tables)
        assert monomial_counts(cert) == counts
        assert monomial_count_check(cert)


def test_canonical_relations_verify(tables, evaluator, x_star):
    points = [x_star]
    rng = random.Random(23)
    from k43.sampling import sample_points

    points += sample_points(tables, 2, seed=77)
    for t in coxeter.LEGAL_TYPES:
        cert = canonical_relation(t, tables)
        verify_relation(cert, points, tol=REL_TOL, evaluator=evaluator)
        assert cert.verified, (t, [mpmath.nstr(r, 5) for _, r in cert.residuals])
        assert max(r for _, r in cert.residuals) <= mpmath.mpf("1e-15")


def test_explicit_fixture_relations(tables, evaluator, x_star):
    for cert in relations.explicit_relation_fixtures(tables):
        verify_relation(cert, [x_star], tol=REL_TOL, evaluator=evaluator)
        assert cert.verified


def test_sigma_has_order_three(tables):
    sig = relations.sigma_matrix(tables)
    assert not sig.is_identity()
    assert ((sig @ sig) @ sig).is_identity()


def test_build_relation_reproduces_canonical(tables):
    cert = build_relation(tables, "p0", "p1", "p2")
    canon = canonical_relation((2, 2, 2), tables)
    assert cert.triple_names == canon.triple_names
    # same monomial structure up to the overall scalar gauge
    got = [m.structure_key() for c in cert.coefficients for m in c.monomials]
    want = [m.structure_key() for c in canon.coefficients for m in c.monomials]
    assert got == want


def test_build_relation_worked_example(tables, evaluator, x_star):
    cert = build_relation(tables, "p0", "p3", "n12")
    assert cert.type_string == "224"
    verify_relation(cert, [x_star], tol=REL_TOL, evaluator=evaluator)
    assert cert.verified


def test_build_relation_rejects_repeated_cosets(tables):
    with pytest.raises(NotInGroupError):
        build_relation(tables, "p0", "p0", "n4")


def test_build_relation_normalizes_leading_constant(tables):
    cert = build_relation(tables, "p2", "n7", "p9")
    assert cert.coefficients[0].monomials[0].const == 1


def test_transport_correctness_random_triples(tables, evaluator, x_star):
    rng = random.Random(31)
    names = [r.name for r in tables.reps]
    for _ in range(25):
        triple = rng.sample(names, 3)
        cert = build_relation(tables, *triple)
        # certificate triple is the input triple up to deterministic reordering
        assert set(cert.triple_names) == set(triple)
        # transported labels classify to the canonical type
        assert relations.classify_reps(cert.triple) == cert.hamming_type
        assert monomial_count_check(cert)
        verify_relation(cert, [x_star], tol=REL_TOL, evaluator=evaluator)
        assert cert.verified, (triple, cert.residuals)


def test_build_relation_deterministic(tables):
    c1 = build_relation(tables, "n2", "p7", "n13")
    c2 = build_relation(tables, "p7", "n13", "n2")
    assert c1.triple_names == c2.triple_names
    assert c1.rho == c2.rho


def test_corrupted_relation_fails(tables, evaluator, x_star):
    cert = build_relation(tables, "p0", "p1", "p2")
    first = cert.coefficients[0].monomials[0]
    bad = relations.CoefficientExpr((first.scaled(Fraction(-1)),) + cert.coefficients[0].monomials[1:])
    cert.coefficients = (bad, cert.coefficients[1], cert.coefficients[2])
    verify_relation(cert, [x_star], tol=REL_TOL, evaluator=evaluator)
    assert not cert.verified
    assert cert.residuals[0][1] >= mpmath.mpf("1e-2")


def test_residual_is_scale_invariant(tables, evaluator, x_star):
    cert = build_relation(tables, "p0", "p1", "n4")
    verify_relation(cert, [x_star], tol=REL_TOL, evaluator=evaluator)
    base = cert.residuals[0][1]
    cert.coefficients = tuple(c.scaled(Fraction(7, 3)) for c in cert.coefficients)
    verify_relation(cert, [x_star], tol=REL_TOL, evaluator=evaluator)
    scaled = cert.residuals[0][1]
    # identical up to arithmetic rounding on a heavily cancelling quantity
    assert abs(base - scaled) <= mpmath.mpf("1e-12") * max(base, scaled, mpmath.mpf("1e-30"))


def test_triples_census(tables):
    groups = triples_by_type(tables)
    assert sum(len(v) for v in groups.values()) == 4960
    assert {coxeter.type_string(k): len(v) for k, v in groups.items()} == {
        "222": 640, "224": 1440, "244": 1920, "444": 480, "246": 480,
    }


def test_stratified_sample_deterministic(tables):
    s1 = stratified_sample(tables, 50, seed=3)
    s2 = stratified_sample(tables, 50, seed=3)
    assert [tuple(r.name for r in t) for t in s1] == [tuple(r.name for r in t) for t in s2]
    assert len(s1) == 50
    types = {relations.classify_reps(t) for t in s1}
    assert len(types) == 5  # all strata represented


def test_two_term_identity_element(tables, x_star):
    ev = KEvaluator(tol=EVAL_TOL)
    base = ev.k_plain(x_star)
    ident = tables.gk_closure.elements[0]
    assert ident.is_identity()
    assert abs(ev.k_plain(ident.apply(x_star)) - base) == 0


def test_two_term_fundamental_element(tables, x_star):
    from k43.cosets import S_MATRIX

    g = (S_MATRIX @ perm_matrix((4, 5))) @ tables.S_inv
    ev = KEvaluator(tol=EVAL_TOL)
    base = ev.k_plain(x_star)
    moved = ev.k_plain(g.apply(x_star))
    assert abs(moved - base) / abs(base) <= mpmath.mpf("1e-10")


def test_point_context_caches(x_star):
    ctx = PointContext(x_star)
    v1 = ctx.sin(C - B)
    v2 = ctx.sin((C - B).canonical())
    assert v1 is v2
