import random
from fractions import Fraction

import pytest

from qosing.arith import vec
from qosing.branch import Branch, derive
from qosing.errors import InIdeal
from qosing.semigroup import default_bound, enumerate_up_to, gamma, membership
from qosing.semiroot import (SeriesPoly, adic_expand, build_semiroots,
                             canonical_root, conjugates, euclid_div,
                             evaluate, reduce_mod_defining, semigroup_witness,
                             vertex_sets_disjoint_and_additive)
from qosing.series import FracSeries, dominating_exponent

CUSP = Branch(1, (vec("3/2"),))
E4 = Branch(2, (vec("3/2", 0), vec("7/4", 0)))
WEDGE2 = Branch(2, (vec("3/2", "1/2"),))
WEDGE3 = Branch(3, (vec("3/2", "1/2", "1/2"),))
CORPUS = (CUSP, E4, WEDGE2, WEDGE3)


def poly_from_monomials(dim, *rows):
    """rows: (y_power, exponent tuple, coeff)."""
    top = max(r[0] for r in rows)
    coeffs = [FracSeries.zero(dim) for _ in range(top + 1)]
    for j, e, c in rows:
        coeffs[j] = coeffs[j] + FracSeries(dim, [(vec(*e), c)])
    return SeriesPoly(dim, coeffs)


def test_canonical_root():
    assert canonical_root(CUSP) == FracSeries(1, [(vec("3/2"), 1)])
    assert canonical_root(E4) == FracSeries(
        2, [(vec("3/2", 0), 1), (vec("7/4", 0), 1)])


def test_conjugates_cusp():
    inv = derive(CUSP)
    taus = conjugates(canonical_root(CUSP), inv, 1)
    assert len(taus) == 2
    coeffs = sorted(t.coeff(vec("3/2")).as_rational() for t in taus)
    assert coeffs == [-1, 1]


def test_conjugates_trivial_level():
    inv = derive(CUSP)
    assert conjugates(FracSeries.zero(1), inv, 0) == [FracSeries.zero(1)]


def test_conjugates_wedge2():
    inv = derive(WEDGE2)
    taus = conjugates(canonical_root(WEDGE2), inv, 1)
    assert len(taus) == 2
    coeffs = sorted(t.coeff(vec("3/2", "1/2")).as_rational() for t in taus)
    assert coeffs == [-1, 1]


def test_conjugates_transversal_independent(rng):
    inv = derive(E4)
    from qosing.arith import dual_lattice, quotient_transversal
    w2 = dual_lattice(inv.tower[2])
    base = quotient_transversal(w2, 2)
    xi = canonical_root(E4)
    reference = set(conjugates(xi, inv, 2))
    for _ in range(5):
        shift = random.Random(rng.random()).choice(list(w2.basis))
        moved = [tuple(a + b for a, b in zip(v, shift)) for v in base]
        assert set(conjugates(xi, inv, 2, transversal=moved)) == reference


def test_build_semiroots_cusp():
    sys = build_semiroots(CUSP)
    f0, f1 = sys.semiroots
    assert f0 == SeriesPoly.variable(1)
    assert f1 == poly_from_monomials(1, (2, (0,), 1), (0, (3,), -1))
    assert dominating_exponent(sys.values[0]) == vec("3/2")
    assert sys.values[1].is_zero()


def test_build_semiroots_wedge2():
    sys = build_semiroots(WEDGE2)
    assert sys.semiroots[1] == poly_from_monomials(
        2, (2, (0, 0), 1), (0, (3, 1), -1))


def test_build_semiroots_e4():
    sys = build_semiroots(E4)
    assert sys.semiroots[1] == poly_from_monomials(
        2, (2, (0, 0), 1), (0, (3, 0), -1))
    f2 = sys.semiroots[2]
    assert f2.degree == 4 and f2.is_unitary()
    # f_1(xi) = 2 X^{13/4} + X^{7/2}
    assert sys.values[1] == FracSeries(
        2, [(vec("13/4", 0), 2), (vec("7/2", 0), 1)])
    assert dominating_exponent(sys.values[1]) == vec("13/4", 0)


def test_semiroot_valuations_all_corpus():
    for branch in CORPUS:
        sys = build_semiroots(branch)
        for k in range(branch.G):
            assert (dominating_exponent(sys.values[k])
                    == sys.invariants.derived[k])


def test_euclid_div_examples():
    y3 = poly_from_monomials(1, (3, (0,), 1))
    f1 = poly_from_monomials(1, (2, (0,), 1), (0, (3,), -1))
    q, r = euclid_div(y3, f1)
    assert q == SeriesPoly.variable(1)
    assert r == poly_from_monomials(1, (1, (3,), 1))
    small = poly_from_monomials(1, (0, (1,), 1))
    q, r = euclid_div(small, f1)
    assert q.is_zero() and r == small
    q, r = euclid_div(f1, f1)
    assert r.is_zero() and q == SeriesPoly.constant(FracSeries.one(1))


def test_adic_expand_examples():
    sys = build_semiroots(CUSP)
    h = poly_from_monomials(1, (3, (0,), 1))  # Y^3
    table = adic_expand(h, sys).coefficients()
    assert set(table) == {(1, 1), (1, 0)}
    assert table[(1, 1)] == FracSeries.one(1)
    assert table[(1, 0)] == FracSeries(1, [(vec(3), 1)])
    table = adic_expand(sys.semiroots[1], sys).coefficients()
    assert table == {(0, 1): FracSeries.one(1)}
    const = SeriesPoly.constant(FracSeries(1, [(vec(2), 1)]))
    table = adic_expand(const, sys).coefficients()
    assert table == {(0, 0): FracSeries(1, [(vec(2), 1)])}


def test_evaluate_examples():
    sys = build_semiroots(CUSP)
    y3 = poly_from_monomials(1, (3, (0,), 1))
    assert evaluate(y3, sys.xi) == FracSeries(1, [(vec("9/2"), 1)])
    assert evaluate(sys.semiroots[1], sys.xi).is_zero()


def test_semigroup_witness_cusp():
    sys = build_semiroots(CUSP)
    y3 = poly_from_monomials(1, (3, (0,), 1))
    vertices, wits = semigroup_witness(y3, sys)
    assert vertices == (vec("9/2"),)
    assert wits[vec("9/2")] == (vec(3), (1,))
    mono = SeriesPoly.constant(FracSeries(1, [(vec(4), 1)]))
    vertices, wits = semigroup_witness(mono, sys)
    assert vertices == (vec(4),)
    assert wits[vec(4)] == (vec(4), (0,))
    with pytest.raises(InIdeal):
        semigroup_witness(sys.semiroots[1], sys)


def random_poly(rng, dim, max_deg, n_terms=4, max_exp=3):
    rows = []
    for _ in range(rng.randint(1, n_terms)):
        j = rng.randint(0, max_deg)
        e = tuple(rng.randint(0, max_exp) for _ in range(dim))
        rows.append((j, e, rng.choice([-2, -1, 1, 2, 3])))
    return poly_from_monomials(dim, *rows)


def test_random_values_land_in_semigroup(rng):
    for branch in CORPUS:
        sys = build_semiroots(branch)
        sg = gamma(branch)
        n = sys.invariants.degree
        hits = 0
        while hits < 25:
            h = random_poly(rng, branch.dim, n + 2)
            if reduce_mod_defining(h, sys).is_zero():
                continue
            hits += 1
            value = h.evaluate(sys.xi)
            from qosing.series import newton_polyhedron
            for v in newton_polyhedron(value).vertices:
                assert membership(v, sg), (branch, h, v)
            de = dominating_exponent(value)
            if de is not None:
                assert membership(de, sg)


def test_adic_disjointness_randomized(rng):
    for branch in CORPUS:
        sys = build_semiroots(branch)
        n = sys.invariants.degree
        hits = 0
        while hits < 15:
            h = random_poly(rng, branch.dim, n + 2)
            if reduce_mod_defining(h, sys).is_zero():
                continue
            hits += 1
            assert vertex_sets_disjoint_and_additive(h, sys)


def test_fragment_fully_witnessed():
    from qosing.semiroot import attainable_fragment_witnessed
    for branch in CORPUS:
        sys = build_semiroots(branch)
        sg = gamma(branch)
        frag = enumerate_up_to(sg, default_bound(sg))
        assert attainable_fragment_witnessed(sys, frag)


def test_galois_invariance_structure():
    for branch in CORPUS:
        sys = build_semiroots(branch)
        for f in sys.semiroots:
            for c in f.coeffs:
                assert c.has_integral_support()
                assert c.is_rational()


def test_reassembly_random(rng):
    for branch in (CUSP, WEDGE2):
        sys = build_semiroots(branch)
        n = sys.invariants.degree
        for _ in range(10):
            h = random_poly(rng, branch.dim, n + 2)
            if h.is_zero():
                continue
            adic_expand(h, sys)  # internal exact reassembly assertion
