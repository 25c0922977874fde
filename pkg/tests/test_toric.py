import math
from fractions import Fraction

import pytest

from qosing.arith import (dual_lattice, hnf, lattice_index, standard_lattice,
                          vec)
from qosing.branch import Branch, derive, monomial_branch
from qosing.errors import NotInFan
from qosing.series import FracSeries
from qosing.toric import (ConeZ, Fan, MonomialMap, canonical_blowup,
                          fans_equal_support, is_regular, normalization_data,
                          orbifold_data, orthant_fan, phi_map,
                          star_subdivision, vertex_transfer_check)

CUSP = Branch(1, (vec("3/2"),))
E4 = Branch(2, (vec("3/2", 0), vec("7/4", 0)))
WEDGE2 = Branch(2, (vec("3/2", "1/2"),))
WEDGE3 = Branch(3, (vec("3/2", "1/2", "1/2"),))
DIAG3 = Branch(3, (vec("1/2", "1/2", "1/2"),))

Z2 = standard_lattice(2)
Z3 = standard_lattice(3)


def test_is_regular_examples():
    assert is_regular(ConeZ(Z2, (vec(1, 0), vec(0, 1))))
    assert not is_regular(ConeZ(Z2, (vec(1, 0), vec(1, 2))))
    doubled = hnf([vec(2, 0), vec(0, 2)])
    assert is_regular(ConeZ(doubled, (vec(2, 0), vec(0, 2))))


def test_star_subdivision_plane():
    fan = orthant_fan(Z2)
    out = star_subdivision(fan, fan.max_cones[0])
    ray_sets = {c.ray_set() for c in out.max_cones}
    assert ray_sets == {frozenset({vec(1, 0), vec(1, 1)}),
                        frozenset({vec(1, 1), vec(0, 1)})}
    assert fans_equal_support(fan, out)
    assert all(is_regular(c) for c in out.max_cones)


def test_star_subdivision_3d_at_top():
    fan = orthant_fan(Z3)
    out = star_subdivision(fan, fan.max_cones[0])
    assert len(out.max_cones) == 3
    assert all(vec(1, 1, 1) in c.rays for c in out.max_cones)
    assert fans_equal_support(fan, out)


def test_star_subdivision_at_face():
    fan = orthant_fan(Z3)
    face = ConeZ(Z3, (vec(1, 0, 0), vec(0, 1, 0)))
    out = star_subdivision(fan, face)
    assert len(out.max_cones) == 2
    for cone in out.max_cones:
        assert vec(1, 1, 0) in cone.rays
        assert vec(0, 0, 1) in cone.rays
    # the untouched face on axes 1, 3 survives inside a child
    assert any(c.has_face((vec(1, 0, 0), vec(0, 0, 1)))
               for c in out.max_cones)


def test_star_subdivision_missing_center():
    fan = orthant_fan(Z2)
    with pytest.raises(NotInFan):
        star_subdivision(fan, ConeZ(Z2, (vec(1, 1),)))


def test_star_subdivision_random_fans(rng):
    for _ in range(30):
        dim = rng.choice([2, 3, 4])
        lat = standard_lattice(dim)
        fan = orthant_fan(lat)
        for _ in range(rng.randint(1, 3)):
            cone = rng.choice(fan.max_cones)
            k = rng.randint(2, cone.dim)
            idx = sorted(rng.sample(range(cone.dim), k))
            center = ConeZ(lat, tuple(cone.rays[i] for i in idx))
            before = fan
            fan = star_subdivision(fan, center)
            incident = sum(1 for c in before.max_cones
                           if c.has_face(center.rays))
            assert len(fan.max_cones) == (len(before.max_cones)
                                          + incident * (k - 1))
            assert all(is_regular(c) for c in fan.max_cones)
            assert fans_equal_support(before, fan)


def test_normalization_data_examples():
    w, rows = normalization_data(CUSP)
    assert w == hnf([vec(2)])
    w2, _ = normalization_data(WEDGE2)
    for a in range(-3, 4):
        for b in range(-3, 4):
            assert w2.member(vec(a, b)) == ((a + b) % 2 == 0)
    w0, rows0 = normalization_data(Branch(2, ()))
    assert w0 == Z2 and rows0 == [(1, 0), (0, 1)]
    del rows


def test_degree_identity_dual():
    for b in (CUSP, E4, WEDGE2, WEDGE3, DIAG3):
        inv = derive(b)
        w, _ = normalization_data(inv)
        assert lattice_index(w, standard_lattice(b.dim)) == inv.degree


def test_orbifold_data_examples():
    w2, _ = normalization_data(WEDGE2)
    tilde, mult = orbifold_data(w2)
    assert tilde == hnf([vec(2, 0), vec(0, 2)])
    assert mult == (2, 2)
    assert orbifold_data(standard_lattice(3)) == (Z3, (1, 1, 1))
    w1, _ = normalization_data(CUSP)
    tilde1, mult1 = orbifold_data(w1)
    assert tilde1 == hnf([vec(2)]) and mult1 == (2,)


def test_blowup_identity_case():
    res = canonical_blowup(WEDGE3)
    assert res.case == "identity"
    assert len(res.distinguished) == 1
    assert res.c_prime == 1
    assert res.h_rays == (vec(2, 0, 0),)
    res = canonical_blowup(E4)
    assert res.case == "identity" and res.c_prime == 1
    assert len(res.h_rays) == 1


def test_blowup_single_case():
    res = canonical_blowup(WEDGE2)
    assert res.case == "single-blowup"
    assert len(res.distinguished) == 1 and res.c_prime == 2
    cone = res.distinguished[0]
    assert cone.ray_set() == frozenset({vec(2, 0), vec(2, 2)})
    assert set(res.h_rays) == {vec(2, 0), vec(2, 2)}


def test_blowup_iterated_case():
    res = canonical_blowup(DIAG3)
    assert res.case == "iterated"
    assert len(res.distinguished) == math.factorial(3)
    assert res.c_prime == 3
    for cone in res.distinguished:
        assert is_regular(cone)
        assert len([r for r in cone.rays if r in set(res.h_rays)]) == 3
    assert fans_equal_support(res.fan,
                              orthant_fan(res.fan.lattice), box=3)


def test_blowup_iterated_4d():
    branch, _ = monomial_branch(2, (1, 1, 1, 1))
    res = canonical_blowup(branch)
    assert len(res.distinguished) == math.factorial(4)


def test_blowup_counts_by_regime():
    cases = [
        (WEDGE3, 1),       # s = c - 2
        (E4, 1),           # s = c
        (WEDGE2, 1),       # s = c - 1
        (DIAG3, 6),        # s <= c - 3
    ]
    for branch, count in cases:
        assert len(canonical_blowup(branch).distinguished) == count


def test_phi_map_cusp_gives_two_three():
    mapping, cert = phi_map(CUSP)
    assert cert.ok()
    assert cert.images == (vec(2), vec(3))
    image = sorted({mapping.apply(vec(x))[0]
                    for x in [0, 1, Fraction(3, 2), 2, Fraction(5, 2), 3]})
    assert image == [0, 2, 3, 4, 5, 6]


def test_phi_map_wedge2():
    mapping, cert = phi_map(WEDGE2)
    assert cert.ok()
    assert cert.images == (vec(2, 2), vec(0, 2), vec(3, 4))
    assert all(x.denominator == 1 for v in cert.images for x in v)


def test_phi_map_all_corpus():
    for branch in (CUSP, E4, WEDGE2, WEDGE3, DIAG3):
        _, cert = phi_map(branch)
        assert cert.ok(), branch


def test_phi_map_smooth():
    mapping, cert = phi_map(Branch(2, ()))
    assert cert.ok()
    assert mapping.apply(vec(1, 0)) == vec(1, 0)


def test_vertex_transfer_examples():
    doubling = MonomialMap(2, (vec(2, 0), vec(0, 2)))
    eta = FracSeries(2, [(vec("3/2", 0), 1), (vec(1, 1), 1)])
    assert vertex_transfer_check(doubling, eta)
    ident = MonomialMap(2, (vec(1, 0), vec(0, 1)))
    assert vertex_transfer_check(ident, eta)
    shear = MonomialMap(2, (vec(1, 1), vec(0, 1)))
    eta2 = FracSeries(2, [(vec(1, 0), 1), (vec(0, 1), 1)])
    assert vertex_transfer_check(shear, eta2)


def test_vertex_transfer_randomized(rng):
    for _ in range(40):
        cols = [vec(rng.randint(1, 3), rng.randint(0, 2)),
                vec(rng.randint(0, 2), rng.randint(1, 3))]
        mapping = MonomialMap(2, tuple(cols))
        terms = [(vec(rng.randint(0, 4), rng.randint(0, 4)),
                  rng.choice([-1, 1, 2]))
                 for _ in range(rng.randint(1, 5))]
        eta = FracSeries(2, terms)
        if eta.is_zero():
            continue
        assert vertex_transfer_check(mapping, eta)
