from fractions import Fraction

import pytest

from qosing.arith import hnf, lattice_index, min_multiple, vec
from qosing.branch import (Branch, derive, expand_reduced, is_normalized,
                           monomial_branch, reduced_derived,
                           reduced_exponents, singular_locus,
                           validate_and_sort)
from qosing.errors import (DegenerateExponent, NotStrict, NotTotallyOrdered,
                           Reducible, ShapeViolation, Smooth)

CUSP = Branch(1, (vec("3/2"),))
E4 = Branch(2, (vec("3/2", 0), vec("7/4", 0)))
WEDGE2 = Branch(2, (vec("3/2", "1/2"),))
WEDGE3 = Branch(3, (vec("3/2", "1/2", "1/2"),))
DIAG3 = Branch(3, (vec("1/2", "1/2", "1/2"),))


def test_validate_and_sort_permutes():
    branch, perm = validate_and_sort([vec("1/2", "3/2")])
    assert branch.exponents == (vec("3/2", "1/2"),)
    assert perm == (1, 0)


def test_validate_and_sort_identity():
    branch, perm = validate_and_sort([vec("3/2", "1/2")])
    assert perm == (0, 1)
    assert branch == WEDGE2


def test_validate_and_sort_errors():
    with pytest.raises(NotTotallyOrdered):
        validate_and_sort([vec(1, 0), vec(0, 1)])
    with pytest.raises(NotStrict):
        validate_and_sort([vec(1, 1), vec(1, 1)])


def test_derive_e4():
    inv = derive(E4)
    assert inv.indices == (2, 2)
    assert inv.degree == 4
    assert inv.derived == (vec("3/2", 0), vec("13/4", 0))
    assert (inv.c, inv.s, inv.c_reduced, inv.epsilon) == (1, 1, 1, 0)


def test_derive_wedge3():
    inv = derive(WEDGE3)
    assert inv.indices == (2,)
    assert (inv.c, inv.s, inv.c_reduced, inv.epsilon) == (3, 1, 1, 1)


def test_derive_smooth():
    inv = derive(Branch(2, ()))
    assert inv.degree == 1 and inv.indices == ()
    assert (inv.c, inv.s, inv.c_reduced, inv.epsilon) == (0, 0, 0, 0)


def test_derive_rejects_non_characteristic():
    with pytest.raises(DegenerateExponent):
        derive(Branch(1, (vec(2),)))


def test_degree_equals_tower_index():
    for b in (CUSP, E4, WEDGE2, WEDGE3, DIAG3):
        inv = derive(b)
        assert lattice_index(inv.tower[0], inv.tower[-1]) == inv.degree


def test_index_is_min_multiple_both_forms():
    for b in (CUSP, E4, WEDGE2, WEDGE3, DIAG3):
        inv = derive(b)
        for i, (a, abar) in enumerate(zip(b.exponents, inv.derived)):
            assert inv.indices[i] == min_multiple(a, inv.tower[i])
            assert inv.indices[i] == min_multiple(abar, inv.tower[i])


def test_tower_generated_by_derived():
    for b in (CUSP, E4, WEDGE2, WEDGE3):
        inv = derive(b)
        gens = list(inv.tower[0].basis) + list(inv.derived)
        assert hnf(gens, b.dim) == inv.tower[-1]


def test_singular_locus_family_examples():
    # binomial family in three variables, degree 2
    cases = {
        (1, 1, 1): (0, {(1, 2), (1, 3), (2, 3)}),
        (3, 1, 1): (1, {(2, 3)}),
        (3, 3, 1): (2, set()),
        (3, 3, 3): (3, set()),
    }
    for B, (s, codim2) in cases.items():
        branch, _ = monomial_branch(2, B)
        inv = derive(branch)
        loc = singular_locus(inv)
        assert inv.s == s
        assert loc.codim1 == tuple(range(1, s + 1))
        assert set(loc.codim2) == codim2
        if codim2:
            assert loc.local_model_exponent == 2


def test_codim2_iff_both_absent():
    for B in [(1, 1, 1), (3, 1, 1), (3, 3, 1), (3, 3, 3), (5, 3, 1)]:
        branch, _ = monomial_branch(2, B)
        inv = derive(branch)
        loc = singular_locus(inv)
        present = set(loc.codim1)
        for j in range(1, inv.c + 1):
            for l in range(j + 1, inv.c + 1):
                expect = j not in present and l not in present
                assert ((j, l) in set(loc.codim2)) == expect


def test_monomial_branch_examples():
    branch, _ = monomial_branch(2, (3,))
    assert branch == CUSP
    branch, _ = monomial_branch(2, (3, 1, 1))
    assert branch == WEDGE3
    with pytest.raises(Reducible):
        monomial_branch(2, (4, 2))
    with pytest.raises(Smooth):
        monomial_branch(1, (3, 1))


def test_reduced_exponents():
    inv = derive(WEDGE3)
    heads, eps = reduced_exponents(inv)
    assert heads == (vec("3/2"),) and eps == 1
    inv = derive(WEDGE2)
    heads, eps = reduced_exponents(inv)
    assert heads == WEDGE2.exponents and eps == 0
    inv = derive(E4)
    heads, eps = reduced_exponents(inv)
    assert heads == (vec("3/2"), vec("7/4")) and eps == 0
    assert reduced_derived(inv) == (vec("3/2"), vec("13/4"))


def test_reduced_shape_violation():
    bad = Branch(3, (vec("3/2", "1/2", "1/4"),))
    inv = derive(bad)
    # s = 1, c = 3 would demand a (1/4, 1/4) tail when epsilon = 1
    if inv.epsilon:
        with pytest.raises(ShapeViolation):
            reduced_exponents(inv)


def test_expand_reduced_round_trip():
    for b in (CUSP, E4, WEDGE2, WEDGE3, DIAG3):
        inv = derive(b)
        heads, eps = reduced_exponents(inv)
        rebuilt = expand_reduced(heads, inv.indices[-1], eps, b.dim)
        assert rebuilt == b


def test_is_normalized():
    assert is_normalized(CUSP)
    assert is_normalized(E4)
    assert is_normalized(WEDGE3)
    assert is_normalized(DIAG3)
    assert not is_normalized(Branch(2, (vec("1/2", 0), vec("3/4", 0))))


def test_branch_json_round_trip():
    for b in (CUSP, E4, WEDGE3):
        assert Branch.from_json(b.to_json()) == b
    assert Branch.from_json({"N": 2, "B": [3, 1, 1]}) == WEDGE3
