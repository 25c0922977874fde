from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qosing.cyclotomic import (Cyclotomic, cyclotomic_polynomial, euler_phi,
                               root_of_unity, unit_root_for_pairing)


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_zeta4_squared_is_minus_one():
    i = root_of_unity(4)
    assert i * i == Cyclotomic.rational(-1)


def test_zeta3_relation():
    z = root_of_unity(3)
    assert z + z * z == Cyclotomic.rational(-1)


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_zeta_has_exact_order(n):
    z = root_of_unity(n)
    acc = Cyclotomic.one(n)
    for k in range(1, n):
        acc = acc * z
        assert acc != Cyclotomic.one(n), (n, k)
    assert acc * z == Cyclotomic.one(n)


def test_inverse():
    z = root_of_unity(6)
    x = z * 3 + Cyclotomic.rational(2)
    assert x * x.inverse() == Cyclotomic.one(6)
    with pytest.raises(ZeroDivisionError):
        Cyclotomic.zero(4).inverse()


def test_mixed_order_embedding():
    z3 = root_of_unity(3)
    z6 = root_of_unity(6)
    assert z6 * z6 == z3
    assert z3 + z6 == z6 * z6 + z6


def test_pairing_roots():
    assert unit_root_for_pairing(2, Fraction(3, 2)) == Cyclotomic.rational(-1)
    assert unit_root_for_pairing(4, Fraction(-1, 4)) == root_of_unity(4, 3)
    with pytest.raises(ValueError):
        unit_root_for_pairing(2, Fraction(1, 3))


coeffs = st.lists(st.integers(-3, 3), min_size=1, max_size=2)


@given(coeffs, coeffs, coeffs)
def test_ring_laws_order_four(a, b, c):
    x, y, z = (Cyclotomic(4, t) for t in (a, b, c))
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


def test_euler_phi():
    assert [euler_phi(n) for n in (1, 2, 3, 4, 6, 12)] == [1, 1, 2, 2, 2, 4]


def test_rational_detection():
    z = root_of_unity(4)
    assert not z.is_rational()
    assert (z * z).is_rational()
    assert (z * z).as_rational() == -1
