"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis 1, zeta, ..., zeta^(phi(N)-1) with
rational coordinates, reduced modulo the N-th cyclotomic polynomial, so
equality is coefficient-wise.  Mixed orders re-embed into the lcm order.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (ascending) of the n-th cyclotomic polynomial."""
    if n == 1:
        return (-1, 1)
    # divide x^n - 1 by the product of the proper cyclotomic factors
    num = [0] * (n + 1)
    num[0], num[n] = -1, 1
    for d in range(1, n):
        if n % d == 0:
            num = _poly_exact_div(num, cyclotomic_polynomial(d))
    return tuple(num)


def _poly_exact_div(num: list[int], den: tuple[int, ...]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c, r = divmod(num[i + len(den) - 1], den[-1])
        assert r == 0
        out[i] = c
        for j, dj in enumerate(den):
            num[i + j] -= c * dj
    assert all(c == 0 for c in num)
    return out


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def _reduce(coeffs: list[Fraction], n: int) -> tuple[Fraction, ...]:
    """Reduce a polynomial in zeta_n modulo the cyclotomic polynomial."""
    phi = euler_phi(n)
    poly = cyclotomic_polynomial(n)
    work = list(coeffs)
    if len(work) < phi:
        work += [Fraction(0)] * (phi - len(work))
    lead_inv = Fraction(1, poly[-1])
    for i in range(len(work) - 1, phi - 1, -1):
        c = work[i] * lead_inv
        if c:
            for j, pj in enumerate(poly):
                work[i - len(poly) + 1 + j] -= c * pj
        work.pop()
    return tuple(work[:phi])


class Cyclotomic:
    """An element of Q(zeta_order) in reduced power-basis form."""

    __slots__ = ("order", "coeffs", "_hash")

    def __init__(self, order: int, coeffs):
        self.order = order
        self.coeffs = _reduce([Fraction(c) for c in coeffs], order)
        self._hash = None

    @staticmethod
    def rational(value, order: int = 1) -> "Cyclotomic":
        return Cyclotomic(order, [Fraction(value)])

    @staticmethod
    def zero(order: int = 1) -> "Cyclotomic":
        return Cyclotomic(order, [])

    @staticmethod
    def one(order: int = 1) -> "Cyclotomic":
        return Cyclotomic(order, [Fraction(1)])

    def promote(self, order: int) -> "Cyclotomic":
        """Re-embed into Q(zeta_order); requires self.order | order."""
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"{self.order} does not divide {order}")
        step = order // self.order
        out = [Fraction(0)] * (step * len(self.coeffs))
        for i, c in enumerate(self.coeffs):
            out[step * i] = c
        return Cyclotomic(order, out)

    def _pair(self, other) -> tuple["Cyclotomic", "Cyclotomic"]:
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.rational(other)
        n = lcm(self.order, other.order)
        return self.promote(n), other.promote(n)

    def __add__(self, other):
        a, b = self._pair(other)
        size = max(len(a.coeffs), len(b.coeffs))
        ca = list(a.coeffs) + [Fraction(0)] * (size - len(a.coeffs))
        cb = list(b.coeffs) + [Fraction(0)] * (size - len(b.coeffs))
        return Cyclotomic(a.order, [x + y for x, y in zip(ca, cb)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other if isinstance(other, Cyclotomic)
                       else Cyclotomic.rational(-Fraction(other)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._pair(other)
        out = [Fraction(0)] * (len(a.coeffs) + len(b.coeffs) - 1 or 1)
        for i, x in enumerate(a.coeffs):
            if not x:
                continue
            for j, y in enumerate(b.coeffs):
                if y:
                    out[i + j] += x * y
        return Cyclotomic(a.order, out)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        """Field inverse via the extended Euclid algorithm in Q[x]."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic")
        poly = [Fraction(c) for c in cyclotomic_polynomial(self.order)]
        r0, r1 = poly, list(self.coeffs)
        t0, t1 = [Fraction(0)], [Fraction(1)]
        while any(r1):
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            t0, t1 = t1, _poly_sub(t0, _poly_mul(q, t1))
        # r0 = gcd, a nonzero constant since the modulus is irreducible
        const = next(c for c in r0 if c)
        assert all(c == 0 for c in r0[1:]), "cyclotomic modulus not coprime"
        inv_const = 1 / const
        return Cyclotomic(self.order, [c * inv_const for c in t0])

    def __truediv__(self, other):
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.rational(other)
        a, b = self._pair(other)
        return a * b.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.rational(other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._pair(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self._hash is None:
            # hash the canonical value in the field of the reduced order
            nz = [(i, c) for i, c in enumerate(self.coeffs) if c]
            if not nz:
                self._hash = hash(0)
            elif len(nz) == 1 and nz[0][0] == 0:
                self._hash = hash(nz[0][1])
            else:
                self._hash = hash((self.order, self.coeffs))
        return self._hash

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __repr__(self):
        if self.is_rational():
            return f"Cyc({self.as_rational()})"
        terms = [f"{c}*z{self.order}^{i}" for i, c in enumerate(self.coeffs)
                 if c]
        return "Cyc(" + " + ".join(terms) + ")"


def _poly_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    db = max(i for i, c in enumerate(b) if c)
    q = [Fraction(0)] * max(len(a) - db, 1)
    lead = b[db]
    for i in range(len(a) - 1, db - 1, -1):
        if a[i]:
            c = a[i] / lead
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    return q, a[:db] if db else [Fraction(0)]


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1 or 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _poly_sub(a, b):
    size = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (size - len(a))
    b = list(b) + [Fraction(0)] * (size - len(b))
    return [x - y for x, y in zip(a, b)]


def root_of_unity(order: int, power: int = 1) -> Cyclotomic:
    """zeta_order**power, reduced modulo the cyclotomic polynomial."""
    if order < 1:
        raise ValueError("order must be positive")
    power %= order
    coeffs = [Fraction(0)] * power + [Fraction(1)]
    return Cyclotomic(order, coeffs)


def unit_root_for_pairing(order: int, value: Fraction) -> Cyclotomic:
    """exp(2*pi*i*value) as an element of Q(zeta_order).

    ``value`` must have denominator dividing ``order``.
    """
    scaled = value * order
    if scaled.denominator != 1:
        raise ValueError(f"{value} is not an order-{order} fraction of a turn")
    return root_of_unity(order, int(scaled))
