"""Finite-support fractional power series and their Newton polyhedra.

Exponents are rational vectors with nonnegative coordinates; coefficients
live in a cyclotomic field.  The Newton polyhedron of a nonzero series is
the convex hull of ``support + R_+^d``; its vertex set is computed by an
exact rational feasibility test: a support point ``p`` is a vertex exactly
when some strictly positive weight vector ``w`` separates it strictly from
the rest of the support, and that system is decided by Fourier-Motzkin
elimination over the d weight variables.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import lcm

from .arith import (ExpVec, is_nonneg, minimal_elements, vadd, vleq, vsub,
                    zero_vec)
from .cyclotomic import Cyclotomic
from .errors import EmptySeries, NotAUnit, PreconditionViolated


def _coerce_coeff(c) -> Cyclotomic:
    if isinstance(c, Cyclotomic):
        return c
    return Cyclotomic.rational(Fraction(c))


class FracSeries:
    """Immutable finite map from exponent vectors to nonzero coefficients."""

    __slots__ = ("dim", "terms", "_hash")

    def __init__(self, dim: int, terms=()):
        items = terms.items() if isinstance(terms, dict) else terms
        acc: dict[ExpVec, Cyclotomic] = {}
        for e, c in items:
            e = tuple(Fraction(x) for x in e)
            if len(e) != dim:
                raise ValueError("exponent dimension mismatch")
            if not is_nonneg(e):
                raise ValueError(f"negative exponent {e}")
            c = _coerce_coeff(c)
            if e in acc:
                c = acc[e] + c
            if c.is_zero():
                acc.pop(e, None)
            else:
                acc[e] = c
        self.dim = dim
        self.terms = tuple(sorted(acc.items(), key=lambda t: t[0]))
        self._hash = None

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero(dim: int) -> "FracSeries":
        return FracSeries(dim, ())

    @staticmethod
    def one(dim: int) -> "FracSeries":
        return FracSeries(dim, [(zero_vec(dim), 1)])

    @staticmethod
    def monomial(exponent, coeff=1) -> "FracSeries":
        e = tuple(Fraction(x) for x in exponent)
        return FracSeries(len(e), [(e, coeff)])

    # -- structure -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> list[ExpVec]:
        return [e for e, _ in self.terms]

    def coeff(self, e: ExpVec) -> Cyclotomic:
        for ee, c in self.terms:
            if ee == e:
                return c
        return Cyclotomic.zero()

    @property
    def denom(self) -> int:
        """lcm of the exponent denominators (1 for the zero series)."""
        dens = [x.denominator for e, _ in self.terms for x in e]
        return lcm(*dens) if dens else 1

    def constant_term(self) -> Cyclotomic:
        return self.coeff(zero_vec(self.dim))

    def is_rational(self) -> bool:
        return all(c.is_rational() for _, c in self.terms)

    def has_integral_support(self) -> bool:
        return all(x.denominator == 1 for e, _ in self.terms for x in e)

    # -- ring operations --------------------------------------------------

    def __add__(self, other: "FracSeries") -> "FracSeries":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return FracSeries(self.dim, list(self.terms) + list(other.terms))

    def __neg__(self) -> "FracSeries":
        return FracSeries(self.dim, [(e, -c) for e, c in self.terms])

    def __sub__(self, other: "FracSeries") -> "FracSeries":
        return self + (-other)

    def __mul__(self, other) -> "FracSeries":
        if not isinstance(other, FracSeries):
            other = FracSeries(self.dim, [(zero_vec(self.dim), other)])
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        acc: dict[ExpVec, Cyclotomic] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = vadd(e1, e2)
                c = c1 * c2
                if e in acc:
                    c = acc[e] + c
                if c.is_zero():
                    acc.pop(e, None)
                else:
                    acc[e] = c
        return FracSeries(self.dim, acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "FracSeries":
        if n < 0:
            raise ValueError("negative power of a series")
        out = FracSeries.one(self.dim)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def scale_exponents(self, shift: ExpVec) -> "FracSeries":
        return FracSeries(self.dim, [(vadd(e, shift), c)
                                     for e, c in self.terms])

    def __eq__(self, other):
        return (isinstance(other, FracSeries) and self.dim == other.dim
                and self.terms == other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dim, self.terms))
        return self._hash

    def __repr__(self):
        if self.is_zero():
            return "FracSeries(0)"
        bits = []
        for e, c in self.terms:
            mono = "*".join(f"X{i + 1}^{x}" for i, x in enumerate(e) if x)
            bits.append(f"({c!r}){'*' + mono if mono else ''}")
        return " + ".join(bits)

    # -- substitutions ----------------------------------------------------

    def substitute_axis(self, values: dict[int, Fraction]) -> "FracSeries":
        """Set the chosen variables to rational constants.

        Every exponent of a substituted variable must be an integer, so
        that the substituted power is rational.
        """
        keep = [i for i in range(self.dim) if i not in values]
        out: list = []
        for e, c in self.terms:
            scalar = Fraction(1)
            for i, val in values.items():
                exp = e[i]
                if exp.denominator != 1:
                    raise ValueError(
                        f"fractional exponent {exp} on substituted axis {i}")
                scalar *= Fraction(val) ** int(exp)
            if scalar == 0:
                continue
            out.append((tuple(e[i] for i in keep), c * scalar))
        return FracSeries(len(keep), out)


def series_add(a: FracSeries, b: FracSeries) -> FracSeries:
    return a + b


def series_mul(a: FracSeries, b: FracSeries) -> FracSeries:
    return a * b


# -- Newton polyhedra ---------------------------------------------------

class NewtonPolyhedron:
    """Vertex set of conv(support + R_+^d), vertices pairwise incomparable."""

    __slots__ = ("dim", "vertices")

    def __init__(self, dim: int, vertices):
        self.dim = dim
        self.vertices = tuple(sorted(set(map(tuple, vertices))))

    def __eq__(self, other):
        return (isinstance(other, NewtonPolyhedron) and self.dim == other.dim
                and self.vertices == other.vertices)

    def __hash__(self):
        return hash((self.dim, self.vertices))

    def __repr__(self):
        return f"NewtonPolyhedron({list(self.vertices)})"

    def contains(self, p: ExpVec) -> bool:
        """Exact membership of a point in conv(vertices) + R_+^d."""
        return _point_in_upper_hull(tuple(map(Fraction, p)),
                                    list(self.vertices))


def _fm_strict_feasible(rows: list[tuple[Fraction, ...]]) -> bool:
    """Feasibility of the homogeneous strict system row . w > 0 for all rows.

    Decided by Fourier-Motzkin elimination; applicable because every
    constraint here is strict and homogeneous.
    """
    if any(not any(r) for r in rows):
        return False  # a 0 > 0 constraint
    nvars = len(rows[0]) if rows else 0
    current = set(rows)
    for var in range(nvars - 1, -1, -1):
        pos, neg, rest = [], [], set()
        for r in current:
            if r[var] > 0:
                pos.append(r)
            elif r[var] < 0:
                neg.append(r)
            else:
                rest.add(r)
        for p, n in itertools.product(pos, neg):
            combo = tuple(p[i] * (-n[var]) + n[i] * p[var]
                          for i in range(var))
            if not any(combo):
                return False
            rest.add(_normalize_row(combo))
        current = rest
    return True


def _normalize_row(row: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    scale = None
    for c in row:
        if c:
            scale = 1 / abs(c)
            break
    return tuple(c * scale for c in row) if scale else row


def vertices_of_support(points) -> list[ExpVec]:
    """Vertices of conv(points + R_+^d) among the given points."""
    pts = minimal_elements(points)
    if len(pts) == 1:
        return pts
    dim = len(pts[0])
    out = []
    for p in pts:
        rows = [tuple(unit) for unit in _unit_rows(dim)]
        rows += [vsub(q, p) for q in pts if q != p]
        if _fm_strict_feasible(rows):
            out.append(p)
    return out


def _unit_rows(dim: int):
    for i in range(dim):
        yield tuple(Fraction(int(j == i)) for j in range(dim))


def _point_in_upper_hull(p: ExpVec, gens: list[ExpVec]) -> bool:
    """p in conv(gens) + R_+^d, decided through the dual weight system.

    The point is outside exactly when some weight w >= 0 with sum(w) = 1
    puts p strictly below the hull; testing p as a "vertex" of the set
    gens + [p] is equivalent for minimal p, so reuse the strict system
    with non-strictness folded in: p is in the hull iff no w > 0 has
    <w, g - p> > 0 for every generator g.
    """
    if any(vleq(g, p) for g in gens):
        return True
    rows = [tuple(unit) for unit in _unit_rows(len(p))]
    rows += [vsub(g, p) for g in gens]
    return not _fm_strict_feasible(rows)


def newton_polyhedron(eta: FracSeries) -> NewtonPolyhedron:
    if eta.is_zero():
        raise EmptySeries("zero series has no Newton polyhedron")
    return NewtonPolyhedron(eta.dim, vertices_of_support(eta.support()))


def dominating_exponent(eta: FracSeries) -> ExpVec | None:
    """The exponent m when eta factors as X^m * (unit), else None.

    Requires every support exponent in m + R_+^d and the monomial X^m
    itself present with nonzero coefficient.
    """
    if eta.is_zero():
        raise EmptySeries("zero series has no dominating exponent")
    support = eta.support()
    m = tuple(min(e[i] for e in support) for i in range(eta.dim))
    return m if m in set(support) else None


def reduced_newton_polyhedron(eta: FracSeries, keep) -> NewtonPolyhedron:
    """Newton polyhedron of eta viewed as a series in the kept variables."""
    keep = sorted(keep)
    _check_keep(eta.dim, keep)
    if eta.is_zero():
        raise EmptySeries("zero series has no Newton polyhedron")
    projected = {tuple(e[i] for i in keep) for e in eta.support()}
    return NewtonPolyhedron(len(keep), vertices_of_support(projected))


def reduced_dominating_exponent(eta: FracSeries, keep) -> ExpVec | None:
    """Dominating exponent with respect to the kept variables, or None.

    Present when the reduced polyhedron has a single vertex m and the
    monomial carrying kept-exponent m with all dropped exponents zero
    appears in the series (the coefficient series of the kept-monomial
    has nonzero value once the dropped variables are set to zero).
    """
    keep = sorted(keep)
    _check_keep(eta.dim, keep)
    if eta.is_zero():
        raise EmptySeries("zero series has no dominating exponent")
    poly = reduced_newton_polyhedron(eta, keep)
    if len(poly.vertices) != 1:
        return None
    m = poly.vertices[0]
    dropped = [i for i in range(eta.dim) if i not in keep]
    for e, _ in eta.terms:
        if tuple(e[i] for i in keep) == m and all(e[i] == 0 for i in dropped):
            return m
    return None


def _check_keep(dim: int, keep) -> None:
    if not keep:
        raise ValueError("empty coordinate selection")
    if any(i < 0 or i >= dim for i in keep) or len(set(keep)) != len(keep):
        raise ValueError(f"bad coordinate selection {keep}")


def hull_of_sum_check(parts: list[FracSeries]) -> bool:
    """Oracle: the sum's polyhedron is generated by the union of vertices.

    Precondition: the parts' vertex sets are pairwise disjoint.
    """
    polys = [newton_polyhedron(p) for p in parts]
    for a, b in itertools.combinations(polys, 2):
        if set(a.vertices) & set(b.vertices):
            raise PreconditionViolated("vertex sets intersect")
    total = parts[0]
    for p in parts[1:]:
        total = total + p
    union_vertices = {v for p in polys for v in p.vertices}
    expected = NewtonPolyhedron(parts[0].dim,
                                vertices_of_support(union_vertices))
    return newton_polyhedron(total) == expected


# -- unit twists ---------------------------------------------------------

def unit_twist(eta: FracSeries, units: dict[int, FracSeries],
               keep=None) -> FracSeries:
    """Substitute X_k <- X_k * u_k for the kept variables.

    Every unit must have a nonzero constant term.  When all kept
    exponents are integers the substitution is a finite product and the
    result is exact.  With fractional kept exponents the literal
    substitution has infinite support (a binomial series); the result is
    then truncated at a cutoff just beyond the original support.  The
    truncation is harmless for polyhedron computations: every omitted
    monomial componentwise dominates a retained support point, so full
    and reduced Newton polyhedra of the returned series are still exact.
    """
    if keep is None:
        keep = sorted(units)
    keep = sorted(keep)
    _check_keep(eta.dim, keep)
    active = []
    for k in keep:
        u = units.get(k)
        if u is None or u == FracSeries.one(eta.dim):
            continue
        if u.dim != eta.dim:
            raise ValueError("unit dimension mismatch")
        if u.constant_term().is_zero():
            raise NotAUnit(f"unit for axis {k} has zero constant term")
        active.append(k)
    exact = all(e[k].denominator == 1 for e, _ in eta.terms for k in active)
    cutoff = None if exact else _twist_cutoff(eta)
    out = FracSeries.zero(eta.dim)
    for e, c in eta.terms:
        term = FracSeries(eta.dim, [(e, c)])
        for k in active:
            power = _unit_power(units[k], e[k], cutoff)
            term = _truncate(term * power, cutoff)
        out = out + term
    return out


def _twist_cutoff(eta: FracSeries) -> ExpVec:
    support = eta.support()
    dim = eta.dim
    return tuple(max(e[i] for e in support) + 1 for i in range(dim))


def _truncate(s: FracSeries, cutoff: ExpVec | None) -> FracSeries:
    if cutoff is None:
        return s
    return FracSeries(s.dim, [(e, c) for e, c in s.terms if vleq(e, cutoff)])


def _unit_power(u: FracSeries, alpha: Fraction,
                cutoff: ExpVec | None) -> FracSeries:
    """u**alpha for rational alpha >= 0, exact up to the cutoff.

    Integral alpha gives the exact finite power.  Otherwise the unit is
    written c*(1 + w) and the binomial series is expanded; c**alpha must
    be rational, which holds in every use here (c = 1 for canonical
    roots and semiroot coefficients).
    """
    if alpha == 0:
        return FracSeries.one(u.dim)
    if alpha.denominator == 1:
        return u ** int(alpha)
    assert cutoff is not None
    c = u.constant_term()
    if not c.is_rational():
        raise NotAUnit("fractional power of a non-rational constant term")
    c_alpha = _rational_power(c.as_rational(), alpha)
    w = _truncate((u * Cyclotomic.rational(1 / c.as_rational())) -
                  FracSeries.one(u.dim), cutoff)
    out = FracSeries.one(u.dim)
    w_pow = FracSeries.one(u.dim)
    coeff = Fraction(1)
    n = 0
    while True:
        n += 1
        coeff = coeff * (alpha - (n - 1)) / n
        w_pow = _truncate(w_pow * w, cutoff)
        if w_pow.is_zero() or coeff == 0:
            break
        out = out + w_pow * Cyclotomic.rational(coeff)
    return out * Cyclotomic.rational(c_alpha)


def _rational_power(base: Fraction, alpha: Fraction) -> Fraction:
    if base <= 0:
        raise NotAUnit(f"cannot raise {base} to power {alpha} exactly")
    num = _exact_root(base.numerator, alpha.denominator)
    den = _exact_root(base.denominator, alpha.denominator)
    if num is None or den is None:
        raise NotAUnit(f"{base}^{alpha} is irrational")
    return Fraction(num, den) ** alpha.numerator


def _exact_root(n: int, k: int) -> int | None:
    r = round(n ** (1 / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** k == n:
            return cand
    return None
