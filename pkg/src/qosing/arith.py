"""Exact vector and lattice arithmetic over the rationals.

Exponent vectors are plain tuples of ``fractions.Fraction``; lattices are
full-rank subgroups of Q^d held in a canonical Hermite normal form, so two
lattices are equal as groups exactly when their basis matrices are equal.

HNF convention: the basis matrix is lower triangular with positive diagonal
and the entries below the diagonal reduced into ``[0, pivot)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .errors import NoMultiple, NotASublattice, RankDeficient

ExpVec = tuple[Fraction, ...]


class _Infinity:
    """Order sentinel above every rational; serialized as "inf"."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __gt__(self, other):
        return not isinstance(other, _Infinity)

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, _Infinity)

    def __repr__(self):
        return "inf"


INFINITY = _Infinity()


# -- vector helpers -----------------------------------------------------

def vec(*coords) -> ExpVec:
    return tuple(Fraction(c) for c in coords)


def vadd(a: ExpVec, b: ExpVec) -> ExpVec:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vsub(a: ExpVec, b: ExpVec) -> ExpVec:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vscale(k, a: ExpVec) -> ExpVec:
    k = Fraction(k)
    return tuple(k * x for x in a)


def vdot(a: ExpVec, b: ExpVec) -> Fraction:
    return sum((x * y for x, y in zip(a, b, strict=True)), Fraction(0))


def vleq(a: ExpVec, b: ExpVec) -> bool:
    """Componentwise partial order a <= b."""
    return all(x <= y for x, y in zip(a, b, strict=True))


def vlt(a: ExpVec, b: ExpVec) -> bool:
    """Strict componentwise order: a <= b and a != b."""
    return vleq(a, b) and a != b

def is_nonneg(a: ExpVec) -> bool:
    return all(x >= 0 for x in a)


def is_integral(a: ExpVec) -> bool:
    return all(x.denominator == 1 for x in a)


def zero_vec(dim: int) -> ExpVec:
    return (Fraction(0),) * dim


def unit_vec(dim: int, i: int) -> ExpVec:
    return tuple(Fraction(1 if j == i else 0) for j in range(dim))


def minimal_elements(points) -> list[ExpVec]:
    """The componentwise-minimal elements of a finite set of vectors."""
    pts = sorted(set(points))
    out = []
    for p in pts:
        if not any(vlt(q, p) for q in pts if q != p):
            out.append(p)
    return out


# -- exact matrix helpers (row-major lists of tuples) --------------------

def mat_det(rows) -> Fraction:
    n = len(rows)
    m = [list(map(Fraction, r)) for r in rows]
    det = Fraction(1)
    for j in range(n):
        piv = next((i for i in range(j, n) if m[i][j] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != j:
            m[j], m[piv] = m[piv], m[j]
            det = -det
        det *= m[j][j]
        inv = 1 / m[j][j]
        for i in range(j + 1, n):
            if m[i][j] != 0:
                f = m[i][j] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[j])]
    return det


def mat_inv(rows) -> list[ExpVec]:
    n = len(rows)
    m = [list(map(Fraction, r)) + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(rows)]
    for j in range(n):
        piv = next((i for i in range(j, n) if m[i][j] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[j], m[piv] = m[piv], m[j]
        inv = 1 / m[j][j]
        m[j] = [a * inv for a in m[j]]
        for i in range(n):
            if i != j and m[i][j] != 0:
                f = m[i][j]
                m[i] = [a - f * b for a, b in zip(m[i], m[j])]
    return [tuple(r[n:]) for r in m]


def mat_mul(a, b) -> list[ExpVec]:
    cols = list(zip(*b))
    return [tuple(vdot(tuple(r), tuple(c)) for c in cols) for r in a]


def solve_left(rows, target: ExpVec) -> ExpVec | None:
    """Solve x @ rows = target exactly; None when target is off the span.

    ``rows`` may have fewer rows than columns (independent rows assumed
    when square systems are expected; redundancy is detected honestly).
    """
    # Gaussian elimination on the transposed system rows^T x^T = target^T.
    m = len(rows)
    n = len(rows[0]) if rows else 0
    aug = [[Fraction(rows[i][j]) for i in range(m)] + [Fraction(target[j])]
           for j in range(n)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [a * inv for a in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append((r, c))
        r += 1
    for i in range(r, n):
        if aug[i][m] != 0:
            return None
    x = [Fraction(0)] * m
    for row, col in pivots:
        x[col] = aug[row][m]
    return tuple(x)


# -- integer normal forms ------------------------------------------------

def hnf_int(rows: list[list[int]], dim: int) -> list[list[int]]:
    """Canonical lower-triangular HNF basis of the row span, rank dim."""
    pool = [list(r) for r in rows if any(r)]
    basis: list[list[int] | None] = [None] * dim
    for j in range(dim - 1, -1, -1):
        live = [r for r in pool if r[j] != 0]
        if not live:
            raise RankDeficient(f"no generator hits coordinate {j}")
        # gcd-combine rows until one carries the column-j pivot
        piv = live[0]
        for r in live[1:]:
            while r[j] != 0:
                if abs(piv[j]) > abs(r[j]):
                    piv, r = r, piv
                q = r[j] // piv[j]
                for k in range(dim):
                    r[k] -= q * piv[k]
        pool = [r for r in pool if r is not piv and any(r)]
        # clear column j from the remaining pool
        for r in pool:
            if r[j] != 0:
                assert r[j] % piv[j] == 0
                q = r[j] // piv[j]
                for k in range(dim):
                    r[k] -= q * piv[k]
        pool = [r for r in pool if any(r)]
        if piv[j] < 0:
            piv = [-x for x in piv]
        basis[j] = piv
    rows_out = [list(b) for b in basis]  # type: ignore[arg-type]
    # reduce entries below the diagonal into [0, pivot)
    for i in range(dim):
        for j in range(i - 1, -1, -1):
            q = rows_out[i][j] // rows_out[j][j]
            if q:
                for k in range(dim):
                    rows_out[i][k] -= q * rows_out[j][k]
    return rows_out


def snf_int(mat: list[list[int]]):
    """Diagonalize an integer matrix: returns (d, u, v) with u*m*v = diag(d).

    ``u`` and ``v`` are unimodular and the diagonal is nonnegative.  The
    entries are not sorted into divisibility order; every consumer here
    (quotient enumeration, regularity tests) only needs a diagonal form.
    """
    m = [list(r) for r in mat]
    rows, cols = len(m), len(m[0])
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def row_op(i, k, q):  # row i -= q * row k
        for t in range(cols):
            m[i][t] -= q * m[k][t]
        for t in range(rows):
            u[i][t] -= q * u[k][t]

    def col_op(j, k, q):  # col j -= q * col k
        for t in range(rows):
            m[t][j] -= q * m[t][k]
        for t in range(cols):
            v[t][j] -= q * v[t][k]

    n = min(rows, cols)
    for p in range(n):
        while True:
            entries = [(abs(m[i][j]), i, j) for i in range(p, rows)
                       for j in range(p, cols) if m[i][j] != 0]
            if not entries:
                break
            _, bi, bj = min(entries)
            if bi != p:
                m[p], m[bi] = m[bi], m[p]
                u[p], u[bi] = u[bi], u[p]
            if bj != p:
                for t in range(rows):
                    m[t][p], m[t][bj] = m[t][bj], m[t][p]
                for t in range(cols):
                    v[t][p], v[t][bj] = v[t][bj], v[t][p]
            for i in range(p + 1, rows):
                if m[i][p] != 0:
                    row_op(i, p, m[i][p] // m[p][p])
            for j in range(p + 1, cols):
                if m[p][j] != 0:
                    col_op(j, p, m[p][j] // m[p][p])
            if all(m[i][p] == 0 for i in range(p + 1, rows)) and \
                    all(m[p][j] == 0 for j in range(p + 1, cols)):
                break
        if m[p][p] < 0:
            for t in range(cols):
                m[p][t] = -m[p][t]
            for t in range(rows):
                u[p][t] = -u[p][t]
    d = [m[i][i] for i in range(n)]
    return d, u, v


# -- lattices ------------------------------------------------------------

@dataclass(frozen=True)
class Lattice:
    """Full-rank subgroup of Q^d with canonical HNF row basis."""

    dim: int
    basis: tuple[ExpVec, ...]

    def __post_init__(self):
        if len(self.basis) != self.dim:
            raise RankDeficient(
                f"rank {len(self.basis)} basis in dimension {self.dim}")

    @property
    def denominator(self) -> int:
        """lcm clearing every basis entry to an integer."""
        return lcm(*(c.denominator for row in self.basis for c in row))

    def det(self) -> Fraction:
        d = Fraction(1)
        for i in range(self.dim):
            d *= self.basis[i][i]
        return d

    def member(self, v: ExpVec) -> bool:
        """Back-substitution on the lower-triangular HNF basis."""
        if len(v) != self.dim:
            raise ValueError("dimension mismatch")
        rest = list(v)
        for i in range(self.dim - 1, -1, -1):
            c = rest[i] / self.basis[i][i]
            if c.denominator != 1:
                return False
            for k in range(i + 1):
                rest[k] -= c * self.basis[i][k]
        return True

    def coords(self, v: ExpVec) -> ExpVec:
        """Rational coordinates of v in the basis (v = coords @ basis)."""
        out = [Fraction(0)] * self.dim
        rest = list(v)
        for i in range(self.dim - 1, -1, -1):
            c = rest[i] / self.basis[i][i]
            out[i] = c
            for k in range(i + 1):
                rest[k] -= c * self.basis[i][k]
        return tuple(out)

    def to_json(self):
        return {"dim": self.dim,
                "basis": [[str(c) for c in row] for row in self.basis]}


def hnf(rows, dim: int | None = None) -> Lattice:
    """Canonical lattice generated by the given rational row vectors."""
    rows = [tuple(Fraction(c) for c in r) for r in rows]
    if not rows:
        raise RankDeficient("empty generator list")
    if dim is None:
        dim = len(rows[0])
    if any(len(r) != dim for r in rows):
        raise ValueError("mixed dimensions in generator list")
    den = lcm(*(c.denominator for r in rows for c in r)) if rows else 1
    int_rows = [[int(c * den) for c in r] for r in rows]
    h = hnf_int(int_rows, dim)
    basis = tuple(tuple(Fraction(x, den) for x in row) for row in h)
    return Lattice(dim, basis)


def standard_lattice(dim: int) -> Lattice:
    return Lattice(dim, tuple(unit_vec(dim, i) for i in range(dim)))


def lattice_add(lat: Lattice, extra) -> Lattice:
    return hnf(list(lat.basis) + [tuple(map(Fraction, v)) for v in extra],
               lat.dim)


def lattice_index(sub: Lattice, sup: Lattice) -> int:
    """Index |sup/sub| of a checked containment sub <= sup."""
    if sub.dim != sup.dim:
        raise NotASublattice("dimension mismatch")
    for row in sub.basis:
        if not sup.member(row):
            raise NotASublattice(f"{row} escapes the ambient lattice")
    idx = abs(sub.det()) / abs(sup.det())
    assert idx.denominator == 1 and idx >= 1
    return int(idx)


def lattice_member(v: ExpVec, lat: Lattice) -> bool:
    return lat.member(tuple(map(Fraction, v)))


def dual_lattice(lat: Lattice) -> Lattice:
    """{v : <v, u> in Z for all u in lat}, again in canonical form."""
    inv = mat_inv(lat.basis)
    transposed = [tuple(row[i] for row in inv) for i in range(lat.dim)]
    return hnf(transposed, lat.dim)


def min_multiple(v: ExpVec, lat: Lattice) -> int:
    """Least k >= 1 with k*v in lat, via the index of lat in lat + Zv.

    The index computation needs no search bound; the error path guards
    malformed inputs (wrong dimension, zero vector treated as absent).
    """
    v = tuple(map(Fraction, v))
    if len(v) != lat.dim:
        raise NoMultiple("dimension mismatch")
    if lat.member(v):
        return 1
    k = lattice_index(lat, lattice_add(lat, [v]))
    if k < 1 or not lat.member(vscale(k, v)):
        raise NoMultiple(f"no positive multiple of {v} lies in the lattice")
    return k


def smallest_edge_element(lat: Lattice, axis: int) -> ExpVec:
    """Minimal positive multiple c*e_axis lying in the lattice."""
    e = unit_vec(lat.dim, axis)
    x = lat.coords(e)
    # {t : t*x integral} is the cyclic group generated by lcm_j(q_j/|p_j|)
    c = None
    for xj in x:
        if xj == 0:
            continue
        gen = Fraction(xj.denominator, abs(xj.numerator))
        c = gen if c is None else _frac_lcm(c, gen)
    assert c is not None
    return vscale(c, e)


def _frac_lcm(a: Fraction, b: Fraction) -> Fraction:
    return Fraction(lcm(a.numerator, b.numerator),
                    gcd(a.denominator, b.denominator))


def primitive_int_vector(v: ExpVec) -> tuple[int, ...]:
    """Scale a nonzero rational vector to the primitive integer direction."""
    den = lcm(*(c.denominator for c in v))
    ints = [int(c * den) for c in v]
    g = gcd(*ints)
    return tuple(x // g for x in ints)


def quotient_transversal(sub: Lattice, dim: int) -> list[ExpVec]:
    """Coset representatives of Z^dim / sub (sub integral, finite index).

    Lifted through the Smith normal form of the inclusion, so the list
    enumerates the quotient group exactly once.
    """
    den = sub.denominator
    if den != 1:
        raise ValueError("quotient only defined for integral sublattices")
    mat = [[int(c) for c in row] for row in sub.basis]
    d, _, v = snf_int(mat)
    vinv = mat_inv([tuple(map(Fraction, r)) for r in v])
    reps = []
    for combo in itertools.product(*(range(k) for k in d)):
        x = mat_mul([tuple(map(Fraction, combo))], vinv)[0]
        assert is_integral(x)
        reps.append(tuple(Fraction(int(c)) for c in x))
    return reps
