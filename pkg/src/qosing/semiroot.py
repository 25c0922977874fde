"""Semiroot systems: conjugate products, adic expansions, witnesses.

The canonical root of a branch is xi = X^{A_1} + ... + X^{A_G}.  The k-th
semiroot is the product of (Y - tau(xi_k)) over the conjugates tau of the
truncation xi_k = X^{A_1} + ... + X^{A_k} under the weight-lattice action

    v . X^u = exp(2*pi*i*<v, u>) * X^u,

with v running over a transversal of W_0 / W_k.  Each semiroot has degree
N_1...N_k, integer exponents and rational coefficients, and evaluates on
xi to a series with dominating exponent Abar_{k+1}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .arith import (ExpVec, dual_lattice, is_integral, quotient_transversal,
                    vadd, vdot, vscale, zero_vec)
from .branch import Branch, BranchInvariants, derive
from .cyclotomic import Cyclotomic, unit_root_for_pairing
from .errors import InIdeal, PreconditionViolated, ValuationMismatch
from .series import (FracSeries, dominating_exponent, newton_polyhedron,
                     reduced_newton_polyhedron, vertices_of_support)


class SeriesPoly:
    """Polynomial in Y with fractional-series coefficients."""

    __slots__ = ("dim", "coeffs")

    def __init__(self, dim: int, coeffs):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        if any(c.dim != dim for c in coeffs):
            raise ValueError("coefficient dimension mismatch")
        self.dim = dim
        self.coeffs = tuple(coeffs)

    @staticmethod
    def zero(dim: int) -> "SeriesPoly":
        return SeriesPoly(dim, ())

    @staticmethod
    def variable(dim: int) -> "SeriesPoly":
        return SeriesPoly(dim, (FracSeries.zero(dim), FracSeries.one(dim)))

    @staticmethod
    def constant(series: FracSeries) -> "SeriesPoly":
        return SeriesPoly(series.dim, (series,))

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_unitary(self) -> bool:
        return (not self.is_zero()
                and self.coeffs[-1] == FracSeries.one(self.dim))

    def coeff(self, j: int) -> FracSeries:
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return FracSeries.zero(self.dim)

    def __add__(self, other: "SeriesPoly") -> "SeriesPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return SeriesPoly(self.dim,
                          [self.coeff(j) + other.coeff(j) for j in range(n)])

    def __neg__(self) -> "SeriesPoly":
        return SeriesPoly(self.dim, [-c for c in self.coeffs])

    def __sub__(self, other: "SeriesPoly") -> "SeriesPoly":
        return self + (-other)

    def __mul__(self, other) -> "SeriesPoly":
        if isinstance(other, FracSeries):
            other = SeriesPoly.constant(other)
        if self.is_zero() or other.is_zero():
            return SeriesPoly.zero(self.dim)
        out = [FracSeries.zero(self.dim)
               for _ in range(self.degree + other.degree + 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return SeriesPoly(self.dim, out)

    def __pow__(self, n: int) -> "SeriesPoly":
        out = SeriesPoly.constant(FracSeries.one(self.dim))
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return (isinstance(other, SeriesPoly) and self.dim == other.dim
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.dim, self.coeffs))

    def __repr__(self):
        if self.is_zero():
            return "SeriesPoly(0)"
        return " + ".join(f"({c!r})*Y^{j}" if j else f"({c!r})"
                          for j, c in enumerate(self.coeffs)
                          if not c.is_zero())

    def evaluate(self, xi: FracSeries) -> FracSeries:
        out = FracSeries.zero(self.dim)
        for c in reversed(self.coeffs):
            out = out * xi + c
        return out


def evaluate(h: SeriesPoly, xi: FracSeries) -> FracSeries:
    return h.evaluate(xi)


def euclid_div(h: SeriesPoly, g: SeriesPoly):
    """Exact division h = q*g + r with deg r < deg g; g must be unitary."""
    if not g.is_unitary():
        raise ValueError("divisor must be unitary")
    dim = h.dim
    q_coeffs = [FracSeries.zero(dim)] * max(h.degree - g.degree + 1, 0)
    rest = h
    while not rest.is_zero() and rest.degree >= g.degree:
        shift = rest.degree - g.degree
        lead = rest.coeffs[-1]
        q_coeffs[shift] = q_coeffs[shift] + lead
        sub = [FracSeries.zero(dim)] * shift + \
            [lead * c for c in g.coeffs]
        rest = rest - SeriesPoly(dim, sub)
    return SeriesPoly(dim, q_coeffs), rest


# -- canonical roots and conjugates ---------------------------------------

def canonical_root(branch: Branch) -> FracSeries:
    """xi = X^{A_1} + ... + X^{A_G}, all coefficients 1."""
    return FracSeries(branch.dim, [(a, 1) for a in branch.exponents])


def conjugates(xi_k: FracSeries, inv: BranchInvariants,
               k: int, transversal=None) -> list[FracSeries]:
    """The N_1...N_k distinct images of xi_k under the weight action.

    Representatives of W_0 / W_k act monomial-wise through the pairing
    root of unity; any transversal yields the same set.
    """
    if k == 0:
        return [FracSeries.zero(inv.branch.dim)]
    w_k = dual_lattice(inv.tower[k])
    if transversal is None:
        transversal = quotient_transversal(w_k, inv.branch.dim)
    order = inv.degree
    out = []
    for v in transversal:
        terms = []
        for e, c in xi_k.terms:
            zeta = unit_root_for_pairing(order, vdot(v, e))
            terms.append((e, c * zeta))
        out.append(FracSeries(xi_k.dim, terms))
    if len(set(out)) != len(out):
        raise PreconditionViolated("conjugate images collide; the "
                                   "truncation escapes its level")
    return out


@dataclass(frozen=True)
class SemirootSystem:
    invariants: BranchInvariants
    xi: FracSeries
    truncations: tuple[FracSeries, ...]       # xi_0 .. xi_G
    semiroots: tuple[SeriesPoly, ...]         # f_0 .. f_G
    values: tuple[FracSeries, ...]            # f_k(xi), zero for k = G

    @property
    def branch(self) -> Branch:
        return self.invariants.branch

    def value_powers(self, k: int, top: int) -> list[FracSeries]:
        """Cached-free small table of f_k(xi)**j for j = 0..top."""
        out = [FracSeries.one(self.branch.dim)]
        for _ in range(top):
            out.append(out[-1] * self.values[k])
        return out


def build_semiroots(source: Branch | BranchInvariants) -> SemirootSystem:
    """Assemble the canonical semiroot system of the branch.

    Asserts the structural facts used downstream: every coefficient has
    integer exponents and rational values, and f_k(xi) has dominating
    exponent Abar_{k+1} for k < G.
    """
    inv = source if isinstance(source, BranchInvariants) else derive(source)
    branch = inv.branch
    dim = branch.dim
    xi = canonical_root(branch)
    truncations = [FracSeries(dim, [(a, 1) for a in branch.exponents[:k]])
                   for k in range(branch.G + 1)]
    semiroots = []
    values = []
    for k in range(branch.G + 1):
        poly = SeriesPoly.constant(FracSeries.one(dim))
        for tau in conjugates(truncations[k], inv, k):
            factor = SeriesPoly(dim, [-tau, FracSeries.one(dim)])
            poly = poly * factor
        expected_deg = 1
        for n_i in inv.indices[:k]:
            expected_deg *= n_i
        assert poly.degree == expected_deg
        for c in poly.coeffs:
            if not (c.has_integral_support() and c.is_rational()):
                raise ValuationMismatch(
                    f"semiroot {k} has non-analytic coefficients: {poly!r}")
        value = poly.evaluate(xi)
        if k < branch.G:
            de = None if value.is_zero() else dominating_exponent(value)
            if de != inv.derived[k]:
                raise ValuationMismatch(
                    f"f_{k}(xi) has exponent {de}, expected "
                    f"{inv.derived[k]}")
        else:
            if not value.is_zero():
                raise ValuationMismatch("f_G does not annihilate the root")
        semiroots.append(poly)
        values.append(value)
    return SemirootSystem(inv, xi, tuple(truncations), tuple(semiroots),
                          tuple(values))


# -- adic expansion --------------------------------------------------------

@dataclass(frozen=True)
class AdicExpansion:
    support: tuple[tuple[tuple[int, ...], FracSeries], ...]

    def coefficients(self) -> dict[tuple[int, ...], FracSeries]:
        return dict(self.support)


def adic_expand(h: SeriesPoly, sys: SemirootSystem) -> AdicExpansion:
    """Unique expansion h = sum c_{i_0..i_G} f_0^{i_0} ... f_G^{i_G}.

    Divides repeatedly by f_G, then recurses on the quotients with the
    lower semiroots; verifies the digit caps and reassembles exactly.
    """
    if h.is_zero():
        raise ValueError("cannot expand the zero polynomial")
    G = sys.branch.G
    caps = sys.invariants.indices

    def expand_level(poly: SeriesPoly, k: int):
        if poly.is_zero():
            return {}
        if k < 0:
            assert poly.degree == 0
            return {(): poly.coeffs[0]}
        out = {}
        rest = poly
        power = 0
        while not rest.is_zero():
            rest, rem = euclid_div(rest, sys.semiroots[k])
            if not rem.is_zero():
                for digits, coeff in expand_level(rem, k - 1).items():
                    out[digits + (power,)] = coeff
            power += 1
        return out

    table = expand_level(h, G)
    for digits in table:
        for k in range(G):
            if not 0 <= digits[k] <= caps[k] - 1:
                raise PreconditionViolated(
                    f"digit {digits[k]} exceeds cap at level {k}")
        if digits[G] > h.degree // max(sys.invariants.degree, 1):
            raise PreconditionViolated("top digit exceeds degree bound")
    rebuilt = SeriesPoly.zero(h.dim)
    for digits, coeff in table.items():
        term = SeriesPoly.constant(coeff)
        for k, power in enumerate(digits):
            if power:
                term = term * sys.semiroots[k] ** power
        rebuilt = rebuilt + term
    assert rebuilt == h, "adic reassembly failed"
    return AdicExpansion(tuple(sorted(table.items())))


# -- semigroup witnesses ----------------------------------------------------

def reduce_mod_defining(h: SeriesPoly, sys: SemirootSystem) -> SeriesPoly:
    _, rem = euclid_div(h, sys.semiroots[-1])
    return rem


def term_value(sys: SemirootSystem, digits: tuple[int, ...],
               coeff: FracSeries | None = None) -> FracSeries:
    """Evaluation of c * f_0^{i_0} ... f_{G-1}^{i_{G-1}} on the root."""
    dim = sys.branch.dim
    out = FracSeries.one(dim) if coeff is None else coeff
    for k, power in enumerate(digits):
        if power:
            out = out * sys.values[k] ** power
    return out


def monomial_witness_value(sys: SemirootSystem, m: ExpVec,
                           digits: tuple[int, ...]) -> ExpVec:
    """Dominating exponent of X^m f_0^{i_0} ... f_{G-1}^{i_{G-1}}(xi)."""
    out = tuple(Fraction(c) for c in m)
    for k, power in enumerate(digits):
        out = vadd(out, vscale(power, sys.invariants.derived[k]))
    return out


def semigroup_witness(h: SeriesPoly, sys: SemirootSystem, keep=None):
    """Vertices of the value polyhedron with their attaining adic terms.

    Returns (vertices, witnesses) where witnesses maps each vertex to a
    pair (m, digits) such that X^m f_0^{i_0}...f_{G-1}^{i_{G-1}} takes
    that dominating exponent on the root.  Checks the disjointness of
    the per-term vertex sets before trusting the union.
    """
    rem = reduce_mod_defining(h, sys)
    if rem.is_zero():
        raise InIdeal("polynomial lies in the ideal of the branch")
    expansion = adic_expand(rem, sys)
    dim = sys.branch.dim
    term_vertex_sets = {}
    witnesses = {}
    for digits, coeff in expansion.support:
        assert digits[-1] == 0, "reduction left a top digit"
        low = digits[:-1]
        value = term_value(sys, low, coeff)
        assert not value.is_zero()
        verts = set(newton_polyhedron(value).vertices)
        term_vertex_sets[digits] = verts
        coeff_poly = newton_polyhedron(coeff)
        expected = {monomial_witness_value(sys, m, low)
                    for m in coeff_poly.vertices}
        assert verts <= expected, "term vertices escape monomial witnesses"
        for m in coeff_poly.vertices:
            v = monomial_witness_value(sys, m, low)
            if v in verts:
                witnesses.setdefault(v, (m, low))
    for a, b in itertools.combinations(term_vertex_sets.values(), 2):
        if a & b:
            raise PreconditionViolated(
                "adic term polyhedra share vertices")
    total = h.evaluate(sys.xi)
    if keep is None:
        vertices = newton_polyhedron(total).vertices
        assert set(vertices) <= set(witnesses)
        return vertices, {v: witnesses[v] for v in vertices}
    vertices = reduced_newton_polyhedron(total, keep).vertices
    keep = sorted(keep)
    reduced_witnesses = {}
    for v in vertices:
        full_matches = [w for w in witnesses
                        if tuple(w[i] for i in keep) == v]
        assert full_matches, "reduced vertex without a witness"
        reduced_witnesses[v] = witnesses[min(full_matches)]
    return vertices, reduced_witnesses


def attainable_fragment_witnessed(sys: SemirootSystem, fragment) -> bool:
    """Every fragment element is the value of a monomial witness.

    The witness is reconstructed from the capped decomposition and the
    resulting series' dominating exponent is recomputed from scratch.
    """
    from .semigroup import gamma, unique_decompose

    sg = gamma(sys.invariants)
    dim = sys.branch.dim
    for u in fragment:
        dec = unique_decompose(u, sg)
        if any(c < 0 for c in dec.lattice_part):
            return False
        series = term_value(sys, dec.digits,
                            FracSeries(dim, [(dec.lattice_part, 1)]))
        if dominating_exponent(series) != tuple(u):
            return False
    return True


def vertex_sets_disjoint_and_additive(h: SeriesPoly,
                                      sys: SemirootSystem) -> bool:
    """Adic term polyhedra have disjoint vertex sets and extremize the sum."""
    rem = reduce_mod_defining(h, sys)
    if rem.is_zero():
        raise InIdeal("polynomial lies in the ideal of the branch")
    expansion = adic_expand(rem, sys)
    parts = [term_value(sys, digits[:-1], coeff)
             for digits, coeff in expansion.support]
    vertex_sets = [set(newton_polyhedron(p).vertices) for p in parts]
    for a, b in itertools.combinations(vertex_sets, 2):
        if a & b:
            return False
    total = parts[0]
    for p in parts[1:]:
        total = total + p
    union = {v for vs in vertex_sets for v in vs}
    expected = set(vertices_of_support(union))
    return set(newton_polyhedron(total).vertices) == expected
