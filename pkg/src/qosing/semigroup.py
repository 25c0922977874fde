"""Semigroups attached to a branch: generation, decomposition, recovery.

The full semigroup has rank d and generators N^d + N*Abar_1 + ... +
N*Abar_G; the reduced one lives in rank c' with the truncated generators.
``enumerate_up_to`` is the brute-force oracle every faster decision
procedure is tested against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .arith import (ExpVec, Lattice, lattice_add, min_multiple,
                    minimal_elements, primitive_int_vector, standard_lattice,
                    unit_vec, vadd, vleq, vscale, vsub, zero_vec)
from .branch import Branch, BranchInvariants, derive, reduced_derived
from .errors import (AmbiguousDecomposition, NoUniqueMinimum, NotInLattice,
                     PreconditionViolated)
from .series import _fm_strict_feasible


@dataclass(frozen=True)
class QOSemigroup:
    rank: int
    extras: tuple[ExpVec, ...]       # Abar_1 .. Abar_G (or truncations)
    caps: tuple[int, ...]            # N_1 .. N_G
    tower: tuple[Lattice, ...]       # Z^rank + running extras
    towered: bool                    # caps are level-minimal multiples

    @property
    def units(self) -> tuple[ExpVec, ...]:
        return tuple(unit_vec(self.rank, i) for i in range(self.rank))

    def lattice(self) -> Lattice:
        return self.tower[-1]

    def to_json(self):
        return {
            "rank": self.rank,
            "units": [[str(c) for c in u] for u in self.units],
            "generators": [[str(c) for c in g] for g in self.extras],
            "caps": list(self.caps),
        }


def _build(rank: int, extras, caps) -> QOSemigroup:
    tower = [standard_lattice(rank)]
    towered = True
    for a, cap in zip(extras, caps):
        k = min_multiple(a, tower[-1])
        towered = towered and k == cap
        tower.append(lattice_add(tower[-1], [a]))
    return QOSemigroup(rank, tuple(extras), tuple(caps), tuple(tower),
                       towered)


def gamma(source: Branch | BranchInvariants) -> QOSemigroup:
    """The rank-d semigroup N^d + sum of N*Abar_i."""
    inv = source if isinstance(source, BranchInvariants) else derive(source)
    return _build(inv.branch.dim, inv.derived, inv.indices)


def gamma_reduced(source: Branch | BranchInvariants) -> QOSemigroup:
    """The rank-c' semigroup on the truncated derived generators."""
    inv = source if isinstance(source, BranchInvariants) else derive(source)
    return _build(inv.c_reduced, reduced_derived(inv), inv.indices)


@dataclass(frozen=True)
class Decomposition:
    lattice_part: ExpVec             # A, an integer vector of the base rank
    digits: tuple[int, ...]          # i_0 .. i_{G-1}, 0 <= i_k < N_{k+1}

    def value(self, sg: QOSemigroup) -> ExpVec:
        out = self.lattice_part
        for i, a in zip(self.digits, sg.extras):
            out = vadd(out, vscale(i, a))
        return out


def unique_decompose(u: ExpVec, sg: QOSemigroup) -> Decomposition:
    """The unique capped representation u = A + sum(i_k * Abar_{k+1}).

    Works down the tower: at each level exactly one residue modulo the
    cap lands in the previous lattice.
    """
    u = tuple(Fraction(c) for c in u)
    if not sg.lattice().member(u):
        raise NotInLattice(f"{u} is outside the generated lattice")
    if not sg.towered:
        raise AmbiguousDecomposition(
            "caps are not level-minimal; the capped representation "
            "is not unique for this semigroup")
    digits: list[int] = []
    rest = u
    for k in range(len(sg.extras) - 1, -1, -1):
        hits = [i for i in range(sg.caps[k])
                if sg.tower[k].member(vsub(rest, vscale(i, sg.extras[k])))]
        if len(hits) != 1:
            raise AmbiguousDecomposition(
                f"level {k + 1} admits {len(hits)} residues for {u}")
        digits.append(hits[0])
        rest = vsub(rest, vscale(hits[0], sg.extras[k]))
    digits.reverse()
    dec = Decomposition(rest, tuple(digits))
    assert dec.value(sg) == u
    return dec


def membership(u: ExpVec, sg: QOSemigroup) -> bool:
    """Decide u in the semigroup.

    Fast path: capped decomposition with nonnegative lattice part.  The
    completeness of this test is cross-validated against the brute-force
    enumeration in the test suite; semigroups without level-minimal caps
    fall back to bounded coefficient search directly.
    """
    u = tuple(Fraction(c) for c in u)
    if any(c < 0 for c in u):
        return False
    if not sg.lattice().member(u):
        return False
    if sg.towered:
        dec = unique_decompose(u, sg)
        return all(c >= 0 for c in dec.lattice_part)
    return u in enumerate_up_to(sg, u)


def _coeff_bound(gen: ExpVec, bound: ExpVec) -> int:
    """Largest k with k * gen <= bound componentwise (gen nonzero >= 0)."""
    best = None
    for g, b in zip(gen, bound):
        if g > 0:
            k = int(b / g)
            best = k if best is None else min(best, k)
    if best is None:
        raise ValueError("zero generator admits no coefficient bound")
    return max(best, 0)


def enumerate_up_to(sg: QOSemigroup, bound: ExpVec) -> list[ExpVec]:
    """All semigroup values <= bound componentwise, sorted; brute force."""
    bound = tuple(Fraction(c) for c in bound)
    if any(c < 0 for c in bound):
        raise ValueError("negative bound")
    out: set[ExpVec] = set()
    ranges = [range(_coeff_bound(a, bound) + 1) for a in sg.extras]
    for digits in itertools.product(*ranges):
        base = zero_vec(sg.rank)
        for i, a in zip(digits, sg.extras):
            base = vadd(base, vscale(i, a))
        if not vleq(base, bound):
            continue
        room = vsub(bound, base)
        for units in itertools.product(
                *(range(int(room[i]) + 1) for i in range(sg.rank))):
            out.add(vadd(base, tuple(map(Fraction, units))))
    return sorted(out)


def default_bound(sg: QOSemigroup) -> ExpVec:
    """Heuristic enumeration bound: twice the last generator plus units.

    Contains every generator of the corpus semigroups; configurable by
    callers that know better.
    """
    top = sg.extras[-1] if sg.extras else zero_vec(sg.rank)
    return vadd(vscale(2, top), tuple(Fraction(2) for _ in range(sg.rank)))


# -- abstract-generator recovery -----------------------------------------

def _extreme_directions(points: list[ExpVec]) -> list[tuple[int, ...]]:
    """Extreme rays of the cone spanned by the points (primitive, sorted).

    A direction is extreme when some weight vector vanishes on it while
    staying strictly positive on every other direction; decided by the
    same strict Fourier-Motzkin engine used for polyhedron vertices,
    applied in the hyperplane of the candidate.
    """
    dirs = sorted({primitive_int_vector(p) for p in points
                   if any(c != 0 for c in p)})
    if len(dirs) <= 1:
        return dirs
    out = []
    for d in dirs:
        # normalize everything onto the affine slice through d, turning
        # "d outside cone(others)" into "point outside conv(others)",
        # which holds iff a hyperplane through d strictly separates
        others = _normalize_to_level([o for o in dirs if o != d], d)
        base = tuple(map(Fraction, d))
        rows = [vsub(o, base) for o in others]
        if _fm_strict_feasible(rows):
            out.append(d)
    return out


def _normalize_to_level(dirs, base):
    """Scale directions into the affine chart where base has height 1."""
    base = tuple(map(Fraction, base))
    total = sum(base)
    out = []
    for o in dirs:
        o = tuple(map(Fraction, o))
        s = sum(o)
        out.append(tuple(c * total / s for c in o))
    return out


def recover_generators(elements, bound: ExpVec):
    """Units and extras of an abstract downward-saturated fragment.

    Units are the smallest fragment elements on the extreme rays of the
    spanned cone; the extras follow greedily as the unique smallest
    fragment element outside the running subsemigroup.  Ties abort with
    NoUniqueMinimum rather than guessing.
    """
    pts = sorted({tuple(Fraction(c) for c in e) for e in elements})
    bound = tuple(Fraction(c) for c in bound)
    nonzero = [p for p in pts if any(p)]
    if not nonzero:
        return (), ()
    rank = len(pts[0])
    rays = _extreme_directions(nonzero)
    units = []
    for ray in rays:
        on_ray = [p for p in nonzero
                  if primitive_int_vector(p) == ray]
        units.append(min(on_ray))
    units.sort()
    extras: list[ExpVec] = []
    while True:
        reachable = set(_span_fragment(units, extras, bound))
        outside = [p for p in pts if p not in reachable]
        if not outside:
            break
        minima = minimal_elements(outside)
        if len(minima) != 1:
            raise NoUniqueMinimum(
                f"{len(minima)} incomparable minimal candidates: {minima}")
        extras.append(minima[0])
    return tuple(units), tuple(extras)


def _span_fragment(units, extras, bound: ExpVec) -> list[ExpVec]:
    """Values of the semigroup generated by arbitrary generators, <= bound."""
    gens = list(units) + list(extras)
    out: set[ExpVec] = {zero_vec(len(bound))}
    frontier = [zero_vec(len(bound))]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = vadd(p, g)
                if vleq(q, bound) and q not in out:
                    out.add(q)
                    nxt.append(q)
        frontier = nxt
    return sorted(out)


def check_fragment_saturated(elements, sg: QOSemigroup, bound: ExpVec):
    """Test harness helper: fragment == enumerate_up_to(sg, bound)."""
    expect = set(enumerate_up_to(sg, bound))
    got = {tuple(Fraction(c) for c in e) for e in elements}
    if expect != got:
        raise PreconditionViolated("fragment is not downward-saturated")
    return True

