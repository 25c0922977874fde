"""Rational cones, fans, star subdivisions and the blow-up tower.

Cones are simplicial, stored by their primitive ray generators inside a
weight lattice; the fans built here all arise from the positive orthant
by iterated star subdivisions, which matches everything the pipeline
needs: the normalization lattice, the orbifold sublattice, the canonical
blow-up fan with its distinguished cones, and the exponent-level
monomial map assembled from them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .arith import (ExpVec, Lattice, dual_lattice, hnf, mat_det, mat_inv,
                    smallest_edge_element, snf_int, solve_left, unit_vec,
                    vadd, vdot, vscale, zero_vec)
from .branch import Branch, BranchInvariants, derive
from .errors import NotInFan, PreconditionViolated
from .series import FracSeries, newton_polyhedron


def _ray_coords(lattice: Lattice, ray: ExpVec) -> tuple[int, ...]:
    coords = lattice.coords(ray)
    if any(c.denominator != 1 for c in coords):
        raise ValueError(f"ray {ray} is not a lattice vector")
    return tuple(int(c) for c in coords)


def primitive_in_lattice(lattice: Lattice, v: ExpVec) -> ExpVec:
    """The primitive lattice vector on the ray through v (v need not lie
    in the lattice)."""
    from math import lcm

    coords = lattice.coords(tuple(map(Fraction, v)))
    den = lcm(*(c.denominator for c in coords))
    ints = [int(c * den) for c in coords]
    g = gcd(*ints)
    scaled = tuple(c // g for c in ints)
    out = zero_vec(lattice.dim)
    for c, row in zip(scaled, lattice.basis):
        out = vadd(out, vscale(c, row))
    return out


@dataclass(frozen=True)
class ConeZ:
    """Simplicial cone spanned by primitive, independent lattice rays."""

    lattice: Lattice
    rays: tuple[ExpVec, ...]

    def __post_init__(self):
        coords = [_ray_coords(self.lattice, r) for r in self.rays]
        for r, c in zip(self.rays, coords):
            if gcd(*c) != 1:
                raise ValueError(f"ray {r} is not primitive")
        if len(coords) != len({tuple(c) for c in coords}):
            raise ValueError("repeated rays")
        # simplicial: rays linearly independent
        if self.rays and _rank(coords) != len(coords):
            raise ValueError("rays are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.rays)

    def ray_set(self) -> frozenset:
        return frozenset(self.rays)

    def has_face(self, rays) -> bool:
        return set(rays) <= set(self.rays)

    def contains_point(self, p: ExpVec) -> bool:
        """Exact membership: p is a nonnegative combination of the rays."""
        if not self.rays:
            return all(c == 0 for c in p)
        p = tuple(map(Fraction, p))
        inv = _full_dim_solver(self.rays)
        if inv is not None:
            return all(vdot(p, col) >= 0 for col in inv)
        sol = solve_left(list(self.rays), p)
        return sol is not None and all(c >= 0 for c in sol)

    def to_json(self):
        return [[str(c) for c in r] for r in self.rays]


def _rank(int_rows) -> int:
    if not int_rows:
        return 0
    d, _, _ = snf_int([list(r) for r in int_rows])
    return sum(1 for x in d if x != 0)


@lru_cache(maxsize=None)
def _full_dim_solver(rays: tuple):
    """Columns of the inverse ray matrix for square ray systems, else None.

    Membership p in cone(rays) is then the sign test p . col >= 0.
    """
    if len(rays) != len(rays[0]):
        return None
    inv = mat_inv(rays)
    return tuple(tuple(row[i] for row in inv) for i in range(len(rays)))


def is_regular(cone: ConeZ) -> bool:
    """The rays extend to a basis of the lattice."""
    if not cone.rays:
        return True
    coords = [list(_ray_coords(cone.lattice, r)) for r in cone.rays]
    d, _, _ = snf_int(coords)
    return all(x == 1 for x in d)


@dataclass(frozen=True)
class Fan:
    """Finite fan given by its maximal cones (faces are implied)."""

    lattice: Lattice
    max_cones: tuple[ConeZ, ...]

    def contains_point(self, p: ExpVec) -> bool:
        return any(c.contains_point(p) for c in self.max_cones)

    def to_json(self):
        return {"lattice": self.lattice.to_json(),
                "max_cones": [c.to_json() for c in self.max_cones]}


def orthant_fan(lattice: Lattice) -> Fan:
    """The fan of the faces of the positive orthant cone."""
    rays = tuple(primitive_in_lattice(lattice, unit_vec(lattice.dim, i))
                 for i in range(lattice.dim))
    return Fan(lattice, (ConeZ(lattice, rays),))


def star_subdivision(fan: Fan, center: ConeZ) -> Fan:
    """Insert the sum of the center's rays, splitting incident cones.

    Every maximal cone containing the center as a face is replaced by
    the cones omitting one center ray each; the inserted ray stays
    primitive and regular cones stay regular.
    """
    if center.dim < 1:
        raise ValueError("cannot subdivide the origin")
    hit = [c for c in fan.max_cones if c.has_face(center.rays)]
    if not hit:
        raise NotInFan(f"center {center.rays} is not a face of the fan")
    v0 = zero_vec(fan.lattice.dim)
    for r in center.rays:
        v0 = vadd(v0, r)
    assert v0 == primitive_in_lattice(fan.lattice, v0), \
        "inserted ray is imprimitive"
    out = []
    for cone in fan.max_cones:
        if not cone.has_face(center.rays):
            out.append(cone)
            continue
        rest = [r for r in cone.rays if r not in set(center.rays)]
        for j in range(center.dim):
            kept = [r for i, r in enumerate(center.rays) if i != j]
            child = ConeZ(fan.lattice, tuple(kept + [v0] + rest))
            out.append(child)
    return Fan(fan.lattice, tuple(out))


def fans_equal_support(a: Fan, b: Fan, box: int = 2) -> bool:
    """Sampled support comparison over an integer box plus a half shift."""
    dim = a.lattice.dim
    grid = [Fraction(k) for k in range(-1, box + 2)]
    shifts = (Fraction(0), Fraction(1, 2))
    for shift in shifts:
        for p in itertools.product(grid, repeat=dim):
            q = tuple(x + shift for x in p)
            if a.contains_point(q) != b.contains_point(q):
                return False
    return True


# -- toric data of a branch ------------------------------------------------

def normalization_data(source: Branch | BranchInvariants):
    """Weight lattice of the normalization and the exponent inclusion.

    Returns (W, rows) where W is the dual of the top exponent lattice
    and rows expresses each unit exponent vector in the HNF basis of
    that exponent lattice.
    """
    inv = source if isinstance(source, BranchInvariants) else derive(source)
    m_top = inv.tower[-1]
    w = dual_lattice(m_top)
    rows = [m_top.coords(unit_vec(inv.branch.dim, i))
            for i in range(inv.branch.dim)]
    assert all(c.denominator == 1 for r in rows for c in r)
    return w, [tuple(int(c) for c in r) for r in rows]


def orbifold_data(w_lattice: Lattice):
    """Sublattice spanned by the smallest edge vectors, with multipliers.

    The composite of normalization and orbifold cover is monomial with
    X_i = U_i ** m_i, where m_i * e_i is the smallest edge vector.
    """
    dim = w_lattice.dim
    edges = [smallest_edge_element(w_lattice, i) for i in range(dim)]
    multipliers = []
    for i, e in enumerate(edges):
        m = e[i]
        assert m.denominator == 1 and m >= 1
        multipliers.append(int(m))
    return hnf(edges, dim), tuple(multipliers)


@dataclass(frozen=True)
class BlowupResult:
    fan: Fan
    distinguished: tuple[ConeZ, ...]
    h_rays: tuple[ExpVec, ...]
    c_prime: int
    case: str
    # per distinguished cone: rays ordered with the h-rays first
    adapted_rays: tuple[tuple[ExpVec, ...], ...]

    def to_json(self):
        return {
            "case": self.case,
            "c_reduced": self.c_prime,
            "fan": self.fan.to_json(),
            "distinguished": [c.to_json() for c in self.distinguished],
            "h_rays": [[str(x) for x in r] for r in self.h_rays],
        }


def canonical_blowup(source: Branch | BranchInvariants) -> BlowupResult:
    """The canonical subdivision tower over the orbifold orthant.

    Case split on the codimension-one count s against the equisingular
    dimension c: nothing to do when s is c or c-2; one star subdivision
    of the face on the first c axes when s = c-1; otherwise an iterated
    scheme subdividing, round by round, the cones reached by chains of
    pairwise distinct moving slots, leaving (c-s)! distinguished cones.
    Every distinguished cone carries exactly c' rays of the preimage of
    the codimension-one structure.
    """
    inv = source if isinstance(source, BranchInvariants) else derive(source)
    dim = inv.branch.dim
    w_lat, _ = normalization_data(inv)
    w_tilde, _ = orbifold_data(w_lat)
    fan = orthant_fan(w_tilde)
    base = fan.max_cones[0]
    axis_rays = base.rays
    s, c = inv.s, inv.c
    c_prime = inv.c_reduced

    if inv.branch.G == 0 or s in (c, c - 2):
        h_rays = axis_rays[:s]
        result = BlowupResult(fan, (base,), tuple(h_rays), c_prime,
                              "identity",
                              (tuple(h_rays) + axis_rays[s:],))
    elif s == c - 1:
        center = ConeZ(w_tilde, axis_rays[:c])
        fan = star_subdivision(fan, center)
        v0 = zero_vec(dim)
        for r in axis_rays[:c]:
            v0 = vadd(v0, r)
        h_rays = tuple(axis_rays[:s]) + (v0,)
        wanted = set(h_rays)
        hits = [cone for cone in fan.max_cones
                if wanted <= set(cone.rays)]
        assert len(hits) == 1
        adapted = tuple(h_rays) + tuple(r for r in hits[0].rays
                                        if r not in wanted)
        result = BlowupResult(fan, (hits[0],), h_rays, c_prime,
                              "single-blowup", (adapted,))
    else:
        fan, distinguished, new_rays, adapted = _iterated_scheme(
            fan, axis_rays, s, c)
        h_rays = tuple(axis_rays[:s]) + tuple(new_rays)
        result = BlowupResult(fan, distinguished, h_rays, c_prime,
                              "iterated", adapted)

    for cone, adapted in zip(result.distinguished, result.adapted_rays):
        assert is_regular(cone)
        assert cone.dim == dim
        assert set(adapted) == set(cone.rays)
        assert len([r for r in cone.rays if r in set(result.h_rays)]) \
            == c_prime
        assert all(r in set(result.h_rays) for r in adapted[:c_prime])
    return result


def _iterated_scheme(fan: Fan, axis_rays, s: int, c: int):
    """Rounds of star subdivisions along pairwise-distinct slot chains.

    Slots s+1..c (0-based s..c-1) are the moving ones; each subdivision
    replaces one moving ray by the sum of all of them, and only cones
    whose chain has no repeated slot are subdivided further.
    """
    e = c - s
    # state: chain -> (slot tuple of rays, full ray tuple)
    frozen_low = list(axis_rays[:s])
    frozen_high = list(axis_rays[c:])
    active = {(): list(axis_rays[s:c])}
    all_new = []
    for _ in range(e):
        nxt = {}
        for chain, moving in active.items():
            center_rays = tuple(moving)
            center = ConeZ(fan.lattice, center_rays)
            fan = star_subdivision(fan, center)
            v0 = zero_vec(fan.lattice.dim)
            for r in center_rays:
                v0 = vadd(v0, r)
            all_new.append(v0)
            for j in range(e):
                if j in chain:
                    continue
                child = moving[:]
                child[j] = v0
                nxt[chain + (j,)] = child
        active = nxt
    distinguished = []
    adapted = []
    order = sorted(active)
    for chain in order:
        moving = active[chain]
        rays = tuple(frozen_low + moving + frozen_high)
        cone = _find_cone(fan, rays)
        distinguished.append(cone)
        adapted.append(tuple(frozen_low) + tuple(moving)
                       + tuple(frozen_high))
    return fan, tuple(distinguished), all_new, tuple(adapted)


def _find_cone(fan: Fan, rays) -> ConeZ:
    wanted = frozenset(rays)
    for cone in fan.max_cones:
        if cone.ray_set() == wanted:
            return cone
    raise NotInFan(f"no maximal cone on rays {rays}")


# -- exponent-level monomial maps -------------------------------------------

@dataclass(frozen=True)
class MonomialMap:
    """Exponent-level map m -> (<m, w_1>, ..., <m, w_k>).

    The columns are weight vectors inside the source cone, so exponents
    in the source dual cone land in the positive orthant; integrality on
    the relevant exponent lattice is certified at construction.
    """

    source_dim: int
    columns: tuple[ExpVec, ...]

    def apply(self, m: ExpVec) -> ExpVec:
        m = tuple(Fraction(c) for c in m)
        return tuple(vdot(m, w) for w in self.columns)

    def apply_series(self, eta: FracSeries) -> FracSeries:
        return FracSeries(len(self.columns),
                          [(self.apply(e), c) for e, c in eta.terms])

    def matrix(self) -> list[ExpVec]:
        return [self.apply(unit_vec(self.source_dim, i))
                for i in range(self.source_dim)]

    def to_json(self):
        return {"columns": [[str(c) for c in w] for w in self.columns]}


def vertex_transfer_check(mapping: MonomialMap, eta: FracSeries) -> bool:
    """Vertices of the pushed-forward polyhedron are images of vertices."""
    image = mapping.apply_series(eta)
    if image.is_zero():
        raise PreconditionViolated("pushforward collapsed to zero")
    source_vertices = newton_polyhedron(eta).vertices
    image_vertices = set(newton_polyhedron(image).vertices)
    mapped = {mapping.apply(v) for v in source_vertices}
    return image_vertices <= mapped


@dataclass(frozen=True)
class PhiCertificate:
    images: tuple[ExpVec, ...]
    integral: bool
    injective_on_fragment: bool
    block_determinant: Fraction
    image_fragment_consistent: bool

    def ok(self) -> bool:
        return (self.integral and self.injective_on_fragment
                and self.block_determinant != 0
                and self.image_fragment_consistent)

    def to_json(self):
        return {
            "generator_images": [[str(c) for c in v] for v in self.images],
            "integral": self.integral,
            "injective_on_fragment": self.injective_on_fragment,
            "block_determinant": str(self.block_determinant),
            "image_fragment_consistent": self.image_fragment_consistent,
        }


def phi_map(source: Branch | BranchInvariants, cone_index: int = 0,
            bound: ExpVec | None = None):
    """Composed exponent map at a distinguished point, with certificate.

    The map sends a reduced exponent (zero-padded to full dimension) to
    its pairings with the first c' adapted rays of the chosen
    distinguished cone.  The certificate checks, at fragment scale, that
    generator images are nonnegative integer vectors, the map is
    injective on the enumerated fragment, and the image set coincides
    with the independently enumerated semigroup on the image generators.
    """
    from .semigroup import enumerate_up_to, default_bound, gamma_reduced

    inv = source if isinstance(source, BranchInvariants) else derive(source)
    blowup = canonical_blowup(inv)
    adapted = blowup.adapted_rays[cone_index]
    full_map = MonomialMap(inv.branch.dim, tuple(adapted))
    c_prime = blowup.c_prime

    if inv.branch.G == 0:
        ident = MonomialMap(inv.branch.dim, tuple(adapted))
        cert = PhiCertificate((), True, True, Fraction(1), True)
        return ident, cert

    def embed(u: ExpVec) -> ExpVec:
        return tuple(u) + zero_vec(inv.branch.dim - c_prime)

    def reduced_image(u: ExpVec) -> ExpVec:
        return full_map.apply(embed(u))[:c_prime]

    sg = gamma_reduced(inv)
    gens = list(sg.units) + list(sg.extras)
    images = tuple(reduced_image(g) for g in gens)
    integral = all(x.denominator == 1 and x >= 0
                   for v in images for x in v)

    if bound is None:
        bound = default_bound(sg)
    fragment = enumerate_up_to(sg, bound) if c_prime else [()]
    pushed = [reduced_image(u) for u in fragment]
    injective = len(set(pushed)) == len(pushed)

    if c_prime:
        block = [[adapted[j][i] for j in range(c_prime)]
                 for i in range(c_prime)]
        block_det = mat_det(block)
    else:
        block_det = Fraction(1)

    consistent = _image_fragment_consistent(sg, images, fragment, pushed,
                                            bound, c_prime)
    cert = PhiCertificate(images, integral, injective, block_det, consistent)
    return full_map, cert


def _image_fragment_consistent(sg, images, fragment, pushed, bound,
                               c_prime) -> bool:
    """Pushed fragment equals the directly enumerated image semigroup.

    The image semigroup is enumerated from the generator images alone,
    then filtered back through the inverse map to the source box, which
    exercises both enumerations plus invertibility.
    """
    from .arith import mat_inv, mat_mul
    from .semigroup import membership

    if not c_prime:
        return True
    unit_imgs = images[:sg.rank]
    extra_imgs = images[sg.rank:]
    try:
        inv_block = mat_inv([list(v) for v in unit_imgs])
    except ZeroDivisionError:
        return False
    bound_img = tuple(max(v[i] for v in pushed) for i in range(c_prime))
    direct = enumerate_generated(unit_imgs + extra_imgs, bound_img)
    pushed_set = set(pushed)
    if not pushed_set <= set(direct):
        return False
    # every directly enumerated element whose preimage is a semigroup
    # element of the source box must be accounted for by the fragment
    for y in direct:
        x = mat_mul([y], inv_block)[0]
        in_box = all(c >= 0 for c in x) and \
            all(c <= b for c, b in zip(x, bound))
        if in_box and membership(x, sg) and y not in pushed_set:
            return False
    return True


def enumerate_generated(gens, bound: ExpVec) -> list[ExpVec]:
    """Values of the semigroup on arbitrary generators, up to the bound."""
    from .arith import vleq

    out = {zero_vec(len(bound))}
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
