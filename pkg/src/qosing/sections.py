"""Plane-curve formulas and the recovery of normalized exponents.

Two plane branches meet with intersection number

    (f, g) = deg(f) deg(g) * (Abar_k / (n_1...n_{k-1})
                              + (K - a_k) / (n_1...n_k)),

where K is the coincidence exponent (the largest order of a difference
of roots) and k is least with K < a_{k+1}.  Together with the possible
first-exponent values {a, 1/a} u {1/m : m <= [a]} under coordinate
changes, these formulas drive the reconstruction of the last reduced
exponent from plane sections when the semigroup alone does not carry it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .arith import INFINITY, lattice_add, min_multiple, standard_lattice
from .branch import (Branch, BranchInvariants, derive, expand_reduced,
                     is_normalized, validate_and_sort)
from .cyclotomic import unit_root_for_pairing
from .errors import (AmbiguousRecovery, NonIntegral, NotNormalized,
                     PreconditionViolated, Smooth)
from .semigroup import enumerate_up_to, gamma_reduced, recover_generators
from .semiroot import canonical_root, conjugates
from .series import FracSeries


@dataclass(frozen=True)
class PlaneBranch:
    """Plane (one-variable) branch data derived from char exponents."""

    char_exponents: tuple[Fraction, ...]
    indices: tuple[int, ...]
    derived: tuple[Fraction, ...]
    degree: int

    @staticmethod
    def from_exponents(exps) -> "PlaneBranch":
        branch, _ = validate_and_sort([(Fraction(a),) for a in exps], dim=1)
        inv = derive(branch)
        return PlaneBranch(tuple(a[0] for a in branch.exponents),
                           inv.indices,
                           tuple(a[0] for a in inv.derived),
                           inv.degree)

    @property
    def G(self) -> int:
        return len(self.char_exponents)


def series_order(eta: FracSeries) -> Fraction:
    """Least exponent of a nonzero one-variable series."""
    assert eta.dim == 1 and not eta.is_zero()
    return min(e[0] for e, _ in eta.terms)


def coincidence_exponent(roots_f, roots_g):
    """Max order of a difference of roots; identical pairs are skipped.

    Returns the infinity sentinel when every pair coincides (equal
    branches compared with themselves).
    """
    best = None
    for rf in roots_f:
        for rg in roots_g:
            diff = rf - rg
            if diff.is_zero():
                continue
            v = series_order(diff)
            best = v if best is None or v > best else best
    return INFINITY if best is None else best


def intersection_number(f: PlaneBranch, g: PlaneBranch, K) -> int:
    """The coincidence formula, cleared to an integer."""
    if K is INFINITY:
        raise PreconditionViolated("coincident branches have no finite "
                                   "intersection number")
    K = Fraction(K)
    exps = (Fraction(0),) + f.char_exponents
    derived = (Fraction(0),) + f.derived
    k = f.G
    for idx in range(f.G + 1):
        nxt = exps[idx + 1] if idx < f.G else INFINITY
        if K < nxt:
            k = idx
            break
    prod_prev = 1
    for n in f.indices[:max(k - 1, 0)]:
        prod_prev *= n
    prod_k = prod_prev * (f.indices[k - 1] if k >= 1 else 1)
    value = f.degree * g.degree * (derived[k] / prod_prev
                                   + (K - exps[k]) / prod_k)
    if value.denominator != 1:
        raise NonIntegral(f"intersection number {value} is not an integer")
    return int(value)


def first_exponent_orbit(a1: Fraction) -> set[Fraction]:
    """Possible first exponents across coordinate systems."""
    a1 = Fraction(a1)
    if a1 <= 1:
        raise ValueError("generic first exponent must exceed 1")
    out = {a1, 1 / a1}
    out.update(Fraction(1, m) for m in range(1, int(a1) + 1))
    return out


# -- plane sections of a branch ---------------------------------------------

@dataclass(frozen=True)
class SectionData:
    """Equisingularity data of a coordinate plane section."""

    coordinate: int                       # 1-based kept coordinate
    num_components: int
    char_exponents: tuple[Fraction, ...]  # per component (all agree)
    intersection: int | None              # pairwise, when >= 2 components
    degree: int

    def to_json(self):
        return {
            "coordinate": self.coordinate,
            "components": self.num_components,
            "char_exponents": [str(a) for a in self.char_exponents],
            "intersection": self.intersection,
            "degree": self.degree,
        }

    @staticmethod
    def from_json(data) -> "SectionData":
        return SectionData(
            int(data["coordinate"]), int(data["components"]),
            tuple(Fraction(str(a)) for a in data["char_exponents"]),
            None if data.get("intersection") is None
            else int(data["intersection"]),
            int(data["degree"]))


_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _restrict_root(tau: FracSeries, coord: int, params: dict[int, Fraction],
                   degree: int) -> FracSeries:
    """Set every other variable to r_j ** degree, exactly."""
    terms = []
    for e, c in tau.terms:
        scalar = Fraction(1)
        for j, r in params.items():
            power = e[j] * degree
            assert power.denominator == 1
            scalar *= r ** int(power)
        terms.append(((e[coord],), c * scalar))
    return FracSeries(1, terms)


def _plane_conjugate(rho: FracSeries, j: int, order: int) -> FracSeries:
    """Monodromy conjugate: coefficient at X^a picks up exp(2*pi*i*j*a)."""
    return FracSeries(1, [(e, c * unit_root_for_pairing(order, j * e[0]))
                          for e, c in rho.terms])


def _component_orbits(restricted, order: int):
    """Partition restricted roots into plane monodromy orbits."""
    remaining = list(restricted)
    orbits = []
    while remaining:
        rho = remaining[0]
        ram = lcm(*(e[0].denominator for e, _ in rho.terms)) \
            if rho.terms else 1
        orbit = []
        seen = set()
        for j in range(ram):
            tau = _plane_conjugate(rho, j, order)
            if tau not in seen:
                seen.add(tau)
                orbit.append(tau)
        assert len(orbit) == ram, "monodromy orbit shorter than expected"
        for tau in orbit:
            if tau not in remaining:
                raise PreconditionViolated(
                    "monodromy orbit escapes the restricted root set; "
                    "section parameters are not generic")
            remaining.remove(tau)
        orbits.append(orbit)
    return orbits


def _plane_char_exponents(rho: FracSeries) -> tuple[Fraction, ...]:
    """Characteristic exponents of a one-variable fractional series."""
    lattice = standard_lattice(1)
    out = []
    for e, _ in sorted(rho.terms):
        if not lattice.member(e):
            out.append(e[0])
            lattice = lattice_add(lattice, [e])
    return tuple(out)


def simulate_section(source: Branch | BranchInvariants, coord: int,
                     seed: int = 0) -> SectionData:
    """Plane section of the branch along the given 1-based coordinate.

    Transverse coordinates are pinned to seeded prime powers r ** N so
    every restricted root stays inside the cyclotomic coefficient field;
    the restricted conjugates are grouped into monodromy orbits, giving
    the component count, the shared characteristic exponents, and the
    pairwise intersection number through the coincidence formula.
    """
    inv = source if isinstance(source, BranchInvariants) else derive(source)
    branch = inv.branch
    i = coord - 1
    rng = random.Random(seed)
    offset = rng.randrange(len(_PRIMES))
    params = {}
    for pos, j in enumerate(j for j in range(branch.dim) if j != i):
        params[j] = Fraction(_PRIMES[(offset + pos) % len(_PRIMES)])
    xi = canonical_root(branch)
    taus = conjugates(xi, inv, branch.G)
    restricted = [_restrict_root(t, i, params, inv.degree) for t in taus]
    orbits = _component_orbits(restricted, inv.degree)
    char_lists = {tuple(_plane_char_exponents(o[0])) for o in orbits}
    if len(char_lists) != 1:
        raise PreconditionViolated("section components disagree on "
                                   "characteristic exponents")
    chars = char_lists.pop()
    assert sum(len(o) for o in orbits) == inv.degree
    inter = None
    if len(orbits) >= 2:
        plane = PlaneBranch.from_exponents(chars)
        values = set()
        for a in range(len(orbits)):
            for b in range(a + 1, len(orbits)):
                K = coincidence_exponent(orbits[a], orbits[b])
                values.add(intersection_number(plane, plane, K))
        if len(values) != 1:
            raise PreconditionViolated(
                "pairwise intersections disagree; parameters not generic")
        inter = values.pop()
    sizes = {len(o) for o in orbits}
    assert len(sizes) == 1, "conjugate components of unequal degree"
    return SectionData(coord, len(orbits), chars, inter, sizes.pop())


# -- recovery of the last exponent -------------------------------------------

def recover_last_coordinate(knowns, indices_prefix, derived_prefix,
                            n_last: int, section: SectionData):
    """One coordinate of the last reduced exponent from its section.

    ``knowns`` are the earlier exponents on this coordinate,
    ``indices_prefix`` the earlier tower indices, ``derived_prefix`` the
    earlier derived values on this coordinate.
    """
    transcript = {"coordinate": section.coordinate}
    known_chars = _chars_of_sequence(knowns)
    observed = tuple(section.char_exponents)
    if len(observed) == len(known_chars) + 1 \
            and observed[:-1] == known_chars:
        extra = observed[-1]
        if known_chars and extra <= known_chars[-1]:
            raise AmbiguousRecovery("extra section exponent out of order")
        if not knowns:
            # the generic first exponent determines the value through the
            # unique orbit element with the right denominator and a
            # numerator above 1 (ruled in by the codimension structure)
            a_gen = extra if extra > 1 else 1 / extra
            candidates = [a for a in first_exponent_orbit(a_gen)
                          if a.denominator == n_last and a.numerator > 1]
            if len(candidates) != 1:
                raise AmbiguousRecovery(
                    f"{len(candidates)} orbit candidates with "
                    f"denominator {n_last}")
            transcript["case"] = "irreducible-section-unique-denominator" \
                if section.num_components == 1 else \
                "component-exponent-read-off"
            transcript["value"] = str(candidates[0])
            return candidates[0], transcript
        transcript["case"] = "known-prefix-extra-exponent"
        transcript["value"] = str(extra)
        return extra, transcript
    if observed == known_chars:
        if section.num_components < 2 or section.intersection is None:
            raise AmbiguousRecovery(
                "last exponent is invisible in an irreducible section")
        inter = Fraction(section.intersection)
        if not knowns:
            # components are smooth: intersection equals the exponent
            # itself times the component degrees
            g = section.num_components
            if g != n_last:
                raise AmbiguousRecovery(
                    f"smooth sections must split into {n_last} pieces")
            value = inter
            transcript["case"] = "smooth-components-intersection"
            transcript["value"] = str(value)
            return value, transcript
        prod = 1
        for n in indices_prefix:
            prod *= n
        value = inter / prod - indices_prefix[-1] * derived_prefix[-1] \
            + knowns[-1]
        if value <= knowns[-1]:
            raise AmbiguousRecovery("intersection solve went below the "
                                    "known exponents")
        transcript["case"] = "intersection-number-linear-solve"
        transcript["value"] = str(value)
        return value, transcript
    raise AmbiguousRecovery(
        f"section exponents {observed} extend knowns {known_chars} in an "
        "unexpected way")


def _chars_of_sequence(values) -> tuple[Fraction, ...]:
    lattice = standard_lattice(1)
    out = []
    for a in values:
        v = (Fraction(a),)
        if not lattice.member(v):
            out.append(Fraction(a))
            lattice = lattice_add(lattice, [v])
    return tuple(out)


def recover_gcd_case(n_last: int, section: SectionData):
    """Direct single-exponent recovery for a rank-one extra coordinate.

    Mirrors recover_last_coordinate with empty knowns; kept separate for
    reporting clarity in the G = 1 situation.
    """
    return recover_last_coordinate((), (), (), n_last, section)


# -- full pipeline ------------------------------------------------------------

@dataclass(frozen=True)
class RecoveryAux:
    """External inputs needed exactly when the shape flag is set."""

    n_last: int
    dim: int
    sections: tuple[SectionData, ...]
    seed: int = 0

    def to_json(self):
        return {"N_G": self.n_last, "dim": self.dim, "seed": self.seed,
                "sections": [s.to_json() for s in self.sections]}

    @staticmethod
    def from_json(data) -> "RecoveryAux":
        return RecoveryAux(int(data["N_G"]), int(data["dim"]),
                           tuple(SectionData.from_json(s)
                                 for s in data["sections"]),
                           int(data.get("seed", 0)))


def make_aux(source: Branch | BranchInvariants, seed: int = 0) -> RecoveryAux:
    """Harness-side generation of the auxiliary data from a known branch."""
    inv = source if isinstance(source, BranchInvariants) else derive(source)
    if not inv.epsilon:
        raise PreconditionViolated("aux data only applies when the last "
                                   "exponent escapes the reduced semigroup")
    sections = tuple(simulate_section(inv, i + 1, seed)
                     for i in range(inv.c_reduced))
    return RecoveryAux(inv.indices[-1], inv.branch.dim, sections, seed)


def recover_normalized_branch(fragment, bound, dim: int | None = None,
                              aux: RecoveryAux | None = None):
    """Rebuild the normalized branch from its reduced-semigroup fragment.

    Without aux the generators of the fragment carry everything.  With
    aux (the degenerate shape) the last exponent is reconstructed
    coordinate by coordinate from the plane sections, trying both
    possible generator counts and keeping the unique candidate that
    reproduces the fragment and the sections.
    """
    units, extras = recover_generators(fragment, bound)
    if not units:
        raise AmbiguousRecovery("empty fragment")
    transcript = {"units": [[str(c) for c in u] for u in units],
                  "greedy_generators": [[str(c) for c in a] for a in extras],
                  "steps": []}
    rank = len(units[0])
    std = standard_lattice(rank)
    ordered = tuple(sorted(units, reverse=True))
    if ordered != tuple(std.basis):
        raise AmbiguousRecovery(
            "fragment units are not the standard basis; re-embed the "
            "fragment before recovery")
    if aux is None:
        if not extras:
            raise Smooth("fragment has no generators beyond the units")
        branch = _branch_from_derived(extras, 0, None,
                                      dim if dim is not None else rank,
                                      transcript)
        _validate_fragment(branch, fragment, bound)
        if not is_normalized(branch):
            raise NotNormalized(f"{branch} violates the normalization "
                                "condition")
        return branch, transcript
    candidates = []
    failures = []
    for g_total in {len(extras), len(extras) + 1}:
        if g_total < 1:
            continue
        try:
            cand, steps = _recover_with_count(extras, g_total, aux, rank)
            _validate_fragment(cand, fragment, bound)
            _validate_sections(cand, aux)
            candidates.append((cand, steps))
        except (AmbiguousRecovery, NonIntegral, PreconditionViolated,
                Smooth, NotNormalized, ValueError) as exc:
            failures.append(f"G={g_total}: {exc}")
    if len(candidates) != 1:
        raise AmbiguousRecovery(
            f"{len(candidates)} candidate branches survive validation "
            f"({'; '.join(failures)})")
    branch, steps = candidates[0]
    transcript["steps"] = steps
    if not is_normalized(branch):
        raise NotNormalized(f"{branch} violates the normalization condition")
    return branch, transcript


def _branch_from_derived(derived_reduced, eps: int, n_last: int | None,
                         dim: int, transcript) -> Branch:
    """Invert the derived-generator recursion and re-expand to dimension."""
    rank = len(derived_reduced[0]) if derived_reduced else 0
    lattice = standard_lattice(rank) if rank else None
    indices = []
    for a in derived_reduced:
        n = min_multiple(a, lattice)
        if n == 1:
            raise AmbiguousRecovery(f"generator {a} already lies in the "
                                    "running lattice")
        indices.append(n)
        lattice = lattice_add(lattice, [a])
    heads = []
    for i, abar in enumerate(derived_reduced):
        if i == 0:
            heads.append(abar)
        else:
            prev = heads[-1]
            n_prev = indices[i - 1]
            heads.append(tuple(x - n_prev * y + z for x, y, z in
                               zip(abar, derived_reduced[i - 1], prev)))
    transcript_steps = [{"step": "tower-index", "level": i + 1, "value": n}
                        for i, n in enumerate(indices)]
    if transcript is not None:
        transcript["steps"].extend(transcript_steps)
    return expand_reduced(heads, n_last if n_last else indices[-1],
                          eps, dim)


def _recover_with_count(extras, g_total: int, aux: RecoveryAux, rank: int):
    """Reconstruction under a hypothesis for the true generator count."""
    reliable = extras[:g_total - 1]
    steps = [{"step": "generator-count-hypothesis", "value": g_total}]
    indices = []
    lattice = standard_lattice(rank)
    heads = []
    for i, abar in enumerate(reliable):
        n = min_multiple(abar, lattice)
        if n == 1:
            raise AmbiguousRecovery(f"generator {abar} adds nothing")
        indices.append(n)
        lattice = lattice_add(lattice, [abar])
        if i == 0:
            heads.append(abar)
        else:
            heads.append(tuple(x - indices[i - 1] * y + z for x, y, z in
                               zip(abar, reliable[i - 1], heads[-1])))
        steps.append({"step": "tower-index", "level": i + 1, "value": n})
    last = []
    for i in range(rank):
        section = next((s for s in aux.sections if s.coordinate == i + 1),
                       None)
        if section is None:
            raise AmbiguousRecovery(f"missing section for coordinate "
                                    f"{i + 1}")
        knowns = tuple(h[i] for h in heads)
        derived_prefix = tuple(a[i] for a in reliable)
        value, note = recover_last_coordinate(
            knowns, tuple(indices), derived_prefix, aux.n_last, section)
        steps.append({"step": "last-exponent-coordinate", **note})
        last.append(value)
    heads.append(tuple(last))
    branch = expand_reduced(heads, aux.n_last, 1, aux.dim)
    return branch, steps


def _validate_fragment(branch: Branch, fragment, bound):
    inv = derive(branch)
    sg = gamma_reduced(inv)
    expect = set(enumerate_up_to(sg, bound))
    got = {tuple(Fraction(c) for c in e) for e in fragment}
    if expect != got:
        raise AmbiguousRecovery("candidate branch does not reproduce the "
                                "fragment")


def _validate_sections(branch: Branch, aux: RecoveryAux):
    inv = derive(branch)
    if not inv.epsilon:
        raise AmbiguousRecovery("candidate branch is not of the degenerate "
                                "shape the aux data asserts")
    if inv.indices[-1] != aux.n_last:
        raise AmbiguousRecovery("candidate branch has the wrong last index")
    if inv.branch.dim != aux.dim:
        raise AmbiguousRecovery("candidate branch has the wrong dimension")
    for section in aux.sections:
        fresh = simulate_section(inv, section.coordinate, aux.seed)
        if (fresh.num_components, fresh.char_exponents,
                fresh.intersection) != (section.num_components,
                                        section.char_exponents,
                                        section.intersection):
            raise AmbiguousRecovery(
                f"candidate branch disagrees with the section on "
                f"coordinate {section.coordinate}")


def resultant_x_order(f_data, g_data) -> int:
    """Independent oracle: X-order of the Y-resultant of two plane curves.

    Curves are given as coefficient maps {y_power: {x_power: coeff}};
    the computation is delegated to sympy's resultant.
    """
    import sympy

    x, y = sympy.symbols("x y")

    def to_poly(data):
        expr = 0
        for ypow, xs in data.items():
            for xpow, coeff in xs.items():
                expr += sympy.Rational(coeff) * x ** xpow * y ** ypow
        return sympy.Poly(expr, y)

    res = sympy.resultant(to_poly(f_data), to_poly(g_data), y)
    poly = sympy.Poly(sympy.expand(res), x)
    if poly.is_zero:
        raise PreconditionViolated("resultant vanishes; curves share a "
                                   "component")
    monoms = [m[0] for m in poly.monoms()]
    return min(monoms)
