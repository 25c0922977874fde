"""Branches given by characteristic exponents and their derived invariants.

A branch in dimension d is a strictly increasing chain of exponent vectors
A_1 < ... < A_G in the componentwise order, with the variables permuted so
the per-variable exponent rows are lexicographically nonincreasing.  From
the chain follow the lattice tower M_0 = Z^d, M_i = M_{i-1} + Z*A_i, the
indices N_i = |M_i / M_{i-1}|, the derived generators

    Abar_1 = A_1,   Abar_i = N_{i-1}*Abar_{i-1} + A_i - A_{i-1},

the degree N = N_1...N_G, the equisingular dimension c (variables carrying
a nonzero exponent), the codimension-one singular count s, the reduced
dimension c' (c - 2 exactly when s = c - 2) and the flag epsilon = 1 iff
s = c - 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .arith import (ExpVec, Lattice, hnf, is_integral, lattice_add,
                    lattice_index, min_multiple, standard_lattice, vadd,
                    vec, vlt, vscale, vsub, zero_vec)
from .errors import (DegenerateExponent, NotStrict, NotTotallyOrdered,
                     Reducible, ShapeViolation, Smooth)


@dataclass(frozen=True)
class Branch:
    dim: int
    exponents: tuple[ExpVec, ...]

    @property
    def G(self) -> int:
        return len(self.exponents)

    def to_json(self):
        return {"dim": self.dim,
                "exponents": [[str(c) for c in e] for e in self.exponents]}

    @staticmethod
    def from_json(data: dict) -> "Branch":
        if "N" in data:
            branch, _ = monomial_branch(int(data["N"]),
                                         tuple(int(b) for b in data["B"]))
            return branch
        dim = int(data["dim"])
        exps = [tuple(Fraction(str(c)) for c in e) for e in data["exponents"]]
        branch, _ = validate_and_sort(exps, dim=dim)
        return branch


@dataclass(frozen=True)
class BranchInvariants:
    branch: Branch
    derived: tuple[ExpVec, ...]          # Abar_1 .. Abar_G
    indices: tuple[int, ...]             # N_1 .. N_G
    degree: int                          # N = N_1 ... N_G
    tower: tuple[Lattice, ...]           # M_0 c ... c M_G
    c: int
    s: int
    c_reduced: int
    epsilon: int


@dataclass(frozen=True)
class SingularLocus:
    codim1: tuple[int, ...]                     # 1-based variable indices
    codim2: tuple[tuple[int, int], ...]         # unordered pairs {j, l}
    local_model_exponent: int | None            # N_G when codim2 nonempty


def validate_and_sort(exponents, dim: int | None = None):
    """Sort the variables so the exponent rows are lex-nonincreasing.

    Returns (branch, permutation); permutation[j] is the 0-based input
    position placed at output position j.
    """
    exps = [tuple(Fraction(c) for c in e) for e in exponents]
    if dim is None:
        if not exps:
            raise ValueError("dimension required for a smooth branch")
        dim = len(exps[0])
    if any(len(e) != dim for e in exps):
        raise ValueError("mixed exponent dimensions")
    if any(c < 0 for e in exps for c in e):
        raise ValueError("negative exponent")
    for a, b in zip(exps, exps[1:]):
        if a == b:
            raise NotStrict(f"repeated exponent {a}")
        if not vlt(a, b):
            if vlt(b, a):
                raise NotTotallyOrdered(
                    f"exponents out of order: {a} before {b}")
            raise NotTotallyOrdered(f"incomparable exponents {a}, {b}")
    rows = [tuple(e[i] for e in exps) for i in range(dim)]
    perm = sorted(range(dim), key=lambda i: rows[i], reverse=True)
    sorted_exps = tuple(tuple(e[i] for i in perm) for e in exps)
    return Branch(dim, sorted_exps), tuple(perm)


def monomial_branch(N: int, B) -> tuple[Branch, tuple[int, ...]]:
    """Branch of the binomial Y**N - X**B, with the applied permutation."""
    B = tuple(int(b) for b in B)
    if any(b < 0 for b in B):
        raise ValueError("negative exponent in B")
    if N < 2:
        raise Smooth(f"degree {N} defines a smooth graph")
    if gcd(N, *B) > 1:
        raise Reducible(f"gcd(N, B) = {gcd(N, *B)} > 1")
    a = tuple(Fraction(b, N) for b in B)
    if is_integral(a):
        raise Smooth(f"{a} has integer coordinates")
    return validate_and_sort([a])


def derive(branch: Branch) -> BranchInvariants:
    """All scalar and lattice invariants of the branch."""
    dim = branch.dim
    tower = [standard_lattice(dim)]
    indices: list[int] = []
    for i, a in enumerate(branch.exponents):
        nxt = lattice_add(tower[-1], [a])
        n_i = lattice_index(tower[-1], nxt)
        if n_i == 1:
            raise DegenerateExponent(
                f"A_{i + 1} = {a} already lies in the previous lattice")
        indices.append(n_i)
        tower.append(nxt)
    derived: list[ExpVec] = []
    for i, a in enumerate(branch.exponents):
        if i == 0:
            derived.append(a)
        else:
            prev = branch.exponents[i - 1]
            derived.append(vadd(vscale(indices[i - 1], derived[-1]),
                                vsub(a, prev)))
    degree = 1
    for n_i in indices:
        degree *= n_i
    c = equisingular_dimension(branch)
    s = _codim1_count(branch, indices)
    eps = 1 if (branch.G >= 1 and s == c - 2) else 0
    c_red = c - 2 if eps else c
    return BranchInvariants(branch, tuple(derived), tuple(indices), degree,
                            tuple(tower), c, s, c_red, eps)


def equisingular_dimension(branch: Branch) -> int:
    """Number of variables carrying a nonzero exponent (0 when smooth)."""
    c = 0
    for i in range(branch.dim):
        if any(e[i] != 0 for e in branch.exponents):
            c = i + 1
    return c


def _z_i_is_singular(branch: Branch, indices, i: int) -> bool:
    """Codimension-one criterion for the i-th coordinate section (0-based).

    The section is a singular component unless the exponents vanish on
    coordinate i up to the last one, which equals 1/N_G there.
    """
    n_last = indices[-1]
    tail_flat = all(e[i] == 0 for e in branch.exponents[:-1])
    return not (tail_flat and branch.exponents[-1][i] == Fraction(1, n_last))


def _codim1_count(branch: Branch, indices) -> int:
    if branch.G == 0:
        return 0
    c = equisingular_dimension(branch)
    flags = [_z_i_is_singular(branch, indices, i) for i in range(c)]
    s = sum(flags)
    if flags != [True] * s + [False] * (c - s):
        raise ShapeViolation(
            "singular coordinate sections do not form a prefix; "
            "the exponent data is not a consistent branch")
    return s


def singular_locus(inv: BranchInvariants) -> SingularLocus:
    """Component list of the singular locus per the classifier.

    Codimension-one components sit over the first s coordinate
    hyperplanes; codimension-two components over all pairs {j, l} inside
    [[s+1, c]]; at their generic points the germ is the suspension
    Y**N_G = T1*T2.
    """
    s, c = inv.s, inv.c
    codim1 = tuple(range(1, s + 1))
    codim2 = tuple((j, l) for j in range(s + 1, c + 1)
                   for l in range(j + 1, c + 1))
    model = inv.indices[-1] if codim2 else None
    return SingularLocus(codim1, codim2, model)


def reduced_exponents(inv: BranchInvariants):
    """Truncations to the first c' coordinates, with the shape check.

    Every discarded block must be zero padding, except the last exponent
    which carries (1/N_G, 1/N_G) right after the truncation when
    epsilon = 1.
    """
    c_red, eps = inv.c_reduced, inv.epsilon
    branch = inv.branch
    out = []
    for k, a in enumerate(branch.exponents):
        head, tail = a[:c_red], a[c_red:]
        expected_tail = zero_vec(branch.dim - c_red)
        if eps and k == branch.G - 1:
            q = Fraction(1, inv.indices[-1])
            expected_tail = (q, q) + zero_vec(branch.dim - inv.c)
        if tail != expected_tail:
            raise ShapeViolation(
                f"exponent {a} does not split as head + {expected_tail}")
        out.append(head)
    return tuple(out), eps


def reduced_derived(inv: BranchInvariants) -> tuple[ExpVec, ...]:
    """Truncations of the derived generators; the recursion survives."""
    c_red = inv.c_reduced
    truncated = tuple(a[:c_red] for a in inv.derived)
    heads, _ = reduced_exponents(inv)
    recomputed: list[ExpVec] = []
    for i, a in enumerate(heads):
        if i == 0:
            recomputed.append(a)
        else:
            recomputed.append(vadd(vscale(inv.indices[i - 1], recomputed[-1]),
                                   vsub(a, heads[i - 1])))
    assert tuple(recomputed) == truncated
    return truncated


def is_normalized(branch: Branch) -> bool:
    """Either A_1 has a nonzero second coordinate or its first exceeds 1."""
    if branch.G == 0:
        return True
    a1 = branch.exponents[0]
    if branch.dim >= 2 and a1[1] != 0:
        return True
    return a1[0] > 1


def expand_reduced(heads, n_last: int, eps: int, dim: int) -> Branch:
    """Rebuild a d-dimensional branch from reduced exponents.

    Inverse of reduced_exponents: pad with zeros, inserting the
    (1/N_G, 1/N_G) block on the last exponent when eps = 1.
    """
    c_red = len(heads[0]) if heads else 0
    c = c_red + 2 * eps
    if dim < c:
        raise ValueError(f"dimension {dim} below equisingular dimension {c}")
    out = []
    for k, head in enumerate(heads):
        tail = zero_vec(dim - c_red)
        if eps and k == len(heads) - 1:
            q = Fraction(1, n_last)
            tail = (q, q) + zero_vec(dim - c)
        out.append(head + tail)
    branch, perm = validate_and_sort(out, dim=dim)
    assert perm == tuple(range(dim)), "padding should already be sorted"
    return branch
