"""Fans, regularity, and resolutions of cyclic quotient singularities.

The quotient of affine n-space by the diagonal order-p action with
weights (a_1, ..., a_n) coprime to p is the toric variety of the standard
positive cone viewed in the refined lattice Z^n + Z*(a_1,...,a_n)/p; a
resolution is any regular subdivision of its fan.  The subdivision used
here repeatedly stellar-subdivides a non-regular cone at the primitive
lattice point of minimal positive weight in its fundamental
parallelepiped, which strictly decreases cone multiplicities and so
terminates.  Downstream invariants do not depend on the subdivision
chosen.

In dimension 2 the exceptional chain and its intersection matrix are the
classical continued-fraction data; in higher dimension only combinatorial
data of the resolution is reported.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from math import comb, gcd
from typing import NamedTuple, Sequence

from .intmat import (
    IntMatrix,
    image_basis,
    is_prime,
    primitive_vector,
    smith_decomposition,
    solve_integer,
)


@dataclass(frozen=True)
class Cone:
    """Cone spanned by primitive integer ray generators (strongly convex)."""

    rays: tuple[tuple[int, ...], ...]
    ambient: int

    def __post_init__(self):
        for r in self.rays:
            if len(r) != self.ambient:
                raise ValueError("ray has wrong length")
            if all(x == 0 for x in r):
                raise ValueError("zero ray")
            if r != primitive_vector(r):
                raise ValueError(f"ray {r} is not primitive")
        if len(set(self.rays)) != len(self.rays):
            raise ValueError("duplicate rays")

    @classmethod
    def from_rays(cls, rays: Sequence[Sequence[int]], ambient: int | None = None) -> "Cone":
        rays = [tuple(int(x) for x in r) for r in rays]
        if ambient is None:
            if not rays:
                raise ValueError("ambient dimension needed for the zero cone")
            ambient = len(rays[0])
        prim = tuple(sorted(primitive_vector(r) for r in rays))
        return cls(prim, ambient)

    def ray_matrix(self) -> IntMatrix:
        """Rays as columns."""
        return IntMatrix([list(r) for r in self.rays], ncols=self.ambient).transpose()

    @property
    def dim(self) -> int:
        if not self.rays:
            return 0
        return smith_decomposition(self.ray_matrix()).rank

    def is_simplicial(self) -> bool:
        return self.dim == len(self.rays)

    def multiplicity(self) -> int:
        """Index of the span of the rays in its saturation (1 = regular)."""
        if not self.is_simplicial():
            raise ValueError("multiplicity of a non-simplicial cone")
        diag = smith_decomposition(self.ray_matrix()).diagonal
        mult = 1
        for d in diag:
            if d:
                mult *= d
        return mult

    def coordinates_of(self, point: Sequence[Fraction]) -> tuple[Fraction, ...] | None:
        """Barycentric coordinates of a point in the simplicial cone, or None."""
        rays = [list(r) for r in self.rays]
        d = len(rays)
        a = [[Fraction(rays[j][i]) for j in range(d)] + [Fraction(point[i])]
             for i in range(self.ambient)]
        # exact Gauss elimination of the (ambient x d | point) system
        pivots = []
        r = 0
        for col in range(d):
            piv = next((i for i in range(r, self.ambient) if a[i][col] != 0), None)
            if piv is None:
                continue
            a[r], a[piv] = a[piv], a[r]
            a[r] = [x / a[r][col] for x in a[r]]
            for i in range(self.ambient):
                if i != r and a[i][col]:
                    f = a[i][col]
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
            pivots.append(col)
            r += 1
        if len(pivots) != d:
            raise ValueError("coordinates need a simplicial cone")
        lam = [Fraction(0)] * d
        for row_idx, col in enumerate(pivots):
            lam[col] = a[row_idx][d]
        for i in range(r, self.ambient):
            if a[i][d] != 0:
                return None  # point outside the linear span
        return tuple(lam)

    def contains(self, point: Sequence) -> bool:
        lam = self.coordinates_of([Fraction(x) for x in point])
        return lam is not None and all(x >= 0 for x in lam)


def is_regular(c: Cone) -> bool:
    """True iff the rays extend to a basis of the ambient lattice."""
    if not c.rays:
        return True
    if not c.is_simplicial():
        return False
    return c.multiplicity() == 1


@dataclass(frozen=True)
class Fan:
    """Fan given by its maximal cones; faces are implied."""

    maximal: tuple[Cone, ...]
    ambient: int

    def __post_init__(self):
        for c in self.maximal:
            if c.ambient != self.ambient:
                raise ValueError("mixed ambient dimensions")

    @classmethod
    def from_cones(cls, cones: Sequence[Cone], ambient: int | None = None) -> "Fan":
        if ambient is None:
            ambient = cones[0].ambient
        return cls(tuple(sorted(cones, key=lambda c: c.rays)), ambient)

    def rays(self) -> tuple[tuple[int, ...], ...]:
        out = {r for c in self.maximal for r in c.rays}
        return tuple(sorted(out))

    def all_cones_by_dim(self) -> dict[int, int]:
        """Counts of cones per dimension (faces of simplicial maximal cones)."""
        seen: set[frozenset] = set()
        counts: dict[int, int] = {}
        for c in self.maximal:
            if not c.is_simplicial():
                raise ValueError("face counting implemented for simplicial fans")
            nrays = len(c.rays)
            for mask in range(1 << nrays):
                sub = frozenset(c.rays[i] for i in range(nrays) if mask >> i & 1)
                if sub not in seen:
                    seen.add(sub)
                    counts[bin(mask).count("1")] = counts.get(bin(mask).count("1"), 0) + 1
        return counts

    def is_complete(self) -> bool:
        """Facet-pairing completeness test for full-dimensional simplicial fans."""
        n = self.ambient
        facets: dict[frozenset, int] = {}
        for c in self.maximal:
            if not c.is_simplicial() or c.dim != n:
                return False
            for i in range(n):
                f = frozenset(c.rays[:i] + c.rays[i + 1:])
                facets[f] = facets.get(f, 0) + 1
        return all(v == 2 for v in facets.values())


@dataclass(frozen=True)
class CyclicSingularity:
    """Isolated quotient point of type (1/p)(a_1, ..., a_n)."""

    p: int
    weights: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if len(self.weights) < 2:
            raise ValueError("need dimension at least 2")
        for a in self.weights:
            if not (1 <= a <= self.p - 1):
                raise ValueError(f"weight {a} outside 1..{self.p - 1}")
            if gcd(a, self.p) != 1:
                raise ValueError("weights must be coprime to p (isolated fixed point)")


def quotient_fan(s: CyclicSingularity) -> Fan:
    """Fan of the quotient: the standard positive cone in the refined lattice.

    The refined lattice Z^n + Z*(weights)/p is normalized to Z^n by an SNF
    change of basis; the standard basis vectors become the (primitivized)
    rays of an index-p simplicial cone.
    """
    n = len(s.weights)
    gens = [[s.p if i == j else 0 for j in range(n)] for i in range(n)]
    gens.append(list(s.weights))
    # columns of `basis` generate p * (refined lattice) inside Z^n
    basis = image_basis(IntMatrix(gens, ncols=n).transpose()).transpose()
    rays = []
    for i in range(n):
        e_scaled = [s.p if t == i else 0 for t in range(n)]
        y = solve_integer(basis, e_scaled)
        if y is None:
            raise RuntimeError("standard basis vector missing from the refined lattice")
        rays.append(primitive_vector(y))
    cone = Cone.from_rays(rays, ambient=n)
    return Fan.from_cones([cone], ambient=n)


def _parallelepiped_candidates(c: Cone) -> list[tuple[Fraction, tuple[int, ...]]]:
    """Nonzero lattice points of the fundamental parallelepiped.

    Returned as (weight, ambient point) with weight = sum of the ray
    coordinates, each in [0, 1).
    """
    snf = smith_decomposition(c.ray_matrix())
    d = len(c.rays)
    sat_cols = [snf.u_inv.column(i) for i in range(d)]  # saturation basis
    coeff = IntMatrix(
        [[snf.diagonal[i] * snf.v_inv[i, j] for j in range(d)] for i in range(d)],
        ncols=d,
    )
    snf2 = smith_decomposition(coeff)
    coeff_inv = _rational_inverse(coeff)
    reps = [[0] * d]
    for i, e in enumerate(snf2.diagonal):
        reps = [r[:i] + [k] + r[i + 1:] for r in reps for k in range(e)]
    out = []
    seen = set()
    for y in reps:
        x = snf2.u_inv.apply(y)
        lam = [sum(coeff_inv[i][j] * x[j] for j in range(d)) for i in range(d)]
        frac = [l - (l.numerator // l.denominator) for l in lam]
        point = tuple(
            int(sum(Fraction(coeff[i, j]) * frac[j] for j in range(d)))
            for i in range(d)
        )
        if all(v == 0 for v in point) or point in seen:
            continue
        seen.add(point)
        weight = sum(frac)
        ambient = tuple(
            sum(sat_cols[j][t] * point[j] for j in range(d))
            for t in range(c.ambient)
        )
        out.append((weight, ambient))
    return out


def _rational_inverse(m: IntMatrix) -> list[list[Fraction]]:
    n = m.nrows
    a = [[Fraction(m[i, j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for k in range(n):
        piv = next(i for i in range(k, n) if a[i][k] != 0)
        a[k], a[piv] = a[piv], a[k]
        a[k] = [x / a[k][k] for x in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return [row[n:] for row in a]


def _stellar_subdivide(maximal: list[Cone], w: tuple[int, ...]) -> list[Cone]:
    out = []
    for c in maximal:
        lam = c.coordinates_of([Fraction(x) for x in w])
        if lam is None or any(x < 0 for x in lam):
            out.append(c)
            continue
        support = [i for i, x in enumerate(lam) if x > 0]
        if len(support) == 1 and w == c.rays[support[0]]:
            out.append(c)  # w already a ray
            continue
        for i in support:
            rays = list(c.rays)
            rays[i] = w
            out.append(Cone.from_rays(rays, ambient=c.ambient))
    return out


def resolve(f: Fan) -> Fan:
    """Regular subdivision with the same support.

    Only non-regular cones are touched; termination is guaranteed because
    each stellar subdivision strictly decreases multiplicities.
    """
    for c in f.maximal:
        if not c.is_simplicial():
            raise ValueError("resolution implemented for simplicial fans")
    maximal = list(f.maximal)
    while True:
        bad = sorted((c for c in maximal if not is_regular(c)), key=lambda c: c.rays)
        if not bad:
            break
        candidates = _parallelepiped_candidates(bad[0])
        weight, w = min(candidates, key=lambda t: (t[0], t[1]))
        maximal = _stellar_subdivide(maximal, w)
    return Fan.from_cones(maximal, ambient=f.ambient)


class HJResolution(NamedTuple):
    chain: tuple[int, ...]
    exceptional_gram: IntMatrix


def hj_continued_fraction(p: int, a: int) -> list[int]:
    """p/a = b_1 - 1/(b_2 - 1/(...)) with all b_i >= 2."""
    if not (1 <= a < p):
        raise ValueError("need 1 <= a < p")
    out = []
    num, den = p, a
    while den > 0:
        b = -(-num // den)  # ceiling
        out.append(b)
        num, den = den, b * den - num
    return out


def hj_resolution(p: int, a: int) -> HJResolution:
    """Exceptional chain of the surface singularity (1/p)(1, a).

    The chain of self-intersections is (-b_1, ..., -b_r) for the
    continued-fraction expansion of p/a; the intersection matrix is the
    tridiagonal matrix with that diagonal and 1 off the diagonal, of
    determinant +-p.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    bs = hj_continued_fraction(p, a)
    r = len(bs)
    gram = IntMatrix(
        [[-bs[i] if i == j else (1 if abs(i - j) == 1 else 0) for j in range(r)]
         for i in range(r)],
        ncols=r,
    )
    if abs(gram.det()) != p:
        raise RuntimeError("exceptional intersection matrix has wrong determinant")
    return HJResolution(chain=tuple(-b for b in bs), exceptional_gram=gram)


def surface_chain(resolved: Fan, original: Fan) -> tuple[int, ...]:
    """Self-intersection chain read off a resolved 2-dimensional fan.

    Consecutive rays v_(i-1) + v_(i+1) = b_i * v_i determine the chain
    (-b_1, ..., -b_r) of the new rays between the two original ones.
    """
    if resolved.ambient != 2:
        raise ValueError("chains only make sense for surfaces")
    (cone0,) = original.maximal
    v0, v1 = cone0.rays
    if v0[0] * v1[1] - v0[1] * v1[0] < 0:
        v0, v1 = v1, v0
    rays = list(resolved.rays())

    def cmp(a, b):
        cr = a[0] * b[1] - a[1] * b[0]
        return -1 if cr > 0 else (1 if cr < 0 else 0)

    ordered = sorted(rays, key=cmp_to_key(cmp))
    if ordered[0] != v0:
        ordered = ordered[::-1]
    if ordered[0] != v0 or ordered[-1] != v1:
        raise ValueError("resolved fan does not refine the original cone")
    chain = []
    for i in range(1, len(ordered) - 1):
        s = tuple(x + y for x, y in zip(ordered[i - 1], ordered[i + 1]))
        t = next(j for j in range(2) if ordered[i][j] != 0)
        b, rem = divmod(s[t], ordered[i][t])
        if rem != 0 or tuple(b * x for x in ordered[i]) != s:
            raise RuntimeError("rays do not satisfy the smooth chain relation")
        chain.append(-b)
    return tuple(chain)


class CohGroup(NamedTuple):
    """Finitely generated abelian group as (free rank, torsion divisors)."""

    free_rank: int
    divisors: tuple[int, ...]

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.divisors]
        return " + ".join(parts) if parts else "0"


_Z = CohGroup(1, ())
_ZERO = CohGroup(0, ())


def punctured_quotient_cohomology(p: int, n: int) -> list[CohGroup]:
    """Integral cohomology of the punctured quotient (C^n minus 0)/G.

    Degrees 0..2n: Z in degree 0, Z/p in each positive even degree below
    the top, Z in degree 2n-1, zero elsewhere.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 2:
        raise ValueError("need n >= 2")
    out = [_ZERO] * (2 * n + 1)
    out[0] = _Z
    for m in range(1, n):
        out[2 * m] = CohGroup(0, (p,))
    out[2 * n - 1] = _Z
    return out


def relative_quotient_cohomology(p: int, n: int) -> list[CohGroup]:
    """Cohomology of the pair (quotient, punctured quotient).

    The cone point is contractible, so the long exact sequence shifts the
    punctured cohomology: zero in degrees 0 and 1, Z/p in odd degrees
    3, 5, ..., 2n-1, and Z on top.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 2:
        raise ValueError("need n >= 2")
    out = [_ZERO] * (2 * n + 1)
    for m in range(2, n + 1):
        out[2 * m - 1] = CohGroup(0, (p,))
    out[2 * n] = _Z
    return out


def betti_complete_smooth(f: Fan) -> list[int]:
    """Even Betti numbers (b_0, b_2, ..., b_2n) of a complete regular fan.

    b_2k = sum over i of (-1)^(i-k) C(i, k) d_(n-i), where d_j counts the
    j-dimensional cones; odd cohomology vanishes.
    """
    n = f.ambient
    if not all(is_regular(c) for c in f.maximal):
        raise ValueError("fan is not regular")
    if not f.is_complete():
        raise ValueError("fan is not complete")
    counts = f.all_cones_by_dim()
    d = [counts.get(j, 0) for j in range(n + 1)]
    return [
        sum((-1) ** (i - k) * comb(i, k) * d[n - i] for i in range(k, n + 1))
        for k in range(n + 1)
    ]


def projective_space_fan(n: int) -> Fan:
    """Fan of n-dimensional projective space."""
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays.append(tuple([-1] * n))
    cones = [
        Cone.from_rays([rays[j] for j in range(n + 1) if j != skip], ambient=n)
        for skip in range(n + 1)
    ]
    return Fan.from_cones(cones, ambient=n)


def product_of_lines_fan() -> Fan:
    """Fan of the product of two projective lines."""
    cones = [
        Cone.from_rays([(sx, 0), (0, sy)], ambient=2)
        for sx in (1, -1)
        for sy in (1, -1)
    ]
    return Fan.from_cones(cones, ambient=2)
