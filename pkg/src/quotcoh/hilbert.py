"""Hilbert schemes of points on a K3 surface with natural prime-order actions.

The integral cohomology of the m-point Hilbert scheme has a basis indexed
by tuples (lambda, mu, nu^1, ..., nu^22) of partitions of total weight m:
lambda labels creation operators fed the unit class, mu those fed the
point class, and nu^i those fed the i-th degree-2 class.  A natural
automorphism acts through the degree-2 slots only, so as a module mod p
each cohomological degree is a direct sum, over "shapes" (the multiset of
part sizes occurring across the nu's), of tensor products of symmetric
powers of the 22-dimensional degree-2 module.  This is the load-bearing
modeling step of the whole front end.

The degree of a basis label is taken to be sum(2r-2) over lambda parts,
plus sum(2r+2) over mu parts, plus sum(2r) over nu parts.  That rule is
not axiomatic here: it is validated against the known Betti numbers of
the 2- and 3-point Hilbert schemes before any dependent computation runs,
and everything aborts loudly if the check fails.

Per-degree assembly only combines memoized pure values, so degrees can be
evaluated in parallel with results identical to a sequential run.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb
from typing import Iterator, NamedTuple

from .engine import (
    DegreeInvariants,
    GradedInvariants,
    QuotientReport,
    lefschetz_euler,
    quotient_report,
)
from .intmat import IntMatrix
from .lattices import (
    GLattice,
    Lattice,
    LatticeInvariants,
    RationalLattice,
    fujiki_constant,
    invariants,
    named_lattice,
    overlattice_from_glue,
    pushforward_quotient_lattice,
    rescale_to_primitive,
)
from .profiles import JordanProfile, direct_sum, sym_power, tensor

K3_B2 = 22
MAX_POINTS = 6


def _partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Partitions of n as descending tuples (the empty tuple for n = 0)."""
    if n == 0:
        yield ()
        return
    def gen(rest, maxpart):
        if rest == 0:
            yield ()
            return
        for part in range(min(rest, maxpart), 0, -1):
            for tail in gen(rest - part, part):
                yield (part,) + tail
    yield from gen(n, n)


class Shape(NamedTuple):
    """One G-isotypic family of basis labels.

    lam/mu are the partitions on the unit and point slots; multiplicities
    counts the nu-parts by size r (so multiplicities[r] parts of size r
    occur in total across the 22 degree-2 slots).
    """

    lam: tuple[int, ...]
    mu: tuple[int, ...]
    multiplicities: tuple[tuple[int, int], ...]

    @property
    def degree(self) -> int:
        d = sum(2 * r - 2 for r in self.lam) + sum(2 * r + 2 for r in self.mu)
        return d + sum(2 * r * k for r, k in self.multiplicities)

    def label_count(self, slots: int = K3_B2) -> int:
        c = 1
        for _, k in self.multiplicities:
            c *= comb(slots + k - 1, k)
        return c


@lru_cache(maxsize=None)
def _shapes(m: int) -> tuple[Shape, ...]:
    out = []
    for w_lam in range(m + 1):
        for lam in _partitions(w_lam):
            for w_mu in range(m + 1 - w_lam):
                for mu in _partitions(w_mu):
                    for rho in _partitions(m - w_lam - w_mu):
                        mult: dict[int, int] = {}
                        for r in rho:
                            mult[r] = mult.get(r, 0) + 1
                        out.append(Shape(lam, mu, tuple(sorted(mult.items()))))
    return tuple(out)


@dataclass(frozen=True)
class NakajimaLabel:
    """Index of one integral basis class of the m-point Hilbert scheme."""

    lam: tuple[int, ...]
    mu: tuple[int, ...]
    nus: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.nus) != K3_B2:
            raise ValueError(f"expected {K3_B2} degree-2 slots")

    @property
    def weight(self) -> int:
        return sum(self.lam) + sum(self.mu) + sum(sum(nu) for nu in self.nus)

    @property
    def degree(self) -> int:
        d = sum(2 * r - 2 for r in self.lam) + sum(2 * r + 2 for r in self.mu)
        return d + sum(2 * r for nu in self.nus for r in nu)


def _emit_labels(shape: Shape, idx: int, slot_parts: dict) -> Iterator[NakajimaLabel]:
    if idx == len(shape.multiplicities):
        nus = tuple(
            tuple(sorted(slot_parts.get(i, ()), reverse=True))
            for i in range(K3_B2)
        )
        yield NakajimaLabel(shape.lam, shape.mu, nus)
        return
    r, k = shape.multiplicities[idx]
    for combo in combinations_with_replacement(range(K3_B2), k):
        nxt = dict(slot_parts)
        for slot in combo:
            nxt[slot] = nxt.get(slot, ()) + (r,)
        yield from _emit_labels(shape, idx + 1, nxt)


def enumerate_basis(m: int) -> Iterator[tuple[NakajimaLabel, int]]:
    """All basis labels of weight m with their cohomological degrees."""
    if not (1 <= m <= MAX_POINTS):
        raise ValueError(f"supported range is 1 <= m <= {MAX_POINTS}")
    for shape in _shapes(m):
        for label in _emit_labels(shape, 0, {}):
            yield label, shape.degree


@lru_cache(maxsize=None)
def betti_numbers(m: int) -> tuple[int, ...]:
    """Betti numbers of the m-point Hilbert scheme, by shape counting."""
    if not (1 <= m <= MAX_POINTS):
        raise ValueError(f"supported range is 1 <= m <= {MAX_POINTS}")
    out = [0] * (4 * m + 1)
    for shape in _shapes(m):
        out[shape.degree] += shape.label_count()
    return tuple(out)


_DEGREE_RULE_TARGETS = {
    2: (1, 0, 23, 0, 276, 0, 23, 0, 1),
    (3, 4): 299,
}
_degree_rule_checked = False


def _ensure_degree_rule() -> None:
    """Abort everything downstream if the degree rule fails its oracle."""
    global _degree_rule_checked
    if _degree_rule_checked:
        return
    b2 = betti_numbers(2)
    ok = b2 == _DEGREE_RULE_TARGETS[2] and sum(b2) == 324
    ok = ok and betti_numbers(3)[4] == _DEGREE_RULE_TARGETS[(3, 4)]
    if not ok:
        raise RuntimeError(
            "degree rule validation failed: refusing to compute anything that "
            "depends on the basis grading"
        )
    _degree_rule_checked = True


def graded_profile(m: int, h2_profile: JordanProfile) -> GradedInvariants:
    """Per-degree module invariants of the m-point Hilbert scheme.

    h2_profile is the mod-p profile of the degree-2 cohomology of the
    surface (trivial and free blocks only, dimension 22).  Each shape of
    degree k contributes the tensor product over part sizes r of the
    k_r-th symmetric power of that module; the unit/point/diagonal slots
    contribute trivial factors.
    """
    _ensure_degree_rule()
    if not (1 <= m <= MAX_POINTS):
        raise ValueError(f"supported range is 1 <= m <= {MAX_POINTS}")
    if h2_profile.dimension() != K3_B2:
        raise ValueError(f"degree-2 profile must have dimension {K3_B2}")
    p = h2_profile.p
    if p < 3:
        raise ValueError("the front end handles odd primes only")
    if any(q not in (1, p) for q, _ in h2_profile.blocks):
        raise ValueError("degree-2 profile must consist of trivial and free blocks")
    by_degree = [JordanProfile.zero(p) for _ in range(4 * m + 1)]
    for shape in _shapes(m):
        module = JordanProfile.single(p, 1)
        for r, k in shape.multiplicities:
            module = tensor(module, sym_power(h2_profile, k))
        by_degree[shape.degree] = direct_sum(by_degree[shape.degree], module)
    betti = betti_numbers(m)
    degrees = []
    for k, prof in enumerate(by_degree):
        if prof.dimension() != betti[k]:
            raise RuntimeError(f"degree {k}: profile dimension differs from Betti number")
        middle = [q for q, _ in prof.blocks if 2 <= q <= p - 2]
        if middle:
            raise RuntimeError(f"degree {k}: unexpected middle blocks {middle}")
        degrees.append(
            DegreeInvariants.make(
                rank=prof.dimension(),
                l_plus=prof.count(1),
                l_minus=prof.count(p - 1),
                l_pf=prof.count(p),
            )
        )
    inv = GradedInvariants(
        p=p, n=2 * m, eta=0, degrees=tuple(degrees), strict=False
    )
    eta = lefschetz_euler(inv)
    return GradedInvariants(p=p, n=2 * m, eta=eta, degrees=tuple(degrees))


@dataclass(frozen=True)
class K3ActionSpec:
    """One row of the prime-order K3 quotient tables."""

    p: int
    kind: str  # "symplectic" | "non-symplectic"
    lattice_name: str
    n_sing: int
    l_plus_2: int
    l_p_2: int

    def quotient_lattice(self) -> Lattice:
        return _K3_LATTICES[self.lattice_name]()

    def h2_profile(self) -> JordanProfile:
        counts = {1: self.l_plus_2, self.p: self.l_p_2}
        return JordanProfile.from_counts(self.p, counts)


_K3_LATTICES = {
    "E8(-1) + U(2)^3": lambda: named_lattice("E8", -1).direct_sum(
        named_lattice("U", 2), named_lattice("U", 2), named_lattice("U", 2)
    ),
    "U(3) + U^2 + A2(-1)^2": lambda: named_lattice("U", 3).direct_sum(
        named_lattice("U"), named_lattice("U"),
        named_lattice("A2", -1), named_lattice("A2", -1),
    ),
    "U(5) + U^2": lambda: named_lattice("U", 5).direct_sum(
        named_lattice("U"), named_lattice("U")
    ),
    "U + Lambda7": lambda: named_lattice("U").direct_sum(named_lattice("Lambda7")),
    "U + E6(-1)": lambda: named_lattice("U").direct_sum(named_lattice("E6", -1)),
    "NS5 + A4(-1)": lambda: named_lattice("NS5").direct_sum(named_lattice("A4", -1)),
    "U + NS7": lambda: named_lattice("U").direct_sum(named_lattice("NS7")),
    "U": lambda: named_lattice("U"),
    "U(17) + L17^(17)": lambda: named_lattice("U", 17).direct_sum(
        named_lattice("L17dual17")
    ),
    "U(19) + NS19": lambda: named_lattice("U", 19).direct_sum(named_lattice("NS19")),
}

K3_TABLE = (
    K3ActionSpec(2, "symplectic", "E8(-1) + U(2)^3", 8, 6, 8),
    K3ActionSpec(3, "symplectic", "U(3) + U^2 + A2(-1)^2", 6, 4, 6),
    K3ActionSpec(5, "symplectic", "U(5) + U^2", 4, 2, 4),
    K3ActionSpec(7, "symplectic", "U + Lambda7", 3, 1, 3),
    K3ActionSpec(3, "non-symplectic", "U + E6(-1)", 3, 1, 7),
    K3ActionSpec(5, "non-symplectic", "NS5 + A4(-1)", 4, 2, 4),
    K3ActionSpec(7, "non-symplectic", "U + NS7", 3, 1, 3),
    K3ActionSpec(11, "non-symplectic", "U", 2, 0, 2),
    K3ActionSpec(17, "non-symplectic", "U(17) + L17^(17)", 7, 5, 1),
    K3ActionSpec(19, "non-symplectic", "U(19) + NS19", 5, 3, 1),
)


def nikulin_involution() -> GLattice:
    """The K3 lattice with the involution fixing three hyperbolic planes
    and swapping the two negative definite E8 summands."""
    u = named_lattice("U").gram
    e8m = named_lattice("E8", -1).gram
    gram = IntMatrix.block_diagonal(u, u, u, e8m, e8m)
    n = gram.nrows
    perm = list(range(6)) + list(range(14, 22)) + list(range(6, 14))
    action = IntMatrix(
        [[1 if perm[i] == j else 0 for j in range(n)] for i in range(n)], ncols=n
    )
    return GLattice(gram=gram, action=action, p=2)


class K3TableRow(NamedTuple):
    spec: K3ActionSpec
    lattice: Lattice
    invariants: LatticeInvariants
    n_sing: int
    pushforward_verified: bool | None


def k3_table(p: int, kind: str) -> K3TableRow:
    """Quotient lattice and singular point count for one table row.

    The order-2 symplectic row carries an explicit action; for it the
    pushforward construction is recomputed and its invariant triple is
    required to match the tabulated lattice.
    """
    spec = next((r for r in K3_TABLE if r.p == p and r.kind == kind), None)
    if spec is None:
        raise ValueError(f"no table row for p={p}, kind={kind!r}")
    lattice = spec.quotient_lattice()
    verified = None
    if (p, kind) == (2, "symplectic"):
        pushed = pushforward_quotient_lattice(nikulin_involution())
        if invariants(pushed) != invariants(lattice):
            raise RuntimeError("pushforward of the involution disagrees with the table")
        verified = True
    return K3TableRow(spec, lattice, invariants(lattice), spec.n_sing, verified)


def k3_graded_invariants(spec: K3ActionSpec) -> GradedInvariants:
    """Module invariants of the K3 surface itself under the row's action."""
    one = DegreeInvariants.make(rank=1, l_plus=1)
    zero = DegreeInvariants.make()
    h2 = DegreeInvariants.make(rank=K3_B2, l_plus=spec.l_plus_2, l_pf=spec.l_p_2)
    return GradedInvariants(
        p=spec.p, n=2, eta=spec.n_sing, degrees=(one, zero, h2, zero, one)
    )


# Invariant sublattices of the degree-2 cohomology of the surface for the
# symplectic actions of orders 5 and 7, ordered so the glue vectors below
# address the leading coordinates.  An invariant class is p-divisible in
# the dual exactly when it is a norm, which holds for the scaled blocks.
_BB_DATA = {
    5: {
        "blocks": lambda: named_lattice("U", 5).direct_sum(
            named_lattice("U", 5), named_lattice("U")
        ),
        "glue": [(0, Fraction(1, 5)), (1, Fraction(1, 5)),
                 (2, Fraction(1, 5)), (3, Fraction(1, 5))],
        "max_m": 4,
        "target": lambda m: named_lattice("U", 5).direct_sum(
            named_lattice("U"), named_lattice("U"),
            named_lattice("rank1", -10 * (m - 1)),
        ),
    },
    7: {
        "blocks": lambda: named_lattice("U", 7).direct_sum(named_lattice("Gamma7")),
        "glue": [(0, Fraction(1, 7)), (1, Fraction(1, 7)),
                 ((2, 3), (Fraction(1, 7), Fraction(3, 7)))],
        "max_m": 6,
        "target": lambda m: named_lattice("U").direct_sum(
            named_lattice("Lambda7"), named_lattice("rank1", -14 * (m - 1))
        ),
    },
}


def bb_target_lattice(p: int, m: int) -> Lattice:
    return _BB_DATA[p]["target"](m)


def bb_quotient(p: int, m: int) -> tuple[Lattice, Fraction]:
    """Degree-2 lattice and top-intersection constant of the quotient.

    Builds the invariant lattice of the m-point Hilbert scheme (surface
    part plus the half-diagonal class of square -2(m-1)), pushes it
    forward (Gram scaled by p), adjoins the explicit glue vectors of
    order p, and rescales the result to a primitive integral form.
    """
    if p not in _BB_DATA:
        raise ValueError("implemented for the symplectic orders 5 and 7")
    data = _BB_DATA[p]
    if not (2 <= m <= data["max_m"]):
        raise ValueError(f"m must lie in 2..{data['max_m']} for p={p}")
    _ensure_degree_rule()
    invariant = data["blocks"]().direct_sum(named_lattice("rank1", -2 * (m - 1)))
    rank = invariant.rank
    base = Lattice(invariant.gram * p)
    glue = []
    for entry in data["glue"]:
        vec = [Fraction(0)] * rank
        idx, val = entry
        if isinstance(idx, tuple):
            for i, v in zip(idx, val):
                vec[i] = v
        else:
            vec[idx] = val
        glue.append(vec)
    pushed = overlattice_from_glue(base, glue)
    c1, primitive = rescale_to_primitive(RationalLattice.from_lattice(pushed))
    fujiki = fujiki_constant(p, m, p * c1)
    return primitive, fujiki


class BettiTable(NamedTuple):
    b2: int
    b4: int
    b6: int | None
    n_sing: int


def betti_table(p: int, m: int) -> BettiTable:
    """Quotient Betti numbers b_2k = l_+^2k + l_pf^2k and the singular count."""
    if p not in (5, 7) or m not in (2, 3):
        raise ValueError("tabulated for p in {5, 7} and m in {2, 3}")
    report = hilbert_quotient_report(p, m)
    assert report.betti is not None
    return BettiTable(
        b2=report.betti[2],
        b4=report.betti[4],
        b6=report.betti[6] if m == 3 else None,
        n_sing=report.eta,
    )


def k3_h2_profile(p: int) -> JordanProfile:
    """Degree-2 profile of the surface for the symplectic order-p action."""
    spec = next(r for r in K3_TABLE if r.p == p and r.kind == "symplectic")
    return spec.h2_profile()


@lru_cache(maxsize=None)
def hilbert_invariants(p: int, m: int) -> GradedInvariants:
    return graded_profile(m, k3_h2_profile(p))


def hilbert_quotient_report(p: int, m: int, conjectural_split: bool = False) -> QuotientReport:
    return quotient_report(hilbert_invariants(p, m), conjectural_split=conjectural_split)


def hilbert_report(p: int, m: int, conjectural_split: bool = False) -> dict:
    """Complete JSON-ready report for the order-p quotient of the
    m-point Hilbert scheme (p in {5, 7})."""
    if p not in _BB_DATA:
        raise ValueError("implemented for the symplectic orders 5 and 7")
    data = _BB_DATA[p]
    if not (2 <= m <= data["max_m"]):
        raise ValueError(f"m must lie in 2..{data['max_m']} for p={p}")
    inv = hilbert_invariants(p, m)
    report = hilbert_quotient_report(p, m, conjectural_split=conjectural_split)
    lattice, fujiki = bb_quotient(p, m)
    n = 2 * m
    torsion: dict[str, int] = {}
    assert report.odd_torsion_pairs is not None
    for k, value in report.odd_torsion_pairs.items():
        lo, hi = 2 * k + 1, 2 * n - 2 * k + 1
        if lo > hi:
            continue
        if lo == hi:
            torsion[f"t{lo}"] = value // 2
        else:
            torsion[f"t{lo}_plus_t{hi}"] = value
    out = {
        "p": p,
        "m": m,
        "eta": report.eta,
        "invariants": inv.to_json(),
        "report": report.to_json(),
        "bb_lattice": {
            "gram": lattice.gram.to_lists(),
            "rank": invariants(lattice).rank,
            "signature": list(invariants(lattice).signature),
            "discriminant_group": list(invariants(lattice).discriminant_group),
        },
        "fujiki_constant": str(fujiki) if fujiki.denominator != 1 else fujiki.numerator,
        "betti": list(report.betti) if report.betti else None,
    }
    out.update(torsion)
    if m >= 4:
        out["provenance"] = "computed, no external check"
    return out
