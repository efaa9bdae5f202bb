"""Jordan profiles of order-p actions over the prime field F_p.

An endomorphism of a finite-dimensional F_p-vector space whose p-th power
is the identity has minimal polynomial dividing (X-1)^p, so it decomposes
into unipotent Jordan blocks N_q of sizes 1 <= q <= p.  The profile
(multiset of block sizes) is the complete isomorphism invariant of the
module, and it is all that is needed downstream: cohomology dimensions of
the group acting, tensor products, symmetric powers.

Profiles are extracted from the rank filtration of (A - 1)^k rather than
from an explicit Jordan basis; only the counts matter.  Tensor and
symmetric powers of single blocks are computed by building the induced
matrix on a representative unipotent block and re-extracting the profile;
results are memoized per (p, block sizes, exponent), so concurrent callers
simply recompute the same pure value.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb
from typing import Mapping, NamedTuple

import numpy as np

from .intmat import IntMatrix, is_prime, _np_mod, _np_matmul_mod, _np_rank_mod_p


@dataclass(frozen=True)
class JordanProfile:
    """Multiset of Jordan block sizes of an order-p action mod p.

    blocks is a sorted tuple of (size, count) pairs with positive counts.
    """

    p: int
    blocks: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        for q, c in self.blocks:
            if not (1 <= q <= self.p):
                raise ValueError(f"block size {q} outside 1..{self.p}")
            if c <= 0:
                raise ValueError("block counts must be positive")
        if tuple(sorted(self.blocks)) != self.blocks:
            raise ValueError("blocks must be sorted")
        if len({q for q, _ in self.blocks}) != len(self.blocks):
            raise ValueError("duplicate block size")

    @classmethod
    def from_counts(cls, p: int, counts: Mapping[int, int]) -> "JordanProfile":
        blocks = tuple(sorted((q, c) for q, c in counts.items() if c))
        return cls(p, blocks)

    @classmethod
    def zero(cls, p: int) -> "JordanProfile":
        return cls(p, ())

    @classmethod
    def single(cls, p: int, q: int, count: int = 1) -> "JordanProfile":
        return cls.from_counts(p, {q: count})

    @property
    def counts(self) -> dict[int, int]:
        return dict(self.blocks)

    def count(self, q: int) -> int:
        return dict(self.blocks).get(q, 0)

    def dimension(self) -> int:
        return sum(q * c for q, c in self.blocks)

    def total_blocks(self) -> int:
        return sum(c for _, c in self.blocks)

    def __add__(self, other: "JordanProfile") -> "JordanProfile":
        return direct_sum(self, other)

    def scaled(self, k: int) -> "JordanProfile":
        if k < 0:
            raise ValueError("negative multiplicity")
        if k == 0:
            return JordanProfile.zero(self.p)
        return JordanProfile(self.p, tuple((q, c * k) for q, c in self.blocks))

    def __repr__(self) -> str:
        inside = " + ".join(f"N{q}^{c}" if c > 1 else f"N{q}" for q, c in self.blocks)
        return f"JordanProfile(p={self.p}, {inside or '0'})"


def _profile_from_array(a: np.ndarray, p: int) -> JordanProfile:
    n = a.shape[0]
    apow = np.eye(n, dtype=np.int64)
    for _ in range(p):
        apow = _np_matmul_mod(apow, a, p)
    if not np.array_equal(apow, np.eye(n, dtype=np.int64)):
        raise ValueError("matrix is not of order dividing p over F_p")
    b = (a - np.eye(n, dtype=np.int64)) % p
    ranks = [n]
    cur = np.eye(n, dtype=np.int64)
    for _ in range(p):
        cur = _np_matmul_mod(cur, b, p)
        ranks.append(_np_rank_mod_p(cur, p))
    # ranks[p] = 0 because (A-1)^p = A^p - 1 = 0 over F_p
    counts = {}
    for q in range(1, p + 1):
        at_least_q = ranks[q - 1] - ranks[q]
        at_least_q1 = (ranks[q] - ranks[q + 1]) if q < p else 0
        if at_least_q - at_least_q1:
            counts[q] = at_least_q - at_least_q1
    return JordanProfile.from_counts(p, counts)


def jordan_profile(action: IntMatrix, p: int) -> JordanProfile:
    """Block-size counts of an integer matrix of order p, reduced mod p.

    The number of blocks of size >= q equals
    rank((A-1)^(q-1)) - rank((A-1)^q) over F_p.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not action.is_square():
        raise ValueError("action must be square")
    return _profile_from_array(_np_mod(action, p), p)


def cohomology_dim(prof: JordanProfile, i: int) -> int:
    """dim_F H^i(G, M) for the module M with the given profile.

    Every block contributes one dimension in degree 0; blocks of size < p
    contribute one dimension in every positive degree, the free blocks
    N_p contribute nothing there.
    """
    if i < 0:
        raise ValueError("negative degree")
    if i == 0:
        return prof.total_blocks()
    return sum(c for q, c in prof.blocks if q < prof.p)


def direct_sum(a: JordanProfile, b: JordanProfile) -> JordanProfile:
    if a.p != b.p:
        raise ValueError("profiles live over different primes")
    counts = a.counts
    for q, c in b.blocks:
        counts[q] = counts.get(q, 0) + c
    return JordanProfile.from_counts(a.p, counts)


def representative_matrix(prof: JordanProfile) -> IntMatrix:
    """Block-diagonal unipotent matrix with the given profile (canonical)."""
    blocks = []
    for q, c in prof.blocks:
        jb = IntMatrix([[1 if j == i or j == i + 1 else 0 for j in range(q)] for i in range(q)])
        blocks.extend([jb] * c)
    if not blocks:
        return IntMatrix([], ncols=0)
    return IntMatrix.block_diagonal(*blocks)


@lru_cache(maxsize=None)
def _tensor_single(p: int, q1: int, q2: int) -> JordanProfile:
    if q1 > q2:
        q1, q2 = q2, q1
    if q1 == 1:
        return JordanProfile.single(p, q2)
    if q2 == p:
        # N_p is the free module F[G]; F[G] tensor M is free of rank dim M
        return JordanProfile.single(p, p, q1)
    j1 = representative_matrix(JordanProfile.single(p, q1))
    j2 = representative_matrix(JordanProfile.single(p, q2))
    return jordan_profile(j1.kronecker(j2), p)


def tensor(a: JordanProfile, b: JordanProfile) -> JordanProfile:
    """Profile of the tensor product module (dimensions multiply)."""
    if a.p != b.p:
        raise ValueError("profiles live over different primes")
    counts: dict[int, int] = {}
    for q1, c1 in a.blocks:
        for q2, c2 in b.blocks:
            for q, c in _tensor_single(a.p, q1, q2).blocks:
                counts[q] = counts.get(q, 0) + c * c1 * c2
    return JordanProfile.from_counts(a.p, counts)


def sym_power_matrix(m: IntMatrix, k: int) -> IntMatrix:
    """Matrix of the induced action on degree-k monomials (exact, over Z).

    Basis: monomials e_{t_1}***e_{t_k} with t_1 <= ... <= t_k, ordered
    lexicographically.  Index t of the module maps to column t of m.
    """
    if not m.is_square():
        raise ValueError("symmetric powers need a square matrix")
    n = m.nrows
    basis = list(combinations_with_replacement(range(n), k))
    index = {mono: i for i, mono in enumerate(basis)}
    cols = [[(s, m[s, t]) for s in range(n) if m[s, t] != 0] for t in range(n)]
    out = [[0] * len(basis) for _ in range(len(basis))]
    for j, mono in enumerate(basis):
        acc: dict[tuple[int, ...], int] = {(): 1}
        for t in mono:
            nxt: dict[tuple[int, ...], int] = {}
            for partial, coeff in acc.items():
                for s, ms in cols[t]:
                    key = tuple(sorted(partial + (s,)))
                    nxt[key] = nxt.get(key, 0) + coeff * ms
            acc = nxt
        for mono_out, coeff in acc.items():
            if coeff:
                out[index[mono_out]][j] += coeff
    return IntMatrix(out, ncols=len(basis))


@lru_cache(maxsize=None)
def _sym_single(p: int, q: int, k: int) -> JordanProfile:
    if k == 0 or q == 1:
        return JordanProfile.single(p, 1)
    if k == 1:
        return JordanProfile.single(p, q)
    jb = representative_matrix(JordanProfile.single(p, q))
    sym = sym_power_matrix(jb, k)
    return _profile_from_array(_np_mod(sym, p), p)


@lru_cache(maxsize=None)
def _sym_profile(p: int, blocks: tuple[tuple[int, int], ...], k: int) -> JordanProfile:
    if k == 0:
        return JordanProfile.single(p, 1)
    if not blocks:
        return JordanProfile.zero(p)
    (q, c), rest = blocks[0], blocks[1:]
    total = JordanProfile.zero(p)
    if q == 1:
        # trivial blocks: Sym^j of N_1^c is trivial of dimension C(c+j-1, j)
        for j in range(k + 1):
            tail = _sym_profile(p, rest, k - j)
            total = total + tensor(JordanProfile.single(p, 1, comb(c + j - 1, j)), tail)
        return total
    head = ((q, c - 1),) + rest if c > 1 else rest
    for j in range(k + 1):
        total = total + tensor(_sym_single(p, q, j), _sym_profile(p, head, k - j))
    return total


def sym_power(a: JordanProfile, k: int) -> JordanProfile:
    """Profile of the k-th symmetric power.

    Over a direct sum the symmetric power expands multiplicatively,
    Sym^k(A + B) = sum over i+j=k of Sym^i(A) tensor Sym^j(B), which
    reduces everything to memoized single-block powers Sym^k(N_q).
    """
    if k < 0:
        raise ValueError("negative symmetric power")
    return _sym_profile(a.p, a.blocks, k)


class CRDecomposition(NamedTuple):
    """Counts (r, s, t) of free / cyclotomic-ideal / trivial summands.

    For p = 2 the mod-2 profile cannot separate s from t; only r and the
    sum s + t are reported (s and t are None).
    """

    r: int
    s: int | None
    t: int | None
    s_plus_t: int


def curtis_reiner_check(action: IntMatrix, p: int) -> CRDecomposition:
    """Summand counts of an exact order-p integer action from its profile.

    Requires action^p = identity over Z.  Block sizes strictly between 2
    and p-1 never occur for such actions; their presence is reported as an
    inconsistency.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not action.is_square():
        raise ValueError("action must be square")
    if action ** p != IntMatrix.identity(action.nrows):
        raise ValueError("action^p is not the identity over Z")
    prof = jordan_profile(action, p)
    middle = [q for q, _ in prof.blocks if 2 <= q <= p - 2]
    if middle:
        raise ValueError(
            f"blocks of size {middle} cannot arise from an order-{p} integer action"
        )
    if p == 2:
        return CRDecomposition(r=prof.count(2), s=None, t=None, s_plus_t=prof.count(1))
    return CRDecomposition(
        r=prof.count(p),
        s=prof.count(p - 1),
        t=prof.count(1),
        s_plus_t=prof.count(p - 1) + prof.count(1),
    )
