"""Exact integer matrices and the linear algebra kernel built on them.

Everything in this package is computed over Z with arbitrary-precision
integers, or over a prime field F_p; there is no floating point anywhere.
The central primitive is the Smith normal form with unimodular transforms;
saturated kernels, image bases, integer solving and finite-quotient
invariants are all derived from it.

All values are immutable, all functions are pure, so everything here is
safe to share between threads.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

import numpy as np


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class IntMatrix:
    """Immutable matrix of arbitrary-precision integers, row-major.

    >>> IntMatrix([[1, 2], [3, 4]]) * IntMatrix.identity(2)
    IntMatrix([[1, 2], [3, 4]])
    """

    __slots__ = ("_rows", "_ncols")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        # operator.index rejects floats instead of truncating them
        data = tuple(tuple(operator.index(e) for e in row) for row in rows)
        if data:
            width = len(data[0])
            if any(len(row) != width for row in data):
                raise ValueError("ragged rows")
            if ncols is not None and ncols != width:
                raise ValueError("ncols does not match row width")
            ncols = width
        elif ncols is None:
            raise ValueError("empty matrix needs an explicit column count")
        self._rows = data
        self._ncols = ncols

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def ncols(self) -> int:
        return self._ncols

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"entry {(i, j)} outside {self.nrows}x{self.ncols}")
        return self._rows[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self._rows[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self._rows)

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix([[1 if i == j else 0 for j in range(n)] for i in range(n)], ncols=n)

    @staticmethod
    def zeros(nrows: int, ncols: int) -> "IntMatrix":
        return IntMatrix([[0] * ncols for _ in range(nrows)], ncols=ncols)

    @staticmethod
    def diagonal(entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return IntMatrix([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], ncols=n)

    @staticmethod
    def block_diagonal(*blocks: "IntMatrix") -> "IntMatrix":
        nr = sum(b.nrows for b in blocks)
        nc = sum(b.ncols for b in blocks)
        rows = [[0] * nc for _ in range(nr)]
        ri = ci = 0
        for b in blocks:
            for i in range(b.nrows):
                for j in range(b.ncols):
                    rows[ri + i][ci + j] = b[i, j]
            ri += b.nrows
            ci += b.ncols
        return IntMatrix(rows, ncols=nc)

    @staticmethod
    def vstack(*mats: "IntMatrix") -> "IntMatrix":
        ncols = mats[0].ncols
        if any(m.ncols != ncols for m in mats):
            raise ValueError("column counts differ")
        rows: list[tuple[int, ...]] = []
        for m in mats:
            rows.extend(m.rows)
        return IntMatrix(rows, ncols=ncols)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            [[self._rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
            ncols=self.nrows,
        )

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_shape(other)
        return IntMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self._rows, other._rows)],
            ncols=self.ncols,
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_shape(other)
        return IntMatrix(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self._rows, other._rows)],
            ncols=self.ncols,
        )

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-a for a in row] for row in self._rows], ncols=self.ncols)

    def _check_shape(self, other: "IntMatrix") -> None:
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise ValueError("shape mismatch")

    def __mul__(self, other):
        if isinstance(other, int):
            return IntMatrix([[other * a for a in row] for row in self._rows], ncols=self.ncols)
        if isinstance(other, IntMatrix):
            if self.ncols != other.nrows:
                raise ValueError("inner dimensions differ")
            cols = [other.column(j) for j in range(other.ncols)]
            return IntMatrix(
                [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in self._rows],
                ncols=other.ncols,
            )
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def apply(self, vector: Sequence[int]) -> tuple[int, ...]:
        if len(vector) != self.ncols:
            raise ValueError("vector length differs from column count")
        return tuple(sum(a * x for a, x in zip(row, vector)) for row in self._rows)

    def __pow__(self, k: int) -> "IntMatrix":
        if self.nrows != self.ncols:
            raise ValueError("powers need a square matrix")
        if k < 0:
            raise ValueError("negative power")
        result = IntMatrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def kronecker(self, other: "IntMatrix") -> "IntMatrix":
        rows = []
        for i in range(self.nrows):
            for k in range(other.nrows):
                rows.append(
                    [self._rows[i][j] * other._rows[k][l]
                     for j in range(self.ncols) for l in range(other.ncols)]
                )
        return IntMatrix(rows, ncols=self.ncols * other.ncols)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self._rows[i][j] == self._rows[j][i]
            for i in range(self.nrows) for j in range(i)
        )

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if not self.is_square():
            raise ValueError("determinant needs a square matrix")
        n = self.nrows
        if n == 0:
            return 1
        a = [list(row) for row in self._rows]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                pivot = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if pivot is None:
                    return 0
                a[k], a[pivot] = a[pivot], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self._rows]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self._ncols == other._ncols
            and self._rows == other._rows
        )

    def __hash__(self) -> int:
        return hash((self._rows, self._ncols))

    def __repr__(self) -> str:
        return f"IntMatrix({self.to_lists()!r})"


@dataclass(frozen=True)
class SmithDecomposition:
    """u * m * v = d with u, v unimodular and d a diagonal divisor chain."""

    u: IntMatrix
    u_inv: IntMatrix
    d: IntMatrix
    v: IntMatrix
    v_inv: IntMatrix
    diagonal: tuple[int, ...]
    rank: int


def _smith(m: IntMatrix) -> SmithDecomposition:
    nr, nc = m.nrows, m.ncols
    a = [list(row) for row in m.rows]
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    ui = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]
    vi = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]
        for t in range(nr):
            ui[t][i], ui[t][j] = ui[t][j], ui[t][i]

    def row_neg(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        for t in range(nr):
            ui[t][i] = -ui[t][i]

    def row_add(i, j, q):
        # row_i += q * row_j; inverse transform: column_j of u_inv -= q * column_i
        a[i] = [x + q * y for x, y in zip(a[i], a[j])]
        u[i] = [x + q * y for x, y in zip(u[i], u[j])]
        for t in range(nr):
            ui[t][j] -= q * ui[t][i]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for t in range(nc):
            v[t][i], v[t][j] = v[t][j], v[t][i]
        vi[i], vi[j] = vi[j], vi[i]

    def col_add(j, i, q):
        # col_j += q * col_i; inverse transform: row_i of v_inv -= q * row_j
        for row in a:
            row[j] += q * row[i]
        for t in range(nc):
            v[t][j] += q * v[t][i]
        vi[i] = [x - q * y for x, y in zip(vi[i], vi[j])]

    s = 0
    while s < min(nr, nc):
        best = None
        for i in range(s, nr):
            for j in range(s, nc):
                e = a[i][j]
                if e and (best is None or abs(e) < best[0]):
                    best = (abs(e), i, j)
        if best is None:
            break
        _, bi, bj = best
        if bi != s:
            row_swap(s, bi)
        if bj != s:
            col_swap(s, bj)
        if a[s][s] < 0:
            row_neg(s)

        pivot = a[s][s]
        clean = True
        for i in range(s + 1, nr):
            q = a[i][s] // pivot
            if q:
                row_add(i, s, -q)
            if a[i][s]:
                clean = False
        for j in range(s + 1, nc):
            q = a[s][j] // pivot
            if q:
                col_add(j, s, -q)
            if a[s][j]:
                clean = False
        if not clean:
            continue

        offender = next(
            ((i, j) for i in range(s + 1, nr) for j in range(s + 1, nc)
             if a[i][j] % pivot != 0),
            None,
        )
        if offender is not None:
            # fold the offending row into row s; the next pass shrinks the pivot
            row_add(s, offender[0], 1)
            continue
        s += 1

    diag = tuple(a[i][i] for i in range(min(nr, nc)))
    rank = sum(1 for x in diag if x != 0)
    return SmithDecomposition(
        u=IntMatrix(u, ncols=nr),
        u_inv=IntMatrix(ui, ncols=nr),
        d=IntMatrix(a, ncols=nc),
        v=IntMatrix(v, ncols=nc),
        v_inv=IntMatrix(vi, ncols=nc),
        diagonal=diag,
        rank=rank,
    )


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (u, d, v) with u*m*v = d, u and v unimodular.

    d is diagonal with non-negative entries forming a divisibility chain
    d[0] | d[1] | ... .

    >>> _, d, _ = smith_normal_form(IntMatrix.diagonal([2, 3]))
    >>> d
    IntMatrix([[1, 0], [0, 6]])
    """
    s = _smith(m)
    return s.u, s.d, s.v


def smith_decomposition(m: IntMatrix) -> SmithDecomposition:
    return _smith(m)


def rank_over_q(m: IntMatrix) -> int:
    return _smith(m).rank


def _np_mod(m: IntMatrix, p: int) -> np.ndarray:
    return np.array([[e % p for e in row] for row in m.rows], dtype=np.int64)


def _np_rank_mod_p(arr: np.ndarray, p: int) -> int:
    a = arr % p
    nr, nc = a.shape
    r = 0
    for col in range(nc):
        if r == nr:
            break
        nz = np.nonzero(a[r:, col])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, col]), p - 2, p)
        a[r] = (a[r] * inv) % p
        rest = a[r + 1:, col]
        mask = rest != 0
        if mask.any():
            a[r + 1:][mask] = (a[r + 1:][mask] - np.outer(rest[mask], a[r])) % p
        r += 1
    return r


def _np_matmul_mod(x: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    return (x @ y) % p


def rank_mod_p(m: IntMatrix, p: int) -> int:
    """Rank of m over the field with p elements."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p * p * max(m.nrows, m.ncols, 1) >= 2**62:
        raise ValueError("prime too large for the dense mod-p kernel")
    return _np_rank_mod_p(_np_mod(m, p), p)


def kernel_saturated(m: IntMatrix) -> IntMatrix:
    """Basis (as rows) of the saturated integer kernel {x : m*x = 0}.

    The returned rows span a direct summand of Z^ncols, so the quotient by
    their span is torsion-free.
    """
    s = _smith(m)
    rows = [s.v.column(j) for j in range(s.rank, m.ncols)]
    return IntMatrix(rows, ncols=m.ncols)


def image_basis(m: IntMatrix) -> IntMatrix:
    """Basis (as rows) of the image subgroup {m*x : x in Z^ncols} of Z^nrows."""
    s = _smith(m)
    rows = [
        tuple(s.diagonal[i] * e for e in s.u_inv.column(i))
        for i in range(s.rank)
    ]
    return IntMatrix(rows, ncols=m.nrows)


def quotient_group(sub: IntMatrix, ambient_rank: int) -> list[int]:
    """Elementary divisors (> 1) of Z^ambient_rank / <rows of sub>.

    With fewer rows than the ambient rank only the torsion relative to the
    saturation of the row span is reported; a full-rank sub yields the whole
    finite quotient.  Dependent rows are rejected.
    """
    if sub.ncols != ambient_rank:
        raise ValueError("row vectors do not live in Z^ambient_rank")
    if sub.nrows > ambient_rank:
        raise ValueError("more rows than the ambient rank")
    if sub.nrows == 0:
        return []
    s = _smith(sub)
    if s.rank != sub.nrows:
        raise ValueError("rows are dependent")
    return [d for d in s.diagonal if d > 1]


def solve_integer(a: IntMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """One integer solution x of a*x = b, or None if there is none."""
    if len(b) != a.nrows:
        raise ValueError("right-hand side has wrong length")
    s = _smith(a)
    ub = s.u.apply(b)
    y = [0] * a.ncols
    for i in range(a.nrows):
        d = s.diagonal[i] if i < len(s.diagonal) else 0
        if d == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % d != 0:
                return None
            y[i] = ub[i] // d
    return s.v.apply(y)


def primitive_vector(vec: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in vec:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive multiple")
    return tuple(x // g for x in vec)
