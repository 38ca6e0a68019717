"""Exact rational matrices and the small linear algebra the library needs.

Everything here is exact: entries are rationals, elimination uses exact
pivoting, and orthogonality means Q^T Q equals the identity as rational
numbers, not up to rounding.  Rational orthogonal matrices for tests and
searches come from the Cayley transform of rational antisymmetric
matrices, which stays inside the rationals.
"""

from __future__ import annotations

import math
import random
from typing import Sequence

from .polyring import rational, rational_from_float


class RationalMatrix:
    """Immutable rectangular matrix with exact rational entries."""

    __slots__ = ("entries",)

    def __init__(self, rows: Sequence[Sequence]):
        entries = tuple(tuple(rational(v) for v in row) for row in rows)
        if entries and any(len(r) != len(entries[0]) for r in entries):
            raise ValueError("rows have unequal lengths")
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("RationalMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> "RationalMatrix":
        return cls([[0] * n_cols for _ in range(n_rows)])

    @classmethod
    def diagonal(cls, values: Sequence) -> "RationalMatrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_float(cls, rows) -> "RationalMatrix":
        """Entry-wise exact rationalization of a float matrix."""
        return cls([[rational_from_float(float(v)) for v in row] for row in rows])

    @property
    def n_rows(self) -> int:
        return len(self.entries)

    @property
    def n_cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    def __getitem__(self, index: tuple[int, int]):
        i, j = index
        return self.entries[i][j]

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.entries == other.entries

    __hash__ = None

    def _require_same_shape(self, other: "RationalMatrix") -> None:
        if self.n_rows != other.n_rows or self.n_cols != other.n_cols:
            raise ValueError(
                f"shape mismatch: {self.n_rows}x{self.n_cols} vs {other.n_rows}x{other.n_cols}"
            )

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._require_same_shape(other)
        return RationalMatrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ]
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._require_same_shape(other)
        return RationalMatrix(
            [
                [a - b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ]
        )

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix([[-a for a in row] for row in self.entries])

    def scale(self, scalar) -> "RationalMatrix":
        c = rational(scalar)
        return RationalMatrix([[a * c for a in row] for row in self.entries])

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.n_cols != other.n_rows:
            raise ValueError(
                f"shape mismatch: {self.n_rows}x{self.n_cols} @ {other.n_rows}x{other.n_cols}"
            )
        cols = [other.column(j) for j in range(other.n_cols)]
        return RationalMatrix(
            [
                [sum(a * b for a, b in zip(row, col)) for col in cols]
                for row in self.entries
            ]
        )

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(
            [self.column(j) for j in range(self.n_cols)]
        )

    def trace(self):
        if not self.is_square:
            raise ValueError("trace of a non-square matrix")
        return sum(self.entries[i][i] for i in range(self.n_rows))

    def is_symmetric(self) -> bool:
        return self.is_square and self == self.transpose()

    def is_skew(self) -> bool:
        return self.is_square and self.transpose() == -self

    def is_orthogonal(self) -> bool:
        return self.is_square and self.transpose() @ self == RationalMatrix.identity(self.n_rows)

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.entries for v in row)

    def max_abs(self):
        """Largest entry magnitude as an exact rational (0 for empty)."""
        values = [abs(v) for row in self.entries for v in row]
        return max(values) if values else rational(0)

    def matvec(self, vector: Sequence) -> tuple:
        v = [rational(x) for x in vector]
        if len(v) != self.n_cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.entries)

    def inverse(self) -> "RationalMatrix":
        """Exact inverse by Gauss-Jordan elimination."""
        if not self.is_square:
            raise ValueError("inverse of a non-square matrix")
        n = self.n_rows
        aug = [list(self.entries[i]) + [rational(1 if j == i else 0) for j in range(n)]
               for i in range(n)]
        for col in range(n):
            pivot_row = next((r for r in range(col, n) if aug[r][col] != 0), None)
            if pivot_row is None:
                raise ValueError("matrix is singular")
            aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
            pivot = aug[col][col]
            aug[col] = [v / pivot for v in aug[col]]
            for r in range(n):
                if r != col and aug[r][col] != 0:
                    factor = aug[r][col]
                    aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
        return RationalMatrix([row[n:] for row in aug])

    def kernel_basis(self) -> list[tuple]:
        """Rational basis of the nullspace via exact row reduction."""
        n_rows, n_cols = self.n_rows, self.n_cols
        rows = [list(r) for r in self.entries]
        pivots: list[int] = []
        r = 0
        for c in range(n_cols):
            pivot_row = next((i for i in range(r, n_rows) if rows[i][c] != 0), None)
            if pivot_row is None:
                continue
            rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
            pivot = rows[r][c]
            rows[r] = [v / pivot for v in rows[r]]
            for i in range(n_rows):
                if i != r and rows[i][c] != 0:
                    factor = rows[i][c]
                    rows[i] = [v - factor * w for v, w in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
            if r == n_rows:
                break
        free = [c for c in range(n_cols) if c not in pivots]
        basis = []
        for fc in free:
            vec = [rational(0)] * n_cols
            vec[fc] = rational(1)
            for pr, pc in enumerate(pivots):
                vec[pc] = -rows[pr][fc]
            basis.append(tuple(vec))
        return basis

    def to_float(self) -> list[list[float]]:
        return [[float(v) for v in row] for row in self.entries]

    def __repr__(self):
        return f"RationalMatrix({self.n_rows}x{self.n_cols})"


def dot(u: Sequence, v: Sequence):
    return sum(rational(a) * rational(b) for a, b in zip(u, v))


def is_square_rational(value) -> bool:
    """True when a rational is the square of a rational."""
    value = rational(value)
    if value < 0:
        return False
    num, den = value.numerator, value.denominator
    return math.isqrt(num) ** 2 == num and math.isqrt(den) ** 2 == den


def sqrt_rational(value):
    """Exact square root of a perfect-square rational."""
    value = rational(value)
    if not is_square_rational(value):
        raise ValueError(f"{value} is not a perfect rational square")
    return rational(math.isqrt(value.numerator), math.isqrt(value.denominator))


def gram_schmidt(vectors: Sequence[Sequence]) -> list[tuple]:
    """Orthogonalize (not normalize) a list of vectors, staying rational."""
    ortho: list[tuple] = []
    for v in vectors:
        w = [rational(x) for x in v]
        for u in ortho:
            uu = dot(u, u)
            if uu == 0:
                continue
            factor = dot(u, w) / uu
            w = [a - factor * b for a, b in zip(w, u)]
        if any(x != 0 for x in w):
            ortho.append(tuple(w))
    return ortho


def orthonormalize_rational(vectors: Sequence[Sequence]) -> list[tuple] | None:
    """Rational orthonormal basis of span(vectors), or None when none exists.

    Orthogonalization is always rational; normalization is possible only
    when each resulting norm squared is a perfect rational square.
    """
    ortho = gram_schmidt(vectors)
    result = []
    for w in ortho:
        norm_sq = dot(w, w)
        if not is_square_rational(norm_sq):
            return None
        norm = sqrt_rational(norm_sq)
        result.append(tuple(x / norm for x in w))
    return result


def cayley_orthogonal(skew: RationalMatrix) -> RationalMatrix:
    """(I - S)^{-1} (I + S) for antisymmetric S; always rational orthogonal."""
    if not skew.is_skew():
        raise ValueError("Cayley transform needs an antisymmetric matrix")
    n = skew.n_rows
    eye = RationalMatrix.identity(n)
    return (eye - skew).inverse() @ (eye + skew)


def random_rational_orthogonal(n: int, seed: int) -> RationalMatrix:
    """Deterministic rational orthogonal matrix from a seeded Cayley transform.

    Entries of the antisymmetric generator are small rationals so the
    resulting orthogonal matrix keeps modest denominators.
    """
    rng = random.Random(seed)
    rows = [[rational(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            value = rational(rng.randint(-3, 3), rng.randint(1, 4))
            rows[i][j] = value
            rows[j][i] = -value
    return cayley_orthogonal(RationalMatrix(rows))
