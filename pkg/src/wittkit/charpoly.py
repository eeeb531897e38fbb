"""Non-commutative determinants and characteristic elements.

The determinant of a special matrix U (U = I mod t) is computed by
division-free Gaussian elimination: the diagonal pivot is always a special
unit, so it is inverted as a series and no pivot search is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import matrices as mx
from .errors import MalformedInputError, NotSpecialUnitError, ShapeError
from .rings import MatrixRing, Ring, ring_make
from .series import TruncatedSeries, su_inv
from .witt import TruncationSet, WittRep, from_series, to_series, witt_sum


@dataclass(frozen=True)
class SpecialMatrix:
    ring: Ring
    N: int
    entries: tuple  # rows of TruncatedSeries

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.entries)
        object.__setattr__(self, "entries", rows)
        k = len(rows)
        R = self.ring
        for i, row in enumerate(rows):
            if len(row) != k:
                raise ShapeError("special matrices are square")
            for j, f in enumerate(row):
                if f.ring != R or f.N != self.N:
                    raise ShapeError("entries must share ring and precision")
                expected = R.one if i == j else R.zero
                if f.coeffs[0] != expected:
                    raise NotSpecialUnitError(f"entry ({i},{j}) is not {'1' if i == j else '0'} mod t")

    @property
    def k(self) -> int:
        return len(self.entries)

    @classmethod
    def identity_minus(cls, ring: Ring, f, N: int) -> "SpecialMatrix":
        """I - f t for a square matrix f over ring."""
        k, cols = mx.shape(f)
        if k != cols:
            raise ShapeError("characteristic elements need a square matrix")
        rows = []
        for i in range(k):
            row = []
            for j in range(k):
                c0 = ring.one if i == j else ring.zero
                coeffs = [c0, ring.neg(f[i][j])] if N > 1 else [c0]
                row.append(TruncatedSeries.from_coeffs(ring, coeffs, N))
            rows.append(tuple(row))
        return cls(ring, N, tuple(rows))

    @classmethod
    def from_matrix_series(cls, u: TruncatedSeries) -> "SpecialMatrix":
        """Transpose the nesting: a series of k x k matrices becomes a matrix of series."""
        if not isinstance(u.ring, MatrixRing):
            raise ShapeError("expected a series over a matrix ring")
        base, k = u.ring.base, u.ring.k
        rows = tuple(
            tuple(TruncatedSeries(base, tuple(c[i][j] for c in u.coeffs)) for j in range(k))
            for i in range(k)
        )
        return cls(base, u.N, rows)

    def conjugate_by_permutation(self, order: Sequence[int]) -> "SpecialMatrix":
        if sorted(order) != list(range(self.k)):
            raise ShapeError(f"{list(order)} is not a permutation of the rows")
        rows = tuple(tuple(self.entries[i][j] for j in order) for i in order)
        return SpecialMatrix(self.ring, self.N, rows)

    def to_json(self) -> dict:
        return {
            "ring": self.ring.descriptor(),
            "k": self.k,
            "N": self.N,
            "entries": [[f.to_json()["coeffs"] for f in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, obj: dict, ring: Ring | None = None) -> "SpecialMatrix":
        try:
            R = ring if ring is not None else ring_make(obj["ring"])
            N = int(obj["N"])
            rows = []
            for row in obj["entries"]:
                out = []
                for e in row:
                    coeffs = e["coeffs"] if isinstance(e, dict) else e
                    out.append(TruncatedSeries.from_coeffs(R, [R.element_from_json(c) for c in coeffs], N))
                rows.append(tuple(out))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInputError(f"bad special matrix document: {exc}") from exc
        if "k" in obj and int(obj["k"]) != len(rows):
            raise MalformedInputError("declared size k does not match the entries")
        return cls(R, N, tuple(rows))


def eliminate(U: SpecialMatrix) -> list[TruncatedSeries]:
    """Diagonal pivots left after clearing everything below the diagonal."""
    rows = [list(r) for r in U.entries]
    k = U.k
    pivots = []
    for i in range(k):
        pivot = rows[i][i]
        pivots.append(pivot)
        if i == k - 1:
            break
        inverse = su_inv(pivot)
        for r in range(i + 1, k):
            if rows[r][i].valuation() >= U.N:
                continue
            factor = rows[r][i] * inverse
            for j in range(i + 1, k):
                rows[r][j] = rows[r][j] - factor * rows[i][j]
            rows[r][i] = TruncatedSeries.zero(U.ring, U.N)
    return pivots


def witt_det(U: SpecialMatrix, S: TruncationSet | None = None, order: Sequence[int] | None = None) -> WittRep:
    """Witt sum of the diagonal pivots, in elimination order."""
    if S is None:
        S = TruncationSet.full(U.N)
    if order is not None:
        U = U.conjugate_by_permutation(order)
    return witt_sum((from_series(p, S) for p in eliminate(U)), U.ring, U.N, S)


def chi(ring: Ring, f, N: int, S: TruncationSet | None = None) -> WittRep:
    """Characteristic element of a square matrix f: the determinant of I - f t."""
    return witt_det(SpecialMatrix.identity_minus(ring, mx.as_matrix(f), N), S)


def morita_map(w: WittRep) -> WittRep:
    """W(Matrix(k, R)) -> W(R)."""
    return witt_det(SpecialMatrix.from_matrix_series(to_series(w)), w.S)


def hs_trace(ring: Ring, f):
    return ring.trace_class(mx.mat_trace(ring, f))


def block_matrix(blocks) -> tuple:
    """Assemble a matrix from a grid of blocks with matching heights and widths."""
    rows = []
    for block_row in blocks:
        height = mx.shape(block_row[0])[0]
        for i in range(height):
            row = []
            for block in block_row:
                if mx.shape(block)[0] != height:
                    raise ShapeError("blocks in one row must have equal height")
                row.extend(block[i])
            rows.append(tuple(row))
    width = len(rows[0]) if rows else 0
    if any(len(r) != width for r in rows):
        raise ShapeError("blocks in one column must have equal width")
    return tuple(rows)
