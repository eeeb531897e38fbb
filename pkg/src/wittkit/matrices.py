"""Dense rectangular matrices over an arbitrary wittkit ring.

Matrices are tuples of row tuples; the ring is passed explicitly so the
same helpers serve matrix rings, bimodules and Gaussian elimination.
"""

from __future__ import annotations

from .errors import ShapeError


def shape(A):
    rows = len(A)
    cols = len(A[0]) if rows else 0
    return rows, cols


def as_matrix(rows):
    return tuple(tuple(r) for r in rows)


def zeros(ring, rows, cols):
    z = ring.zero
    return tuple(tuple(z for _ in range(cols)) for _ in range(rows))


def identity(ring, n):
    z, o = ring.zero, ring.one
    return tuple(tuple(o if i == j else z for j in range(n)) for i in range(n))


def mat_add(ring, A, B):
    if shape(A) != shape(B):
        raise ShapeError(f"cannot add {shape(A)} and {shape(B)} matrices")
    return tuple(
        tuple(ring.add(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(A, B)
    )


def mat_neg(ring, A):
    return tuple(tuple(ring.neg(x) for x in row) for row in A)


def mat_sub(ring, A, B):
    return mat_add(ring, A, mat_neg(ring, B))


def mat_scale(ring, n, A):
    return tuple(tuple(ring.scale(n, x) for x in row) for row in A)


def mat_mul(ring, A, B):
    (r, m), (m2, c) = shape(A), shape(B)
    if m != m2:
        raise ShapeError(f"cannot multiply {r}x{m} by {m2}x{c}")
    add, mul, zero = ring.add, ring.mul, ring.zero
    out = []
    for i in range(r):
        row = []
        Ai = A[i]
        for j in range(c):
            acc = zero
            for s in range(m):
                acc = add(acc, mul(Ai[s], B[s][j]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_pow(ring, A, n):
    rows, cols = shape(A)
    if rows != cols:
        raise ShapeError("only square matrices have powers")
    result = identity(ring, rows)
    for _ in range(n):
        result = mat_mul(ring, result, A)
    return result


def mat_trace(ring, A):
    rows, cols = shape(A)
    if rows != cols:
        raise ShapeError("trace of a non-square matrix")
    acc = ring.zero
    for i in range(rows):
        acc = ring.add(acc, A[i][i])
    return acc


def transpose(A):
    return tuple(zip(*A)) if A else ()


def is_zero_matrix(ring, A):
    return all(ring.is_zero(x) for row in A for x in row)
