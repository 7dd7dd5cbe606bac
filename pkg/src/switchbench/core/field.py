"""
Exact linear algebra over the prime field F_p, p = 2^31 - 1, on int64 arrays.

Entries are kept in [0, p). Elementwise products stay below 2^62, so the only
operation needing care is the matrix product, whose sums are split into
16-bit halves of the left operand.
"""
import numpy as np

import logging

LOGGER = logging.getLogger(__name__)

PRIME = 2_147_483_647

_SPLIT = 1 << 16
# rows of the right operand a single int64 accumulation can take
_MAX_INNER = 1 << 15


def as_field(matrix, p: int = PRIME) -> np.ndarray:
    return np.mod(np.asarray(matrix, dtype=np.int64), p)


def inverse(value: int, p: int = PRIME) -> int:
    value = int(value) % p
    if value == 0:
        raise ZeroDivisionError("0 has no inverse in F_p")
    return pow(value, p - 2, p)


def matmul(a: np.ndarray, b: np.ndarray, p: int = PRIME) -> np.ndarray:
    """a @ b mod p without int64 overflow."""
    a = as_field(a, p)
    b = as_field(b, p)
    if a.shape[1] > _MAX_INNER:
        raise ValueError(f"Inner dimension {a.shape[1]} too large for exact int64 products")
    high, low = np.divmod(a, _SPLIT)
    out = np.mod(high @ b, p) * _SPLIT + low @ b
    return np.mod(out, p)


def row_reduce(matrix, p: int = PRIME) -> tuple[np.ndarray, list[int]]:
    """
    Reduced row echelon form over F_p. Returns the nonzero rows and their
    pivot columns; pivot columns of the result form an identity block.
    """
    work = as_field(matrix, p).copy()
    if work.ndim != 2:
        raise ValueError(f"Expected a 2-D matrix, got shape {work.shape}")
    rows, cols = work.shape
    pivots: list[int] = []
    top = 0
    for col in range(cols):
        if top == rows:
            break
        nonzero = np.flatnonzero(work[top:, col])
        if nonzero.size == 0:
            continue
        pivot = top + int(nonzero[0])
        if pivot != top:
            work[[top, pivot]] = work[[pivot, top]]
        work[top] = np.mod(work[top] * inverse(work[top, col], p), p)
        factors = work[:, col].copy()
        factors[top] = 0
        work = np.mod(work - np.mod(np.outer(factors, work[top]), p), p)
        pivots.append(col)
        top += 1
    return work[:top], pivots


def rank(matrix, p: int = PRIME) -> int:
    matrix = np.asarray(matrix)
    if matrix.size == 0:
        return 0
    return len(row_reduce(matrix, p)[1])
