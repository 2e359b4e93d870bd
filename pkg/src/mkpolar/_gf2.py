"""Small GF(2) helpers on bit-packed rows (bit ``c`` of a row int is column ``c``)."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

MAX_ENUM_DIM = 24
_CHUNK = 1 << 20


def pack_rows(matrix) -> list[int]:
    m = np.asarray(matrix, dtype=np.uint8)
    if m.ndim != 2:
        raise ValueError("expected a 2-D binary matrix")
    return [sum(1 << c for c, bit in enumerate(row) if bit) for row in m]


def rank(rows: Iterable[int]) -> int:
    basis: list[int] = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
    return len(basis)


def span_table(rows: Sequence[int]) -> np.ndarray:
    """All 2^k XOR combinations of ``rows``; entry ``m`` is the codeword of message ``m``
    with row ``j`` weighted by bit ``j`` of ``m``."""
    table = np.zeros(1, dtype=np.uint64)
    for r in rows:
        table = np.concatenate([table, table ^ np.uint64(r)])
    return table


MAX_DUAL_REDUNDANCY = 20


def min_weight(rows: Sequence[int], n: int | None = None) -> int:
    """Minimum Hamming weight of the code spanned by ``rows`` (length ``n``).

    Low dimensions enumerate codewords; high-rate codes search the dual instead.
    """
    k = len(rows)
    if n is None:
        n = max(r.bit_length() for r in rows) if rows else 0
    if k > MAX_ENUM_DIM and n - k <= MAX_DUAL_REDUNDANCY:
        if rank(rows) != k:
            raise ValueError("generator matrix is rank deficient")
        return min_weight_dual(rows, n)
    return min_weight_enum(rows)


def min_weight_enum(rows: Sequence[int]) -> int:
    """Minimum weight over all ``2^k - 1`` nonzero combinations of ``rows``.

    Rows must be linearly independent and fit into 64 bits.
    """
    k = len(rows)
    if k == 0:
        raise ValueError("empty generator matrix")
    if k > MAX_ENUM_DIM:
        raise ValueError(f"dimension {k} exceeds the enumeration bound {MAX_ENUM_DIM}")
    if rank(rows) != k:
        raise ValueError("generator matrix is rank deficient")
    if max(rows).bit_length() > 64:
        raise ValueError("codeword length exceeds 64 bits")
    if k <= 16:
        table = span_table(rows)
        return int(np.bitwise_count(table[1:]).min())
    # meet in the middle: low half enumerated fully, high half chunked
    lo = span_table(rows[:14])
    hi = span_table(rows[14:])
    best = 64
    lo_w = np.bitwise_count(lo[1:]).min()
    best = min(best, int(lo_w))
    step = max(1, _CHUNK // lo.size)
    for start in range(1, hi.size, step):
        block = hi[start:start + step, None] ^ lo[None, :]
        best = min(best, int(np.bitwise_count(block).min()))
    return best


def parity_columns(rows: Sequence[int], n: int) -> list[int]:
    """Columns of a parity-check matrix (as ints over ``n - k`` bits) of the full-rank code ``rows``."""
    work = list(rows)
    pivots = []
    for i in range(len(work)):
        col = next((c for c in range(n) if any((work[j] >> c) & 1 for j in range(i, len(work)))), None)
        # choose a pivot row for the lowest column still present among rows i..
        while True:
            j = next((j for j in range(i, len(work)) if (work[j] >> col) & 1), None)
            if j is not None:
                break
            col += 1
        work[i], work[j] = work[j], work[i]
        for t in range(len(work)):
            if t != i and (work[t] >> col) & 1:
                work[t] ^= work[i]
        pivots.append(col)
    free = [c for c in range(n) if c not in set(pivots)]
    cols = [0] * n
    for j, c in enumerate(free):
        cols[c] = 1 << j
    for i, c in enumerate(pivots):
        cols[c] = sum(1 << j for j, f in enumerate(free) if (work[i] >> f) & 1)
    return cols


def min_weight_dual(rows: Sequence[int], n: int) -> int:
    """Smallest number of parity-check columns summing to zero (= minimum distance)."""
    cols = parity_columns(rows, n)
    if any(c == 0 for c in cols):
        return 1
    size = 1 << (n - len(rows))
    best = n + 1
    for j, target in enumerate(cols):
        others = [c for t, c in enumerate(cols) if t != j]
        dist = np.full(size, -1, dtype=np.int64)
        dist[0] = 0
        frontier = np.array([0], dtype=np.int64)
        depth = 0
        while frontier.size and dist[target] < 0 and depth + 1 < best:
            depth += 1
            nxt = (frontier[:, None] ^ np.array(others, dtype=np.int64)[None, :]).ravel()
            nxt = np.unique(nxt[dist[nxt] < 0])
            dist[nxt] = depth
            frontier = nxt
        if dist[target] >= 0:
            best = min(best, 1 + int(dist[target]))
    return best
