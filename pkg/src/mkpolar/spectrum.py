"""Minimum-distance spectra of Kronecker products of kernels."""

from __future__ import annotations

import io
from functools import lru_cache
from itertools import chain, permutations
from typing import Sequence

import numpy as np

from . import _gf2
from .kernel import Kernel, KernelSpectrum, spectrum_of

# a spectrum of any (composite) matrix has the same shape as a kernel's
DistanceSpectrum = KernelSpectrum

MAX_BRUTEFORCE_DIM = _gf2.MAX_ENUM_DIM


def min_distance_bruteforce(G) -> int:
    """Minimum weight over all ``2^k - 1`` nonzero codewords of the row space of ``G``."""
    G = np.atleast_2d(np.asarray(G, dtype=np.uint8))
    if G.shape[0] > MAX_BRUTEFORCE_DIM:
        raise ValueError(f"k={G.shape[0]} exceeds brute-force bound {MAX_BRUTEFORCE_DIM}")
    return _gf2.min_weight_enum(_gf2.pack_rows(G))


def _as_distances(S) -> np.ndarray:
    if isinstance(S, KernelSpectrum):
        S = S.distances
    return np.asarray(S, dtype=float)


def sector_spectrum_vector(n: int, S) -> np.ndarray:
    """``(2,1)^{(x)n} (x) S``, unsorted.

    Entry ``l`` belongs to sector ``q = (N-1-l) // p`` at within-sector rank ``l % p``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    v = np.ones(1)
    for _ in range(n):
        v = np.kron(v, [2.0, 1.0])
    return np.kron(v, _as_distances(S))


def greedy_sector_design(s_vec, spectrum: KernelSpectrum, K: int):
    """Greedy information-set construction over sectors of ``p = spectrum.size`` rows.

    Repeatedly takes the largest remaining entry of ``s_vec`` (ties to the
    smallest index) and grows the corresponding sector from its optimal row
    set of size ``c`` to the one of size ``c + 1``. Returns the information set
    and the extracted value of every step.
    """
    s = np.array(s_vec, dtype=float)
    N, p = s.size, spectrum.size
    if N % p:
        raise ValueError("vector length is not a multiple of the sector size")
    if not 0 <= K <= N:
        raise ValueError(f"K={K} out of range 0..{N}")
    info: set[int] = set()
    counts = [0] * (N // p)
    values = []
    for _ in range(K):
        l = int(np.argmax(s))
        c = l % p
        q = (N - l - 1) // p
        if counts[q] != c:
            raise RuntimeError("sector entries are not non-increasing")
        info.difference_update(r + q * p for r in spectrum.rows(c))
        info.update(r + q * p for r in spectrum.rows(c + 1))
        counts[q] += 1
        values.append(float(s[l]))
        s[l] = -np.inf
    return tuple(sorted(info)), values


def spectrum_sorted(n: int, S: KernelSpectrum) -> KernelSpectrum:
    """Spectrum of ``T_2^{(x)n} (x) T_p``: the sorted sector vector, with row sets
    produced by the greedy sector construction for each dimension."""
    vec = sector_spectrum_vector(n, S)
    N = vec.size
    row_sets = []
    for k in range(1, N + 1):
        info, _ = greedy_sector_design(vec, S, k)
        row_sets.append(info)
    values = tuple(int(v) for v in sorted(vec, reverse=True))
    return KernelSpectrum(values, tuple(row_sets))


def list_partitions(k: int, p1: int, p2: int) -> list[tuple[int, ...]]:
    """Partitions of ``k`` into at most ``p1`` parts, each in ``1..p2``.

    Parts are listed in non-decreasing order; partitions are ordered by length,
    then lexicographically.
    """
    if not 1 <= k <= p1 * p2:
        raise ValueError(f"k={k} cannot be split into at most {p1} parts of size <= {p2}")
    out: list[tuple[int, ...]] = []

    def rec(remaining, smallest, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        if len(acc) == p1:
            return
        for part in range(smallest, min(p2, remaining) + 1):
            acc.append(part)
            rec(remaining - part, part, acc)
            acc.pop()

    rec(k, 1, [])
    return sorted(out, key=lambda t: (len(t), t))


def _sector_candidates(k: int, SA: KernelSpectrum, SB: KernelSpectrum):
    """Row sets of ``A (x) B`` with ``k`` rows: sectors from an optimal row set of A,
    each filled with an optimal row set of B. Canonical assignment first."""
    p1, p2 = SA.size, SB.size
    for part in list_partitions(k, p1, p2):
        sectors = SA.rows(len(part))
        for order in sorted(set(permutations(part))):
            yield tuple(sorted(r + i * p2 for kj, i in zip(order, sectors) for r in SB.rows(kj)))


def kronecker_spectrum(A: Kernel, B: Kernel) -> KernelSpectrum:
    """Spectrum of ``A (x) B`` restricted to row sets built from optimal row sets of A and B.

    For each dimension ``k`` and each partition ``<k_1..k_t>`` the sectors are
    the optimal ``t``-row set of ``A``; every distinct assignment of parts to
    those sectors is scored by brute force. The same search on ``B (x) A`` is
    mapped back through the row permutation ``(a, j) -> (j, a)``, so the result
    does not depend on the operand order. A candidate replaces the incumbent
    only if strictly better, so the canonical assignment wins ties.
    """
    SA, SB = spectrum_of(A), spectrum_of(B)
    p1, p2 = A.size, B.size
    P = p1 * p2
    packed = _gf2.pack_rows(np.kron(A.matrix, B.matrix))
    # row j*p1 + a of B (x) A is row a*p2 + j of A (x) B
    swap = np.arange(P).reshape(p1, p2).T.ravel()

    @lru_cache(maxsize=None)
    def distance(rows: tuple[int, ...]) -> int:
        return _gf2.min_weight([packed[r] for r in rows], P)

    distances, row_sets = [], []
    for k in range(1, P + 1):
        if k > MAX_BRUTEFORCE_DIM and P - k > _gf2.MAX_DUAL_REDUNDANCY:
            raise ValueError(f"dimension {k} of the {P}-row product exceeds brute-force bound")
        best, best_rows = 0, None
        mirrored = (tuple(sorted(int(swap[r]) for r in rows)) for rows in _sector_candidates(k, SB, SA))
        for rows in chain(_sector_candidates(k, SA, SB), mirrored):
            d = distance(rows)
            if d > best:
                best, best_rows = d, rows
        distances.append(best)
        row_sets.append(best_rows)
    return KernelSpectrum(tuple(distances), tuple(row_sets))



def kronecker_kernel(A: Kernel, B: Kernel) -> Kernel:
    """Composite kernel ``A (x) B`` carrying its Kronecker spectrum."""
    rows = tuple(map(tuple, np.kron(A.matrix, B.matrix).tolist()))
    return Kernel(f"{A.name}x{B.name}", rows, kronecker_spectrum(A, B))


def fold_kernels(kernels: Sequence[Kernel]) -> Kernel:
    """Left fold ``((K_1 (x) K_2) (x) K_3) ...``; a single kernel is returned as is
    (with its spectrum attached)."""
    if not kernels:
        raise ValueError("nothing to fold")
    acc = kernels[0]
    if acc.spectrum is None:
        acc = acc.with_spectrum(spectrum_of(acc))
    for k in kernels[1:]:
        acc = kronecker_kernel(acc, k)
    return acc


def exhaustive_spectrum_values(G) -> tuple[int, ...]:
    """Best distance for every dimension over all row subsets of ``G`` (small ``G`` only)."""
    from itertools import combinations

    packed = _gf2.pack_rows(G)
    P = len(packed)
    out = []
    for k in range(1, P + 1):
        out.append(max(_gf2.min_weight([packed[r] for r in rows]) for rows in combinations(range(P), k)))
    return tuple(out)


def spectrum_to_csv(S: KernelSpectrum) -> str:
    buf = io.StringIO()
    buf.write("k,distance,row_set\n")
    for k, (d, rows) in enumerate(zip(S.distances, S.row_sets), start=1):
        buf.write(f"{k},{d},{';'.join(map(str, rows))}\n")
    return buf.getvalue()


def spectrum_from_csv(text: str) -> KernelSpectrum:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "k,distance,row_set":
        raise ValueError("missing spectrum CSV header")
    distances, row_sets = [], []
    for expected_k, ln in enumerate(lines[1:], start=1):
        k, d, rows = ln.split(",")
        if int(k) != expected_k:
            raise ValueError(f"row for k={k} out of order")
        distances.append(int(d))
        row_sets.append(tuple(int(r) for r in rows.split(";") if r))
    return KernelSpectrum(tuple(distances), tuple(row_sets))
