"""Frozen-set design: DE/GA reliabilities, sector-greedy distance design and the
hybrid of the two, plus an exhaustive search over kernel orders.

Index convention: input ``i`` of ``T_N`` is row ``i``. A larger mean ``mu_i``
means a more reliable synthetic channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import _gf2
from .ga import GA, GaussianApproxParams, phi, phi_inv, varphi  # noqa: F401  (re-exported)
from .kernel import Kernel, KernelSpectrum, builtin_kernel, has_mean_rule, kernel_mean_update, spectrum_of
from .spectrum import fold_kernels, greedy_sector_design, sector_spectrum_vector, spectrum_sorted
from .transform import CodeSpec, KernelSequence, transform_matrix

DEFAULT_SIGMA2 = 0.5
MAX_ORDERS = 5040
METHODS = ("reliability", "distance", "hybrid")


@dataclass(frozen=True)
class ReliabilityProfile:
    means: np.ndarray
    design_sigma2: float

    @property
    def channel_mean(self) -> float:
        return 2.0 / self.design_sigma2

    def best(self, K: int) -> tuple[int, ...]:
        """The ``K`` largest means, ties toward the larger index."""
        N = self.means.size
        if not 0 <= K <= N:
            raise ValueError(f"K={K} out of range 0..{N}")
        # stable sort on the reversed vector puts larger indices first among ties
        order = np.argsort(-self.means[::-1], kind="stable")
        return tuple(sorted(int(N - 1 - j) for j in order[:K]))


@dataclass(frozen=True)
class DesignResult:
    info: tuple[int, ...]
    seq: KernelSequence
    method: str
    achieved_min_distance: int | None = None

    @property
    def N(self) -> int:
        return self.seq.N

    @property
    def K(self) -> int:
        return len(self.info)

    @property
    def frozen(self) -> tuple[int, ...]:
        info = set(self.info)
        return tuple(i for i in range(self.N) if i not in info)

    def code_spec(self, crc=None) -> CodeSpec:
        return CodeSpec(self.seq, self.info, crc)

    def to_text(self) -> str:
        d = "" if self.achieved_min_distance is None else str(self.achieved_min_distance)
        return "\n".join([
            f"method={self.method}",
            f"order={self.seq.label()}",
            f"K={self.K}",
            f"frozen={','.join(map(str, self.frozen))}",
            f"info={','.join(map(str, self.info))}",
            f"min_distance={d}",
        ]) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "DesignResult":
        fields = {}
        for line in text.strip().splitlines():
            key, sep, value = line.partition("=")
            if sep:
                fields[key.strip()] = value.strip()
        for key in ("method", "order", "frozen"):
            if key not in fields:
                raise ValueError(f"design text lacks {key}=")
        seq = KernelSequence.parse(fields["order"])
        frozen = {int(v) for v in fields["frozen"].split(",") if v}
        info = tuple(i for i in range(seq.N) if i not in frozen)
        d = fields.get("min_distance") or None
        return cls(info, seq, fields["method"], None if d is None else int(d))


# -- DE/GA ---------------------------------------------------------------------

def _dega(kernels: Sequence[Kernel], means: np.ndarray) -> np.ndarray:
    """Same recursion as the SC decoder, means instead of LLRs."""
    if not kernels:
        return means
    T = kernels[0]
    p = T.size
    M = means.size // p
    cols = means.reshape(p, M)
    out = []
    for a in range(p):
        # a flat means vector is the common case; evaluate once per distinct column
        child = np.empty(M)
        cache: dict[tuple, float] = {}
        for b in range(M):
            key = tuple(cols[:, b])
            if key not in cache:
                cache[key] = kernel_mean_update(T, a, key)
            child[b] = cache[key]
        out.append(_dega(kernels[1:], child))
    return np.concatenate(out)


def dega_reliabilities(seq: KernelSequence, sigma2: float = DEFAULT_SIGMA2) -> ReliabilityProfile:
    """Gaussian-approximation means of all ``N`` input LLRs for channel noise ``sigma2``."""
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    for k in seq.kernels:
        if not has_mean_rule(k):
            raise ValueError(f"kernel {k.name} has no density-evolution rule")
    means = _dega(seq.kernels, np.full(seq.N, 2.0 / sigma2))
    return ReliabilityProfile(means, float(sigma2))


def reliability_design(seq: KernelSequence, K: int, sigma2: float = DEFAULT_SIGMA2) -> DesignResult:
    info = dega_reliabilities(seq, sigma2).best(K)
    return DesignResult(info, seq, "reliability", _distance_if_cheap(seq, info))


# -- distance / hybrid ---------------------------------------------------------

def _is_t2(k: Kernel) -> bool:
    return k.rows == builtin_kernel("T2").rows


def canonical_order(seq: KernelSequence) -> KernelSequence:
    """All ``T2`` kernels first, the other kernels after them in their given order."""
    twos = [k for k in seq.kernels if _is_t2(k)]
    rest = [k for k in seq.kernels if not _is_t2(k)]
    return KernelSequence(tuple(twos + rest))


@lru_cache(maxsize=None)
def _composite_spectrum(kernels: tuple[Kernel, ...]) -> KernelSpectrum:
    """Spectrum of the product of ``kernels`` (in this order): a leading ``T2`` run is
    handled by sectors, the remainder by Kronecker folding."""
    n = 0
    while n < len(kernels) - 1 and _is_t2(kernels[n]):
        n += 1
    core = fold_kernels(list(kernels[n:]))
    S = spectrum_of(core)
    return spectrum_sorted(n, S) if n else S


def distance_design(seq: KernelSequence, K: int) -> DesignResult:
    """Greedy sector construction on ``T_2^{(x)n} (x) T_p`` after reordering the kernels."""
    canon = canonical_order(seq)
    if not 0 <= K <= canon.N:
        raise ValueError(f"K={K} out of range 0..{canon.N}")
    n = sum(1 for k in canon.kernels if _is_t2(k))
    if n == canon.s:
        n -= 1  # the last T2 plays the role of the composite kernel
    S = _composite_spectrum(canon.kernels[n:])
    info, values = greedy_sector_design(sector_spectrum_vector(n, S), S, K)
    d = int(values[-1]) if values else None
    return DesignResult(info, canon, "distance", d)


def default_psi(s: int) -> int:
    return math.ceil((s - 1) / 2)


def hybrid_design(seq: KernelSequence, K: int, psi: int | None = None,
                  sigma2: float = DEFAULT_SIGMA2) -> DesignResult:
    """First ``psi`` kernels scored by DE/GA, the rest by their distance spectrum."""
    if psi is None:
        psi = default_psi(seq.s)
    if not 0 <= psi <= seq.s:
        raise ValueError(f"psi={psi} out of range 0..{seq.s}")
    if not 0 <= K <= seq.N:
        raise ValueError(f"K={K} out of range 0..{seq.N}")
    tag = f"hybrid:{psi}"
    if psi == 0:
        r = distance_design(seq, K)
        return DesignResult(r.info, r.seq, tag, r.achieved_min_distance)
    head = KernelSequence(seq.kernels[:psi])
    mu = dega_reliabilities(head, sigma2).means
    if psi == seq.s:
        S = KernelSpectrum((1,), ((0,),))
    else:
        S = _composite_spectrum(tuple(seq.kernels[psi:]))
    s_vec = np.kron(mu[::-1], np.asarray(S.distances, dtype=float))
    info, _ = greedy_sector_design(s_vec, S, K)
    return DesignResult(info, seq, tag, _distance_if_cheap(seq, info))


def _distance_if_cheap(seq: KernelSequence, info: Sequence[int]) -> int | None:
    """Brute-force minimum distance of rows ``info`` when small enough, else None."""
    N, K = seq.N, len(info)
    if K == 0 or N > 64:
        return None
    if K > _gf2.MAX_ENUM_DIM and N - K > _gf2.MAX_DUAL_REDUNDANCY:
        return None
    rows = _gf2.pack_rows(transform_matrix(seq)[list(info)])
    return _gf2.min_weight(rows, N)


def design(seq: KernelSequence, K: int, method: str = "reliability", psi: int | None = None,
           sigma2: float = DEFAULT_SIGMA2) -> DesignResult:
    method = {"rel": "reliability", "dist": "distance"}.get(method, method)
    if method == "reliability":
        return reliability_design(seq, K, sigma2)
    if method == "distance":
        return distance_design(seq, K)
    if method == "hybrid":
        return hybrid_design(seq, K, psi, sigma2)
    raise ValueError(f"unknown design method {method!r}")


# -- kernel order --------------------------------------------------------------

def distinct_orders(kernels: Sequence[Kernel]) -> list[tuple[Kernel, ...]]:
    """Distinct orderings of a kernel multiset, in lexicographic (size, name) order."""
    groups: dict[tuple, list[Kernel]] = {}
    for k in kernels:
        groups.setdefault((k.size, k.name), []).append(k)
    keys = sorted(groups)
    left = {key: len(groups[key]) for key in keys}
    out: list[tuple[Kernel, ...]] = []

    def rec(acc):
        if len(acc) == len(kernels):
            out.append(tuple(acc))
            return
        for key in keys:
            if left[key]:
                left[key] -= 1
                acc.append(groups[key][0])
                rec(acc)
                acc.pop()
                left[key] += 1

    rec([])
    return out


def _count_orders(kernels: Sequence[Kernel]) -> int:
    counts: dict[tuple, int] = {}
    for k in kernels:
        counts[(k.size, k.name)] = counts.get((k.size, k.name), 0) + 1
    total = math.factorial(len(kernels))
    for c in counts.values():
        total //= math.factorial(c)
    return total


def kernel_order_search(kernels: Sequence[Kernel | str | int], K: int,
                        sigma2: float = DEFAULT_SIGMA2) -> KernelSequence:
    """Order maximizing the sum of the ``K`` largest DE/GA means; ties to the first order."""
    ks = KernelSequence.of(*kernels).kernels
    n_orders = _count_orders(ks)
    if n_orders > MAX_ORDERS:
        raise ValueError(f"{n_orders} distinct orders exceed the search bound {MAX_ORDERS}")
    best, best_score = None, -np.inf
    for order in distinct_orders(ks):
        seq = KernelSequence(order)
        mu = dega_reliabilities(seq, sigma2).means
        score = float(np.sort(mu)[::-1][:K].sum())
        if score > best_score:
            best, best_score = seq, score
    return best
