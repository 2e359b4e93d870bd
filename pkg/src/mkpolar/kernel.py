"""Binary polarizing kernels.

A kernel is a small invertible binary matrix ``T_p``. Besides hard encoding
``x = u T_p`` it carries the soft-decoding rules used by successive
cancellation: for input position ``i`` the LLR ``lambda_i`` is a function of
the ``p`` output LLRs and the already decided inputs ``u_0..u_{i-1}``.

Built-in kernels ``T2``, ``T3`` and ``T5`` come with reduced-form rules
(sums and box-plus only) and matching density-evolution mean rules. Any other
kernel is decoded by exact marginalization over the unknown inputs.

LLR convention: a positive value favours bit 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Sequence

import numpy as np

from . import _gf2
from .ga import varphi

DEFAULT_LLR_CAP = 40.0
MAX_EXHAUSTIVE_SIZE = 8
LLR_MODES = ("exact", "minsum")


@dataclass(frozen=True)
class KernelSpectrum:
    """Best minimum distance per dimension ``k = 1..p`` and a row set achieving it."""

    distances: tuple[int, ...]
    row_sets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.distances) != len(self.row_sets):
            raise ValueError("distances and row_sets differ in length")
        for k, rows in enumerate(self.row_sets, start=1):
            if len(rows) != k:
                raise ValueError(f"row set for k={k} has {len(rows)} rows")

    @property
    def size(self) -> int:
        return len(self.distances)

    def rows(self, k: int) -> tuple[int, ...]:
        """Optimal row set of dimension ``k``; ``k = 0`` gives the empty set."""
        return () if k == 0 else self.row_sets[k - 1]


@dataclass(frozen=True)
class Kernel:
    name: str
    rows: tuple[tuple[int, ...], ...]
    spectrum: KernelSpectrum | None = field(default=None, compare=False)

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        p = len(rows)
        if p < 2:
            raise ValueError("kernel size must be at least 2")
        if any(len(r) != p for r in rows):
            raise ValueError("kernel matrix must be square")
        if any(v not in (0, 1) for r in rows for v in r):
            raise ValueError("kernel entries must be 0 or 1")
        if _gf2.rank(_gf2.pack_rows(rows)) != p:
            raise ValueError(f"kernel {self.name} is not invertible over GF(2)")
        if self.spectrum is not None and self.spectrum.size != p:
            raise ValueError("spectrum size does not match kernel size")

    @property
    def size(self) -> int:
        return len(self.rows)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.uint8)

    @property
    def rule(self) -> str | None:
        """Name of the registered reduced-form rule set, if any."""
        return _RULE_BY_ROWS.get(self.rows)

    def with_spectrum(self, spectrum: KernelSpectrum) -> "Kernel":
        return Kernel(self.name, self.rows, spectrum)

    def __repr__(self) -> str:
        return f"Kernel({self.name!r}, p={self.size})"


_T2 = ((1, 0), (1, 1))
_T3 = ((1, 1, 1), (1, 0, 1), (0, 1, 1))
_T5 = (
    (1, 1, 1, 1, 1),
    (1, 0, 0, 0, 0),
    (1, 0, 0, 1, 0),
    (1, 1, 1, 0, 0),
    (0, 0, 1, 1, 1),
)
_RULE_BY_ROWS = {_T2: "T2", _T3: "T3", _T5: "T5"}

_BUILTIN_SPECTRA = {
    "T2": KernelSpectrum((2, 1), ((1,), (0, 1))),
    "T3": KernelSpectrum((3, 2, 1), ((0,), (1, 2), (0, 1, 2))),
    "T5": KernelSpectrum(
        (5, 3, 2, 1, 1),
        ((0,), (3, 4), (2, 3, 4), (1, 2, 3, 4), (0, 1, 2, 3, 4)),
    ),
}
_BUILTIN_ROWS = {"T2": _T2, "T3": _T3, "T5": _T5}


def builtin_kernel(name: str) -> Kernel:
    """Return one of the built-in kernels ``T2``, ``T3``, ``T5`` with its spectrum."""
    key = name.upper()
    if key not in _BUILTIN_ROWS:
        raise KeyError(f"unknown kernel {name!r}; built-ins are T2, T3, T5")
    return Kernel(key, _BUILTIN_ROWS[key], _BUILTIN_SPECTRA[key])


def kernel_from_size(p: int) -> Kernel:
    return builtin_kernel(f"T{p}")


def parse_kernel(text: str, name: str = "user") -> Kernel:
    """Parse the kernel text format: a line with ``p``, then ``p`` lines of ``p`` bits."""
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty kernel definition")
    try:
        p = int(lines[0])
    except ValueError:
        raise ValueError(f"first line must be the kernel size, got {lines[0]!r}") from None
    body = lines[1:]
    if len(body) != p or any(len(ln) != p or set(ln) - {"0", "1"} for ln in body):
        raise ValueError(f"expected {p} lines of {p} characters in {{0,1}}")
    return Kernel(name, tuple(tuple(int(ch) for ch in ln) for ln in body))


def format_kernel(k: Kernel) -> str:
    return "\n".join([str(k.size)] + ["".join(map(str, r)) for r in k.rows]) + "\n"


def kernel_hard_encode(k: Kernel, u: Sequence[int]) -> np.ndarray:
    u = np.asarray(u, dtype=np.uint8)
    if u.shape != (k.size,):
        raise ValueError(f"expected {k.size} input bits, got shape {u.shape}")
    return (u @ k.matrix.astype(np.int64) % 2).astype(np.uint8)


# -- LLR algebra -------------------------------------------------------------

def boxplus(a, b, mode: str = "exact"):
    """LLR of the XOR of two independent bits.

    ``exact`` evaluates the tanh rule in a form that stays finite for large
    inputs; ``minsum`` is the sign-min approximation.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    smin = np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))
    if mode == "minsum":
        return smin
    if mode != "exact":
        raise ValueError(f"unknown LLR mode {mode!r}")
    return smin + np.log1p(np.exp(-np.abs(a + b))) - np.log1p(np.exp(-np.abs(a - b)))


def boxplus_many(values, mode: str = "exact"):
    it = iter(values)
    acc = next(it)
    for v in it:
        acc = boxplus(acc, v, mode)
    return acc


def _sgn(bits):
    return 1 - 2 * np.asarray(bits, dtype=np.int64)


def _t2_rules(L, u, bp):
    return [
        lambda: bp(L[0], L[1]),
        lambda: _sgn(u[0]) * L[0] + L[1],
    ]


def _t3_rules(L, u, bp):
    return [
        lambda: bp(bp(L[0], L[1]), L[2]),
        lambda: _sgn(u[0]) * L[0] + bp(L[1], L[2]),
        lambda: _sgn(u[0]) * L[1] + _sgn(u[0] ^ u[1]) * L[2],
    ]


def _t5_rules(L, u, bp):
    return [
        lambda: bp(bp(L[1], L[2]), L[4]),
        # u0 flips every output; the flips on L0, L3 and inside L1 [+] L4 cancel pairwise
        lambda: bp(bp(L[0], L[3]), _sgn(u[0]) * L[2] + bp(L[1], L[4])),
        # approximation: the exact rule has no known reduced form
        lambda: _sgn(u[1]) * bp(L[0], L[1]) + bp(L[3], L[4]),
        lambda: (_sgn(u[0] ^ u[1] ^ u[2]) * L[0] + _sgn(u[0]) * L[1]
                 + bp(L[2], _sgn(u[2]) * L[3] + L[4])),
        lambda: _sgn(u[0] ^ u[3]) * L[2] + _sgn(u[0] ^ u[2]) * L[3] + _sgn(u[0]) * L[4],
    ]


_LLR_RULES: dict[str, Callable] = {"T2": _t2_rules, "T3": _t3_rules, "T5": _t5_rules}


def _check_position(k: Kernel, i: int):
    if not 0 <= i < k.size:
        raise IndexError(f"position {i} out of range for kernel of size {k.size}")


def kernel_llr(k: Kernel, i: int, L, u_hat=(), mode: str = "exact",
               cap: float | None = DEFAULT_LLR_CAP):
    """LLR of kernel input ``u_i`` from output LLRs ``L`` and decided inputs ``u_hat``.

    ``L`` has shape ``(p,)`` or ``(p, M)`` (``M`` independent boxes evaluated at
    once); ``u_hat`` has ``i`` leading entries of matching trailing shape.
    Kernels without a reduced-form rule fall back to :func:`kernel_llr_exact`
    (max-log in ``minsum`` mode).
    """
    _check_position(k, i)
    if mode not in LLR_MODES:
        raise ValueError(f"unknown LLR mode {mode!r}")
    L = np.asarray(L, dtype=float)
    if L.shape[0] != k.size:
        raise ValueError(f"expected {k.size} LLRs, got {L.shape[0]}")
    u = np.asarray(u_hat, dtype=np.int64)
    if u.shape[0] != i:
        raise ValueError(f"expected {i} decided bits, got {u.shape[0]}")
    rule = k.rule
    if rule is None:
        out = kernel_llr_exact(k, i, L, u, maxlog=(mode == "minsum"))
    else:
        def bp(a, b):
            return boxplus(a, b, mode)
        out = _LLR_RULES[rule](L, u, bp)[i]()
    if cap is not None:
        out = np.clip(out, -cap, cap)
    return out[()] if np.ndim(out) == 0 else out


def _coset_words(k: Kernel, i: int) -> tuple[np.ndarray, np.ndarray]:
    """Codewords ``v T_p`` for all tails ``v_{i+1..p-1}`` with ``v_i = 0`` and ``v_i = 1``
    (prefix zero); returned as two ``(2^{p-i-1}, p)`` arrays."""
    p = k.size
    T = k.matrix.astype(np.int64)
    if i == p - 1:
        base = np.zeros((1, p), dtype=np.int64)
    else:
        tails = np.array(list(product((0, 1), repeat=p - i - 1)), dtype=np.int64)
        base = tails @ T[i + 1:] % 2
    return base, (base + T[i]) % 2


def kernel_llr_exact(k: Kernel, i: int, L, u_hat=(), maxlog: bool = False):
    """Exact LLR of ``u_i`` by marginalizing over the unknown inputs ``u_{i+1..p-1}``.

    Cost is ``2^{p-i}`` per evaluation. With ``maxlog`` the log-sum-exp is
    replaced by a max.
    """
    _check_position(k, i)
    if k.size > MAX_EXHAUSTIVE_SIZE:
        raise ValueError(f"exact marginalization limited to p <= {MAX_EXHAUSTIVE_SIZE}")
    L = np.asarray(L, dtype=float)
    u = np.asarray(u_hat, dtype=np.int64)
    T = k.matrix.astype(np.int64)
    x0, x1 = _coset_words(k, i)
    # contribution of the known prefix, per box
    prefix = np.tensordot(u, T[:i], axes=([0], [0])) % 2 if i else np.zeros(L.shape, dtype=np.int64)
    if i:
        prefix = np.moveaxis(prefix, -1, 0)

    def score(words):
        # sum_t (1 - x_t) L_t over the coset, shape (2^{p-i-1}, ...)
        x = (words.reshape(words.shape + (1,) * (L.ndim - 1)) + prefix[None]) % 2
        return np.sum((1 - x) * L[None], axis=1)

    s0, s1 = score(x0), score(x1)
    if maxlog:
        out = s0.max(axis=0) - s1.max(axis=0)
    else:
        out = np.logaddexp.reduce(s0, axis=0) - np.logaddexp.reduce(s1, axis=0)
    return out[()] if np.ndim(out) == 0 else out


# -- density evolution rules ---------------------------------------------------

def _mean_rules(rule: str, m: Sequence[float]):
    if rule == "T2":
        return [lambda: varphi(m[0], m[1]), lambda: m[0] + m[1]]
    if rule == "T3":
        return [
            lambda: varphi(m[0], m[1], m[2]),
            lambda: m[0] + varphi(m[1], m[2]),
            lambda: m[1] + m[2],
        ]
    if rule == "T5":
        return [
            lambda: varphi(m[1], m[2], m[4]),
            lambda: varphi(m[0], m[3], m[2] + varphi(m[1], m[4])),
            lambda: varphi(m[0], m[1]) + varphi(m[3], m[4]),
            lambda: m[0] + m[1] + varphi(m[2], m[3] + m[4]),
            lambda: m[2] + m[3] + m[4],
        ]
    raise KeyError(rule)


def has_mean_rule(k: Kernel) -> bool:
    return k.rule is not None


def kernel_mean_update(k: Kernel, i: int, m: Sequence[float]) -> float:
    """Mean of ``lambda_i`` under the Gaussian approximation, given output means ``m``."""
    _check_position(k, i)
    if k.rule is None:
        raise ValueError(f"kernel {k.name} has no density-evolution rule")
    m = [float(v) for v in m]
    if len(m) != k.size:
        raise ValueError(f"expected {k.size} means, got {len(m)}")
    if min(m) < 0:
        raise ValueError("means must be non-negative")
    return float(_mean_rules(k.rule, m)[i]())


# -- minimum-distance spectrum -------------------------------------------------

def row_set_distance(matrix, rows: Sequence[int]) -> int:
    packed = _gf2.pack_rows(np.asarray(matrix)[list(rows)])
    return _gf2.min_weight(packed)


def kernel_spectrum_exhaustive(k: Kernel) -> KernelSpectrum:
    """Spectrum by trying every row subset; ties go to the lexicographically smallest set."""
    if k.size > MAX_EXHAUSTIVE_SIZE:
        raise ValueError(f"exhaustive spectrum limited to p <= {MAX_EXHAUSTIVE_SIZE}")
    packed = _gf2.pack_rows(k.rows)
    distances, row_sets = [], []
    for dim in range(1, k.size + 1):
        best, best_rows = 0, None
        for rows in combinations(range(k.size), dim):
            d = _gf2.min_weight([packed[r] for r in rows])
            if d > best:
                best, best_rows = d, rows
        distances.append(best)
        row_sets.append(best_rows)
    return KernelSpectrum(tuple(distances), tuple(row_sets))


def spectrum_of(k: Kernel) -> KernelSpectrum:
    """Attached spectrum if present, otherwise computed exhaustively."""
    return k.spectrum if k.spectrum is not None else kernel_spectrum_exhaustive(k)
