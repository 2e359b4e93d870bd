"""Mixed-radix Kronecker transforms, code descriptions and encoding.

For ``T_N = T_{p_1} (x) T_M`` with ``M = N / p_1`` an input vector ``u`` is
split into ``p_1`` consecutive blocks of length ``M``; each block is encoded
with ``T_M`` giving ``v_0..v_{p_1-1}``, and for every column ``b`` the tuple
``(x_b, x_{M+b}, ...)`` is ``(v_0[b], ..., v_{p_1-1}[b]) T_{p_1}``. The
decoders in :mod:`mkpolar.decode` walk exactly the same recursion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .crc import CrcConfig
from .kernel import Kernel, builtin_kernel

MAX_MATRIX_N = 4096


@dataclass(frozen=True)
class KernelSequence:
    kernels: tuple[Kernel, ...]

    def __post_init__(self):
        object.__setattr__(self, "kernels", tuple(self.kernels))
        if not self.kernels:
            raise ValueError("a kernel sequence needs at least one kernel")

    @classmethod
    def parse(cls, text: str) -> "KernelSequence":
        """Parse ``"2x2x3"`` (or ``"T2xT2xT3"``) into built-in kernels."""
        parts = [p.strip() for p in text.lower().split("x") if p.strip()]
        if not parts:
            raise ValueError(f"empty kernel string {text!r}")
        kernels = []
        for part in parts:
            name = part if part.startswith("t") else f"t{part}"
            kernels.append(builtin_kernel(name))
        return cls(tuple(kernels))

    @classmethod
    def of(cls, *kernels: Kernel | str | int) -> "KernelSequence":
        out = []
        for k in kernels:
            if isinstance(k, Kernel):
                out.append(k)
            else:
                out.append(builtin_kernel(k if isinstance(k, str) else f"T{k}"))
        return cls(tuple(out))

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(k.size for k in self.kernels)

    @property
    def N(self) -> int:
        return math.prod(self.sizes)

    @property
    def s(self) -> int:
        return len(self.kernels)

    def partial(self, i: int) -> int:
        """``N_i``: product of the first ``i - 1`` kernel sizes (``N_1 = 1``)."""
        if not 1 <= i <= self.s + 1:
            raise IndexError(i)
        return math.prod(self.sizes[: i - 1])

    def label(self) -> str:
        return "x".join(k.name[1:] if k.name.startswith("T") and k.name[1:].isdigit() else k.name
                        for k in self.kernels)

    def __len__(self):
        return self.s

    def __iter__(self):
        return iter(self.kernels)


@dataclass(frozen=True)
class CodeSpec:
    """Kernel sequence plus information set ``I`` (ascending) and optional CRC."""

    seq: KernelSequence
    info: tuple[int, ...]
    crc: CrcConfig | None = None

    def __post_init__(self):
        info = tuple(sorted(int(i) for i in self.info))
        object.__setattr__(self, "info", info)
        if len(set(info)) != len(info):
            raise ValueError("duplicate information indices")
        if info and not (0 <= info[0] and info[-1] < self.seq.N):
            raise ValueError("information index out of range")
        if self.crc is not None and self.crc.length >= len(info):
            raise ValueError("CRC must be shorter than the code dimension")

    @classmethod
    def from_frozen(cls, seq: KernelSequence, frozen: Iterable[int], crc: CrcConfig | None = None):
        fz = set(int(f) for f in frozen)
        if any(not 0 <= f < seq.N for f in fz):
            raise ValueError("frozen index out of range")
        return cls(seq, tuple(i for i in range(seq.N) if i not in fz), crc)

    @property
    def N(self) -> int:
        return self.seq.N

    @property
    def K(self) -> int:
        return len(self.info)

    @property
    def crc_length(self) -> int:
        return 0 if self.crc is None else self.crc.length

    @property
    def payload_length(self) -> int:
        return self.K - self.crc_length

    @property
    def frozen(self) -> tuple[int, ...]:
        info = set(self.info)
        return tuple(i for i in range(self.N) if i not in info)

    @property
    def frozen_mask(self) -> np.ndarray:
        mask = np.ones(self.N, dtype=np.uint8)
        mask[list(self.info)] = 0
        return mask

    @property
    def rate(self) -> float:
        return self.payload_length / self.N

    def format(self) -> str:
        s = f"kernels={self.seq.label()} K={self.K} frozen={','.join(map(str, self.frozen))}"
        if self.crc is not None:
            s += f" crc={self.crc.format()}"
        return s

    @classmethod
    def parse(cls, text: str) -> "CodeSpec":
        """Parse ``kernels=2x2x3 K=4 frozen=0,1,... [crc=poly:0x07,len:8]``."""
        fields = {}
        for tok in text.split():
            key, sep, value = tok.partition("=")
            if not sep:
                raise ValueError(f"malformed token {tok!r}")
            fields[key] = value
        missing = {"kernels", "K", "frozen"} - fields.keys()
        if missing:
            raise ValueError(f"missing fields: {sorted(missing)}")
        seq = KernelSequence.parse(fields["kernels"])
        frozen = [int(v) for v in fields["frozen"].split(",") if v]
        crc = CrcConfig.parse(fields["crc"]) if "crc" in fields else None
        spec = cls.from_frozen(seq, frozen, crc)
        if spec.K != int(fields["K"]):
            raise ValueError(f"K={fields['K']} inconsistent with {len(frozen)} frozen of N={seq.N}")
        return spec


def transform_matrix(seq: KernelSequence) -> np.ndarray:
    """Explicit ``T_N = T_{p_1} (x) ... (x) T_{p_s}`` (oracle use; ``N <= 4096``)."""
    if seq.N > MAX_MATRIX_N:
        raise ValueError(f"N={seq.N} exceeds the explicit-matrix bound {MAX_MATRIX_N}")
    T = np.ones((1, 1), dtype=np.uint8)
    for k in seq.kernels:
        T = np.kron(T, k.matrix)
    return T


def _transform(mats: Sequence[np.ndarray], u: np.ndarray) -> np.ndarray:
    # u has shape (B, N)
    if not mats:
        return u
    T = mats[0]
    p = T.shape[0]
    B, N = u.shape
    M = N // p
    v = _transform(mats[1:], u.reshape(B * p, M)).reshape(B, p, M)
    x = np.einsum("bam,ac->bcm", v, T) & 1
    return x.reshape(B, N)


def polar_transform(seq: KernelSequence, u) -> np.ndarray:
    """``u T_N`` by the recursive block contract; ``u`` may be ``(N,)`` or ``(B, N)``."""
    u = np.asarray(u, dtype=np.uint8)
    if u.shape[-1] != seq.N:
        raise ValueError(f"expected length {seq.N}, got {u.shape[-1]}")
    mats = [k.matrix.astype(np.int64) for k in seq.kernels]
    x = _transform(mats, u.reshape(-1, seq.N).astype(np.int64))
    return x.reshape(u.shape).astype(np.uint8)


def expand_input(spec: CodeSpec, info_bits) -> np.ndarray:
    """Place payload (and its CRC, if configured) on ``I`` in ascending order, zeros on ``F``."""
    bits = np.asarray(info_bits, dtype=np.uint8).ravel()
    if bits.size != spec.payload_length:
        raise ValueError(f"expected {spec.payload_length} payload bits, got {bits.size}")
    if spec.crc is not None:
        bits = spec.crc.attach(bits)
    u = np.zeros(spec.N, dtype=np.uint8)
    u[list(spec.info)] = bits
    return u


def encode(spec: CodeSpec, info_bits) -> np.ndarray:
    return polar_transform(spec.seq, expand_input(spec, info_bits))


# -- Tanner graph -----------------------------------------------------------
# Permutations use gather semantics: after stage i the wire order becomes
# w[pi_i]. The product p . q applies p first, i.e. (p . q)[j] = q[p[j]].

def canonical_permutation(seq: KernelSequence, i: int) -> np.ndarray:
    """``rho_i`` on ``N_{i+1}`` wires: position ``r N_i + t`` takes box ``t``'s output ``r``."""
    Ni, p = seq.partial(i), seq.sizes[i - 1]
    r, t = np.divmod(np.arange(Ni * p), Ni)
    return t * p + r


def compose(*perms: np.ndarray) -> np.ndarray:
    out = np.arange(len(perms[0]))
    for p in perms:
        out = p[out]
    return out


def stage_permutation(seq: KernelSequence, i: int) -> np.ndarray:
    """Edge permutation ``pi_i`` between stage ``i`` and stage ``i-1`` (1-based)."""
    if not 1 <= i <= seq.s:
        raise IndexError(f"stage {i} out of range 1..{seq.s}")
    N = seq.N
    if i == 1:
        rest = [stage_permutation(seq, j) for j in range(2, seq.s + 1)]
        if not rest:
            return np.arange(N)
        return np.argsort(compose(*rest))
    rho = canonical_permutation(seq, i)
    block = seq.partial(i + 1)
    return np.concatenate([rho + b * block for b in range(N // block)])


def graph_encode(seq: KernelSequence, u) -> np.ndarray:
    """Encode by wiring the Tanner graph stage by stage (stage ``s`` at the input side)."""
    w = np.asarray(u, dtype=np.int64).copy()
    for i in range(seq.s, 0, -1):
        T = seq.kernels[i - 1].matrix.astype(np.int64)
        p = T.shape[0]
        w = (w.reshape(-1, p) @ T & 1).ravel()
        w = w[stage_permutation(seq, i)]
    return w.astype(np.uint8)
