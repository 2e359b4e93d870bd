"""SC and SCL decoding of multi-kernel polar codes, CRC-aided selection and a
brute-force ML decoder for small dimensions.

Both tree decoders walk the encoder recursion: the first kernel is the one
next to the channel. Decisions use ``u = 0`` when ``lambda >= 0``; frozen inputs
are always 0. Path metrics are penalties, lower is better.
"""

from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from . import _backend
from ._pycore import penalty
from .crc import CrcConfig
from .kernel import DEFAULT_LLR_CAP, LLR_MODES
from .transform import CodeSpec, polar_transform

MAX_ML_DIM = 20
METRICS = ("exact", "approx")


class DecoderPath(NamedTuple):
    info_bits: np.ndarray  # the K bits on the information set, CRC included
    path_metric: float
    u_hat: np.ndarray


def _prepare(spec: CodeSpec, llrs, mode: str):
    if mode not in LLR_MODES:
        raise ValueError(f"unknown LLR mode {mode!r}")
    chan = np.ascontiguousarray(llrs, dtype=float)
    if chan.shape != (spec.N,):
        raise ValueError(f"expected {spec.N} LLRs, got shape {chan.shape}")
    return _backend.make_plan(spec.seq), chan, np.ascontiguousarray(spec.frozen_mask)


def payload_of(spec: CodeSpec, u_hat) -> np.ndarray:
    """Payload bits (CRC stripped) read from a full input vector."""
    return np.asarray(u_hat, dtype=np.uint8)[list(spec.info)][: spec.payload_length]


def sc_decode(spec: CodeSpec, llrs, mode: str = "exact", cap: float = DEFAULT_LLR_CAP,
              backend: str | None = None):
    """Successive cancellation. Returns ``(u_hat, payload)``."""
    plan, chan, frozen = _prepare(spec, llrs, mode)
    u_hat, _ = _backend.get(backend).sc_core(plan, chan, frozen, mode == "minsum", cap)
    return u_hat, payload_of(spec, u_hat)


def sc_decision_llrs(spec: CodeSpec, llrs, mode: str = "exact", cap: float = DEFAULT_LLR_CAP,
                     backend: str | None = None) -> np.ndarray:
    """The LLR each SC decision was taken on (frozen positions fed back as 0)."""
    plan, chan, frozen = _prepare(spec, llrs, mode)
    return _backend.get(backend).sc_core(plan, chan, frozen, mode == "minsum", cap)[1]


def scl_decode(spec: CodeSpec, llrs, list_size: int = 8, mode: str = "exact",
               metric: str = "exact", cap: float = DEFAULT_LLR_CAP,
               backend: str | None = None) -> list[DecoderPath]:
    """List decoding with at most ``list_size`` paths; survivors sorted by metric."""
    if metric not in METRICS:
        raise ValueError(f"unknown path metric {metric!r}")
    if list_size < 1:
        raise ValueError("list size must be at least 1")
    plan, chan, frozen = _prepare(spec, llrs, mode)
    u_hats, metrics = _backend.get(backend).scl_core(
        plan, chan, frozen, int(list_size), mode == "minsum", metric == "approx", cap)
    info = list(spec.info)
    return [DecoderPath(u[info], float(m), u) for u, m in zip(u_hats, metrics)]


def path_metric_update(pm: float, lam: float, u_bit: int, approx: bool = False) -> float:
    """``pm + ln(1 + exp(-(1 - 2u) lam))``, or ``pm + |lam|`` on a sign conflict when ``approx``."""
    return pm + penalty(float(lam), int(u_bit), approx)


def crc_aided_select(candidates: Sequence, crc: CrcConfig):
    """Payload of the best candidate whose CRC checks, and whether one did.

    ``candidates`` are ``(info_bits, metric)`` pairs (or :class:`DecoderPath`)
    sorted by metric. With no passing candidate the best one is returned.
    """
    if len(candidates) == 0:
        raise ValueError("no candidates")
    for cand in candidates:
        bits = np.asarray(cand[0], dtype=np.uint8)
        if crc.check(bits):
            return bits[: bits.size - crc.length], True
    bits = np.asarray(candidates[0][0], dtype=np.uint8)
    return bits[: bits.size - crc.length], False


def decode(spec: CodeSpec, llrs, list_size: int = 1, mode: str = "exact",
           metric: str = "exact", backend: str | None = None) -> np.ndarray:
    """Payload estimate: SCL (CRC-aided when configured), plain SC for ``list_size == 1``."""
    if list_size == 1 and spec.crc is None:
        return sc_decode(spec, llrs, mode, backend=backend)[1]
    paths = scl_decode(spec, llrs, list_size, mode, metric, backend=backend)
    if spec.crc is None:
        return paths[0].info_bits[: spec.payload_length]
    return crc_aided_select(paths, spec.crc)[0]


@lru_cache(maxsize=16)
def _codebook(spec: CodeSpec) -> tuple[np.ndarray, np.ndarray]:
    k = spec.payload_length
    m = np.arange(1 << k)
    # message value order, first payload bit most significant
    msgs = ((m[:, None] >> np.arange(k - 1, -1, -1)[None, :]) & 1).astype(np.uint8)
    u = np.zeros((msgs.shape[0], spec.N), dtype=np.uint8)
    if spec.crc is not None:
        words = np.array([spec.crc.attach(r) for r in msgs]).reshape(len(msgs), spec.K)
    else:
        words = msgs
    u[:, list(spec.info)] = words
    return msgs, polar_transform(spec.seq, u)


def ml_decode_bruteforce(spec: CodeSpec, llrs):
    """Maximum-likelihood payload by scoring all ``2^k`` codewords; ties to the smallest message."""
    if spec.payload_length > MAX_ML_DIM:
        raise ValueError(f"payload length {spec.payload_length} exceeds ML bound {MAX_ML_DIM}")
    llrs = np.asarray(llrs, dtype=float)
    if llrs.shape != (spec.N,):
        raise ValueError(f"expected {spec.N} LLRs, got shape {llrs.shape}")
    msgs, words = _codebook(spec)
    score = (1.0 - 2.0 * words) @ llrs
    best = int(np.argmax(score))
    return msgs[best].copy(), words[best].copy()


def correlation(codeword, llrs) -> float:
    """``sum_t (1 - 2 x_t) l_t``, the ML metric of a codeword."""
    return float((1.0 - 2.0 * np.asarray(codeword, dtype=float)) @ np.asarray(llrs, dtype=float))
