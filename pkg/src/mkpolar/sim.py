"""BI-AWGN channel, SNR conversions and the Monte-Carlo BLER/BER harness.

BPSK maps bit 0 to +1 and bit 1 to -1 with unit symbol energy, so
``sigma^2 = N0 / (2 Es)`` and the channel LLR is ``2 y / sigma^2``.

Every trial draws from its own generator keyed by ``(seed, point, trial)``.
Trials are tallied in index order and a point stops at the first trial that
reaches ``min_block_errors``, so results do not depend on the worker count.
"""

from __future__ import annotations

import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .decode import decode, sc_decision_llrs
from .transform import CodeSpec, KernelSequence, encode

UNITS = ("esn0", "ebn0")
CSV_HEADER = "snr_db,unit,trials,block_errors,bit_errors,bler,ber"


def esn0_to_sigma2(esn0_db: float) -> float:
    return 1.0 / (2.0 * 10 ** (esn0_db / 10))


def ebn0_to_sigma2(ebn0_db: float, rate: float) -> float:
    """``sigma^2 = 1 / (2 R 10^(Eb/N0 / 10))``."""
    if not 0 < rate <= 1:
        raise ValueError(f"rate must be in (0, 1], got {rate}")
    return 1.0 / (2.0 * rate * 10 ** (ebn0_db / 10))


def sigma2_to_esn0(sigma2: float) -> float:
    return 10 * math.log10(1.0 / (2.0 * sigma2))


@dataclass(frozen=True)
class ChannelModel:
    sigma2: float

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise ValueError("sigma2 must be positive")

    @classmethod
    def from_snr(cls, snr_db: float, unit: str = "esn0", rate: float = 1.0) -> "ChannelModel":
        if unit == "esn0":
            return cls(esn0_to_sigma2(snr_db))
        if unit == "ebn0":
            return cls(ebn0_to_sigma2(snr_db, rate))
        raise ValueError(f"unknown SNR unit {unit!r}")

    def llrs(self, codeword, rng: np.random.Generator | None = None, zero_noise: bool = False):
        return bpsk_awgn_llrs(codeword, self.sigma2, rng, zero_noise)


def bpsk_awgn_llrs(codeword, sigma2: float, rng: np.random.Generator | None = None,
                   zero_noise: bool = False) -> np.ndarray:
    """Channel LLRs ``2 y / sigma^2`` for ``y = (1 - 2x) + n``, ``n ~ N(0, sigma^2)``."""
    if not sigma2 > 0:
        raise ValueError("sigma2 must be positive")
    x = np.asarray(codeword)
    y = 1.0 - 2.0 * x
    if not zero_noise:
        if rng is None:
            raise ValueError("a random generator is needed unless zero_noise is set")
        y = y + math.sqrt(sigma2) * rng.standard_normal(x.shape)
    return 2.0 * y / sigma2


@dataclass(frozen=True)
class SimConfig:
    snr_points: tuple[float, ...]
    unit: str = "esn0"
    max_trials: int = 10**6
    min_block_errors: int = 100
    seed: int = 0
    list_size: int = 8
    mode: str = "exact"
    metric: str = "exact"
    design: str = ""
    workers: int = 1
    chunk: int = 2000

    def __post_init__(self):
        object.__setattr__(self, "snr_points", tuple(float(v) for v in self.snr_points))
        if self.unit not in UNITS:
            raise ValueError(f"unknown SNR unit {self.unit!r}")
        if self.max_trials < 1 or self.min_block_errors < 1:
            raise ValueError("max_trials and min_block_errors must be at least 1")
        if self.list_size < 1 or self.workers < 1 or self.chunk < 1:
            raise ValueError("list_size, workers and chunk must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class SimRecord:
    snr_db: float
    unit: str
    trials: int
    block_errors: int
    bit_errors: int
    bler: float
    ber: float
    wall_time: float = field(default=0.0, compare=False)

    def std_err(self) -> float:
        """Binomial standard error of ``bler``."""
        return math.sqrt(max(self.bler * (1 - self.bler), 0.0) / self.trials)


def trial_rng(seed: int, point: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, point, trial])))


def _run_trials(spec: CodeSpec, cfg: SimConfig, point: int, sigma2: float, start: int, stop: int):
    """Block and bit errors of trials ``start..stop-1`` of one SNR point."""
    k = spec.payload_length
    out = np.zeros((stop - start, 2), dtype=np.int64)
    for j, t in enumerate(range(start, stop)):
        rng = trial_rng(cfg.seed, point, t)
        payload = rng.integers(0, 2, k, dtype=np.uint8)
        llr = bpsk_awgn_llrs(encode(spec, payload), sigma2, rng)
        est = decode(spec, llr, cfg.list_size, cfg.mode, cfg.metric)
        errs = int(np.count_nonzero(est != payload))
        out[j] = (errs > 0, errs)
    return out


def simulate_point(spec: CodeSpec, cfg: SimConfig, point: int, pool=None) -> SimRecord:
    snr = cfg.snr_points[point]
    sigma2 = ChannelModel.from_snr(snr, cfg.unit, spec.rate).sigma2
    t0 = time.perf_counter()
    trials = block = bits = 0
    start = 0
    while start < cfg.max_trials and block < cfg.min_block_errors:
        # a round is one chunk per worker, merged in trial order
        bounds = []
        for _ in range(cfg.workers if pool is not None else 1):
            stop = min(start + cfg.chunk, cfg.max_trials)
            if start < stop:
                bounds.append((start, stop))
            start = stop
        if pool is not None:
            futures = [pool.submit(_run_trials, spec, cfg, point, sigma2, a, b) for a, b in bounds]
            parts = [f.result() for f in futures]
        else:
            parts = [_run_trials(spec, cfg, point, sigma2, a, b) for a, b in bounds]
        for res in parts:
            for be, bt in res:
                if block >= cfg.min_block_errors:
                    break
                trials += 1
                block += int(be)
                bits += int(bt)
    return SimRecord(snr, cfg.unit, trials, block, bits, block / trials,
                     bits / (trials * max(spec.payload_length, 1)), time.perf_counter() - t0)


def simulate_bler(spec: CodeSpec, cfg: SimConfig, progress=None) -> list[SimRecord]:
    """One record per SNR point; ``progress(record)`` is called after each point."""
    records = []
    pool = ProcessPoolExecutor(cfg.workers) if cfg.workers > 1 else None
    try:
        for point in range(len(cfg.snr_points)):
            rec = simulate_point(spec, cfg, point, pool)
            records.append(rec)
            if progress is not None:
                progress(rec)
    finally:
        if pool is not None:
            pool.shutdown()
    return records


def records_to_csv(records) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for r in records:
        buf.write(f"{r.snr_db:g},{r.unit},{r.trials},{r.block_errors},{r.bit_errors},{r.bler:.6e},{r.ber:.6e}\n")
    return buf.getvalue()


def records_from_csv(text: str) -> list[SimRecord]:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines or lines[0].strip() != CSV_HEADER:
        raise ValueError("missing results CSV header")
    out = []
    for ln in lines[1:]:
        snr, unit, trials, block, bits, bler, ber = ln.split(",")
        out.append(SimRecord(float(snr), unit, int(trials), int(block), int(bits), float(bler), float(ber)))
    return out


def genie_sc_bit_error_rates(seq: KernelSequence, sigma2: float, trials: int, seed: int = 0,
                             mode: str = "exact", batch: int = 1000) -> np.ndarray:
    """Per-input error rate of SC hard decisions on the all-zero codeword when every
    earlier bit is fed back correctly."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    spec = CodeSpec(seq, ())  # all frozen: the decoder feeds back the true zeros
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed])))
    errors = np.zeros(seq.N, dtype=np.int64)
    zero = np.zeros(seq.N, dtype=np.uint8)
    done = 0
    while done < trials:
        n = min(batch, trials - done)
        llrs = bpsk_awgn_llrs(np.broadcast_to(zero, (n, seq.N)), sigma2, rng)
        for row in llrs:
            errors += sc_decision_llrs(spec, row, mode) < 0
        done += n
    return errors / trials


def q_function(x):
    return 0.5 * np.vectorize(math.erfc)(np.asarray(x, dtype=float) / math.sqrt(2))
