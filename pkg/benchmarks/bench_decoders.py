"""Compiled core vs numpy fallback: SC and SCL decoding time per codeword.

    python3 benchmarks/bench_decoders.py [--reps 50]
"""

import argparse
import time

import numpy as np

from mkpolar import _backend
from mkpolar.design import reliability_design
from mkpolar.decode import sc_decode, scl_decode
from mkpolar.sim import bpsk_awgn_llrs, esn0_to_sigma2
from mkpolar.transform import KernelSequence, encode

CODES = [("2x2x3", 6), ("2x2x2x2x2x2", 32), ("3x3x2x2x2x2", 72), ("2x5x2x5", 50)]


def time_per_call(fn, reps):
    fn()  # warm-up
    t0 = time.perf_counter()
    for _ in range(reps):
        fn()
    return (time.perf_counter() - t0) / reps


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--reps", type=int, default=50)
    ap.add_argument("--list", type=int, default=8)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    backends = _backend.available()
    print(f"{'code':>14} {'decoder':>7} " + " ".join(f"{b + ' [us]':>16}" for b in backends) + "   speedup")
    for label, K in CODES:
        seq = KernelSequence.parse(label)
        spec = reliability_design(seq, K).code_spec()
        x = encode(spec, rng.integers(0, 2, K))
        llr = bpsk_awgn_llrs(x, esn0_to_sigma2(1.0), rng)
        for name, fn in [("SC", lambda b: sc_decode(spec, llr, backend=b)),
                         (f"SCL{args.list}", lambda b: scl_decode(spec, llr, args.list, backend=b))]:
            times = {}
            for b in backends:
                # the fallback is slow; a few repetitions are enough
                reps = args.reps if b == "compiled" else max(3, args.reps // 10)
                times[b] = time_per_call(lambda: fn(b), reps) * 1e6
            speed = times["python"] / times["compiled"] if "compiled" in times else float("nan")
            print(f"{label:>14} {name:>7} " + " ".join(f"{times[b]:16.1f}" for b in backends) + f"   {speed:7.1f}x")


if __name__ == "__main__":
    main()
