"""Command-line front end: ``mkpolar {spectrum,design,simulate,codec,rerun}``.

Every command that writes an output file also writes ``<output>.manifest.json``
holding the exact argument vector; ``mkpolar rerun <manifest>`` replays it.
Exit codes: 0 success, 2 usage or parse error, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .crc import CrcConfig
from .decode import decode
from .design import DEFAULT_SIGMA2, DesignResult, default_psi, design, kernel_order_search
from .spectrum import fold_kernels, spectrum_to_csv
from .sim import SimConfig, records_to_csv, simulate_bler
from .transform import CodeSpec, KernelSequence, encode

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 2, 3


class UsageError(Exception):
    pass


def parse_snr(text: str) -> tuple[float, ...]:
    """``start:step:stop`` (inclusive) or a comma-separated list."""
    if ":" in text:
        try:
            start, step, stop = (float(v) for v in text.split(":"))
        except ValueError:
            raise UsageError(f"bad SNR range {text!r}; expected start:step:stop") from None
        if step <= 0 or stop < start:
            raise UsageError(f"bad SNR range {text!r}")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(round(start + j * step, 10) for j in range(n))
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise UsageError(f"bad SNR list {text!r}") from None


def read_vectors(path: str, dtype) -> list[np.ndarray]:
    """One vector per non-empty line; bits may be written with or without spaces."""
    out = []
    for ln in Path(path).read_text().splitlines():
        ln = ln.strip()
        if not ln:
            continue
        toks = ln.split()
        if dtype is np.uint8 and len(toks) == 1 and len(ln) > 1:
            toks = list(ln)
        try:
            vec = np.array([float(t) for t in toks])
        except ValueError:
            raise UsageError(f"malformed line in {path}: {ln[:40]!r}") from None
        if dtype is np.uint8:
            if not np.isin(vec, (0, 1)).all():
                raise UsageError(f"non-binary value in {path}")
            vec = vec.astype(np.uint8)
        out.append(vec)
    return out


def write_manifest(out: str, args, argv: list[str], outputs: list[str]):
    params = {k: v for k, v in vars(args).items() if k != "func"}
    manifest = {
        "subcommand": args.command,
        "params": params,
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "argv": argv,
        "outputs": outputs,
    }
    Path(out + ".manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _emit(text: str, args, argv):
    if args.out:
        Path(args.out).write_text(text)
        write_manifest(args.out, args, argv, [args.out])
    else:
        sys.stdout.write(text)


def _sequence(args) -> KernelSequence:
    try:
        seq = KernelSequence.parse(args.kernels)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad kernel string {args.kernels!r}: {exc}") from None
    if getattr(args, "auto_order", False):
        seq = kernel_order_search(seq.kernels, args.K, args.sigma2)
    return seq


def _design(args) -> DesignResult:
    if getattr(args, "design_file", None):
        return DesignResult.from_text(Path(args.design_file).read_text())
    if args.kernels is None or args.K is None:
        raise UsageError("--kernels and --K are required (or --design-file)")
    method = {"rel": "reliability", "dist": "distance"}.get(args.method, args.method)
    if args.psi is not None and method != "hybrid":
        raise UsageError("--psi only applies to --method hybrid")
    seq = _sequence(args)
    if not 0 <= args.K <= seq.N:
        raise UsageError(f"K={args.K} out of range 0..{seq.N}")
    psi = args.psi
    if method == "hybrid":
        psi = default_psi(seq.s) if psi is None else psi
        if not 0 <= psi <= seq.s:
            raise UsageError(f"psi={psi} out of range 0..{seq.s}")
    return design(seq, args.K, method, psi, args.sigma2)


def _code_spec(args) -> CodeSpec:
    crc = None
    if args.crc:
        try:
            crc = CrcConfig.parse(args.crc)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    res = _design(args)
    try:
        return res.code_spec(crc)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_spectrum(args, argv):
    seq = _sequence(args)
    S = fold_kernels(list(seq.kernels)).spectrum
    _emit(spectrum_to_csv(S), args, argv)


def cmd_design(args, argv):
    _emit(_design(args).to_text(), args, argv)


def cmd_simulate(args, argv):
    spec = _code_spec(args)
    cfg = SimConfig(parse_snr(args.snr), args.unit, args.max_trials, args.min_errors, args.seed,
                    args.list, args.mode, args.metric, args.method, args.workers)
    records = []

    def flush(rec):
        # partial results survive a failure at a later point
        records.append(rec)
        if args.out:
            Path(args.out).write_text(records_to_csv(records))
        print(f"snr={rec.snr_db:g} trials={rec.trials} bler={rec.bler:.3e}", file=sys.stderr)

    simulate_bler(spec, cfg, progress=flush)
    if args.out:
        write_manifest(args.out, args, argv, [args.out])
    else:
        sys.stdout.write(records_to_csv(records))


def cmd_codec(args, argv):
    spec = _code_spec(args)
    lines = []
    if args.action == "encode":
        for vec in read_vectors(args.input, np.uint8):
            if vec.size != spec.payload_length:
                raise UsageError(f"expected {spec.payload_length} payload bits, got {vec.size}")
            lines.append("".join(map(str, encode(spec, vec))))
    else:
        for vec in read_vectors(args.input, float):
            if vec.size != spec.N:
                raise UsageError(f"expected {spec.N} LLRs, got {vec.size}")
            lines.append("".join(map(str, decode(spec, vec, args.list, args.mode))))
    _emit("".join(ln + "\n" for ln in lines), args, argv)


def cmd_rerun(args, argv):
    try:
        manifest = json.loads(Path(args.manifest).read_text())
        replay = manifest["argv"]
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"unreadable manifest {args.manifest}: {exc}") from None
    code = main(replay)
    if code:
        raise SystemExit(code)


def _add_code_args(p, kernels_required=True):
    p.add_argument("--kernels", required=kernels_required, help="kernel order, e.g. 2x2x3")
    p.add_argument("--K", type=int, help="code dimension (CRC bits included)")
    p.add_argument("--method", choices=["rel", "dist", "hybrid", "reliability", "distance"], default="rel")
    p.add_argument("--psi", type=int, help="hybrid split, default ceil((s-1)/2)")
    p.add_argument("--sigma2", type=float, default=DEFAULT_SIGMA2, help="design noise variance")
    p.add_argument("--auto-order", action="store_true", help="search the kernel order first")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mkpolar", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="distance spectrum of a kernel product")
    p.add_argument("--kernels", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("design", help="frozen-set design")
    _add_code_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("simulate", help="Monte-Carlo BLER/BER")
    _add_code_args(p, kernels_required=False)
    p.add_argument("--design-file", help="design text from `mkpolar design --out`")
    p.add_argument("--snr", required=True, help="start:step:stop or a comma list, in dB")
    p.add_argument("--unit", choices=["esn0", "ebn0"], default="esn0")
    p.add_argument("--list", type=int, default=8)
    p.add_argument("--crc", help="CRC length (default polynomial) or poly:0x..,len:..")
    p.add_argument("--mode", choices=["exact", "minsum"], default="exact")
    p.add_argument("--metric", choices=["exact", "approx"], default="exact")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-trials", type=int, default=10**6)
    p.add_argument("--min-errors", type=int, default=100)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("codec", help="encode payload bits or decode channel LLRs")
    p.add_argument("action", choices=["encode", "decode"])
    _add_code_args(p, kernels_required=False)
    p.add_argument("--design-file")
    p.add_argument("--crc")
    p.add_argument("--list", type=int, default=1)
    p.add_argument("--mode", choices=["exact", "minsum"], default="exact")
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_codec)

    p = sub.add_parser("rerun", help="replay a run manifest")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_rerun)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args, argv)
    except UsageError as exc:
        print(f"mkpolar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    except Exception as exc:  # noqa: BLE001
        print(f"mkpolar: runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
