"""Command-line front end: ``ldpc-minsum {info,gen,simulate,verify,bench}``."""

from __future__ import annotations

import argparse
import json
import sys

from .arith import NumericMode, VariantRule
from .core import ENGINES
from .harness import SweepSpec, bench, bench_ratios, code_info, rows_to_csv, simulate, sweep_metadata, verify
from .tanner import load_alist, generate_regular, write_alist

PUBLISHED_SPEEDUP = 2.0  # single-scan vs two-scan, reported for a C implementation


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _add_code_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--code", metavar="ALIST", help="parity-check matrix in alist format")
    g.add_argument("--regular", nargs=3, type=int, metavar=("N", "DV", "DC"), help="generate a random regular code")
    p.add_argument("--code-seed", type=int, default=1, help="seed for --regular (default 1)")


def _add_decoder_args(p: argparse.ArgumentParser, max_iter: int = 50) -> None:
    p.add_argument("--mode", type=NumericMode.parse, default=NumericMode(), help="float | fixed:b:f")
    p.add_argument("--variant", type=VariantRule.parse, default=VariantRule.plain(), help="plain | norm:LAMBDA | offset:BETA")
    p.add_argument("--max-iter", type=int, default=max_iter)
    p.add_argument("--seed", type=int, default=0, help="master seed for channel noise")


def _load_code(args):
    if args.code:
        return load_alist(args.code), args.code
    n, dv, dc = args.regular
    return generate_regular(n, dv, dc, seed=args.code_seed), f"regular({n},{dv},{dc},seed={args.code_seed})"


def _write(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_info(args) -> int:
    H, _ = _load_code(args)
    mode = args.mode if args.mode.is_fixed else NumericMode.fixed(6, 0)
    _write(json.dumps(code_info(H, mode), indent=2) + "\n", args.out)
    return 0


def cmd_gen(args) -> int:
    n, dv, dc = args.regular
    H = generate_regular(n, dv, dc, seed=args.code_seed)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(write_alist(H))
    else:
        sys.stdout.write(write_alist(H).decode("ascii"))
    return 0


def cmd_simulate(args) -> int:
    H, label = _load_code(args)
    spec = SweepSpec(
        code=H,
        ebn0_points=_floats(args.ebn0),
        frames=args.frames,
        max_iter=args.max_iter,
        variant=args.variant,
        mode=args.mode,
        master_seed=args.seed,
        engines=args.engine,
        target_frame_errors=args.target_errors,
        code_label=label,
    )
    rows = simulate(spec, workers=args.workers)
    _write(rows_to_csv(rows, sweep_metadata(spec), timing=not args.no_timing), args.out)
    return 0


def cmd_verify(args) -> int:
    H, _ = _load_code(args)
    modes = [NumericMode.parse(m) for m in args.modes.split(",")]
    variants = [VariantRule.parse(v) for v in args.variants.split(",")]
    report = verify(H, args.frames, _floats(args.ebn0), modes, variants, args.max_iter, args.seed)
    _write("\n".join(report.lines()) + f"\n{'OK' if report.ok else 'FAILED'}\n", args.out)
    return 0 if report.ok else 1


def cmd_bench(args) -> int:
    H, label = _load_code(args)
    engines = tuple(ENGINES) if args.engine == "all" else tuple(args.engine.split(","))
    results = bench(H, args.max_iter, args.frames, engines, args.reps, args.ebn0_point, args.variant, args.mode, args.seed)
    lines = [f"# code: {label}", f"# iterations: {args.max_iter} (early stop off), frames: {args.frames}, repetitions: {args.reps}"]
    lines.append("engine,median_s,info_bits_per_s")
    for r in results.values():
        lines.append(f"{r.engine},{r.median_s:.6f},{r.throughput:.6g}")
    for name, ratio in bench_ratios(results).items():
        lines.append(f"# ratio {name}: {ratio:.3f}")
    lines.append(f"# published single-scan speedup: ~{PUBLISHED_SPEEDUP:g}x (machine dependent)")
    _write("\n".join(lines) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ldpc-minsum", description="Min-sum LDPC decoders and simulation harness")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="code statistics and storage reports")
    _add_code_args(p)
    p.add_argument("--mode", type=NumericMode.parse, default=NumericMode(), help="fixed:b:f sets b for the bit counts (default 6)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("gen", help="write a random regular code as alist")
    p.add_argument("--regular", nargs=3, type=int, metavar=("N", "DV", "DC"), required=True)
    p.add_argument("--code-seed", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("simulate", help="BER/FER sweep to CSV")
    _add_code_args(p)
    _add_decoder_args(p)
    p.add_argument("--ebn0", required=True, help="comma-separated Eb/N0 points in dB")
    p.add_argument("--frames", type=int, default=1000, help="frames per point (maximum when --target-errors is set)")
    p.add_argument("--target-errors", type=int, default=None)
    p.add_argument("--engine", default="single_scan", choices=[*ENGINES, "all"])
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-timing", action="store_true", help="leave timing columns empty (byte-reproducible output)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="cross-engine equivalence check")
    _add_code_args(p)
    p.add_argument("--max-iter", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--frames", type=int, default=100)
    p.add_argument("--ebn0", default="1,2,3")
    p.add_argument("--modes", default="fixed:8:2,float")
    p.add_argument("--variants", default="plain,norm:0.8,offset:0.5")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="throughput at a fixed iteration count")
    _add_code_args(p)
    _add_decoder_args(p, max_iter=10)
    p.add_argument("--frames", type=int, default=50)
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--ebn0-point", type=float, default=2.0)
    p.add_argument("--engine", default="all")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
