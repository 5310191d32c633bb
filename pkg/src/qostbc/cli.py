"""Command-line front end: configure a sweep, emit CSV, render an ASCII plot.

Exit codes: 0 on success, 2 for usage errors (argparse), 1 for runtime
failures.  The default seed comes from the ``QOSTBC_SEED`` environment
variable when set.  CSV output is byte-deterministic for a fixed
configuration and seed.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from .channel import ChannelMode
from .modem import Scheme
from .sim import (
    BerCurve,
    BerRecord,
    Coding,
    SimConfig,
    run_frame,
    sweep,
)
from .turbo import TurboConfig

CSV_HEADER = "snr_db,modulation,coding,iterations,frames,bits,bit_errors,ber"

PLOT_WIDTH = 60
PLOT_HEIGHT = 20


def _default_seed() -> int:
    env = os.environ.get("QOSTBC_SEED")
    return int(env) if env else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qostbc",
        description=(
            "Monte-Carlo BER sweep of a turbo-coded 4x1 link using "
            "quasi-orthogonal space-time block coding with pairwise ML "
            "detection."
        ),
    )
    p.add_argument(
        "--modulation",
        choices=[s.value for s in Scheme],
        default=Scheme.QAM4.value,
        help="constellation (default: %(default)s)",
    )
    p.add_argument(
        "--coding",
        choices=[c.value for c in Coding],
        default=Coding.TURBO.value,
        help="channel coding (default: %(default)s)",
    )
    p.add_argument(
        "--iterations",
        type=int,
        default=4,
        help="turbo decoder iterations (default: %(default)s)",
    )
    p.add_argument(
        "--snr",
        nargs=3,
        type=float,
        default=[0.0, 10.0, 1.0],
        metavar=("MIN", "MAX", "STEP"),
        help="sweep range in dB (default: 0 10 1)",
    )
    p.add_argument(
        "--frame-bits",
        type=int,
        default=1022,
        help="information bits per frame (default: %(default)s)",
    )
    p.add_argument("--min-frames", type=int, default=10)
    p.add_argument("--min-errors", type=int, default=100)
    p.add_argument("--max-frames", type=int, default=50)
    p.add_argument(
        "--seed",
        type=int,
        default=_default_seed(),
        help="master seed (default: QOSTBC_SEED env var, else 1)",
    )
    p.add_argument(
        "--channel",
        choices=[m.value for m in ChannelMode],
        default=ChannelMode.RAYLEIGH_AWGN.value,
        help="fading model (default: %(default)s)",
    )
    p.add_argument(
        "--workers",
        type=int,
        default=1,
        help="parallel workers over SNR points (results identical to serial)",
    )
    p.add_argument("--output", metavar="PATH", help="write the sweep as CSV")
    p.add_argument("--plot", action="store_true", help="print an ASCII BER plot")
    p.add_argument(
        "--single-frame",
        type=float,
        metavar="SNR_DB",
        help="demo: run exactly one frame at the given SNR and report its BER",
    )
    return p


def _snr_points(lo: float, hi: float, step: float) -> tuple[float, ...]:
    if step <= 0:
        raise ValueError("SNR step must be positive")
    if hi < lo:
        raise ValueError("SNR range must have MAX >= MIN")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return tuple(lo + i * step for i in range(n))


def parse_args(argv=None) -> SimConfig:
    """Parse CLI arguments into a validated simulation config."""
    args = build_parser().parse_args(argv)
    return _config_from(args)


def _config_from(args: argparse.Namespace) -> SimConfig:
    parser_error = build_parser().error
    if args.iterations < 1:
        parser_error("--iterations must be at least 1")
    if args.frame_bits < 1:
        parser_error("--frame-bits must be positive")
    if args.min_frames < 1 or args.max_frames < args.min_frames:
        parser_error("need 1 <= --min-frames <= --max-frames")
    if args.min_errors < 1:
        parser_error("--min-errors must be positive")
    if args.workers < 1:
        parser_error("--workers must be at least 1")
    try:
        points = _snr_points(*args.snr)
    except ValueError as exc:
        parser_error(str(exc))
    turbo_cfg = TurboConfig(iterations=args.iterations, interleaver_seed=args.seed)
    return SimConfig(
        modulation=Scheme(args.modulation),
        coding=Coding(args.coding),
        turbo=turbo_cfg,
        frame_bits=args.frame_bits,
        snr_points_db=points,
        min_frames=args.min_frames,
        min_bit_errors=args.min_errors,
        max_frames=args.max_frames,
        master_seed=args.seed,
        channel_mode=ChannelMode(args.channel),
    )


def _format_row(cfg: SimConfig, rec: BerRecord) -> str:
    iters = cfg.turbo.iterations if cfg.coding is Coding.TURBO else 0
    return (
        f"{rec.snr_db:g},{cfg.modulation.value},{cfg.coding.value},"
        f"{iters},{rec.frames},{rec.bits_total},{rec.bit_errors},{rec.ber:.5e}"
    )


def format_csv(curve: BerCurve) -> str:
    """Render a sweep as CSV text (header, one row per point, final newline)."""
    lines = [CSV_HEADER]
    lines.extend(_format_row(curve.config, rec) for rec in curve.records)
    return "\n".join(lines) + "\n"


def write_csv(curve: BerCurve, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(format_csv(curve))


def read_csv(path: str) -> list[dict]:
    """Parse a file written by :func:`write_csv` back into row dicts."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("unrecognised CSV header")
    rows = []
    for line in lines[1:]:
        f = line.split(",")
        if len(f) != 8:
            raise ValueError(f"malformed CSV row: {line!r}")
        rows.append(
            {
                "snr_db": float(f[0]),
                "modulation": f[1],
                "coding": f[2],
                "iterations": int(f[3]),
                "frames": int(f[4]),
                "bits": int(f[5]),
                "bit_errors": int(f[6]),
                "ber": float(f[7]),
            }
        )
    return rows


def ascii_plot(curve: BerCurve, width: int = PLOT_WIDTH, height: int = PLOT_HEIGHT) -> str:
    """log10(BER) vs SNR on a fixed character grid.

    Non-zero BER points are drawn as ``*``; zero-BER points sit on the
    bottom row as ``v`` (a floor marker, since log10(0) is off the chart).
    """
    recs = curve.records
    smin = recs[0].snr_db
    smax = recs[-1].snr_db
    span = smax - smin
    logs = [math.log10(r.ber) for r in recs if r.ber > 0]
    ymax = max(logs) if logs else 0.0
    ymin = min(logs) if logs else -1.0
    if ymax == ymin:
        ymax += 0.5
        ymin -= 0.5
    grid = [[" "] * width for _ in range(height)]
    for r in recs:
        col = 0 if span == 0 else round((r.snr_db - smin) / span * (width - 1))
        if r.ber > 0:
            frac = (ymax - math.log10(r.ber)) / (ymax - ymin)
            row = min(height - 1, max(0, round(frac * (height - 1))))
            grid[row][col] = "*"
        else:
            grid[height - 1][col] = "v"
    top = f"log10(BER)  [{ymax:+.2f} .. {ymin:+.2f}]   (v = zero errors)"
    body = "\n".join("|" + "".join(row) + "|" for row in grid)
    axis = "+" + "-" * width + "+"
    feet = f" SNR dB: {smin:g} .. {smax:g}"
    return "\n".join([top, axis, body, axis, feet])


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _config_from(args)
    try:
        if args.single_frame is not None:
            tx, rx = run_frame(cfg, args.single_frame, frame_index=0)
            n_err = int(np.count_nonzero(tx.bits != rx.bits))
            ber = n_err / len(tx)
            print(
                f"single frame @ {args.single_frame:g} dB: "
                f"{n_err} errors / {len(tx)} bits, BER {ber:.5e}"
            )
            return 0
        curve = sweep(cfg, workers=args.workers)
        for rec in curve.records:
            print(
                f"snr {rec.snr_db:6.2f} dB   frames {rec.frames:5d}   "
                f"bits {rec.bits_total:9d}   errors {rec.bit_errors:7d}   "
                f"ber {rec.ber:.5e}"
            )
        if args.output:
            write_csv(curve, args.output)
            print(f"wrote {args.output}")
        if args.plot:
            print(ascii_plot(curve))
        return 0
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
