"""Benchmark the compiled forward-backward kernel against the NumPy one.

Times a single constituent log-MAP pass (the hot loop of the turbo
decoder) and a full end-to-end turbo frame decode for each available
backend, then prints the speedup.

Usage:  python benchmarks/bench_kernels.py [--frame-bits K] [--repeats N]
"""

import argparse
import time

import numpy as np

from qostbc._kernels import available_backends
from qostbc.modem import LlrFrame
from qostbc.turbo import (
    BitFrame,
    TurboConfig,
    _build_trellis,
    bcjr_decode,
    turbo_decode,
    turbo_encode,
)


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_single_pass(k, repeats):
    tr = _build_trellis((0o7, 0o5))
    rng = np.random.default_rng(1)
    args = (
        rng.normal(0, 2, k),
        rng.normal(0, 2, k),
        rng.normal(0, 1, k),
        rng.normal(0, 2, 2),
        rng.normal(0, 2, 2),
        tr.next_state,
        tr.parity,
        tr.term_input,
        tr.term_parity,
        tr.term_next,
    )
    results = {}
    for name, kernel in sorted(available_backends().items()):
        results[name] = _time(lambda: kernel(*args), repeats)
    return results


def bench_frame_decode(k, repeats, monkeypatched_kernel):
    import qostbc._kernels as kernels

    cfg = TurboConfig()
    rng = np.random.default_rng(2)
    frame = BitFrame(rng.integers(0, 2, k))
    wire = turbo_encode(frame, cfg).serialize()
    y = (1.0 - 2.0 * wire.astype(float)) + rng.normal(0, 0.8, wire.size)
    llrs = LlrFrame(2.0 * y / 0.64)

    original = kernels.bcjr_posteriors
    try:
        kernels.bcjr_posteriors = monkeypatched_kernel
        elapsed = _time(lambda: turbo_decode(llrs, cfg), repeats)
    finally:
        kernels.bcjr_posteriors = original
    return elapsed


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--frame-bits", type=int, default=1022)
    ap.add_argument("--repeats", type=int, default=20)
    args = ap.parse_args()
    k = args.frame_bits

    backends = available_backends()
    print(f"available backends: {', '.join(sorted(backends))}")
    print(f"frame length K = {k}, best of {args.repeats} runs\n")

    single = bench_single_pass(k, args.repeats)
    print("single log-MAP pass:")
    for name, t in sorted(single.items()):
        print(f"  {name:10s} {t * 1e3:9.3f} ms")
    if len(single) == 2:
        print(f"  speedup    {single['python'] / single['compiled']:9.1f} x")

    print("\nfull turbo frame decode (4 iterations):")
    full = {
        name: bench_frame_decode(k, max(3, args.repeats // 4), kernel)
        for name, kernel in sorted(backends.items())
    }
    for name, t in sorted(full.items()):
        print(f"  {name:10s} {t * 1e3:9.3f} ms")
    if len(full) == 2:
        print(f"  speedup    {full['python'] / full['compiled']:9.1f} x")

    # the two kernels must agree to the last ulp-ish digit
    tr = _build_trellis((0o7, 0o5))
    rng = np.random.default_rng(3)
    probe = (
        rng.normal(0, 2, k),
        rng.normal(0, 2, k),
        rng.normal(0, 1, k),
        rng.normal(0, 2, 2),
        rng.normal(0, 2, 2),
        tr.next_state,
        tr.parity,
        tr.term_input,
        tr.term_parity,
        tr.term_next,
    )
    outs = {name: kernel(*probe) for name, kernel in backends.items()}
    if len(outs) == 2:
        diff = float(np.abs(outs["python"] - outs["compiled"]).max())
        print(f"\nmax |python - compiled| on a probe frame: {diff:.2e}")


if __name__ == "__main__":
    main()
