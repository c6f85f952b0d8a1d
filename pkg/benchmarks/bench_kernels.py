"""Timing comparison of the decoder kernel backends.

Runs the same SC and SCL workloads through the pure-Python kernels and the
compiled extension (when built) and reports per-call medians. The two
backends return bit-identical outputs, so this is purely a speed check.

Usage: python benchmarks/bench_kernels.py [--n 10] [--list-size 8] [--frames 20]
"""

import argparse
import statistics
import time

import numpy as np

from polarkit.channel import bpsk_awgn, noise_variance
from polarkit.coding import assemble_source, polar_encode
from polarkit.construction import ga_construct, select_frozen
from polarkit.core import BitClass, CodeSpec
from polarkit.kernels import available_backends, get_backend


def make_workload(n: int, ebno_db: float, frames: int, seed: int):
    N = 1 << n
    spec = CodeSpec(n=n, M=N, K=N // 2, design_snr_db=ebno_db)
    mask = select_frozen(ga_construct(N, ebno_db, spec.rate), spec)
    flags = (mask.classes != BitClass.INFO).astype(np.uint8)
    rng = np.random.default_rng(seed)
    sigma2 = noise_variance(ebno_db, spec.rate)
    batches = []
    for _ in range(frames):
        payload = rng.integers(0, 2, spec.K).astype(np.uint8)
        u = assemble_source(payload, mask)
        x = polar_encode(u, n, apply_bit_reversal=False)
        y = bpsk_awgn(x, ebno_db, spec.rate, rng)
        batches.append(np.clip(2.0 * y / sigma2, -300.0, 300.0))
    return flags, batches


def time_calls(fn, batches, repeats: int = 3) -> float:
    fn(batches[0])  # warmup
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        for llr in batches:
            fn(llr)
        samples.append((time.perf_counter() - t0) / len(batches))
    return statistics.median(samples)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10, help="polarization stages (N = 2^n)")
    ap.add_argument("--list-size", type=int, default=8)
    ap.add_argument("--frames", type=int, default=20)
    ap.add_argument("--ebno-db", type=float, default=2.0)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    flags, batches = make_workload(args.n, args.ebno_db, args.frames, args.seed)
    names = available_backends()
    print(f"N={1 << args.n}, {args.frames} frames, L={args.list_size}, "
          f"backends: {', '.join(names)}")

    results = {}
    for name in names:
        be = get_backend(name)
        sc = time_calls(lambda llr: be.sc_decode(llr, flags), batches)
        scl = time_calls(lambda llr: be.scl_decode(llr, flags, args.list_size), batches)
        results[name] = (sc, scl)
        print(f"  {name:8s} sc {sc * 1e3:9.3f} ms/frame   "
              f"scl(L={args.list_size}) {scl * 1e3:9.3f} ms/frame")

    if len(results) == 2:
        py, cy = results["python"], results["cython"]
        print(f"  speedup  sc {py[0] / cy[0]:9.1f}x           "
              f"scl(L={args.list_size}) {py[1] / cy[1]:9.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
