#!/usr/bin/env python3
"""Benchmark the symmetric-candidate scan: compiled kernel vs pure Python.

The scan is the hot loop of the exhaustive search (2^(m(m+1)/2) candidates,
each tested by evaluating the admissible characteristic polynomials at the
candidate matrix).  Run:

    python benchmarks/bench_backends.py            # quick slices
    python benchmarks/bench_backends.py --full     # whole m = 6 space
"""

import argparse
import time

from mubforge import _purekernels
from mubforge.poly2 import stabilizer_char_polys

try:
    from mubforge import _kernels
except ImportError:
    _kernels = None


def bench(kernel, m, start, stop, repeat=1):
    polys = tuple(p.mask for p in stabilizer_char_polys(m))
    best = float("inf")
    hits = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        hits = kernel.scan_symmetric(m, polys, start, stop)
        best = min(best, time.perf_counter() - t0)
    return best, hits


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--full", action="store_true", help="scan the full m=6 space")
    args = parser.parse_args()

    cases = [(4, 0, 1 << 10), (5, 0, 1 << 15), (6, 0, 1 << 17)]
    if args.full:
        cases.append((6, 0, 1 << 21))

    kernels = [("pure", _purekernels)]
    if _kernels is not None:
        kernels.append(("compiled", _kernels))
    else:
        print("note: compiled kernel not built; benchmarking pure only")

    print(f"{'m':>2} {'candidates':>12} {'backend':>9} {'time [s]':>10} "
          f"{'cand/s':>12} {'hits':>6}")
    for m, start, stop in cases:
        reference = None
        for name, kernel in kernels:
            if name == "pure" and args.full and stop - start > (1 << 19):
                # keep the pure run to a measured slice, then extrapolate
                slice_stop = start + (1 << 17)
                elapsed, hits = bench(kernel, m, start, slice_stop)
                scale = (stop - start) / (slice_stop - start)
                print(f"{m:>2} {stop - start:>12} {name:>9} {elapsed * scale:>10.3f} "
                      f"{(slice_stop - start) / elapsed:>12.0f} {'(est)':>6}")
                continue
            elapsed, hits = bench(kernel, m, start, stop)
            if reference is None:
                reference = hits
            else:
                assert hits == reference, "backends disagree"
            print(f"{m:>2} {stop - start:>12} {name:>9} {elapsed:>10.3f} "
                  f"{(stop - start) / elapsed:>12.0f} {len(hits):>6}")


if __name__ == "__main__":
    main()
