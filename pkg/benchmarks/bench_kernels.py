"""Compare the compiled kernel against the pure-Python fallback.

Times the two kernel entry points on realistic workloads (the series
products and terminating sums that the verification suites actually
issue), then an end-to-end identity check with each backend swapped in.

Run:  python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import statistics
import time
from fractions import Fraction as F

import multimeixner.bivariate as bivariate
import multimeixner.numerics as numerics
from multimeixner._kernel import BACKEND, pure
from multimeixner.bivariate import MeixnerSystem, check_recurrence, monic_eval_hyp
from multimeixner.harness import random_matrix
from multimeixner.numerics import pochhammer, series_geom_pow
from multimeixner.reports import LatticeBox

try:
    from multimeixner._kernel import _speedups
except ImportError:
    _speedups = None


def series_workload():
    """Factor pairs drawn from real generating-function products."""
    sys2 = MeixnerSystem(F(7, 3), random_matrix(42, 2, 4))
    pairs = []
    for (i, k) in ((3, 2), (6, 6), (4, 5)):
        for cutoff in (6, 9):
            base = series_geom_pow([1, 1], -(sys2.beta + i + k), cutoff)
            left = series_geom_pow([sys2.u11, sys2.u12], i, cutoff)
            right = series_geom_pow([sys2.u21, sys2.u22], k, cutoff)
            pairs.append((base.coeffs, left.coeffs, cutoff))
            pairs.append((base.coeffs, right.coeffs, cutoff))
    return pairs


def hyp_workload():
    sys2 = MeixnerSystem(F(7, 3), random_matrix(42, 2, 4))
    jobs = []
    for (m, n, i, k) in ((5, 4, 6, 6), (3, 3, 5, 5), (5, 5, 6, 6)):
        negm = [pochhammer(-m, t) for t in range(m + 1)]
        negn = [pochhammer(-n, t) for t in range(n + 1)]
        negi = [pochhammer(-i, t) for t in range(min(i, m + n) + 1)]
        negk = [pochhammer(-k, t) for t in range(min(k, m + n) + 1)]
        invb = [1 / pochhammer(sys2.beta, t) for t in range(m + n + 1)]
        pows = []
        for u, bound in (
            (sys2.u11, min(m, i)),
            (sys2.u21, min(m, k)),
            (sys2.u12, min(n, i)),
            (sys2.u22, min(n, k)),
        ):
            col = [F(1)]
            for e in range(1, bound + 1):
                col.append(col[-1] * (1 - u) / e)
            pows.append(col)
        jobs.append((m, n, i, k, negm, negn, negi, negk, invb, *pows))
    return jobs


def time_call(fn, repeat):
    fn()  # warm caches (rising factorials, allocator) outside the timing
    samples = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - start)
    return min(samples), statistics.median(samples)


def bench_raw(repeat):
    backends = [("pure", pure)] + ([("compiled", _speedups)] if _speedups else [])
    pairs = series_workload()
    jobs = hyp_workload()
    results = {}
    for name, impl in backends:
        best_mul, _ = time_call(
            lambda: [impl.mul_trunc(a, b, cutoff) for (a, b, cutoff) in pairs],
            repeat,
        )
        best_hyp, _ = time_call(
            lambda: [impl.hyp_sum(*job) for job in jobs], repeat
        )
        results[name] = (best_mul, best_hyp)
    return results


def bench_end_to_end(repeat):
    """Full verification workload with each backend patched in."""
    backends = [("pure", pure)] + ([("compiled", _speedups)] if _speedups else [])
    results = {}
    lam = random_matrix(42, 2, 4)
    for name, impl in backends:
        numerics.mul_trunc = impl.mul_trunc
        bivariate.hyp_sum = impl.hyp_sum

        def workload():
            sys2 = MeixnerSystem(F(7, 3), lam)  # fresh caches every run
            check_recurrence(sys2, LatticeBox(max_i=4, max_k=4, max_m=3, max_n=3))
            for m in range(4):
                for n in range(4 - m):
                    monic_eval_hyp(sys2, m, n, 5, 5)

        best, _ = time_call(workload, repeat)
        results[name] = best
    return results


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    print(f"default backend at import time: {BACKEND}")
    if _speedups is None:
        print("compiled extension not available; timing pure backend only")

    raw = bench_raw(args.repeat)
    print("\nraw kernels (best of %d):" % args.repeat)
    for name, (mul_t, hyp_t) in raw.items():
        print(f"  {name:>8}: mul_trunc {mul_t * 1e3:7.2f} ms   hyp_sum {hyp_t * 1e3:7.2f} ms")
    if "compiled" in raw:
        pm, ph = raw["pure"]
        cm, ch = raw["compiled"]
        print(f"  speedup : mul_trunc {pm / cm:6.2f}x    hyp_sum {ph / ch:6.2f}x")

    end = bench_end_to_end(args.repeat)
    print("\nend-to-end recurrence check + closed-form sums (best of %d):" % args.repeat)
    for name, t in end.items():
        print(f"  {name:>8}: {t * 1e3:7.2f} ms")
    if "compiled" in end:
        print(f"  speedup : {end['pure'] / end['compiled']:6.2f}x")


if __name__ == "__main__":
    main()
