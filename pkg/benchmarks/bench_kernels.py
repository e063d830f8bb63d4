"""Micro-benchmark: compiled conjunction kernels vs the pure-Python twins.

Run as ``python3 benchmarks/bench_kernels.py``.  The two backends are
imported directly, so this works regardless of which one the package
selected at import time; if the compiled module is missing only the
pure numbers are printed.
"""

import random
import statistics
import time

from possum.calculus import _reference

try:
    from possum.calculus import _speedups
except ImportError:
    _speedups = None

FAMILY_LABELS = ["T1", "T1.5", "T2", "T2.5", "T3"]


def _timeit(thunk, repeats=7):
    """Best-of median wall time for one thunk, in seconds."""
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        thunk()
        samples.append(time.perf_counter() - start)
    return statistics.median(samples)


def _pair_workload(mod, code, pairs):
    fn = mod.tnorm_pair

    def run():
        for a, b in pairs:
            fn(code, a, b)

    return run


def _many_workload(mod, code, vectors):
    fn = mod.tnorm_many

    def run():
        for vec in vectors:
            fn(code, vec)

    return run


def _conorm_workload(mod, code, vectors):
    fn = mod.tconorm_many

    def run():
        for vec in vectors:
            fn(code, vec)

    return run


def main():
    rng = random.Random(1861)
    pairs = [(rng.random(), rng.random()) for _ in range(20_000)]
    vectors = [
        [rng.random() for _ in range(rng.randint(2, 24))] for _ in range(4_000)
    ]

    backends = [("python", _reference)]
    if _speedups is not None:
        backends.append(("compiled", _speedups))
    else:
        print("compiled kernels not built; showing pure-Python timings only")

    workloads = [
        ("pair x20k", _pair_workload, pairs),
        ("n-ary x4k", _many_workload, vectors),
        ("conorm x4k", _conorm_workload, vectors),
    ]

    header = f"{'workload':<12} {'family':<6}" + "".join(
        f" {name + ' (ms)':>14}" for name, _ in backends
    )
    if len(backends) == 2:
        header += f" {'speedup':>9}"
    print(header)
    print("-" * len(header))

    for label, build, payload in workloads:
        for code, family in enumerate(FAMILY_LABELS):
            times = [_timeit(build(mod, code, payload)) for _, mod in backends]
            row = f"{label:<12} {family:<6}" + "".join(
                f" {t * 1000.0:>14.2f}" for t in times
            )
            if len(times) == 2 and times[1] > 0:
                row += f" {times[0] / times[1]:>8.1f}x"
            print(row)

    # The whole point of shipping both: identical answers.
    if _speedups is not None:
        for code in range(5):
            for a, b in pairs[:500]:
                assert _reference.tnorm_pair(code, a, b) == _speedups.tnorm_pair(
                    code, a, b
                )
        print("\nspot check: compiled and pure results identical on 2500 pairs")


if __name__ == "__main__":
    main()
