"""Compare the compiled and pure-Python hashing kernels.

    python benchmarks/bench_kernels.py [--max-log-n 20] [--repeat 5]

Prints one CSV row per (kernel, operation, n) with the median wall time.
"""
import argparse
import statistics
import sys
import time

from orproofs import _kernels_py

try:
    from orproofs import _kernels
except ImportError:
    _kernels = None


def build_levels(impl, blocks):
    level = impl.leaf_digests(blocks)
    levels = [level]
    while len(level) > 1:
        level = impl.parent_level(level)
        levels.append(level)
    return levels


def fold_all(impl, levels):
    n = len(levels[0])
    siblings_by_leaf = []
    for i in range(n):
        sibs, lefts, pos = [], [], i
        for level in levels[:-1]:
            sibs.append(level[pos ^ 1])
            lefts.append(bool(pos & 1))
            pos >>= 1
        siblings_by_leaf.append((sibs, lefts))
    root = levels[-1][0]
    t0 = time.perf_counter_ns()
    for i, (sibs, lefts) in enumerate(siblings_by_leaf):
        assert impl.fold_path(levels[0][i], sibs, lefts) == root
    return time.perf_counter_ns() - t0


def median_ns(fn, repeat):
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter_ns()
        fn()
        samples.append(time.perf_counter_ns() - t0)
    return int(statistics.median(samples))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-log-n", type=int, default=16)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    impls = [("python", _kernels_py)]
    if _kernels is not None:
        impls.append(("cython", _kernels))
    else:
        print("compiled kernel not built; timing the fallback only", file=sys.stderr)

    print("kernel,operation,n,median_ns,speedup_vs_python")
    for log_n in range(4, args.max_log_n + 1, 2):
        n = 1 << log_n
        blocks = [i.to_bytes(8, "big") * 4 for i in range(n)]
        baseline = {}
        reference = build_levels(_kernels_py, blocks)
        for name, impl in impls:
            assert build_levels(impl, blocks) == reference
            results = {
                "build_tree": median_ns(lambda: build_levels(impl, blocks), args.repeat),
                "fold_all_paths": int(statistics.median(fold_all(impl, reference) for _ in range(args.repeat))),
            }
            for op, ns in results.items():
                baseline.setdefault(op, ns)
                print(f"{name},{op},{n},{ns},{baseline[op] / ns:.2f}")


if __name__ == "__main__":
    main()
