"""Compare the compiled kernels against the pure-Python fallback.

Runs the three hot kernels (similarity, self-intersection detection,
weighted blend) on randomized inputs at the default station count and
reports per-call timings for both backends plus the speedup.

Usage: python benchmarks/bench_kernels.py [--repeats 20000]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from foilmorph._kernels import _pure

try:
    from foilmorph._kernels import _core
except ImportError:
    _core = None

F = 200
N_BASELINES = 12


def make_inputs(seed: int = 0):
    rng = np.random.default_rng(seed)
    a = rng.normal(0.0, 0.05, F + 1)
    b = rng.normal(0.0, 0.05, F + 1)
    baselines = rng.normal(0.0, 0.05, (N_BASELINES, F + 1))
    weights = rng.uniform(-1.0, 1.0, N_BASELINES)
    weights[0] = 1.0  # keep the sum safely away from zero
    return a, b, baselines, weights


def bench(module, name: str, repeats: int) -> dict[str, float]:
    a, b, baselines, weights = make_inputs()
    cases = {
        "similarity": lambda: module.similarity(a, b),
        "detect": lambda: module.detect_self_intersection(a),
        "blend": lambda: module.blend(baselines, weights),
    }
    results = {}
    for label, fn in cases.items():
        seconds = timeit.timeit(fn, number=repeats)
        results[label] = seconds / repeats
    return results


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=20000)
    args = parser.parse_args()

    pure = bench(_pure, "pure", args.repeats)
    print(f"{'kernel':<12} {'pure (us)':>12}", end="")
    compiled = None
    if _core is not None:
        compiled = bench(_core, "cython", args.repeats)
        print(f" {'cython (us)':>12} {'speedup':>9}")
    else:
        print("\n(compiled backend not built; showing fallback only)")
    for label in pure:
        row = f"{label:<12} {pure[label] * 1e6:>12.3f}"
        if compiled:
            row += (
                f" {compiled[label] * 1e6:>12.3f}"
                f" {pure[label] / compiled[label]:>8.1f}x"
            )
        print(row)


if __name__ == "__main__":
    main()
