"""Time the compiled kernels against the pure numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from intelliad import _kernels_py

try:
    from intelliad import _kernels as _kernels_cy
except ImportError:
    _kernels_cy = None


def cases(rng):
    X = rng.standard_normal((20_000, 8))
    C = rng.standard_normal((4, 8))
    labels = rng.integers(0, 4, len(X)).astype(np.int64)
    docs = [rng.integers(0, 2_000, rng.integers(3, 30)) for _ in range(5_000)]
    tokens = np.concatenate(docs).astype(np.int64)
    offsets = np.cumsum([0] + [len(d) for d in docs]).astype(np.int64)
    return {
        "assign_labels 20000x8, k=4": lambda m: m.assign_labels(X, C),
        "update_centroids 20000x8, k=4": lambda m: m.update_centroids(X, labels, 4),
        "cooccurrence 5000 docs, V=2000, w=2": lambda m: m.cooccurrence_counts(tokens, offsets,
                                                                                2_000, 2),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = {"python": _kernels_py}
    if _kernels_cy is not None:
        backends["cython"] = _kernels_cy
    else:
        print("compiled kernels not built; timing the fallback only")
    print(f"{'kernel':40s}" + "".join(f"{b:>12s}" for b in backends) + "     speedup")
    for name, fn in cases(np.random.default_rng(0)).items():
        best = {b: min(timeit.repeat(lambda: fn(m), number=1, repeat=args.repeat))
                for b, m in backends.items()}
        speed = f"{best['python'] / best['cython']:10.1f}x" if "cython" in best else ""
        print(f"{name:40s}" + "".join(f"{best[b] * 1e3:10.2f}ms" for b in backends) + speed)


if __name__ == "__main__":
    main()
