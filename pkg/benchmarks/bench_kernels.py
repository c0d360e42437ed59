"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--scale 1.0]

Sizes default to the public credit-card layout after 1:1 undersampling
(~690 training rows, 30 features). Each kernel's outputs are also checked for
bit-for-bit agreement between backends.
"""

import argparse
import time

import numpy as np

from fraudkit import _pykernels

try:
    from fraudkit import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases(scale, rng):
    n, d = int(690 * scale), 30
    X = rng.normal(size=(n, d))
    y01 = (rng.random(n) < 0.5).astype(np.int8)

    Xb = np.ascontiguousarray(np.column_stack([X, np.ones(n)]))
    ypm = np.where(y01 == 1, 1.0, -1.0)
    order = np.concatenate([rng.permutation(n) for _ in range(200)]).astype(np.intp)
    lam = 1.0 / n
    yield f"pegasos (n={n}, d={d}, 200 epochs)", "pegasos_train", (Xb, ypm, order, lam, 0.01, False)

    Xs = np.ascontiguousarray(X)
    sort_order = np.ascontiguousarray(np.argsort(Xs, axis=0, kind="stable"), dtype=np.intp)
    yield f"best_split (n={n}, d={d})", "best_split", (Xs, y01, sort_order, 5)

    m = int(300 * scale)
    Q = np.ascontiguousarray(rng.normal(size=(m, d)))
    yield f"knn counts (n={n}, queries={m}, k=5)", "knn_positive_counts", (Xs, y01, Q, 5)


def same(a, b):
    if isinstance(a, tuple):
        return all(x == y for x, y in zip(a, b))
    return np.asarray(a).tobytes() == np.asarray(b).tobytes()


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--scale", type=float, default=1.0)
    args = ap.parse_args()
    if _ckernels is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<42}{'python s':>11}{'cython s':>11}{'speedup':>9}  identical")
    for label, name, inputs in cases(args.scale, rng):
        tp, outp = best_of(lambda: getattr(_pykernels, name)(*inputs), args.repeat)
        tc, outc = best_of(lambda: getattr(_ckernels, name)(*inputs), args.repeat)
        print(f"{label:<42}{tp:>11.4f}{tc:>11.5f}{tp / tc:>8.0f}x  {same(outp, outc)}")


if __name__ == "__main__":
    main()
