"""Timing comparison of the compiled kernels against the numpy fallback.

Runs the two hot kernels (rowwise Chernoff minimization and binned
segment means) through both implementations on identical inputs and
prints a small table of per-call times plus the largest numerical
deviation between backends.  Usage::

    python3 benchmarks/bench_kernels.py [--rows 200000] [--repeat 5]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from chaninfo._kernels import _pure

try:
    from chaninfo._kernels import _core
except ImportError:
    _core = None


def _bsc_inputs(rows: int, seed: int = 7):
    rng = np.random.default_rng(seed)
    lam = rng.uniform(0.05, 0.95, rows)
    eps = rng.uniform(0.01, 0.99, rows)
    cells = np.stack(
        [lam * (1 - eps), lam * eps, (1 - lam) * eps, (1 - lam) * (1 - eps)], axis=1
    )
    joint = cells.reshape(rows, 2, 2)
    r = joint.sum(axis=2)
    c = joint.sum(axis=1)
    prod = (r[:, :, None] * c[:, None, :]).reshape(rows, 4)
    return cells, prod


def _bin_inputs(rows: int, bins: int = 100, seed: int = 11):
    rng = np.random.default_rng(seed)
    z = rng.normal(size=rows)
    order = np.argsort(rng.random(rows), kind="stable").astype(np.int64)
    edges = ((np.arange(bins + 1) * rows) // bins).astype(np.int64)
    return z, order, edges


def _best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=200000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    cells, prod = _bsc_inputs(args.rows)
    z, order, edges = _bin_inputs(args.rows)

    rows = []
    pure_ch = _best_of(lambda: _pure.chernoff_batch(cells, prod, 1e-10), args.repeat)
    pure_bm = _best_of(lambda: _pure.bin_means(z, order, edges), args.repeat)
    rows.append(("chernoff_batch", "pure", pure_ch, ""))
    rows.append(("bin_means", "pure", pure_bm, ""))

    if _core is not None:
        core_ch = _best_of(lambda: _core.chernoff_batch(cells, prod, 1e-10), args.repeat)
        core_bm = _best_of(lambda: _core.bin_means(z, order, edges), args.repeat)
        v_pure, a_pure = _pure.chernoff_batch(cells, prod, 1e-10)
        v_core, a_core = _core.chernoff_batch(cells, prod, 1e-10)
        dev_v = float(np.max(np.abs(v_pure - v_core)))
        dev_a = float(np.max(np.abs(a_pure - a_core)))
        dev_b = float(
            np.max(np.abs(_pure.bin_means(z, order, edges) - _core.bin_means(z, order, edges)))
        )
        rows.append(
            ("chernoff_batch", "compiled", core_ch, f"x{pure_ch / core_ch:.1f}")
        )
        rows.append(("bin_means", "compiled", core_bm, f"x{pure_bm / core_bm:.1f}"))
        print(f"rows = {args.rows}, repeat = {args.repeat} (best-of shown)")
        print(f"{'kernel':<16}{'backend':<10}{'seconds':>10}  speedup")
        for name, backend, secs, speedup in rows:
            print(f"{name:<16}{backend:<10}{secs:>10.4f}  {speedup}")
        print(
            f"max deviation: value {dev_v:.3e}, alpha {dev_a:.3e}, bin means {dev_b:.3e}"
        )
    else:
        print("compiled kernels unavailable; pure backend only")
        print(f"{'kernel':<16}{'backend':<10}{'seconds':>10}")
        for name, backend, secs, _ in rows:
            print(f"{name:<16}{backend:<10}{secs:>10.4f}")


if __name__ == "__main__":
    main()
