"""Numba vs numpy timings for the hot kernels.

    python benchmarks/bench_kernels.py [--repeat 5] [--scale 1.0]

Each kernel is warmed up once per backend (so JIT compilation is not timed),
then timed as the best of ``--repeat`` runs. Outputs are compared across
backends; any mismatch is reported next to the timing.
"""
import argparse
import time

import numpy as np

from monorep import _accel, _kernels


def _cases(scale):
    rng = np.random.default_rng(0)
    n = int(801 * scale)
    x = np.linspace(-4, 4, n)
    f = 0.5 * x * x
    s = np.linspace(-4, 4, n)

    m = int(161 * scale)
    ax = np.linspace(-4, 4, m)
    P = np.stack(np.meshgrid(ax, ax, indexing="ij"), axis=-1).reshape(-1, 2)
    fp = 0.5 * (P ** 2).sum(axis=1)
    g = np.linspace(-4, 4, 4 * m)
    T = np.stack([g, g], axis=1)

    vals = rng.random((m, m))
    probes = np.argwhere(np.ones((m, m), dtype=bool))[::7]
    r = 3
    off = np.array([(i, j) for i in range(-r, r + 1) for j in range(-r, r + 1) if i * i + j * j <= r * r])

    return {
        "conj1d_brute": lambda: _kernels.conj1d_brute(x, f, s),
        "conj1d_fast": lambda: _kernels.conj1d_fast(x, f, s),
        "conj_points": lambda: _kernels.conj_points(P, fp, P[::9]),
        "fitzpatrick_sup": lambda: _kernels.fitzpatrick_sup(ax, ax, g, g),
        "min_dist": lambda: _kernels.min_dist(P, T),
        "min_monotone_product": lambda: _kernels.min_monotone_product(P, T, 1),
        "ball_min": lambda: _kernels.ball_min(vals, probes, off),
    }


def _best(fn, repeat):
    out = fn()
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def _same(a, b):
    a = a if isinstance(a, tuple) else (a,)
    b = b if isinstance(b, tuple) else (b,)
    return all(np.array_equal(np.asarray(u), np.asarray(v)) for u, v in zip(a, b))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--scale", type=float, default=1.0, help="multiplies every problem size")
    args = ap.parse_args(argv)

    if not _accel.HAS_NUMBA:
        print("numba not importable; only the numpy path can be timed")
    cases = _cases(args.scale)
    print(f"{'kernel':24s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s}  outputs")
    for name, fn in cases.items():
        with _accel.using_backend("numpy"):
            t_np, out_np = _best(fn, args.repeat)
        if _accel.HAS_NUMBA:
            with _accel.using_backend("numba"):
                t_nb, out_nb = _best(fn, args.repeat)
            same = "identical" if _same(out_np, out_nb) else "DIFFER"
            print(f"{name:24s} {1e3 * t_np:11.2f} {1e3 * t_nb:11.2f} {t_np / t_nb:7.1f}x  {same}")
        else:
            print(f"{name:24s} {1e3 * t_np:11.2f} {'-':>11s} {'-':>8s}")


if __name__ == "__main__":
    main()
