"""Discrete Legendre-Fenchel conjugation on grids.

The conjugate of a sampled ``f`` is computed exactly for ``f + indicator(window)``:
nothing outside the primal window is seen, so values near the dual window
edges can be smaller than the conjugate of ``f`` on all of R^d.
"""
import numpy as np

from . import _kernels
from .core import BiFn, Grid, SampledFn

METHODS = ("brute", "fast", "nested")


def _check_proper(f: SampledFn):
    if not np.isfinite(f.values).any():
        raise ValueError("improper function: identically +inf")


def conjugate_values(f: SampledFn, dual_grid: Grid, method: str = "brute") -> np.ndarray:
    """Array of conjugate values on ``dual_grid`` (shape ``dual_grid.shape``).

    ``method``:
      * ``"brute"``  -- max over every primal node for every dual node, O(N*M);
        the reference.
      * ``"fast"``   -- lower hull + monotone sweep per axis (linear time per line).
      * ``"nested"`` -- 2-D only: axis-by-axis brute force (the 2-D sup split
        into two 1-D sups), O(N*sqrt(M)).
    """
    _check_proper(f)
    if method not in METHODS:
        raise ValueError(f"unknown conjugation method {method!r}; choose from {METHODS}")
    if dual_grid.dim != f.grid.dim:
        raise ValueError("dual grid dimension does not match the function")
    if f.grid.dim == 1:
        x, s = f.grid.axes[0], dual_grid.axes[0]
        if method == "fast":
            vals, _ = _kernels.conj1d_fast(x, f.values, s)
        else:
            vals, _ = _kernels.conj1d_brute(x, f.values, s)
        return vals
    if f.grid.dim != 2:
        raise ValueError("sampled conjugation supports 1 or 2 axes")
    if method == "brute":
        vals = _kernels.conj_points(f.grid.points(), f.values.ravel(), dual_grid.points())
        return vals.reshape(dual_grid.shape)
    line = _kernels.conj1d_fast if method == "fast" else _kernels.conj1d_brute
    x0, x1 = f.grid.axes
    s0, s1 = dual_grid.axes
    # inner sup over the second coordinate, one primal row at a time
    inner = np.empty((x0.size, s1.size))
    for i in range(x0.size):
        inner[i], _ = line(x1, f.values[i], s1)
    # a row with no finite value gives -inf inside, i.e. +inf for the outer pass
    outer_f = -inner
    out = np.empty((s0.size, s1.size))
    for j in range(s1.size):
        out[:, j], _ = line(x0, outer_f[:, j], s0)
    return out


def conjugate(f: SampledFn, dual_grid: Grid, method: str = "brute") -> SampledFn:
    """Conjugate ``s -> max_x <x, s> - f(x)`` over the nodes of ``f.grid``."""
    vals = conjugate_values(f, dual_grid, method)
    cls = BiFn if isinstance(f, BiFn) else SampledFn
    return cls(dual_grid, vals)


def argmax_1d(f: SampledFn, s) -> np.ndarray:
    """Index of the primal node attaining the conjugate at each ``s``.

    Ties go to the smaller index.
    """
    _check_proper(f)
    _, arg = _kernels.conj1d_brute(f.grid.axes[0], f.values, np.atleast_1d(s))
    return arg


def swap_conjugate(F: BiFn, dual_window: Grid | None = None, method: str = "fast") -> BiFn:
    """Conjugate of ``F`` on X* x X, re-indexed so it can be read at ``(x, x*)``.

    ``dual_window`` is a grid over X* x X (axis 0 is ``x*``); it defaults to
    ``F.grid`` with its axes swapped. The pairing is
    ``<(x, x*), (y*, y)> = x y* + x* y``. The result ``G`` lives on the
    (x, x*) grid and satisfies ``G(x, x*) = F*(x*, x)``, so it lines up
    node-for-node with ``F`` when the default window is used.
    """
    if not isinstance(F, BiFn):
        raise TypeError("swap_conjugate expects a BiFn")
    _check_proper(F)
    if dual_window is None:
        dual_window = F.grid.swapped()
    # dual_window axis 0 (y*) pairs with x and axis 1 (y) pairs with x*,
    # which is exactly the componentwise pairing used by conjugate_values
    vals = conjugate_values(F, dual_window, method)
    # vals[a, b] = F*(y*_a, y_b); G(x = y_b, x* = y*_a) reads it transposed
    return BiFn(dual_window.swapped(), vals.T)
