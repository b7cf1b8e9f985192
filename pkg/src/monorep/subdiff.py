"""Subdifferentials of closed-form functions and the operators encoded by
functions on X x X*: the separable representative ``g(x) + g*(x*)`` and the
symmetrised representative ``(h(x, x*) + h*(x*, x)) / 2``."""
import numpy as np

from .conjugate import conjugate_values, swap_conjugate
from .core import BiFn, FnSpec, Grid, Interval, OperatorGraph
from .fitzpatrick import extract_L


def subdifferential(g: FnSpec, x):
    """Exact subdifferential of ``g`` at ``x``.

    Returns an :class:`Interval` in d = 1 and a tuple of intervals (a box)
    in d = 2. Points outside ``dom g`` give the empty interval.
    """
    parts = g.subgradients(x)
    return parts[0] if g.dim == 1 else parts


def fenchel_young_gap(g: FnSpec, x, s) -> np.ndarray:
    """``g(x) + g*(s) - <x, s>``, zero exactly on the graph of the subdifferential."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    s = np.atleast_1d(np.asarray(s, dtype=float))
    gx, gs = g(x), g.conj(s)
    with np.errstate(invalid="ignore"):
        return np.where(np.isinf(gx) | np.isinf(gs), np.inf, gx + gs - x * s)


def separable_bifn(g: FnSpec, window: Grid, method: str = "brute") -> BiFn:
    """``(x, x*) -> g(x) + g*(x*)`` on an (x, x*) window (d = 1).

    Uses the closed-form conjugate when ``g`` has one, otherwise the grid
    conjugate over the window's primal axis (with the usual truncation to the
    window).
    """
    if window.dim != 2 or g.dim != 1:
        raise ValueError("separable_bifn needs d = 1 and an (x, x*) window")
    xa, sa = window.axes
    gx = g(xa)
    if g.has_conjugate:
        gs = g.conj(sa)
    else:
        gs = conjugate_values(g.sample(window.axis(0)), window.axis(1), method)
    return BiFn(window, np.add.outer(gx, gs))


def symmetrized_representative(h: BiFn, dual_window: Grid | None = None, method: str = "fast") -> BiFn:
    """``(h(x, x*) + h*(x*, x)) / 2`` on the window of ``h``.

    The swapped conjugate is taken over the grid, so the result is exact for
    ``h`` restricted to the window.
    """
    hs = swap_conjugate(h, dual_window, method=method)
    if hs.grid.shape != h.grid.shape:
        raise ValueError("dual window must mirror the window of h")
    return BiFn(h.grid, 0.5 * (h.values + hs.values))


def operator_of(h: BiFn, tol=None) -> OperatorGraph:
    """The operator ``{(x, x*) : (x*, x) in subdifferential of h at (x, x*)}``,
    read off as the contact set of the symmetrised representative."""
    return extract_L(symmetrized_representative(h), tol)


def sampled_subdifferential_graph(g: FnSpec, window: Grid) -> OperatorGraph:
    """Window nodes ``(x, s)`` with ``s`` in the subdifferential of ``g`` at ``x``
    (set-valued parts are filled at dual-axis resolution)."""
    xa, sa = window.axes
    rows = []
    for x in xa:
        iv = subdifferential(g, x)
        if isinstance(iv, Interval) and not iv.empty:
            for s in sa[(sa >= iv.lo - 1e-12) & (sa <= iv.hi + 1e-12)]:
                rows.append((x, s))
    return OperatorGraph(np.array(rows).reshape(-1, 2), 1)
