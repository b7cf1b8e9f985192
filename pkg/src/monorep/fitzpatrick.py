"""Fitzpatrick functions, convex-graph representatives, class membership tests
and extraction of the operator a representative function encodes."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .conjugate import swap_conjugate
from .core import (
    INF,
    BiFn,
    ConvergenceReport,
    FiniteGraph,
    Grid,
    OperatorGraph,
    OperatorSpec,
    Witness,
    _cloud_spacing,
    audit_convex_cloud,
)

KINDS = ("class_F", "class_Fstar", "monotone", "maximal_window")


@dataclass
class ClassCheck:
    kind: str
    report: ConvergenceReport

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown check kind {self.kind!r}")

    @property
    def passed(self) -> bool:
        return self.report.passed

    @property
    def witness(self):
        return self.report.witnesses[0] if self.report.witnesses else None

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.report.to_dict()}


def _as_graph(T, window: Grid) -> OperatorGraph:
    if isinstance(T, OperatorGraph):
        return T
    if isinstance(T, OperatorSpec):
        return T.sample(window)
    raise TypeError(f"expected OperatorGraph or OperatorSpec, got {type(T).__name__}")


def _require_window(window: Grid):
    if window.dim != 2:
        raise ValueError("window must be a 2-axis (x, x*) grid")


def fitzpatrick_fn(T, window: Grid) -> BiFn:
    """``phi_T(x, x*) = sup_{(y, y*) in T} <y - x, x* - y*> + <x, x*>`` on ``window``.

    The supremum is exact over the sampled graph; a closed-form ``T`` is first
    sampled at the window's axis resolution.
    """
    _require_window(window)
    G = _as_graph(T, window)
    if len(G) == 0:
        raise ValueError("empty operator")
    if G.dim != 1:
        raise ValueError("Fitzpatrick tables are only built for d = 1")
    vals = _kernels.fitzpatrick_sup(window.axes[0], window.axes[1], G.xs[:, 0], G.xstars[:, 0])
    return BiFn(window, vals)


def graph_mask(T, window: Grid) -> np.ndarray:
    """Boolean table of window nodes that carry a point of ``T``.

    Each sampled graph point marks its nearest node, so the tolerance is half
    a step per axis. Points further than half a step outside the window are
    dropped.
    """
    _require_window(window)
    G = _as_graph(T, window)
    mask = np.zeros(window.shape, dtype=bool)
    if len(G) == 0:
        return mask
    half = 0.5 * window.step
    inside = np.all((G.points >= window.lo - half) & (G.points <= window.hi + half), axis=1)
    idx = window.nearest_index(G.points[inside])
    mask[idx[:, 0], idx[:, 1]] = True
    return mask


def representative_of_convex_graph(T, window: Grid) -> BiFn:
    """``phi_T + indicator(T)`` for an operator with convex graph."""
    if isinstance(T, OperatorGraph):
        T = FiniteGraph(T)
    if isinstance(T, FiniteGraph):
        ok, mid, dist = audit_convex_cloud(T.graph, tol=max(window.h, _cloud_spacing(T.graph)))
        if not ok:
            raise ValueError(f"graph not convex: midpoint {mid.tolist()} is {dist:.3g} away from the cloud")
    elif not T.convex_graph:
        raise ValueError(f"graph not convex: {type(T).__name__}")
    phi = fitzpatrick_fn(T, window)
    mask = graph_mask(T, window)
    if not mask.any():
        raise ValueError("operator graph misses the window entirely")
    return BiFn(window, np.where(mask, phi.values, INF))


def _node(F: BiFn, flat: int) -> tuple:
    i, j = np.unravel_index(flat, F.grid.shape)
    return (float(F.x_axis[i]), float(F.xstar_axis[j]))


def _majorant_check(kind, G: BiFn, tol, mask, witness_points, extra):
    """Shared body of the class checks: ``G >= coupling - tol`` on ``mask``."""
    gap = np.where(mask, G.gap(), INF)
    flat = int(np.argmin(gap))
    worst = float(gap.ravel()[flat])
    witnesses = []
    if worst < -tol:
        pt = _node(G, flat)
        witnesses.append(Witness(pt, float(G.values.ravel()[flat]), pt[0] * pt[1],
                                 f"violation {-worst:.12g} (worst)"))
    for wp in witness_points or ():
        i, j = G.grid.nearest_index(np.asarray(wp, dtype=float))[0]
        g = float(gap[i, j])
        if g < -tol:
            pt = (float(G.x_axis[i]), float(G.xstar_axis[j]))
            witnesses.append(Witness(pt, float(G.values[i, j]), pt[0] * pt[1], f"violation {-g:.12g}"))
    verdict = "fail" if witnesses else "pass"
    report = ConvergenceReport(
        verdict, witnesses, {"tol": tol, **extra},
        details={"min_gap": worst, "checked_nodes": int(mask.sum())},
    )
    return ClassCheck(kind, report)


def check_class_F(F: BiFn, tol: float = 1e-9, witness_points=None) -> ClassCheck:
    """Pass iff ``F >= <x, x*> - tol`` at every node.

    A failure reports the worst node first, then any of ``witness_points``
    that also violate the inequality.
    """
    mask = np.ones(F.grid.shape, dtype=bool)
    return _majorant_check("class_F", F, tol, mask, witness_points, {})


def check_class_Fstar(F: BiFn, dual_window: Grid | None = None, tol: float | None = None,
                      margin: float = 1.0, witness_points=None, method: str = "fast") -> ClassCheck:
    """Pass iff the swapped conjugate ``F*(x*, x)`` majorises ``<x, x*>``.

    Only nodes at least ``margin`` inside the window are judged: the grid
    conjugate sees nothing outside the window and is unreliable near its
    faces. ``tol`` defaults to ``h**2``.
    """
    G = swap_conjugate(F, dual_window, method=method)
    if tol is None:
        tol = G.grid.h ** 2
    mask = G.grid.interior_mask(margin)
    if not mask.any():
        raise ValueError("margin leaves no interior nodes")
    return _majorant_check("class_Fstar", G, tol, mask, witness_points, {"margin": margin})


def default_extract_tol(F: BiFn) -> np.ndarray:
    """Per-node tolerance ``4 h^2 (1 + |<x, x*>|)``."""
    return 4.0 * F.grid.h ** 2 * (1.0 + np.abs(F.coupling_table()))


def extract_L(F: BiFn, tol=None) -> OperatorGraph:
    """Nodes where ``F`` touches the coupling: ``F - <x, x*> <= tol``.

    ``tol`` may be a scalar or a per-node table; it defaults to
    :func:`default_extract_tol`.
    """
    if tol is None:
        tol = default_extract_tol(F)
    hit = F.gap() <= tol
    X, S = np.meshgrid(F.x_axis, F.xstar_axis, indexing="ij")
    return OperatorGraph(np.stack([X[hit], S[hit]], axis=1), 1)


def _pair_witness(P, Q, i, k, value, note):
    pt = tuple(float(v) for v in np.concatenate([P[i], Q[k]]))
    return Witness(pt, float(value), 0.0, note)


def is_monotone(T, tol: float = 1e-12) -> ClassCheck:
    """Pass iff ``<y - x, y* - x*> >= -tol`` for every pair of graph points."""
    if isinstance(T, OperatorSpec):
        raise TypeError("sample the operator first (OperatorSpec.sample)")
    P = T.points
    if len(P) < 2:
        return ClassCheck("monotone", ConvergenceReport("pass", tolerances={"tol": tol}))
    prod, arg = _kernels.min_monotone_product(P, P, T.dim)
    i = int(np.argmin(prod))
    worst = float(prod[i])
    witnesses = []
    if worst < -tol:
        witnesses.append(_pair_witness(P, P, i, int(arg[i]), worst, "pair (x, x*, y, y*) with negative product"))
    report = ConvergenceReport("fail" if witnesses else "pass", witnesses, {"tol": tol},
                               details={"min_product": worst, "points": len(P)})
    return ClassCheck("monotone", report)


def maximality_audit(T: OperatorGraph, grid: Grid, margin: float = 1.0, rho: float | None = None,
                     tol: float = 1e-12, witness_points=None) -> ClassCheck:
    """Window audit of maximal monotonicity (a necessary-condition surrogate).

    A node ``p`` of ``grid`` that lies at least ``margin`` inside the window and
    at least ``rho`` (default ``2 h``) away from ``T`` is *addable* when
    ``<p.x - q.x, p.x* - q.x*> >= -tol`` for every ``q`` in ``T``. ``T`` passes
    (is window-maximal) iff no node is addable. The reported witness is the
    addable node nearest to ``T``.
    """
    if len(T) == 0:
        raise ValueError("empty operator")
    if rho is None:
        rho = 2.0 * grid.h
    nodes = grid.points()[grid.interior_mask(margin).ravel()]
    dist, _ = _kernels.min_dist(nodes, T.points)
    cand = nodes[dist >= rho - 1e-12]
    cdist = dist[dist >= rho - 1e-12]
    witnesses = []
    n_addable = 0
    if len(cand):
        prod, _ = _kernels.min_monotone_product(cand, T.points, T.dim)
        addable = prod >= -tol
        n_addable = int(addable.sum())
        if n_addable:
            k = np.flatnonzero(addable)[np.argmin(cdist[addable])]
            witnesses.append(Witness(tuple(cand[k].tolist()), float(prod[k]), -tol,
                                     "addable: monotone against every graph point"))
        for wp in witness_points or ():
            wp = np.asarray(wp, dtype=float)
            pm, _ = _kernels.min_monotone_product(wp[None, :], T.points, T.dim)
            wd, _ = _kernels.min_dist(wp[None, :], T.points)
            if pm[0] >= -tol and wd[0] >= rho - 1e-12:
                witnesses.append(Witness(tuple(wp.tolist()), float(pm[0]), -tol,
                                         "addable: monotone against every graph point"))
    report = ConvergenceReport(
        "fail" if witnesses else "pass", witnesses,
        {"tol": tol, "rho": rho, "margin": margin},
        details={"candidates": int(len(cand)), "addable": n_addable,
                 "note": "window audit; a pass is necessary, not sufficient, for maximality"},
    )
    return ClassCheck("maximal_window", report)
