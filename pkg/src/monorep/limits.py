"""Graph lower limits of operator sequences and epi-convergence diagnostics.

Everything here works on a finite tail ``n_max - tail + 1 .. n_max`` of the
sequence; a pass is evidence over that tail, not a proof about ``n -> inf``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _kernels
from .core import (
    INF,
    BiFn,
    ConvergenceReport,
    DualPair,
    FiniteGraph,
    FnSpec,
    Grid,
    OperatorGraph,
    OperatorSpec,
    SampledFn,
    Witness,
)
from .resolvent import resolve_rows

DEFAULT_NMAX = 200
DEFAULT_TAIL = 50


@dataclass(frozen=True)
class OperatorSequence:
    """``n -> T_n`` given by a rule returning an OperatorSpec (or OperatorGraph)."""

    rule: Callable[[int], object]
    n_max: int = DEFAULT_NMAX

    def term(self, n: int) -> OperatorSpec:
        T = self.rule(n)
        return FiniteGraph(T) if isinstance(T, OperatorGraph) else T

    def tail_indices(self, tail: int) -> range:
        return _tail(self.n_max, tail)


@dataclass(frozen=True)
class FnSequence:
    """``n -> f_n`` given by a rule returning a FnSpec or a sampled function."""

    rule: Callable[[int], object]
    n_max: int = DEFAULT_NMAX

    def term(self, n: int):
        return self.rule(n)

    def tail_indices(self, tail: int) -> range:
        return _tail(self.n_max, tail)


def _tail(n_max, tail):
    if tail < 1:
        raise ValueError("empty tail")
    if tail > n_max:
        raise ValueError(f"tail {tail} exceeds the horizon n_max={n_max}")
    return range(n_max - tail + 1, n_max + 1)


def _probe_rows(probes, window: Grid | None):
    if probes is None:
        if window is None:
            raise ValueError("need probes or a probe window")
        return window.points()
    if isinstance(probes, Grid):
        return probes.points()
    if isinstance(probes, OperatorGraph):
        return probes.points
    rows = [p.as_row() if isinstance(p, DualPair) else np.asarray(p, dtype=float) for p in probes]
    return np.atleast_2d(np.array(rows, dtype=np.float64))


def _slack(c, n):
    return c / n


def graph_residuals(seq: OperatorSequence, rows: np.ndarray, tail: int) -> np.ndarray:
    """Distances ``dist(p, T_n)`` for each tail index (rows) and probe (columns)."""
    idx = seq.tail_indices(tail)
    return np.array([seq.term(n).distance(rows) for n in idx])


def resolvent_residuals(seq: OperatorSequence, rows: np.ndarray, tail: int) -> tuple:
    """``|J_{T_n}(p) - p.x|`` and ``|J_{T_n}(p)|`` over the tail, one row per n."""
    idx = seq.tail_indices(tail)
    d = rows.shape[1] // 2
    X, XS = rows[:, :d], rows[:, d:]
    res = np.empty((len(idx), len(rows)))
    norms = np.empty_like(res)
    for a, n in enumerate(idx):
        Z = resolve_rows(seq.term(n), X, XS)
        res[a] = np.linalg.norm(Z - X, axis=1)
        norms[a] = np.linalg.norm(Z, axis=1)
    return res, norms


def _accept(residuals, idx, tol, slack):
    bound = tol + np.array([_slack(slack, n) for n in idx])[:, None]
    return np.all(residuals <= bound, axis=0)


def default_liminf_tol(window: Grid) -> float:
    """0.6 of the probe step: off-graph nodes one step away stay rejected."""
    return 0.6 * window.h


def liminf_graphs(seq: OperatorSequence, probe_window: Grid, tail: int = DEFAULT_TAIL,
                  tol: float | None = None, slack: float = 1.0, probes=None) -> OperatorGraph:
    """Probe nodes that stay near every graph of the tail.

    ``p`` is kept iff ``dist(p, T_n) <= tol + slack/n`` for every ``n`` in the
    tail. ``tol`` defaults to :func:`default_liminf_tol`.
    """
    if tol is None:
        tol = default_liminf_tol(probe_window)
    rows = _probe_rows(probes, probe_window)
    res = graph_residuals(seq, rows, tail)
    keep = _accept(res, seq.tail_indices(tail), tol, slack)
    return OperatorGraph(rows[keep], rows.shape[1] // 2)


def liminf_resolvent(seq: OperatorSequence, probes, tail: int = DEFAULT_TAIL,
                     tol: float | None = None, slack: float = 1.0) -> OperatorGraph:
    """Probes ``p`` whose resolvents return to ``p.x``:
    ``|J_{T_n}(p) - p.x| <= tol + slack/n`` over the whole tail.

    ``probes`` is a Grid, an OperatorGraph or a list of pairs/rows; ``tol``
    defaults to :func:`default_liminf_tol` when it is a Grid and is required otherwise.
    """
    if tol is None:
        if not isinstance(probes, Grid):
            raise ValueError("tol is required unless probes is a Grid")
        tol = default_liminf_tol(probes)
    rows = _probe_rows(probes, None)
    res, _ = resolvent_residuals(seq, rows, tail)
    keep = _accept(res, seq.tail_indices(tail), tol, slack)
    return OperatorGraph(rows[keep], rows.shape[1] // 2)


def resolvent_bound(seq: OperatorSequence, probes, tail: int = DEFAULT_TAIL) -> float:
    """Largest ``|J_{T_n}(p)|`` over probes and tail (finite when the lower limit is nonempty)."""
    rows = _probe_rows(probes, None)
    _, norms = resolvent_residuals(seq, rows, tail)
    return float(norms.max())


# ---------------------------------------------------------------------------
# epi-convergence

def default_ladder(grid: Grid) -> list:
    h2 = 2.0 * grid.h
    return [r for r in (0.5, 0.25, 0.1) if r > h2 + 1e-12] + [h2]


def default_probes(grid: Grid, margin: float = 1.0, stride: int = 4) -> np.ndarray:
    """Multi-indices of interior nodes on a ``stride`` sub-lattice."""
    mask = grid.interior_mask(margin)
    idx = np.argwhere(mask)
    keep = np.all(idx % stride == 0, axis=1)
    return idx[keep] if keep.any() else idx


def _sampled_values(term, grid: Grid | None):
    if isinstance(term, SampledFn):
        if grid is not None and term.grid.shape != grid.shape:
            raise ValueError("all sampled terms must share the probe grid")
        return term.grid, term.values
    if isinstance(term, FnSpec):
        if grid is None:
            raise ValueError("a grid is needed to sample closed-form functions")
        return grid, term.sample(grid).values
    raise TypeError(f"cannot sample {type(term).__name__}")


def _oscillation_note(seq_vals):
    n_inf = int(np.isinf(seq_vals).sum())
    if 0 < n_inf < len(seq_vals):
        return f"oscillation: +inf on {n_inf} of {len(seq_vals)} tail terms, finite on the rest"
    return ""


def epi_convergence_report(seq: FnSequence, candidate, probes=None, r_ladder=None,
                           tail: int = DEFAULT_TAIL, tol: float | None = None,
                           grid: Grid | None = None, margin: float = 1.0,
                           stride: int = 4) -> ConvergenceReport:
    """Finite-tail check that ``f_n`` epi-converges to ``candidate``.

    With ``m_n(x, r) = min{f_n(y) : y node, |y - x| <= r}`` and ``r`` the
    smallest ladder radius, a probe ``x`` passes when

    * recovery: ``max_n m_n(x, r) <= candidate(x) + tol`` (some nodes near
      ``x`` carry values of ``f_n`` that do not overshoot the limit), and
    * lower bound: ``min_n m_n(x, r) >= m(x, r) - tol`` where ``m`` is the same
      ball minimum for the candidate (no sequence approaching ``x`` undercuts
      the limit).

    ``max``/``min`` over the tail stand in for limsup/liminf. The remaining
    ladder radii are reported as a profile. In finite dimension epi- and
    Mosco-convergence coincide, so this also checks Mosco-convergence.

    ``probes`` are points (snapped to nodes) or, by default, interior nodes on
    a stride lattice. Defaults: ``tol = 10 h``, ladder ``{0.5, 0.25, 0.1, 2h}``.
    """
    idx = seq.tail_indices(tail)
    first = seq.term(idx[0])
    if grid is None:
        if isinstance(candidate, SampledFn):
            grid = candidate.grid
        elif isinstance(first, SampledFn):
            grid = first.grid
        else:
            raise ValueError("a grid is needed to sample closed-form functions")
    h = grid.h
    if r_ladder is None:
        r_ladder = default_ladder(grid)
    r_ladder = [float(r) for r in r_ladder]
    if any(b >= a for a, b in zip(r_ladder, r_ladder[1:])):
        raise ValueError("radius ladder must be strictly decreasing")
    if r_ladder[-1] < h - 1e-12:
        raise ValueError(f"ladder below resolution: smallest radius {r_ladder[-1]} < grid step {h}")
    if tol is None:
        tol = 10.0 * grid.h

    if probes is None:
        pidx = default_probes(grid, margin, stride)
    else:
        pts = np.atleast_2d(np.asarray(probes, dtype=np.float64))
        pidx = grid.nearest_index(pts)
    coords = np.stack([grid.axes[a][pidx[:, a]] for a in range(grid.dim)], axis=1)

    offsets = [grid.ball_offsets(r) for r in r_ladder]
    M = np.empty((len(idx), len(r_ladder), len(pidx)))
    for a, n in enumerate(idx):
        term = first if a == 0 else seq.term(n)
        _, vals = _sampled_values(term, grid)
        for b, off in enumerate(offsets):
            M[a, b] = _kernels.ball_min(vals, pidx, off)

    if isinstance(candidate, SampledFn):
        if candidate.grid.shape != grid.shape:
            raise ValueError("candidate must be sampled on the probe grid")
        cvals = candidate.values
        cand_at = cvals[tuple(pidx.T)]
    else:
        cvals = candidate.sample(grid).values
        cand_at = candidate(coords)
    cand_ball = _kernels.ball_min(cvals, pidx, offsets[-1])

    limsup = M[:, -1, :].max(axis=0)
    liminf = M[:, -1, :].min(axis=0)
    with np.errstate(invalid="ignore"):
        rec_ok = limsup <= cand_at + tol
        low_ok = liminf >= cand_ball - tol

    witnesses = []
    for k in np.flatnonzero(~(rec_ok & low_ok)):
        parts = []
        if not rec_ok[k]:
            parts.append("no recovery sequence")
        if not low_ok[k]:
            parts.append("lower bound violated")
        note = "; ".join(parts)
        osc = _oscillation_note(M[:, -1, k])
        if osc:
            note += "; " + osc
        value = float(limsup[k]) if not rec_ok[k] else float(liminf[k])
        bound = float(cand_at[k]) if not rec_ok[k] else float(cand_ball[k])
        witnesses.append(Witness(tuple(coords[k].tolist()), value, bound, note))

    profile = []
    for b, r in enumerate(r_ladder):
        hi_b = M[:, b, :].max(axis=0)
        lo_b = M[:, b, :].min(axis=0)
        with np.errstate(invalid="ignore"):
            spread = np.where(np.isfinite(hi_b) & np.isfinite(lo_b), hi_b - lo_b, np.where(hi_b == lo_b, 0.0, INF))
        profile.append({"radius": r, "max_tail_spread": float(spread.max())})

    return ConvergenceReport(
        "pass" if not witnesses else "fail",
        witnesses,
        {"tol": tol, "r_ladder": r_ladder, "margin": margin},
        (idx[0], idx[-1]),
        details={"probes": int(len(pidx)), "failing_probes": len(witnesses), "ladder_profile": profile,
                 "note": "finite-tail surrogate; epi- and Mosco-convergence coincide in finite dimension"},
    )
