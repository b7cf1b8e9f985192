"""Shared data model: grids, sampled functions, dual pairs, operator graphs,
closed-form operators and functions, and check reports.

``+inf`` (``numpy.inf``) is the only infinite value a function may take;
``-inf`` and ``nan`` are rejected at construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import _kernels

INF = np.inf

#: two graph points closer than this are the same point
RESOLUTION = 1e-12


def _vec(v) -> np.ndarray:
    a = np.atleast_1d(np.asarray(v, dtype=np.float64))
    if a.ndim != 1 or a.size not in (1, 2):
        raise ValueError(f"expected a vector of dimension 1 or 2, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("vector coordinates must be finite")
    return a


# ---------------------------------------------------------------------------
# points and grids

@dataclass(frozen=True, eq=False)
class DualPair:
    """A primal point ``x`` together with a dual point ``xstar``."""

    x: np.ndarray
    xstar: np.ndarray

    def __post_init__(self):
        x, xs = _vec(self.x), _vec(self.xstar)
        if x.shape != xs.shape:
            raise ValueError("primal and dual parts must have the same dimension")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "xstar", xs)

    @property
    def dim(self) -> int:
        return self.x.size

    @property
    def coupling(self) -> float:
        return coupling(self)

    def as_row(self) -> np.ndarray:
        return np.concatenate([self.x, self.xstar])

    @classmethod
    def from_row(cls, row) -> "DualPair":
        row = np.asarray(row, dtype=np.float64)
        d = row.size // 2
        return cls(row[:d], row[d:])


def coupling(p: DualPair) -> float:
    """Duality product ``<x, x*>``."""
    return float(np.dot(p.x, p.xstar))


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform tensor grid on the box ``[lo, hi]`` with ``n`` points per axis.

    Points are enumerated row-major (last axis fastest).
    """

    lo: np.ndarray
    hi: np.ndarray
    n: tuple

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lo, dtype=np.float64))
        hi = np.atleast_1d(np.asarray(self.hi, dtype=np.float64))
        n = tuple(int(k) for k in np.atleast_1d(self.n))
        if len(n) == 1 and lo.size > 1:
            n = n * lo.size
        if not (lo.shape == hi.shape and lo.size == len(n)):
            raise ValueError("lo, hi and n must have matching lengths")
        if lo.size > 4:
            raise ValueError("grids are limited to 4 axes")
        if not np.all(np.isfinite(lo)) or not np.all(np.isfinite(hi)):
            raise ValueError("grid bounds must be finite")
        if np.any(lo >= hi):
            raise ValueError("grid needs lo < hi on every axis")
        if any(k < 2 for k in n):
            raise ValueError("grid needs at least 2 points per axis")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "n", n)

    @classmethod
    def uniform(cls, lo, hi, n, dim=1) -> "Grid":
        return cls(np.full(dim, lo, dtype=float), np.full(dim, hi, dtype=float), (n,) * dim)

    @classmethod
    def product(cls, a: "Grid", b: "Grid") -> "Grid":
        return cls(np.concatenate([a.lo, b.lo]), np.concatenate([a.hi, b.hi]), a.n + b.n)

    @property
    def dim(self) -> int:
        return len(self.n)

    @property
    def shape(self) -> tuple:
        return self.n

    @property
    def size(self) -> int:
        return int(np.prod(self.n))

    @cached_property
    def step(self) -> np.ndarray:
        return (self.hi - self.lo) / (np.asarray(self.n) - 1)

    @property
    def h(self) -> float:
        """Coarsest axis step."""
        return float(self.step.max())

    @cached_property
    def axes(self) -> tuple:
        return tuple(np.linspace(l, u, k) for l, u, k in zip(self.lo, self.hi, self.n))

    def axis(self, k) -> Grid:
        return Grid(self.lo[k:k + 1], self.hi[k:k + 1], self.n[k:k + 1])

    def points(self) -> np.ndarray:
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    def swapped(self) -> "Grid":
        """Same grid with the axis order reversed (X x X* <-> X* x X)."""
        return Grid(self.lo[::-1], self.hi[::-1], self.n[::-1])

    def nearest_index(self, pts) -> np.ndarray:
        """Multi-index of the nearest grid node for each row of ``pts``.

        Ties (exact half steps) go to the smaller index.
        """
        pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
        t = (pts - self.lo) / self.step
        idx = np.ceil(t - 0.5).astype(np.int64)
        return np.clip(idx, 0, np.asarray(self.n) - 1)

    def interior_mask(self, margin: float) -> np.ndarray:
        """Boolean array of nodes at least ``margin`` inside every face."""
        masks = [(a >= l + margin - 1e-12) & (a <= u - margin + 1e-12)
                 for a, l, u in zip(self.axes, self.lo, self.hi)]
        out = masks[0]
        for m in masks[1:]:
            out = np.logical_and.outer(out, m)
        return out.reshape(self.shape)

    def ball_offsets(self, radius: float) -> np.ndarray:
        """Integer offsets of all nodes within ``radius`` (Euclidean) of a node."""
        reach = np.floor(radius / self.step + 1e-9).astype(int)
        rng = [np.arange(-r, r + 1) for r in reach]
        mesh = np.stack([m.ravel() for m in np.meshgrid(*rng, indexing="ij")], axis=1)
        dist2 = ((mesh * self.step) ** 2).sum(axis=1)
        return mesh[dist2 <= radius * radius * (1 + 1e-12)]

    def to_dict(self) -> dict:
        return {"lo": self.lo.tolist(), "hi": self.hi.tolist(), "n": list(self.n)}


# ---------------------------------------------------------------------------
# sampled extended-real functions

def _midpoint_convex(values: np.ndarray, rtol=1e-9) -> bool:
    """Discrete convexity audit along every axis and, in 2-D, both diagonals."""
    v = values
    scale = rtol * (1.0 + np.abs(v[np.isfinite(v)]).max())
    triples = []
    for ax in range(v.ndim):
        a = np.moveaxis(v, ax, 0)
        triples.append((a[:-2], a[1:-1], a[2:]))
    if v.ndim == 2:
        triples.append((v[:-2, :-2], v[1:-1, 1:-1], v[2:, 2:]))
        triples.append((v[:-2, 2:], v[1:-1, 1:-1], v[2:, :-2]))
    for a, m, b in triples:
        with np.errstate(invalid="ignore"):
            # an infinite midpoint between finite ends breaks convexity of the domain
            bad_dom = np.isinf(m) & np.isfinite(a) & np.isfinite(b)
            fin = np.isfinite(a) & np.isfinite(b) & np.isfinite(m)
            bad_val = fin & (a + b - 2.0 * m < -scale)
        if bad_dom.any() or bad_val.any():
            return False
    return True


@dataclass(frozen=True, eq=False)
class SampledFn:
    """Values of an extended-real function at the nodes of ``grid``."""

    grid: Grid
    values: np.ndarray
    midpoint_convex: bool = field(init=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64).reshape(self.grid.shape)
        if np.isnan(v).any():
            raise ValueError("function values contain nan")
        if np.isneginf(v).any():
            raise ValueError("-inf is not a valid function value")
        if not np.isfinite(v).any():
            raise ValueError("improper function: identically +inf on the grid")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "midpoint_convex", _midpoint_convex(v))

    @property
    def dim(self) -> int:
        return self.grid.dim

    def at(self, point) -> float:
        """Value at the grid node nearest to ``point``."""
        idx = self.grid.nearest_index(np.atleast_1d(point))[0]
        return float(self.values[tuple(idx)])

    def _like(self, values):
        return type(self)(self.grid, values)

    def __add__(self, other):
        if isinstance(other, SampledFn):
            if other.grid.shape != self.grid.shape or not (
                np.allclose(other.grid.lo, self.grid.lo) and np.allclose(other.grid.hi, self.grid.hi)
            ):
                raise ValueError("cannot add functions sampled on different grids")
            other = other.values
        return self._like(self.values + other)

    __radd__ = __add__

    def scale(self, c: float):
        if not c > 0:
            raise ValueError("scale factor must be positive")
        return self._like(self.values * c)

    @property
    def finite_mask(self) -> np.ndarray:
        return np.isfinite(self.values)


class BiFn(SampledFn):
    """A sampled function on X x X* (d = 1): axis 0 is ``x``, axis 1 is ``x*``."""

    def __post_init__(self):
        if self.grid.dim != 2:
            raise ValueError("BiFn needs a 2-axis grid (x, x*)")
        super().__post_init__()

    @property
    def x_axis(self) -> np.ndarray:
        return self.grid.axes[0]

    @property
    def xstar_axis(self) -> np.ndarray:
        return self.grid.axes[1]

    def coupling_table(self) -> np.ndarray:
        return np.multiply.outer(self.x_axis, self.xstar_axis)

    def gap(self) -> np.ndarray:
        """``F(x, x*) - <x, x*>`` at every node (``+inf`` off the domain)."""
        return self.values - self.coupling_table()


def point_indicator(grid: Grid, point) -> SampledFn:
    """Indicator of the single node nearest to ``point``."""
    v = np.full(grid.shape, INF)
    v[tuple(grid.nearest_index(np.atleast_1d(point))[0])] = 0.0
    cls = BiFn if grid.dim == 2 else SampledFn
    return cls(grid, v)


# ---------------------------------------------------------------------------
# operator graphs

@dataclass(frozen=True, eq=False)
class OperatorGraph:
    """Finite point cloud in X x X*, one row ``(x_1..x_d, x*_1..x*_d)`` per point."""

    points: np.ndarray
    dim: int = 1

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64).reshape(-1, 2 * self.dim)
        if not np.all(np.isfinite(pts)):
            raise ValueError("graph points must be finite")
        if len(pts):
            key = np.round(pts / RESOLUTION)
            _, first = np.unique(key, axis=0, return_index=True)
            pts = pts[np.sort(first)]
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_pairs(cls, pairs: Sequence[DualPair]) -> "OperatorGraph":
        pairs = list(pairs)
        dim = pairs[0].dim if pairs else 1
        return cls(np.array([p.as_row() for p in pairs]).reshape(-1, 2 * dim), dim)

    def __len__(self):
        return self.points.shape[0]

    @property
    def xs(self) -> np.ndarray:
        return self.points[:, : self.dim]

    @property
    def xstars(self) -> np.ndarray:
        return self.points[:, self.dim:]

    def pairs(self) -> list:
        return [DualPair.from_row(r) for r in self.points]


def dist_to_graph(p: DualPair, T: OperatorGraph) -> float:
    """Euclidean distance in R^{2d} from ``p`` to the nearest point of ``T``."""
    if len(T) == 0:
        raise ValueError("empty operator")
    d, _ = _kernels.min_dist(p.as_row()[None, :], T.points)
    return float(d[0])


def hausdorff(A, B) -> float:
    """Hausdorff distance between two finite clouds (rows are points)."""
    A = np.asarray(A.points if isinstance(A, OperatorGraph) else A, dtype=np.float64)
    B = np.asarray(B.points if isinstance(B, OperatorGraph) else B, dtype=np.float64)
    if len(A) == 0 and len(B) == 0:
        return 0.0
    if len(A) == 0 or len(B) == 0:
        return INF
    ab, _ = _kernels.min_dist(A, B)
    ba, _ = _kernels.min_dist(B, A)
    return float(max(ab.max(), ba.max()))


# ---------------------------------------------------------------------------
# closed-form operators (d = 1 graphs are unions of segments, rays and lines)

@dataclass(frozen=True)
class _Piece:
    """``{origin + t*direction : tmin <= t <= tmax}`` in the (x, x*) plane."""

    origin: tuple
    direction: tuple
    tmin: float = -INF
    tmax: float = INF

    def clip(self, box) -> tuple | None:
        """Parameter range inside ``box = (xlo, xhi, slo, shi)`` (Liang-Barsky)."""
        t0, t1 = self.tmin, self.tmax
        (ox, oy), (dx, dy) = self.origin, self.direction
        for o, d, lo, hi in ((ox, dx, box[0], box[1]), (oy, dy, box[2], box[3])):
            if d == 0.0:
                if o < lo - 1e-12 or o > hi + 1e-12:
                    return None
                continue
            a, b = (lo - o) / d, (hi - o) / d
            if a > b:
                a, b = b, a
            t0, t1 = max(t0, a), min(t1, b)
        if t0 > t1 + 1e-15:
            return None
        return t0, t1

    def sample(self, x_axis, s_axis):
        # single-valued stretches follow the primal axis and may leave the dual
        # window; vertical stretches are cut to the dual window
        if self.direction[0] != 0.0:
            box = (x_axis[0], x_axis[-1], -INF, INF)
        else:
            box = (x_axis[0], x_axis[-1], s_axis[0], s_axis[-1])
        rng = self.clip(box)
        if rng is None:
            return np.empty((0, 2))
        t0, t1 = rng
        (ox, oy), (dx, dy) = self.origin, self.direction
        if dx != 0.0:
            # parametrise by the primal coordinate at primal-axis resolution
            lo, hi = sorted((ox + t0 * dx, ox + t1 * dx))
            ax = x_axis[(x_axis >= lo - 1e-12) & (x_axis <= hi + 1e-12)]
            ts = (ax - ox) / dx
        else:
            lo, hi = sorted((oy + t0 * dy, oy + t1 * dy))
            ax = s_axis[(s_axis >= lo - 1e-12) & (s_axis <= hi + 1e-12)]
            ts = (ax - oy) / dy
        ts = np.concatenate([[t0], ts, [t1]])
        pts = np.stack([ox + ts * dx, oy + ts * dy], axis=1)
        if dx != 0.0:
            pts[1:-1, 0] = ax
        else:
            pts[1:-1, 1] = ax
        return pts

    def distance(self, P: np.ndarray) -> np.ndarray:
        o = np.asarray(self.origin)
        d = np.asarray(self.direction, dtype=float)
        t = ((P - o) @ d) / (d @ d)
        t = np.clip(t, self.tmin, self.tmax)
        return np.linalg.norm(P - (o + t[:, None] * d), axis=1)


class OperatorSpec:
    """Closed-form monotone operator X -> 2^{X*}."""

    dim = 1

    def pieces(self) -> list:
        raise NotImplementedError(f"{type(self).__name__} has no segment description in d={self.dim}")

    @property
    def convex_graph(self) -> bool:
        return False

    def sample(self, grid: Grid) -> OperatorGraph:
        """Graph points over the primal range of the (x, x*) window ``grid``.

        Single-valued stretches are sampled at the primal axis nodes (their
        dual values may fall outside the window) and vertical stretches at the
        dual axis nodes; finite endpoints are kept.
        """
        if self.dim != 1 or grid.dim != 2:
            raise ValueError("graph sampling is only available for d = 1 on an (x, x*) grid")
        xa, sa = grid.axes
        parts = [p.sample(xa, sa) for p in self.pieces()]
        return OperatorGraph(np.concatenate(parts) if parts else np.empty((0, 2)), 1)

    def distance(self, P) -> np.ndarray:
        """Exact distance from each row of ``P`` to the (unbounded) graph."""
        P = np.atleast_2d(np.asarray(P, dtype=np.float64))
        return np.min([pc.distance(P) for pc in self.pieces()], axis=0)

    def contains(self, p: DualPair, tol: float = 1e-12) -> bool:
        return bool(self.distance(p.as_row()[None, :])[0] <= tol)

    def to_dict(self) -> dict:
        out = {"kind": type(self).__name__}
        for k, v in vars(self).items():
            out[k] = np.asarray(v).tolist() if not isinstance(v, OperatorGraph) else v.points.tolist()
        return out


def _psd_symmetric_part(A: np.ndarray) -> bool:
    return bool(np.linalg.eigvalsh(0.5 * (A + A.T)).min() >= -1e-12)


@dataclass(frozen=True, eq=False)
class Linear(OperatorSpec):
    """``T(x) = A x + b`` with a positive-semidefinite symmetric part."""

    A: np.ndarray
    b: np.ndarray = 0.0

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=np.float64))
        b = np.broadcast_to(np.asarray(self.b, dtype=np.float64), (A.shape[0],)).copy()
        if A.shape[0] != A.shape[1] or A.shape[0] not in (1, 2):
            raise ValueError("A must be 1x1 or 2x2")
        if not _psd_symmetric_part(A):
            raise ValueError("Linear operator is not monotone: symmetric part of A is not PSD")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def dim(self):
        return self.A.shape[0]

    @property
    def convex_graph(self):
        return True

    def pieces(self):
        if self.dim != 1:
            return super().pieces()
        return [_Piece((0.0, float(self.b[0])), (1.0, float(self.A[0, 0])))]

    def contains(self, p, tol=1e-12):
        return bool(np.linalg.norm(self.A @ p.x + self.b - p.xstar) <= tol)


@dataclass(frozen=True, eq=False)
class SubdiffQuadratic(OperatorSpec):
    """Gradient of ``a/2 |x|^2 + <c, x>``, i.e. ``T(x) = a x + c``."""

    a: float
    c: object = 0.0

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("SubdiffQuadratic needs a > 0")
        c = np.atleast_1d(np.asarray(self.c, dtype=np.float64))
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "c", c)

    @property
    def dim(self):
        return self.c.size

    @property
    def convex_graph(self):
        return True

    def pieces(self):
        if self.dim != 1:
            return super().pieces()
        return [_Piece((0.0, float(self.c[0])), (1.0, self.a))]

    def contains(self, p, tol=1e-12):
        return bool(np.linalg.norm(self.a * p.x + self.c - p.xstar) <= tol)


@dataclass(frozen=True)
class SubdiffAbs(OperatorSpec):
    """Subdifferential of ``|x - shift|`` (shifted sign graph), d = 1."""

    shift: float = 0.0

    def pieces(self):
        s = float(self.shift)
        return [
            _Piece((s, -1.0), (-1.0, 0.0), 0.0, INF),
            _Piece((s, -1.0), (0.0, 1.0), 0.0, 2.0),
            _Piece((s, 1.0), (1.0, 0.0), 0.0, INF),
        ]


@dataclass(frozen=True, eq=False)
class NormalConeBox(OperatorSpec):
    """Normal cone of the box ``[lo, hi]``; ``lo == hi`` gives a vertical line."""

    lo: object
    hi: object

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lo, dtype=np.float64))
        hi = np.atleast_1d(np.asarray(self.hi, dtype=np.float64))
        if lo.shape != hi.shape or lo.size not in (1, 2) or np.any(lo > hi):
            raise ValueError("NormalConeBox needs lo <= hi of matching dimension 1 or 2")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self):
        return self.lo.size

    @property
    def convex_graph(self):
        return bool(np.all(self.lo == self.hi))

    def pieces(self):
        if self.dim != 1:
            return super().pieces()
        lo, hi = float(self.lo[0]), float(self.hi[0])
        if lo == hi:
            return [_Piece((lo, 0.0), (0.0, 1.0))]
        return [
            _Piece((lo, 0.0), (0.0, -1.0), 0.0, INF),
            _Piece((lo, 0.0), (1.0, 0.0), 0.0, hi - lo),
            _Piece((hi, 0.0), (0.0, 1.0), 0.0, INF),
        ]

    def contains(self, p, tol=1e-12):
        x, s = p.x, p.xstar
        if np.any(x < self.lo - tol) or np.any(x > self.hi + tol):
            return False
        at_lo = np.abs(x - self.lo) <= tol
        at_hi = np.abs(x - self.hi) <= tol
        ok = np.where(at_lo & at_hi, True,
                      np.where(at_lo, s <= tol, np.where(at_hi, s >= -tol, np.abs(s) <= tol)))
        return bool(np.all(ok))


@dataclass(frozen=True)
class VerticalLine(OperatorSpec):
    """``{c} x R`` (d = 1)."""

    c: float = 0.0

    @property
    def convex_graph(self):
        return True

    def pieces(self):
        return [_Piece((float(self.c), 0.0), (0.0, 1.0))]


@dataclass(frozen=True)
class HorizontalLine(OperatorSpec):
    """``R x {c}`` (d = 1)."""

    c: float = 0.0

    @property
    def convex_graph(self):
        return True

    def pieces(self):
        return [_Piece((0.0, float(self.c)), (1.0, 0.0))]


def audit_convex_cloud(graph: OperatorGraph, tol: float, max_points: int = 64) -> tuple:
    """Midpoint audit of a point cloud: every pairwise midpoint (over an evenly
    strided subset of at most ``max_points`` points) must lie within ``tol`` of
    the cloud. Returns ``(ok, worst_midpoint, its_distance)``.
    """
    pts = graph.points
    if len(pts) <= 1:
        return True, None, 0.0
    sub = pts[np.unique(np.linspace(0, len(pts) - 1, min(max_points, len(pts))).astype(int))]
    i, j = np.triu_indices(len(sub), k=1)
    mids = 0.5 * (sub[i] + sub[j])
    d, _ = _kernels.min_dist(mids, pts)
    k = int(np.argmax(d))
    return bool(d[k] <= tol), mids[k], float(d[k])


@dataclass(frozen=True, eq=False)
class FiniteGraph(OperatorSpec):
    """An operator given directly by a finite point cloud."""

    graph: OperatorGraph

    @property
    def dim(self):
        return self.graph.dim

    @property
    def convex_graph(self):
        return audit_convex_cloud(self.graph, tol=_cloud_spacing(self.graph))[0]

    def sample(self, grid):
        return self.graph

    def distance(self, P):
        P = np.atleast_2d(np.asarray(P, dtype=np.float64))
        if len(self.graph) == 0:
            raise ValueError("empty operator")
        d, _ = _kernels.min_dist(P, self.graph.points)
        return d

    def to_dict(self):
        return {"kind": "FiniteGraph", "points": self.graph.points.tolist()}


def _cloud_spacing(graph: OperatorGraph) -> float:
    """Largest nearest-neighbour gap in the cloud (0 for a single point)."""
    pts = graph.points
    if len(pts) < 2:
        return 0.0
    step = max(1, len(pts) // 256)
    probe = pts[::step]
    d = np.empty(len(probe))
    for k, p in enumerate(probe):
        dd = np.linalg.norm(pts - p, axis=1)
        dd[dd == 0] = INF
        d[k] = dd.min()
    return float(d.max())


# ---------------------------------------------------------------------------
# closed-form convex functions

@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` with possibly infinite ends; empty if lo > hi."""

    lo: float
    hi: float

    @property
    def empty(self) -> bool:
        return self.lo > self.hi

    @property
    def kind(self) -> str:
        if self.empty:
            return "empty"
        if self.lo == self.hi:
            return "point"
        if math.isinf(self.lo) and math.isinf(self.hi):
            return "line"
        if math.isinf(self.lo) or math.isinf(self.hi):
            return "ray"
        return "interval"

    def contains(self, v: float, tol: float = 0.0) -> bool:
        return (not self.empty) and self.lo - tol <= v <= self.hi + tol

    def __add__(self, other: "Interval") -> "Interval":
        if self.empty or other.empty:
            return EMPTY
        return Interval(self.lo + other.lo, self.hi + other.hi)


EMPTY = Interval(INF, -INF)


class FnSpec:
    """Closed-form proper lsc convex function on R^d."""

    dim = 1
    has_conjugate = True

    def __call__(self, x) -> np.ndarray:
        raise NotImplementedError

    def conj(self, s) -> np.ndarray:
        raise NotImplementedError(f"{type(self).__name__} has no closed-form conjugate")

    def subgradients(self, x) -> tuple:
        """Per-axis intervals whose product is the subdifferential at ``x``."""
        raise NotImplementedError

    def operator(self) -> OperatorSpec | None:
        """The subdifferential as a closed-form operator, when one exists."""
        return None

    def sample(self, grid: Grid) -> SampledFn:
        return SampledFn(grid, self(grid.points()).reshape(grid.shape))

    def to_dict(self) -> dict:
        out = {"kind": type(self).__name__}
        for k, v in vars(self).items():
            out[k] = [t.to_dict() for t in v] if k == "terms" else np.asarray(v).tolist()
        return out


def _points(x, dim):
    x = np.asarray(x, dtype=np.float64)
    if dim == 1 and x.ndim <= 1:
        return x.reshape(-1, 1)
    return x.reshape(-1, dim)


@dataclass(frozen=True, eq=False)
class Quadratic(FnSpec):
    """``a/2 |x|^2 + <c, x>`` with ``a > 0``."""

    a: float
    c: object = 0.0

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("Quadratic needs a > 0")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "c", np.atleast_1d(np.asarray(self.c, dtype=np.float64)))

    @property
    def dim(self):
        return self.c.size

    def __call__(self, x):
        X = _points(x, self.dim)
        return 0.5 * self.a * (X * X).sum(axis=1) + X @ self.c

    def conj(self, s):
        S = _points(s, self.dim) - self.c
        return (S * S).sum(axis=1) / (2.0 * self.a)

    def subgradients(self, x):
        g = self.a * np.atleast_1d(np.asarray(x, dtype=float)) + self.c
        return tuple(Interval(v, v) for v in g)

    def operator(self):
        return SubdiffQuadratic(self.a, self.c)


@dataclass(frozen=True)
class AbsShift(FnSpec):
    """``|x - s|`` on R."""

    s: float = 0.0

    def __call__(self, x):
        return np.abs(_points(x, 1)[:, 0] - self.s)

    def conj(self, t):
        t = _points(t, 1)[:, 0]
        return np.where(np.abs(t) <= 1.0, self.s * t, INF)

    def subgradients(self, x):
        x = float(np.atleast_1d(x)[0])
        if x > self.s:
            return (Interval(1.0, 1.0),)
        if x < self.s:
            return (Interval(-1.0, -1.0),)
        return (Interval(-1.0, 1.0),)

    def operator(self):
        return SubdiffAbs(self.s)


@dataclass(frozen=True, eq=False)
class IndicatorBox(FnSpec):
    """Indicator of ``[lo, hi]`` (componentwise)."""

    lo: object
    hi: object

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lo, dtype=np.float64))
        hi = np.atleast_1d(np.asarray(self.hi, dtype=np.float64))
        if lo.shape != hi.shape or np.any(lo > hi):
            raise ValueError("IndicatorBox needs lo <= hi")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self):
        return self.lo.size

    def __call__(self, x):
        X = _points(x, self.dim)
        inside = np.all((X >= self.lo) & (X <= self.hi), axis=1)
        return np.where(inside, 0.0, INF)

    def conj(self, s):
        S = _points(s, self.dim)
        return np.where(S > 0, S * self.hi, S * self.lo).sum(axis=1)

    def subgradients(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(x < self.lo) or np.any(x > self.hi):
            return tuple(EMPTY for _ in x)
        out = []
        for xi, l, u in zip(x, self.lo, self.hi):
            lo = -INF if xi == l else 0.0
            hi = INF if xi == u else 0.0
            out.append(Interval(lo, hi))
        return tuple(out)

    def operator(self):
        return NormalConeBox(self.lo, self.hi)


@dataclass(frozen=True)
class LinearFn(FnSpec):
    """``slope * x`` on R; its conjugate is the indicator of ``{slope}``."""

    slope: float = 0.0

    def __call__(self, x):
        return self.slope * _points(x, 1)[:, 0]

    def conj(self, s):
        s = _points(s, 1)[:, 0]
        return np.where(np.abs(s - self.slope) <= RESOLUTION, 0.0, INF)

    def subgradients(self, x):
        return (Interval(self.slope, self.slope),)

    def operator(self):
        return Linear(np.zeros((1, 1)), self.slope)


@dataclass(frozen=True, eq=False)
class Sum(FnSpec):
    """Pointwise sum of closed-form functions."""

    terms: tuple

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise ValueError("Sum needs at least one term")
        if len({t.dim for t in terms}) != 1:
            raise ValueError("Sum terms must share a dimension")
        object.__setattr__(self, "terms", terms)

    @property
    def dim(self):
        return self.terms[0].dim

    @property
    def has_conjugate(self):
        return len(self.terms) == 1 or self._merged() is not None

    def _merged(self):
        # quadratics and linear terms combine into a single quadratic
        a, c = 0.0, np.zeros(self.dim)
        for t in self.terms:
            if isinstance(t, Quadratic):
                a += t.a
                c = c + t.c
            elif isinstance(t, LinearFn):
                c = c + t.slope
            else:
                return None
        return Quadratic(a, c) if a > 0 else None

    def __call__(self, x):
        out = self.terms[0](x)
        for t in self.terms[1:]:
            out = out + t(x)
        return out

    def conj(self, s):
        if len(self.terms) == 1:
            return self.terms[0].conj(s)
        q = self._merged()
        if q is None:
            return super().conj(s)
        return q.conj(s)

    def subgradients(self, x):
        parts = [t.subgradients(x) for t in self.terms]
        out = parts[0]
        for p in parts[1:]:
            out = tuple(a + b for a, b in zip(out, p))
        return out

    def operator(self):
        if len(self.terms) == 1:
            return self.terms[0].operator()
        q = self._merged()
        return None if q is None else q.operator()


@dataclass(frozen=True, eq=False)
class Conjugate(FnSpec):
    """The conjugate of a closed-form function, as a function in its own right."""

    of: FnSpec

    def __post_init__(self):
        if not self.of.has_conjugate:
            raise ValueError(f"{type(self.of).__name__} has no closed-form conjugate")

    @property
    def dim(self):
        return self.of.dim

    def __call__(self, s):
        return self.of.conj(s)

    def conj(self, x):
        return self.of(x)

    def subgradients(self, s):
        raise NotImplementedError("subgradients of a conjugate are not tabulated")

    def to_dict(self):
        return {"kind": "Conjugate", "of": self.of.to_dict()}


# ---------------------------------------------------------------------------
# reports

VERDICTS = ("pass", "fail", "inconclusive")


@dataclass
class Witness:
    point: tuple
    value: float
    bound: float
    note: str = ""

    def to_dict(self):
        return {"point": list(self.point), "value": self.value, "bound": self.bound, "note": self.note}


@dataclass
class ConvergenceReport:
    """Verdict of a numeric check plus the evidence behind it."""

    verdict: str
    witnesses: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    tail: tuple | None = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"verdict must be one of {VERDICTS}")
        if self.verdict == "fail" and not self.witnesses:
            raise ValueError("a failing report needs at least one witness")

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "tolerances": dict(self.tolerances),
            "tail": None if self.tail is None else list(self.tail),
            "details": self.details,
        }
