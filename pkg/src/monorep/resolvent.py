"""Resolvents ``x* in J(z - x) + T(z)`` with the Euclidean duality map.

With ``J`` the identity the inclusion reads ``z = (I + T)^{-1}(x + x*)``.
"""
import numpy as np

from .core import (
    AbsShift,
    DualPair,
    FiniteGraph,
    FnSpec,
    Grid,
    HorizontalLine,
    IndicatorBox,
    Linear,
    LinearFn,
    NormalConeBox,
    OperatorSpec,
    Quadratic,
    SubdiffAbs,
    SubdiffQuadratic,
    Sum,
    VerticalLine,
)


def duality_map(x) -> np.ndarray:
    """Duality map of the Euclidean norm: ``J x = x``."""
    return np.array(np.atleast_1d(x), dtype=np.float64)


def _soft(w, level):
    return np.sign(w) * np.maximum(np.abs(w) - level, 0.0)


def resolve_rows(T: OperatorSpec, X, XS) -> np.ndarray:
    """Vectorised :func:`resolve`: one probe per row of ``X`` / ``XS`` (shape ``(k, d)``)."""
    if not isinstance(T, OperatorSpec):
        raise TypeError(f"expected an OperatorSpec, got {type(T).__name__}")
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    XS = np.atleast_2d(np.asarray(XS, dtype=np.float64))
    if X.shape != XS.shape or X.shape[1] != T.dim:
        raise ValueError("probe and operator dimensions differ")
    W = X + XS
    match T:
        case Linear(A=A, b=b):
            return np.linalg.solve(np.eye(A.shape[0]) + A, (W - b).T).T
        case SubdiffQuadratic(a=a, c=c):
            return (W - c) / (1.0 + a)
        case SubdiffAbs(shift=s):
            return s + _soft(W - s, 1.0)
        case NormalConeBox(lo=lo, hi=hi):
            return np.clip(W, lo, hi)
        case VerticalLine(c=c):
            return np.full_like(W, float(c))
        case HorizontalLine(c=c):
            return W - c
        case FiniteGraph():
            raise ValueError("resolvent requires closed-form or oracle path")
    raise TypeError(f"no closed-form resolvent for {type(T).__name__}")


def resolve(T: OperatorSpec, probe: DualPair) -> np.ndarray:
    """Unique ``z`` with ``probe.xstar in (z - probe.x) + T(z)``."""
    return resolve_rows(T, probe.x[None, :], probe.xstar[None, :])[0]


def _is_subdifferential_spec(g) -> bool:
    if isinstance(g, Sum):
        return all(_is_subdifferential_spec(t) for t in g.terms)
    return isinstance(g, (Quadratic, AbsShift, IndicatorBox, LinearFn))


def resolve_oracle(g: FnSpec, probe: DualPair, grid: Grid) -> np.ndarray:
    """Grid minimiser of ``|z - (x + x*)|^2 / 2 + g(z)``; solves the resolvent
    inclusion for ``T = subdifferential of g`` up to one grid step.

    Ties go to the first node in row-major order.
    """
    if not isinstance(g, FnSpec) or not _is_subdifferential_spec(g):
        raise TypeError("resolve_oracle needs T given as the subdifferential of a FnSpec")
    if grid.dim != probe.dim or g.dim != probe.dim:
        raise ValueError("grid, function and probe dimensions differ")
    Z = grid.points()
    w = probe.x + probe.xstar
    obj = 0.5 * ((Z - w) ** 2).sum(axis=1) + g(Z)
    if not np.isfinite(obj).any():
        raise ValueError("function is +inf on the whole grid")
    return Z[int(np.argmin(obj))].copy()
