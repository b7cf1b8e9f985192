"""Hot loops, each in a numba flavour and a vectorised numpy flavour.

Both flavours evaluate the same floating-point expression in the same order,
so max/min reductions agree bit for bit. Public wrappers dispatch on
``_accel.USE_NUMBA`` at call time.
"""
import numpy as np

from . import _accel
from ._accel import njit

_CHUNK = 1 << 22  # elements per temporary block in the numpy path


def _rows_per_chunk(width):
    return max(1, _CHUNK // max(1, width))


# ---------------------------------------------------------------------------
# 1-D discrete conjugate, brute force

@njit
def _conj1d_nb(x, f, s):
    m = s.shape[0]
    out = np.full(m, -np.inf)
    arg = np.full(m, -1, dtype=np.int64)
    for j in range(m):
        best = -np.inf
        k = -1
        for i in range(x.shape[0]):
            if f[i] == np.inf:
                continue
            v = x[i] * s[j] - f[i]
            if v > best:
                best = v
                k = i
        out[j] = best
        arg[j] = k
    return out, arg


def _conj1d_np(x, f, s):
    fin = np.flatnonzero(np.isfinite(f))
    out = np.full(s.shape[0], -np.inf)
    arg = np.full(s.shape[0], -1, dtype=np.int64)
    if fin.size == 0:
        return out, arg
    xf, ff = x[fin], f[fin]
    step = _rows_per_chunk(fin.size)
    for a in range(0, s.shape[0], step):
        block = xf[None, :] * s[a:a + step, None] - ff[None, :]
        k = np.argmax(block, axis=1)  # first maximiser wins ties
        out[a:a + step] = block[np.arange(block.shape[0]), k]
        arg[a:a + step] = fin[k]
    return out, arg


def conj1d_brute(x, f, s):
    """Return ``(values, argmax)`` of ``max_i x_i*s_j - f_i`` for every ``s_j``.

    Entries of ``f`` equal to ``+inf`` are skipped; a slot with no finite
    candidate gets ``-inf`` and argmax ``-1``.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    f = np.ascontiguousarray(f, dtype=np.float64)
    s = np.ascontiguousarray(s, dtype=np.float64)
    if _accel.USE_NUMBA:
        return _conj1d_nb(x, f, s)
    return _conj1d_np(x, f, s)


# ---------------------------------------------------------------------------
# 1-D discrete conjugate, linear time (lower hull + monotone maximiser sweep)

@njit
def _lower_hull_nb(x, f):
    n = x.shape[0]
    hull = np.empty(n, dtype=np.int64)
    top = 0
    for i in range(n):
        if f[i] == np.inf:
            continue
        while top >= 2:
            a = hull[top - 2]
            b = hull[top - 1]
            cross = (x[b] - x[a]) * (f[i] - f[a]) - (f[b] - f[a]) * (x[i] - x[a])
            if cross <= 0.0:
                top -= 1
            else:
                break
        hull[top] = i
        top += 1
    return hull[:top]


def _lower_hull_py(x, f):
    hull = []
    for i in np.flatnonzero(np.isfinite(f)):
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            cross = (x[b] - x[a]) * (f[i] - f[a]) - (f[b] - f[a]) * (x[i] - x[a])
            if cross <= 0.0:
                hull.pop()
            else:
                break
        hull.append(i)
    return np.asarray(hull, dtype=np.int64)


@njit
def _conj1d_fast_nb(x, f, s):
    m = s.shape[0]
    out = np.full(m, -np.inf)
    arg = np.full(m, -1, dtype=np.int64)
    hull = _lower_hull_nb(x, f)
    nh = hull.shape[0]
    if nh == 0:
        return out, arg
    order = np.argsort(s, kind="mergesort")
    k = 0
    for t in range(m):
        j = order[t]
        while k < nh - 1:
            a = hull[k]
            b = hull[k + 1]
            if (f[b] - f[a]) / (x[b] - x[a]) < s[j]:
                k += 1
            else:
                break
        i = hull[k]
        out[j] = x[i] * s[j] - f[i]
        arg[j] = i
    return out, arg


def _conj1d_fast_np(x, f, s):
    out = np.full(s.shape[0], -np.inf)
    arg = np.full(s.shape[0], -1, dtype=np.int64)
    hull = _lower_hull_py(x, f)
    if hull.size == 0:
        return out, arg
    xh, fh = x[hull], f[hull]
    slopes = (fh[1:] - fh[:-1]) / (xh[1:] - xh[:-1])
    k = np.searchsorted(slopes, s, side="left")
    out[:] = xh[k] * s - fh[k]
    arg[:] = hull[k]
    return out, arg


def conj1d_fast(x, f, s):
    """Linear-time counterpart of :func:`conj1d_brute`.

    ``x`` must be strictly increasing. Exact for any input, convex or not,
    because the maximum of a linear functional over a finite set is attained
    on its lower convex hull.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    f = np.ascontiguousarray(f, dtype=np.float64)
    s = np.ascontiguousarray(s, dtype=np.float64)
    if _accel.USE_NUMBA:
        return _conj1d_fast_nb(x, f, s)
    return _conj1d_fast_np(x, f, s)


# ---------------------------------------------------------------------------
# conjugate over an arbitrary point cloud in R^D

@njit
def _conj_points_nb(P, f, S):
    n, dim = P.shape
    m = S.shape[0]
    out = np.full(m, -np.inf)
    for j in range(m):
        best = -np.inf
        for i in range(n):
            if f[i] == np.inf:
                continue
            acc = P[i, 0] * S[j, 0]
            for d in range(1, dim):
                acc = acc + P[i, d] * S[j, d]
            v = acc - f[i]
            if v > best:
                best = v
        out[j] = best
    return out


def _conj_points_np(P, f, S):
    fin = np.isfinite(f)
    P, f = P[fin], f[fin]
    out = np.full(S.shape[0], -np.inf)
    if f.size == 0:
        return out
    step = _rows_per_chunk(f.size)
    for a in range(0, S.shape[0], step):
        Sb = S[a:a + step]
        acc = P[None, :, 0] * Sb[:, None, 0]
        for d in range(1, P.shape[1]):
            acc = acc + P[None, :, d] * Sb[:, None, d]
        out[a:a + step] = (acc - f[None, :]).max(axis=1)
    return out


def conj_points(P, f, S):
    """``max_i <P_i, S_j> - f_i`` for every row ``S_j`` (brute force)."""
    P = np.ascontiguousarray(P, dtype=np.float64)
    f = np.ascontiguousarray(f, dtype=np.float64)
    S = np.ascontiguousarray(S, dtype=np.float64)
    if _accel.USE_NUMBA:
        return _conj_points_nb(P, f, S)
    return _conj_points_np(P, f, S)


# ---------------------------------------------------------------------------
# Fitzpatrick supremum over a sampled graph (d = 1)

@njit
def _fitz_nb(x, xs, ys, yss):
    out = np.empty((x.shape[0], xs.shape[0]))
    for i in range(x.shape[0]):
        for j in range(xs.shape[0]):
            best = -np.inf
            for k in range(ys.shape[0]):
                t = (ys[k] - x[i]) * (xs[j] - yss[k])
                if t > best:
                    best = t
            out[i, j] = best + x[i] * xs[j]
    return out


def _fitz_np(x, xs, ys, yss):
    out = np.empty((x.shape[0], xs.shape[0]))
    for i in range(x.shape[0]):
        t = (ys[None, :] - x[i]) * (xs[:, None] - yss[None, :])
        out[i] = t.max(axis=1) + x[i] * xs
    return out


def fitzpatrick_sup(x, xs, ys, yss):
    """Table of ``max_k (y_k - x_i)(xs_j - y*_k) + x_i xs_j``."""
    args = [np.ascontiguousarray(a, dtype=np.float64) for a in (x, xs, ys, yss)]
    if _accel.USE_NUMBA:
        return _fitz_nb(*args)
    return _fitz_np(*args)


# ---------------------------------------------------------------------------
# nearest-point distances and monotonicity products between clouds

@njit
def _min_dist_nb(P, Q):
    n = P.shape[0]
    out = np.empty(n)
    arg = np.empty(n, dtype=np.int64)
    for i in range(n):
        best = np.inf
        kb = -1
        for k in range(Q.shape[0]):
            acc = 0.0
            for d in range(P.shape[1]):
                diff = P[i, d] - Q[k, d]
                acc += diff * diff
            if acc < best:
                best = acc
                kb = k
        out[i] = np.sqrt(best)
        arg[i] = kb
    return out, arg


def _min_dist_np(P, Q):
    out = np.empty(P.shape[0])
    arg = np.empty(P.shape[0], dtype=np.int64)
    step = _rows_per_chunk(Q.shape[0] * P.shape[1])
    for a in range(0, P.shape[0], step):
        diff = P[a:a + step, None, :] - Q[None, :, :]
        sq = diff[..., 0] * diff[..., 0]
        for d in range(1, P.shape[1]):
            sq = sq + diff[..., d] * diff[..., d]
        k = np.argmin(sq, axis=1)
        out[a:a + step] = np.sqrt(sq[np.arange(sq.shape[0]), k])
        arg[a:a + step] = k
    return out, arg


def min_dist(P, Q):
    """Distance from every row of ``P`` to the nearest row of ``Q``, with index."""
    P = np.ascontiguousarray(P, dtype=np.float64)
    Q = np.ascontiguousarray(Q, dtype=np.float64)
    if _accel.USE_NUMBA:
        return _min_dist_nb(P, Q)
    return _min_dist_np(P, Q)


@njit
def _min_product_nb(P, Q, d):
    n = P.shape[0]
    out = np.empty(n)
    arg = np.empty(n, dtype=np.int64)
    for i in range(n):
        best = np.inf
        kb = -1
        for k in range(Q.shape[0]):
            acc = 0.0
            for c in range(d):
                acc += (P[i, c] - Q[k, c]) * (P[i, d + c] - Q[k, d + c])
            if acc < best:
                best = acc
                kb = k
        out[i] = best
        arg[i] = kb
    return out, arg


def _min_product_np(P, Q, d):
    out = np.empty(P.shape[0])
    arg = np.empty(P.shape[0], dtype=np.int64)
    step = _rows_per_chunk(Q.shape[0] * P.shape[1])
    for a in range(0, P.shape[0], step):
        diff = P[a:a + step, None, :] - Q[None, :, :]
        acc = np.zeros(diff.shape[:2])
        for c in range(d):
            acc = acc + diff[..., c] * diff[..., d + c]
        k = np.argmin(acc, axis=1)
        out[a:a + step] = acc[np.arange(acc.shape[0]), k]
        arg[a:a + step] = k
    return out, arg


def min_monotone_product(P, Q, d):
    """For each pair ``p`` in ``P``: ``min_q <p.x - q.x, p.x* - q.x*>`` over ``Q``.

    Rows are ``(x_1..x_d, x*_1..x*_d)``.
    """
    P = np.ascontiguousarray(P, dtype=np.float64)
    Q = np.ascontiguousarray(Q, dtype=np.float64)
    if _accel.USE_NUMBA:
        return _min_product_nb(P, Q, d)
    return _min_product_np(P, Q, d)


# ---------------------------------------------------------------------------
# minimum of gridded values over a stencil around each probe

@njit
def _ball_min_nb(values, shape, probes, offsets):
    nd = shape.shape[0]
    out = np.empty(probes.shape[0])
    for p in range(probes.shape[0]):
        best = np.inf
        for o in range(offsets.shape[0]):
            flat = 0
            inside = True
            for a in range(nd):
                c = probes[p, a] + offsets[o, a]
                if c < 0 or c >= shape[a]:
                    inside = False
                    break
                flat = flat * shape[a] + c
            if inside:
                v = values[flat]
                if v < best:
                    best = v
        out[p] = best
    return out


def _ball_min_np(values, shape, probes, offsets):
    idx = probes[:, None, :] + offsets[None, :, :]
    inside = np.all((idx >= 0) & (idx < shape[None, None, :]), axis=2)
    idx = np.clip(idx, 0, shape - 1)
    flat = np.ravel_multi_index(tuple(np.moveaxis(idx, 2, 0)), tuple(shape))
    vals = np.where(inside, values[flat], np.inf)
    return vals.min(axis=1)


def ball_min(values, probes, offsets):
    """Minimum of ``values`` (a gridded array) over ``probe + offset`` cells.

    Cells falling outside the grid count as ``+inf``.
    """
    values = np.asarray(values, dtype=np.float64)
    shape = np.asarray(values.shape, dtype=np.int64)
    flat = np.ascontiguousarray(values.ravel())
    probes = np.ascontiguousarray(probes, dtype=np.int64)
    offsets = np.ascontiguousarray(offsets, dtype=np.int64)
    if _accel.USE_NUMBA:
        return _ball_min_nb(flat, shape, probes, offsets)
    return _ball_min_np(flat, shape, probes, offsets)
