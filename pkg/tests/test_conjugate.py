import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from monorep import (
    INF,
    AbsShift,
    BiFn,
    Grid,
    Quadratic,
    SampledFn,
    argmax_1d,
    conjugate,
    point_indicator,
    swap_conjugate,
)
from monorep.conjugate import conjugate_values


def _window_conj_abs(s, R=4.0):
    """sup over |x| <= R of xs - |x|."""
    return np.maximum(0.0, R * (np.abs(s) - 1.0))


def _window_conj_pos(s, R=4.0):
    """sup over |x| <= R of xs - max(x, 0)."""
    return np.maximum.reduce([np.zeros_like(s), R * (s - 1.0), -R * s])


TEST_FUNCTIONS = {
    "half-square": (lambda x: 0.5 * x * x, lambda s: np.where(np.abs(s) <= 4, 0.5 * s * s, np.nan)),
    "abs": (np.abs, _window_conj_abs),
    "box01": (lambda x: np.where((x >= 0) & (x <= 1), 0.0, INF), lambda s: np.maximum(s, 0.0)),
    "positive-part": (lambda x: np.maximum(x, 0.0), _window_conj_pos),
}


@pytest.mark.parametrize("name", TEST_FUNCTIONS)
def test_fast_matches_brute(name, line, backend):
    f, _ = TEST_FUNCTIONS[name]
    fs = SampledFn(line, f(line.axes[0]))
    brute = conjugate_values(fs, line, "brute")
    fast = conjugate_values(fs, line, "fast")
    assert np.max(np.abs(brute - fast)) <= 1e-12


@pytest.mark.parametrize("name", TEST_FUNCTIONS)
def test_brute_matches_closed_form_inside(name, line):
    f, fstar = TEST_FUNCTIONS[name]
    s = line.axes[0]
    vals = conjugate(SampledFn(line, f(s)), line).values
    inner = line.interior_mask(1.0)
    exact = fstar(s)
    assert np.nanmax(np.abs(vals - exact)[inner]) <= line.h ** 2


def test_half_square_example(line):
    # h = 0.01, |s| <= 3
    s = line.axes[0]
    vals = conjugate(Quadratic(1.0).sample(line), line).values
    m = np.abs(s) <= 3
    assert np.max(np.abs(vals[m] - 0.5 * s[m] ** 2)) <= 1e-4


def test_abs_example_on_whole_window(line):
    s = line.axes[0]
    vals = conjugate(AbsShift(0.0).sample(line), line).values
    assert np.max(np.abs(vals - _window_conj_abs(s))) <= 1e-12


def test_point_indicator_conjugate_is_zero(line):
    f = point_indicator(line, 0.0)
    assert np.all(conjugate(f, line).values == 0.0)


def test_improper_rejected(line):
    with pytest.raises(ValueError):
        SampledFn(line, np.full(line.shape, INF))


def test_unknown_method(line):
    with pytest.raises(ValueError, match="unknown"):
        conjugate(Quadratic(1.0).sample(line), line, method="magic")


def test_argmax_ties_go_low():
    g = Grid.uniform(-1, 1, 3)
    f = SampledFn(g, np.zeros(3))
    # s = 0: every node attains 0
    assert argmax_1d(f, 0.0)[0] == 0
    assert argmax_1d(f, 1.0)[0] == 2


# --- properties ------------------------------------------------------------------------

small = Grid.uniform(-2, 2, 41)
vals = arrays(np.float64, 41, elements=st.floats(-5, 5, allow_nan=False))


@settings(max_examples=40, deadline=None)
@given(vals, st.lists(st.integers(0, 40), max_size=10))
def test_fast_equals_brute_on_random(v, holes):
    v = v.copy()
    v[holes] = INF
    if not np.isfinite(v).any():
        v[0] = 0.0
    f = SampledFn(small, v)
    a = conjugate_values(f, small, "brute")
    b = conjugate_values(f, small, "fast")
    assert np.max(np.abs(a - b)) <= 1e-12


@settings(max_examples=40, deadline=None)
@given(vals, arrays(np.float64, 41, elements=st.floats(0, 3, allow_nan=False)))
def test_order_reversal(v, bump):
    f = SampledFn(small, v)
    g = SampledFn(small, v + bump)
    assert np.all(conjugate(f, small).values >= conjugate(g, small).values)


@settings(max_examples=40, deadline=None)
@given(vals)
def test_fenchel_young_inequality(v):
    f = SampledFn(small, v)
    fs = conjugate(f, small).values
    x = small.axes[0]
    # exact up to rounding of (xs - f) + f
    assert np.all(v[:, None] + fs[None, :] >= np.multiply.outer(x, x) - 1e-12)


@settings(max_examples=40, deadline=None)
@given(vals)
def test_biconjugate_below(v):
    f = SampledFn(small, v)
    ff = conjugate(conjugate(f, small), small).values
    assert np.all(ff <= v + 1e-12)


def test_biconjugate_recovers_convex(line):
    # the dual window must hold every slope f' takes on the primal window
    dual = Grid.uniform(-10, 10, 2001)
    for g in (Quadratic(1.0), AbsShift(0.5), Quadratic(2.0, 0.3)):
        f = g.sample(line)
        ff = conjugate(conjugate(f, dual), line).values
        inner = line.interior_mask(1.0)
        assert np.max(np.abs(ff - f.values)[inner]) <= 2 * line.h ** 2


# --- product spaces ---------------------------------------------------------------------

def _bifn(window, fn):
    X, S = np.meshgrid(*window.axes, indexing="ij")
    return BiFn(window, fn(X, S))


@pytest.mark.parametrize("method", ["brute", "fast", "nested"])
def test_swap_conjugate_of_point_indicator(window, method):
    G = swap_conjugate(point_indicator(window, (0.0, 0.0)), method=method)
    assert np.all(G.values == 0.0)


def test_swap_conjugate_self_dual(window):
    F = _bifn(window, lambda x, s: 0.5 * x * x + 0.5 * s * s)
    G = swap_conjugate(F)
    assert np.max(np.abs(G.values - F.values)) <= 1e-12


def test_swap_conjugate_reads_arguments_swapped():
    # F(x, x*) = x^2/2 + (x* - 1)^2/2 -> F*(y*, y) = y*^2/2 + y^2/2 + y
    W = Grid.uniform(-6, 6, 241, dim=2)
    F = _bifn(W, lambda x, s: 0.5 * x * x + 0.5 * (s - 1) ** 2)
    G = swap_conjugate(F)
    X, S = np.meshgrid(*W.axes, indexing="ij")
    exact = 0.5 * S * S + 0.5 * X * X + X
    inner = W.interior_mask(2.0)
    assert np.max(np.abs(G.values - exact)[inner]) <= 1e-12


def test_swap_conjugate_of_identity_representative(window):
    # F = (x + x*)^2/4: the swapped conjugate equals x^2 on the diagonal and
    # grows off it (it is x^2 + indicator of the diagonal on all of R^2)
    F = _bifn(window, lambda x, s: 0.25 * (x + s) ** 2)
    G = swap_conjugate(F)
    X, S = np.meshgrid(*window.axes, indexing="ij")
    inner = window.interior_mask(1.0)
    diag = np.isclose(X, S)
    assert np.max(np.abs(G.values - X * X)[inner & diag]) <= window.h ** 2
    assert np.all(G.values[inner] >= F.values[inner] - 1e-9)
    off = inner & (np.abs(X - S) >= 1.0)
    assert np.all(G.values[off] - F.values[off] >= 1.0)


@pytest.mark.parametrize("method", ["fast", "nested"])
def test_product_methods_agree(method, small_window):
    rng = np.random.default_rng(3)
    F = BiFn(small_window, rng.random(small_window.shape) * 4)
    a = swap_conjugate(F, method="brute").values
    b = swap_conjugate(F, method=method).values
    assert np.max(np.abs(a - b)) <= 1e-12
