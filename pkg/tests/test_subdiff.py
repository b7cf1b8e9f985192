import numpy as np
import pytest

from monorep import (
    AbsShift,
    BiFn,
    Grid,
    IndicatorBox,
    Interval,
    Linear,
    LinearFn,
    OperatorGraph,
    Quadratic,
    Sum,
    extract_L,
    fitzpatrick_fn,
    hausdorff,
    is_monotone,
    separable_bifn,
    subdifferential,
    symmetrized_representative,
)
from monorep.subdiff import fenchel_young_gap, operator_of, sampled_subdifferential_graph

CATALOG = [Quadratic(1.0), Quadratic(2.0, 0.5), AbsShift(0.0), AbsShift(0.5), IndicatorBox(-1.0, 1.0),
           IndicatorBox(0.0, 1.0), LinearFn(0.5), Sum((Quadratic(1.0), LinearFn(-0.5))),
           Sum((Quadratic(1.0), AbsShift(0.0)))]


def _mesh(W):
    return np.meshgrid(*W.axes, indexing="ij")


def test_subdifferential_examples():
    d = subdifferential(Quadratic(1.0), 1.0)
    assert d.kind == "point" and d.lo == 1.0
    d = subdifferential(AbsShift(0.0), 0.0)
    assert (d.lo, d.hi) == (-1.0, 1.0)
    assert subdifferential(IndicatorBox(0.0, 1.0), 2.0).empty
    d = subdifferential(IndicatorBox(0.0, 1.0), 1.0)
    assert d.kind == "ray" and d.lo == 0.0


def test_subdifferential_two_dimensional():
    box = subdifferential(Quadratic(1.0, [0.0, 1.0]), [1.0, 2.0])
    assert [(i.lo, i.hi) for i in box] == [(1.0, 1.0), (3.0, 3.0)]


def test_fenchel_young_needs_conjugate():
    with pytest.raises(NotImplementedError):
        fenchel_young_gap(Sum((Quadratic(1.0), AbsShift(0.0))), [0.0], [0.0])


@pytest.mark.parametrize("g", [g for g in CATALOG if g.has_conjugate], ids=lambda g: type(g).__name__)
def test_fenchel_young_characterisation(g):
    x = np.linspace(-2, 2, 41)
    for s in np.linspace(-2, 2, 41):
        gap = fenchel_young_gap(g, x, np.full_like(x, s))
        member = np.array([subdifferential(g, xi).contains(s, 1e-12) for xi in x])
        assert np.array_equal(member, gap <= 1e-12)
        assert np.all(gap >= -1e-12)


@pytest.mark.parametrize("g", CATALOG, ids=lambda g: type(g).__name__)
def test_sampled_subdifferential_is_monotone(g, window):
    G = sampled_subdifferential_graph(g, window)
    assert len(G) > 0 and is_monotone(G).passed


def test_separable_quadratic(window):
    F = separable_bifn(Quadratic(1.0), window)
    X, S = _mesh(window)
    assert np.max(np.abs(F.values - 0.5 * X * X - 0.5 * S * S)) <= 1e-12
    L = extract_L(F, window.h ** 2 / 4)
    assert np.all(np.isclose(L.xs, L.xstars)) and len(L) == 161


def test_separable_abs(window):
    F = separable_bifn(AbsShift(0.0), window)
    X, S = _mesh(window)
    band = np.abs(S) <= 1
    assert np.max(np.abs(F.values[band] - np.abs(X[band]))) <= 1e-12
    assert np.all(np.isinf(F.values[~band]))
    L = extract_L(F, window.h ** 2)
    assert hausdorff(L, sampled_subdifferential_graph(AbsShift(0.0), window)) <= 2 * window.h


def test_separable_grid_fallback(window):
    g = Sum((Quadratic(1.0), AbsShift(0.0)))
    assert not g.has_conjugate
    F = separable_bifn(g, window)
    L = extract_L(F, window.h ** 2)
    inner = lambda G: OperatorGraph(G.points[np.all(np.abs(G.points) <= 3, axis=1)])
    assert hausdorff(inner(L), inner(sampled_subdifferential_graph(g, window))) <= 2 * window.h


def test_symmetrised_self_dual(window):
    X, S = _mesh(window)
    h = BiFn(window, 0.5 * X * X + 0.5 * S * S)
    g = symmetrized_representative(h)
    assert np.max(np.abs(g.values - h.values)) <= 1e-12
    L = extract_L(g, window.h ** 2 / 4)
    assert np.all(np.isclose(L.xs, L.xstars))


def test_symmetrised_fitzpatrick_of_identity(window):
    phi = fitzpatrick_fn(Linear(1.0), window)
    g = symmetrized_representative(phi)
    X, S = _mesh(window)
    diag = np.isclose(X, S) & window.interior_mask(1.0)
    # on the graph the two halves coincide; off it the swapped conjugate is larger
    assert np.max(np.abs(g.values[diag] - phi.values[diag])) <= window.h
    L = extract_L(g, window.h ** 2 / 4)
    inner = np.all(np.abs(L.points) <= 3, axis=1)
    assert np.all(np.isclose(L.xs[inner], L.xstars[inner]))
    assert inner.sum() == 121


@pytest.mark.parametrize("a,t", [(1.0, 0.75), (2.0, 0.5), (0.5, 0.9)])
def test_symmetrised_in_class_F_inside(a, t, window):
    X, S = _mesh(window)
    h = BiFn(window, 0.5 * t * a * X * X + (1 - t) * X * S + 0.5 * t * S * S / a)
    g = symmetrized_representative(h)
    inner = window.interior_mask(1.0)
    assert g.gap()[inner].min() >= -1e-9
    # its operator is the line x* = a x
    L = operator_of(h, window.h ** 2)
    pts = L.points[np.all(np.abs(L.points) <= 3, axis=1)]
    assert np.max(np.abs(pts[:, 1] - a * pts[:, 0])) <= 2 * window.h * (1 + a)


def test_operator_of_matches_gradient_condition():
    W = Grid.uniform(-2, 2, 81, dim=2)
    X, S = np.meshgrid(*W.axes, indexing="ij")
    L = operator_of(BiFn(W, 0.5 * X * X + 0.5 * S * S), W.h ** 2 / 4)
    assert np.all(np.isclose(L.xs, L.xstars))


def test_interval_sum_matches_subdifferential_sum():
    g = Sum((Quadratic(1.0), AbsShift(0.0)))
    d = subdifferential(g, 0.0)
    assert isinstance(d, Interval) and (d.lo, d.hi) == (-1.0, 1.0)
