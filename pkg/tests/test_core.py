import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monorep import (
    INF,
    AbsShift,
    BiFn,
    ConvergenceReport,
    DualPair,
    FiniteGraph,
    Grid,
    HorizontalLine,
    IndicatorBox,
    Interval,
    Linear,
    LinearFn,
    NormalConeBox,
    OperatorGraph,
    Quadratic,
    SampledFn,
    SubdiffAbs,
    SubdiffQuadratic,
    Sum,
    VerticalLine,
    Witness,
    coupling,
    dist_to_graph,
    hausdorff,
    point_indicator,
)

finite = st.floats(-50, 50, allow_nan=False)


# --- DualPair / coupling -----------------------------------------------------

def test_coupling_scalar():
    assert coupling(DualPair(1.0, 1.0)) == 1.0


def test_coupling_vector():
    assert coupling(DualPair([1, 2], [3, 4])) == 11.0


@given(finite, finite, st.floats(-10, 10, allow_nan=False))
def test_coupling_is_bilinear(x, s, a):
    p, q = DualPair(x, s), DualPair(a * x, a * s)
    assert coupling(q) == pytest.approx(a * a * coupling(p), rel=1e-12, abs=1e-9)


def test_dualpair_rejects_bad_input():
    with pytest.raises(ValueError):
        DualPair([1, 2], [1])
    with pytest.raises(ValueError):
        DualPair(np.inf, 0.0)
    with pytest.raises(ValueError):
        DualPair([1, 2, 3], [1, 2, 3])


def test_dualpair_row_roundtrip():
    p = DualPair([1, 2], [3, 4])
    q = DualPair.from_row(p.as_row())
    assert np.array_equal(q.x, p.x) and np.array_equal(q.xstar, p.xstar)


# --- Grid ----------------------------------------------------------------------

def test_grid_step_and_enumeration():
    g = Grid.uniform(-1, 1, 3, dim=2)
    assert g.h == 1.0
    pts = g.points()
    assert pts.shape == (9, 2)
    # row-major: last axis fastest
    assert np.array_equal(pts[:3], [[-1, -1], [-1, 0], [-1, 1]])


@pytest.mark.parametrize("lo,hi,n", [(1, 1, 5), (2, 1, 5), (0, 1, 1), (0, np.inf, 5)])
def test_grid_rejects_degenerate(lo, hi, n):
    with pytest.raises(ValueError):
        Grid.uniform(lo, hi, n)


def test_nearest_index_ties_go_low():
    g = Grid.uniform(0, 1, 3)
    assert g.nearest_index([[0.25]])[0, 0] == 0
    assert g.nearest_index([[0.26]])[0, 0] == 1
    assert g.nearest_index([[7.0]])[0, 0] == 2


def test_interior_mask_margin(line):
    m = line.interior_mask(1.0)
    ax = line.axes[0]
    assert ax[m].min() == pytest.approx(-3) and ax[m].max() == pytest.approx(3)


def test_ball_offsets_radius():
    g = Grid.uniform(0, 1, 11, dim=2)
    off = g.ball_offsets(0.1)
    assert len(off) == 5
    assert len(g.ball_offsets(0.2)) == 13


def test_swapped_grid_reverses_axes():
    g = Grid([0, -1], [1, 2], (3, 5))
    s = g.swapped()
    assert s.shape == (5, 3) and np.array_equal(s.lo, [-1, 0])


# --- SampledFn -------------------------------------------------------------------

def test_sampled_rejects_improper(line):
    with pytest.raises(ValueError, match="improper"):
        SampledFn(line, np.full(line.shape, INF))
    with pytest.raises(ValueError):
        SampledFn(line, np.full(line.shape, -INF))
    with pytest.raises(ValueError):
        SampledFn(line, np.full(line.shape, np.nan))


def test_midpoint_convex_flag(line):
    x = line.axes[0]
    assert SampledFn(line, x * x).midpoint_convex
    assert not SampledFn(line, np.sin(x)).midpoint_convex
    # a hole in the domain breaks convexity
    v = np.abs(x)
    v[400] = INF
    assert not SampledFn(line, v).midpoint_convex


def test_sum_propagates_inf(line):
    f = IndicatorBox(0, 1).sample(line)
    g = Quadratic(1.0).sample(line)
    s = f + g
    assert np.array_equal(np.isinf(s.values), np.isinf(f.values))


def test_bifn_needs_two_axes(line):
    with pytest.raises(ValueError):
        BiFn(line, np.zeros(line.shape))


def test_point_indicator(window):
    F = point_indicator(window, (0.0, 0.0))
    assert F.finite_mask.sum() == 1 and F.at((0.0, 0.0)) == 0.0


# --- graphs and distances ----------------------------------------------------------

def test_graph_deduplicates_within_resolution():
    g = OperatorGraph([[0, 0], [0, 1e-14], [1, 1]])
    assert len(g) == 2


def test_dist_to_graph_examples():
    T = OperatorGraph([[0, 0]])
    assert dist_to_graph(DualPair(0, 0), T) == 0.0
    assert dist_to_graph(DualPair(1, 0), T) == 1.0
    T2 = OperatorGraph([[0, 0], [2, 2]])
    assert dist_to_graph(DualPair(1, 1), T2) == pytest.approx(np.sqrt(2))


def test_dist_to_empty_graph():
    with pytest.raises(ValueError, match="empty operator"):
        dist_to_graph(DualPair(0, 0), OperatorGraph(np.empty((0, 2))))


@settings(max_examples=30)
@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=20), finite, finite)
def test_dist_zero_iff_member(pts, x, s):
    T = OperatorGraph(pts)
    assert dist_to_graph(DualPair(*pts[0]), T) == 0.0
    d = dist_to_graph(DualPair(x, s), T)
    brute = min(np.hypot(x - a, s - b) for a, b in pts)
    assert d == pytest.approx(brute, abs=1e-12)
    assert (d <= 1e-12) == any(np.hypot(x - a, s - b) <= 1e-12 for a, b in pts)


def test_hausdorff_basic():
    A = OperatorGraph([[0, 0], [1, 0]])
    B = OperatorGraph([[0, 0]])
    assert hausdorff(A, B) == 1.0
    assert hausdorff(A, A) == 0.0
    assert hausdorff(OperatorGraph(np.empty((0, 2))), OperatorGraph(np.empty((0, 2)))) == 0.0


# --- operator specs ------------------------------------------------------------------

def test_linear_requires_monotone():
    with pytest.raises(ValueError):
        Linear(-1.0)
    with pytest.raises(ValueError):
        Linear([[1, 0], [0, -1]])
    Linear([[0, 1], [-1, 0]])  # skew: monotone, not symmetric


@pytest.mark.parametrize("T,inside,outside", [
    (Linear(2.0, 1.0), (1.0, 3.0), (1.0, 2.0)),
    (SubdiffQuadratic(1.0, 0.5), (1.0, 1.5), (1.0, 1.0)),
    (SubdiffAbs(0.0), (0.0, 0.3), (0.5, 0.3)),
    (NormalConeBox(0.0, 1.0), (1.0, 7.0), (0.5, 1.0)),
    (VerticalLine(0.5), (0.5, -3.0), (0.4, 0.0)),
    (HorizontalLine(0.5), (-3.0, 0.5), (0.0, 0.4)),
])
def test_operator_membership_and_distance(T, inside, outside):
    assert T.contains(DualPair(*inside))
    assert not T.contains(DualPair(*outside))
    assert T.distance(np.array([inside]))[0] == pytest.approx(0.0, abs=1e-12)
    assert T.distance(np.array([outside]))[0] > 0


def test_sampled_graph_stays_on_operator(window):
    for T in (Linear(1.5), SubdiffAbs(0.3), NormalConeBox(-1, 1), VerticalLine(0.25)):
        G = T.sample(window)
        assert len(G) > 0
        assert T.distance(G.points).max() <= 1e-12


def test_finite_graph_convexity_audit():
    seg = FiniteGraph(OperatorGraph([[t, t] for t in np.linspace(0, 1, 11)]))
    assert seg.convex_graph
    # an L shape: the midpoint of its two arms is half a unit off the cloud
    t = np.linspace(0, 1, 11)
    corner = FiniteGraph(OperatorGraph(np.concatenate([np.c_[t, 0 * t], np.c_[0 * t, t]])))
    assert not corner.convex_graph


# --- function specs ---------------------------------------------------------------------

@pytest.mark.parametrize("g", [Quadratic(1.0), Quadratic(2.0, -0.5), AbsShift(0.3), IndicatorBox(-1, 1),
                               LinearFn(0.7), Sum((Quadratic(1.0), AbsShift(0.0)))])
def test_fn_sampling_is_convex(g, line):
    assert g.sample(line).midpoint_convex


def test_sum_merges_smooth_terms():
    s = Sum((Quadratic(1.0), LinearFn(2.0)))
    assert s.has_conjugate
    x = np.linspace(-2, 2, 5)
    assert np.allclose(s(x), 0.5 * x * x + 2 * x)
    assert np.allclose(s.conj(x), 0.5 * (x - 2) ** 2)


def test_interval_kinds():
    assert Interval(0, 0).kind == "point"
    assert Interval(-1, 1).kind == "interval"
    assert Interval(0, INF).kind == "ray"
    assert Interval(-INF, INF).kind == "line"
    assert Interval(1, 0).empty
    assert (Interval(-1, 1) + Interval(2, 2)).lo == 1


# --- reports -----------------------------------------------------------------------------

def test_failing_report_needs_witness():
    with pytest.raises(ValueError):
        ConvergenceReport("fail")
    with pytest.raises(ValueError):
        ConvergenceReport("maybe")
    r = ConvergenceReport("fail", [Witness((1.0, 1.0), 0.0, 1.0)])
    assert not r.passed and r.to_dict()["witnesses"][0]["point"] == [1.0, 1.0]
