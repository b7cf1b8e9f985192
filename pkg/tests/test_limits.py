import numpy as np
import pytest

from monorep import (
    AbsShift,
    DualPair,
    FnSequence,
    Grid,
    HorizontalLine,
    Linear,
    OperatorGraph,
    OperatorSequence,
    Quadratic,
    SampledFn,
    VerticalLine,
    epi_convergence_report,
    hausdorff,
    liminf_graphs,
    liminf_resolvent,
    representative_of_convex_graph,
    resolvent_bound,
)
from monorep.limits import default_ladder, default_liminf_tol, resolvent_residuals


def alternating(n):
    return VerticalLine(0.0) if n % 2 == 0 else HorizontalLine(0.0)


def diagonal(W):
    return OperatorGraph(np.c_[W.axes[0], W.axes[0]])


# --- graph lower limit --------------------------------------------------------------------

def test_constant_identity(window):
    lim = liminf_graphs(OperatorSequence(lambda n: Linear(1.0)), window)
    assert np.array_equal(lim.points, diagonal(window).points)


def test_alternating_axes(window):
    lim = liminf_graphs(OperatorSequence(alternating), window)
    assert np.array_equal(lim.points, [[0.0, 0.0]])


def test_slopes_converge_to_identity(window):
    lim = liminf_graphs(OperatorSequence(lambda n: Linear(1.0 + 1.0 / n)), window)
    tol = default_liminf_tol(window)
    assert hausdorff(lim, diagonal(window)) <= 2 * tol


def test_empty_tail(window):
    with pytest.raises(ValueError, match="empty tail"):
        liminf_graphs(OperatorSequence(alternating), window, tail=0)
    with pytest.raises(ValueError):
        liminf_graphs(OperatorSequence(alternating, n_max=10), window, tail=20)


def test_tail_is_last_terms():
    assert list(OperatorSequence(alternating, n_max=10).tail_indices(3)) == [8, 9, 10]


@pytest.mark.parametrize("rule", [alternating, lambda n: Linear(1.0 + 1.0 / n), lambda n: VerticalLine(1.0 / n)])
def test_monotone_in_tol(rule, small_window):
    seq = OperatorSequence(rule)
    small = liminf_graphs(seq, small_window, tol=0.02)
    big = liminf_graphs(seq, small_window, tol=0.2)
    keys = {tuple(p) for p in big.points}
    assert all(tuple(p) in keys for p in small.points)
    small_r = liminf_resolvent(seq, small_window, tol=0.02)
    big_r = liminf_resolvent(seq, small_window, tol=0.2)
    keys = {tuple(p) for p in big_r.points}
    assert all(tuple(p) in keys for p in small_r.points)


# --- resolvent lower limit ----------------------------------------------------------------

def test_resolvent_examples():
    ident = OperatorSequence(lambda n: Linear(1.0))
    assert len(liminf_resolvent(ident, [DualPair(1.0, 1.0)], tol=1e-12)) == 1
    alt = OperatorSequence(alternating)
    got = liminf_resolvent(alt, [DualPair(0.0, 0.0), DualPair(1.0, 0.0)], tol=0.03)
    assert np.array_equal(got.points, [[0.0, 0.0]])


def test_resolvent_residual_closed_form():
    seq = OperatorSequence(lambda n: Linear(1.0 + 1.0 / n))
    res, _ = resolvent_residuals(seq, np.array([[1.0, 1.0]]), tail=50)
    n = np.arange(151, 201)
    assert np.allclose(res[:, 0], (1.0 / n) / (2.0 + 1.0 / n), rtol=0, atol=1e-15)
    assert len(liminf_resolvent(seq, [DualPair(1.0, 1.0)], tol=1e-12)) == 1


def test_resolvent_needs_tol_for_point_probes():
    with pytest.raises(ValueError, match="tol"):
        liminf_resolvent(OperatorSequence(alternating), [DualPair(0.0, 0.0)])


def test_constant_sequence_both_paths(window):
    T = Linear(1.0)
    seq = OperatorSequence(lambda n: T)
    tol = default_liminf_tol(window)
    term = diagonal(window)
    assert hausdorff(liminf_graphs(seq, window), term) == 0.0
    assert hausdorff(liminf_resolvent(seq, window), term) <= 2 * tol


@pytest.mark.parametrize("rule", [alternating, lambda n: Linear(1.0 + 1.0 / n), lambda n: VerticalLine(1.0 / n),
                                  lambda n: HorizontalLine(0.5 - 1.0 / n)])
def test_paths_agree(rule, window):
    seq = OperatorSequence(rule)
    tol = default_liminf_tol(window)
    assert hausdorff(liminf_graphs(seq, window), liminf_resolvent(seq, window)) <= 2 * tol


def test_resolvent_bound(window):
    seq = OperatorSequence(lambda n: VerticalLine(1.0 / n))
    assert resolvent_bound(seq, window) == pytest.approx(1.0 / 151)


# --- epi-convergence -------------------------------------------------------------------------

def test_uniform_shift_epi_converges(line):
    fs = FnSequence(lambda n: SampledFn(line, 0.5 * line.axes[0] ** 2 + 1.0 / n))
    r = epi_convergence_report(fs, Quadratic(1.0), grid=line)
    assert r.passed and r.tail == (151, 200)


def test_shifted_abs_epi_converges(line):
    fs = FnSequence(lambda n: AbsShift(1.0 / n))
    assert epi_convergence_report(fs, AbsShift(0.0), grid=line).passed


def test_wrong_candidate_fails(line):
    fs = FnSequence(lambda n: AbsShift(1.0 / n))
    r = epi_convergence_report(fs, AbsShift(1.0), grid=line)
    assert not r.passed and r.witnesses


def test_alternating_representatives_oscillate(window):
    fs = FnSequence(lambda n: representative_of_convex_graph(alternating(n), window))
    cand = representative_of_convex_graph(OperatorGraph([[0.0, 0.0]]), window)
    r = epi_convergence_report(fs, cand, probes=[(1.0, 0.0), (0.0, 0.0)])
    assert not r.passed
    (w,) = r.witnesses
    assert w.point == (1.0, 0.0)
    assert "oscillation" in w.note


def test_ladder_validation(line):
    fs = FnSequence(lambda n: AbsShift(1.0 / n))
    with pytest.raises(ValueError, match="below resolution"):
        epi_convergence_report(fs, AbsShift(0.0), grid=line, r_ladder=[0.5, line.h / 2])
    with pytest.raises(ValueError, match="decreasing"):
        epi_convergence_report(fs, AbsShift(0.0), grid=line, r_ladder=[0.1, 0.5])


def test_default_ladder(window):
    assert default_ladder(window) == [0.5, 0.25, 0.1]
    assert default_ladder(Grid.uniform(-4, 4, 801)) == [0.5, 0.25, 0.1, 0.02]


def test_report_profile_and_note(line):
    fs = FnSequence(lambda n: AbsShift(1.0 / n))
    r = epi_convergence_report(fs, AbsShift(0.0), grid=line)
    assert [p["radius"] for p in r.details["ladder_profile"]] == r.tolerances["r_ladder"]
    assert "finite-tail" in r.details["note"]
