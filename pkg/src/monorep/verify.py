"""Scenario catalog: each entry builds a concrete sequence, runs the library
operations on it and checks the outcome a convergence theorem predicts."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .conjugate import swap_conjugate
from .core import (
    AbsShift,
    BiFn,
    Conjugate,
    ConvergenceReport,
    DualPair,
    FiniteGraph,
    Grid,
    HorizontalLine,
    IndicatorBox,
    Linear,
    LinearFn,
    NormalConeBox,
    OperatorGraph,
    Quadratic,
    SubdiffAbs,
    SubdiffQuadratic,
    Sum,
    VerticalLine,
    Witness,
    hausdorff,
    point_indicator,
)
from .fitzpatrick import (
    check_class_F,
    check_class_Fstar,
    extract_L,
    fitzpatrick_fn,
    maximality_audit,
    representative_of_convex_graph,
)
from .limits import (
    FnSequence,
    OperatorSequence,
    default_liminf_tol,
    epi_convergence_report,
    liminf_graphs,
    liminf_resolvent,
    resolvent_bound,
)
from .subdiff import sampled_subdifferential_graph, separable_bifn, symmetrized_representative


@dataclass(frozen=True)
class Settings:
    """Windows and horizons shared by the catalog."""

    lo: float = -4.0
    hi: float = 4.0
    n_window: int = 161
    n_line: int = 801
    n_max: int = 200
    tail: int = 50
    tol: float | None = None  # epi tolerance; None means 10 h

    @property
    def window(self) -> Grid:
        return Grid.uniform(self.lo, self.hi, self.n_window, dim=2)

    @property
    def line(self) -> Grid:
        return Grid.uniform(self.lo, self.hi, self.n_line)


@dataclass(frozen=True)
class Scenario:
    name: str
    claim: str
    description: str
    run: Callable[[Settings], ConvergenceReport] = field(repr=False)


CATALOG: dict[str, Scenario] = {}


def _register(name, claim, description):
    def deco(fn):
        if name in CATALOG:
            raise ValueError(f"duplicate scenario {name!r}")
        CATALOG[name] = Scenario(name, claim, description, fn)
        return fn

    return deco


class _Checks:
    """Collects named sub-checks and folds them into one report."""

    def __init__(self, name, claim):
        self.name, self.claim = name, claim
        self.items = []
        self.witnesses = []
        self.tolerances = {}

    def add(self, label, ok, value=None, bound=None, note=""):
        self.items.append({"check": label, "ok": bool(ok), "value": value, "bound": bound, "note": note})
        if not ok:
            self.witnesses.append(Witness((), _num(value), _num(bound), f"{label} failed {note}".strip()))
        return ok

    def evidence(self, w: Witness, label):
        self.witnesses.append(Witness(w.point, w.value, w.bound, f"{label}: {w.note}"))

    def report(self, tail=None, **details) -> ConvergenceReport:
        verdict = "pass" if all(i["ok"] for i in self.items) else "fail"
        return ConvergenceReport(
            verdict, self.witnesses, self.tolerances, tail,
            details={"scenario": self.name, "claim": self.claim, "checks": self.items, **details},
        )


def _num(v):
    if v is None:
        return float("nan")
    if isinstance(v, (bool, np.bool_)):
        return float(v)
    return float(v)


def _tail(s: Settings):
    return (s.n_max - s.tail + 1, s.n_max)


def _epi(fs, cand, s: Settings, **kw):
    return epi_convergence_report(fs, cand, tail=s.tail, tol=s.tol, **kw)


def _every(s: Settings, k: int):
    """A thinned tail for the expensive per-term checks."""
    return range(s.n_max - s.tail + 1, s.n_max + 1, k)


# ---------------------------------------------------------------------------
# stability of the classes under epi-convergence

@_register("epi-limit-class-F", "class F closed",
           "Fitzpatrick functions of slopes 1+1/n epi-converge; the limit stays above the coupling")
def _epi_limit_F(s: Settings):
    W = s.window
    c = _Checks("epi-limit-class-F", "epi-limits of representative functions are representative")
    fs = FnSequence(lambda n: fitzpatrick_fn(Linear(1.0 + 1.0 / n), W), s.n_max)
    f = fitzpatrick_fn(Linear(1.0), W)
    tol_F = W.h ** 2
    c.tolerances = {"class_F": tol_F}
    worst = min(check_class_F(fs.term(n), tol_F).report.details["min_gap"] for n in _every(s, 10))
    c.add("f_n in class F (thinned tail)", worst >= -tol_F, worst, -tol_F)
    epi = _epi(fs, f, s)
    c.add("f_n epi-converges to f", epi.passed, epi.details["failing_probes"], 0)
    chk = check_class_F(f, tol_F)
    c.add("limit f in class F", chk.passed, chk.report.details["min_gap"], -tol_F)
    return c.report(_tail(s), epi=epi.to_dict())


@_register("mosco-limit-class-Fstar", "class F* closed",
           "g_n(x) + g_n*(x*) with g_n = |x - 1/n| Mosco-converges; the limit stays in class F*")
def _mosco_limit_Fstar(s: Settings):
    W = s.window
    c = _Checks("mosco-limit-class-Fstar", "Mosco-limits of class-F* functions stay in class F*")
    fs = FnSequence(lambda n: separable_bifn(AbsShift(1.0 / n), W), s.n_max)
    f = separable_bifn(AbsShift(0.0), W)
    ok_terms = all(check_class_Fstar(fs.term(n)).passed for n in _every(s, 10))
    c.add("f_n in class F* (thinned tail)", ok_terms)
    epi = _epi(fs, f, s)
    c.add("f_n Mosco-converges to f", epi.passed, epi.details["failing_probes"], 0)
    chk_F, chk_Fs = check_class_F(f), check_class_Fstar(f)
    c.add("limit f in class F", chk_F.passed, chk_F.report.details["min_gap"], 0.0)
    c.add("limit f in class F*", chk_Fs.passed, chk_Fs.report.details["min_gap"], -chk_Fs.report.tolerances["tol"])
    c.tolerances = {"class_Fstar": chk_Fs.report.tolerances["tol"], "margin": 1.0}
    return c.report(_tail(s), epi=epi.to_dict())


# ---------------------------------------------------------------------------
# continuity of f -> L(f)

def _lower_limit_vs_contact_set(c: _Checks, s: Settings, ops, fs, f, label, via_contact=True):
    """Shared body of the L(f) = liminf T_n checks.

    ``via_contact`` also reads T_n as L(f_n) from the sampled f_n. That route
    needs the graph of T_n to pass through grid nodes (smooth g_n); a kink
    between nodes loses its set-valued part at tolerance h^2.
    """
    W = s.window
    h = W.h
    tol = default_liminf_tol(W)
    c.tolerances = {"liminf": tol, "extract_L": h * h, "hausdorff": 2 * h}
    epi = _epi(fs, f, s)
    c.add(f"{label}: f_n epi-converges to f", epi.passed, epi.details["failing_probes"], 0)
    Lf = extract_L(f, h * h)
    lim = liminf_graphs(ops, W, tail=s.tail, tol=tol)
    d1 = hausdorff(Lf, lim)
    c.add(f"{label}: Hausdorff(L(f), liminf of closed-form T_n)", d1 <= 2 * h, d1, 2 * h)
    if not via_contact:
        return epi, Lf, lim
    # T_n read off the representatives themselves
    from_L = OperatorSequence(lambda n: FiniteGraph(extract_L(fs.term(n), h * h)), s.n_max)
    lim_L = liminf_graphs(from_L, W, tail=s.tail, tol=tol)
    d2 = hausdorff(Lf, lim_L)
    c.add(f"{label}: Hausdorff(L(f), liminf of L(f_n))", d2 <= 2 * h, d2, 2 * h)
    return epi, Lf, lim


@_register("thm22-quadratic", "contact set of the limit",
           "f_n = g_n + g_n* with g_n = (1+1/n) x^2/2; L(f) equals the lower limit of the T_n")
def _contact_quadratic(s: Settings):
    W = s.window
    c = _Checks("thm22-quadratic", "epi-convergence of representatives gives L(f) = liminf T_n")
    ops = OperatorSequence(lambda n: SubdiffQuadratic(1.0 + 1.0 / n), s.n_max)
    fs = FnSequence(lambda n: separable_bifn(Quadratic(1.0 + 1.0 / n), W), s.n_max)
    f = separable_bifn(Quadratic(1.0), W)
    epi, Lf, lim = _lower_limit_vs_contact_set(c, s, ops, fs, f, "quadratic")
    return c.report(_tail(s), epi=epi.to_dict(), liminf_points=len(lim), L_points=len(Lf))


@_register("mosco-abs-maximal", "maximal lower limit",
           "f_n = g_n + g_n* with g_n = |x - 1/n|; the lower limit is L(f) and is maximal monotone")
def _mosco_abs(s: Settings):
    W = s.window
    c = _Checks("mosco-abs-maximal", "Mosco-convergence gives a maximal monotone lower limit")
    ops = OperatorSequence(lambda n: SubdiffAbs(1.0 / n), s.n_max)
    fs = FnSequence(lambda n: separable_bifn(AbsShift(1.0 / n), W), s.n_max)
    f = separable_bifn(AbsShift(0.0), W)
    epi, Lf, lim = _lower_limit_vs_contact_set(c, s, ops, fs, f, "abs", via_contact=False)
    fs_chk = check_class_Fstar(f)
    c.add("limit f in class F*", fs_chk.passed, fs_chk.report.details["min_gap"])
    audit = maximality_audit(lim, W)
    c.add("liminf T_n window-maximal", audit.passed, audit.report.details["addable"], 0,
          "window audit (necessary condition)")
    return c.report(_tail(s), epi=epi.to_dict(), audit=audit.to_dict())


# ---------------------------------------------------------------------------
# convex graphs: phi_T + indicator_T

def _convex_graph_case(s: Settings, rule, limit):
    W = s.window
    ops = OperatorSequence(rule, s.n_max)
    lim = liminf_graphs(ops, W, tail=s.tail)
    audit = maximality_audit(lim, W, witness_points=[(1.0, 1.0)])
    fs = FnSequence(lambda n: representative_of_convex_graph(rule(n), W), s.n_max)
    epi = _epi(fs, representative_of_convex_graph(limit, W), s,
               probes=_probe_points(W, extra=[(1.0, 0.0)]))
    return lim, audit, epi


def _probe_points(W: Grid, extra=(), margin=1.0, stride=4):
    from .limits import default_probes
    idx = default_probes(W, margin, stride)
    pts = np.stack([W.axes[a][idx[:, a]] for a in range(W.dim)], axis=1)
    if len(extra):
        pts = np.concatenate([np.asarray(extra, dtype=float), pts])
    return pts


@_register("convex-graphs-vertical-lines", "convex graphs, sufficiency",
           "T_n = {1/n} x R has a maximal lower limit, so phi_{T_n} + indicator_{T_n} epi-converges")
def _convex_vertical(s: Settings):
    c = _Checks("convex-graphs-vertical-lines", "maximal lower limit of convex graphs => phi+indicator epi-converge")
    lim, audit, epi = _convex_graph_case(s, lambda n: VerticalLine(1.0 / n), VerticalLine(0.0))
    d = hausdorff(lim, sampled_line(s.window, VerticalLine(0.0)))
    c.add("liminf T_n = {0} x R on the window", d <= 2 * s.window.h, d, 2 * s.window.h)
    c.add("liminf T_n window-maximal", audit.passed, audit.report.details["addable"], 0)
    c.add("phi_{T_n} + indicator_{T_n} epi-converges to phi_T + indicator_T", epi.passed,
          epi.details["failing_probes"], 0)
    c.tolerances = {"epi": epi.tolerances["tol"], "hausdorff": 2 * s.window.h}
    return c.report(_tail(s), epi=epi.to_dict(), audit=audit.to_dict())


@_register("convex-graphs-linear-slopes", "convex graphs, sufficiency",
           "T_n = graph of x -> (1+1/n) x converges to the identity; phi+indicator epi-converges")
def _convex_slopes(s: Settings):
    c = _Checks("convex-graphs-linear-slopes", "maximal lower limit of convex graphs => phi+indicator epi-converge")
    lim, audit, epi = _convex_graph_case(s, lambda n: Linear(1.0 + 1.0 / n), Linear(1.0))
    c.add("liminf T_n window-maximal", audit.passed, audit.report.details["addable"], 0)
    c.add("phi_{T_n} + indicator_{T_n} epi-converges to phi_T + indicator_T", epi.passed,
          epi.details["failing_probes"], 0)
    c.tolerances = {"epi": epi.tolerances["tol"]}
    return c.report(_tail(s), epi=epi.to_dict(), audit=audit.to_dict())


def sampled_line(W: Grid, T) -> OperatorGraph:
    """Window nodes lying on the graph of a closed-form operator (to 1e-9)."""
    pts = W.points()
    return OperatorGraph(pts[T.distance(pts) <= 1e-9], 1)


def _alternating(n):
    return VerticalLine(0.0) if n % 2 == 0 else HorizontalLine(0.0)


CONVEX_GRAPH_SEQUENCES = {
    "vertical-lines": (lambda n: VerticalLine(1.0 / n), VerticalLine(0.0)),
    "linear-slopes": (lambda n: Linear(1.0 + 1.0 / n), Linear(1.0)),
    "shifted-identity": (lambda n: Linear(1.0, 1.0 / n), Linear(1.0)),
    "alternating-axes": (_alternating, FiniteGraph(OperatorGraph([[0.0, 0.0]]))),
}


@_register("convex-graphs-equivalence", "convex graphs, equivalence",
           "for convex-graph sequences, a maximal lower limit occurs exactly when phi+indicator epi-converges")
def _convex_equivalence(s: Settings):
    c = _Checks("convex-graphs-equivalence", "liminf maximal <=> an epi-converging representative sequence exists")
    rows = {}
    for label, (rule, limit) in CONVEX_GRAPH_SEQUENCES.items():
        lim, audit, epi = _convex_graph_case(s, rule, limit)
        rows[label] = {"maximal_window": audit.passed, "epi_converges": epi.passed, "liminf_points": len(lim)}
        c.add(f"{label}: maximality agrees with epi-convergence", audit.passed == epi.passed,
              float(audit.passed), float(epi.passed))
    c.add("catalog contains both outcomes", len({r["maximal_window"] for r in rows.values()}) == 2)
    return c.report(_tail(s), cases=rows,
                    note="maximality verdicts come from the window audit (a necessary condition)")


@_register("example-alternating-axes", "non-maximal lower limit",
           "T_n alternates {0} x R and R x {0}: liminf = {(0,0)}, not maximal, no epi-converging phi+indicator")
def _example_alternating(s: Settings):
    W = s.window
    c = _Checks("example-alternating-axes", "representable but not maximal lower limit; no epi-limit")
    ops = OperatorSequence(_alternating, s.n_max)
    lg = liminf_graphs(ops, W, tail=s.tail)
    lr = liminf_resolvent(ops, W, tail=s.tail)
    origin = np.array([[0.0, 0.0]])
    c.add("liminf (graphs) = {(0,0)}", len(lg) == 1 and np.allclose(lg.points, origin), len(lg), 1)
    c.add("liminf (resolvents) = {(0,0)}", len(lr) == 1 and np.allclose(lr.points, origin), len(lr), 1)
    for parity, T in (("even", VerticalLine(0.0)), ("odd", HorizontalLine(0.0))):
        chk = check_class_Fstar(representative_of_convex_graph(T, W))
        c.add(f"{parity} T_n maximal monotone (class F*)", chk.passed, chk.report.details["min_gap"])
    audit = maximality_audit(lg, W, witness_points=[(1.0, 1.0)])
    c.add("maximality audit negative", not audit.passed, audit.report.details["addable"], 0)
    for w in audit.report.witnesses:
        if np.allclose(w.point, (1.0, 1.0)):
            c.evidence(w, "non-maximality")
    c.add("(1,1) is monotonically addable", any(np.allclose(w.point, (1.0, 1.0)) for w in audit.report.witnesses))
    limit_rep = representative_of_convex_graph(FiniteGraph(lg), W)
    fs = FnSequence(lambda n: representative_of_convex_graph(_alternating(n), W), s.n_max)
    epi = _epi(fs, limit_rep, s, probes=_probe_points(W, extra=[(1.0, 0.0)]))
    c.add("phi+indicator representatives do not epi-converge", not epi.passed, epi.details["failing_probes"], 0)
    osc = [w for w in epi.witnesses if np.allclose(w.point, (1.0, 0.0))]
    c.add("oscillation witness at (1,0)", bool(osc) and "oscillation" in osc[0].note)
    if osc:
        c.evidence(osc[0], "epi failure")
    c.tolerances = {"liminf": default_liminf_tol(W), "epi": epi.tolerances["tol"]}
    return c.report(_tail(s), epi=epi.to_dict(), audit=audit.to_dict())


# ---------------------------------------------------------------------------
# operators T_h and subdifferentials

def _t_family(a, t=0.75):
    """``t a x^2/2 + (1-t) x x* + t x*^2/(2a)``: smooth, non-separable for t < 1,
    and its operator T_h is the line x* = a x."""
    def h(X, S):
        return 0.5 * t * a * X * X + (1.0 - t) * X * S + 0.5 * t * S * S / a
    return h


def _sample_bi(fn, W):
    X, S = np.meshgrid(*W.axes, indexing="ij")
    return BiFn(W, fn(X, S))


@_register("nonseparable-quadratic-family", "non-separable representatives",
           "h_n quadratic with T_{h_n} the line of slope 1+1/n; T_h = liminf T_{h_n} and is maximal")
def _nonseparable(s: Settings):
    W = s.window
    h_ = W.h
    c = _Checks("nonseparable-quadratic-family", "Mosco-convergence of h_n gives T_h = liminf T_{h_n}, maximal")
    fs = FnSequence(lambda n: _sample_bi(_t_family(1.0 + 1.0 / n), W), s.n_max)
    hlim = _sample_bi(_t_family(1.0), W)
    epi = _epi(fs, hlim, s)
    c.add("h_n Mosco-converges to h", epi.passed, epi.details["failing_probes"], 0)
    cache = {}

    def T_n(n):
        if n not in cache:
            cache[n] = FiniteGraph(extract_L(symmetrized_representative(fs.term(n)), h_ * h_))
        return cache[n]

    g = symmetrized_representative(hlim)
    chk = check_class_F(g)
    c.add("symmetrised representative in class F", chk.passed, chk.report.details["min_gap"], 0.0)
    Th = extract_L(g, h_ * h_)
    d0 = hausdorff(Th, sampled_line(W, Linear(1.0)))
    c.add("T_h is the identity graph", d0 <= 2 * h_, d0, 2 * h_)
    lim = liminf_graphs(OperatorSequence(T_n, s.n_max), W, tail=s.tail)
    d = hausdorff(Th, lim)
    c.add("Hausdorff(T_h, liminf T_{h_n})", d <= 2 * h_, d, 2 * h_)
    audit = maximality_audit(lim, W)
    c.add("liminf window-maximal", audit.passed, audit.report.details["addable"], 0)
    c.tolerances = {"extract_L": h_ * h_, "hausdorff": 2 * h_, "epi": epi.tolerances["tol"]}
    return c.report(_tail(s), epi=epi.to_dict(), audit=audit.to_dict())


def _attouch(c: _Checks, s: Settings, g_rule, g_lim, label, via_contact=True):
    W, line = s.window, s.line
    h = W.h
    epi = _epi(FnSequence(g_rule, s.n_max), g_lim, s, grid=line)
    c.add(f"{label}: g_n Mosco-converges to g", epi.passed, epi.details["failing_probes"], 0)
    ops = OperatorSequence(lambda n: g_rule(n).operator(), s.n_max)
    lim = liminf_graphs(ops, W, tail=s.tail)
    target = sampled_subdifferential_graph(g_lim, W)
    d = hausdorff(lim, target)
    c.add(f"{label}: Hausdorff(liminf subdiff g_n, subdiff g)", d <= 2 * h, d, 2 * h)
    c.tolerances = {"hausdorff": 2 * h, "liminf": default_liminf_tol(W), "epi": epi.tolerances["tol"]}
    if not via_contact:
        return epi
    # the same lower limit read through T_{f_n} with f_n = g_n + g_n*
    via_T = OperatorSequence(lambda n: FiniteGraph(extract_L(separable_bifn(g_rule(n), W), h * h)), s.n_max)
    lim2 = liminf_graphs(via_T, W, tail=s.tail)
    d2 = hausdorff(lim2, target)
    c.add(f"{label}: Hausdorff(liminf T_(g_n+g_n*), subdiff g)", d2 <= 2 * h, d2, 2 * h)
    c.tolerances = {"hausdorff": 2 * h, "liminf": default_liminf_tol(W), "epi": epi.tolerances["tol"]}
    return epi


@_register("attouch-shifted-abs", "subdifferential convergence",
           "g_n = |x - 1/n| Mosco-converges to |x|; the subdifferentials converge in the graph sense")
def _attouch_abs(s: Settings):
    c = _Checks("attouch-shifted-abs", "Mosco g_n -> g gives subdiff g = liminf subdiff g_n")
    epi = _attouch(c, s, lambda n: AbsShift(1.0 / n), AbsShift(0.0), "abs", via_contact=False)
    return c.report(_tail(s), epi=epi.to_dict())


@_register("attouch-scaled-quadratic", "subdifferential convergence",
           "g_n = (1+1/n) x^2/2 + x/n Mosco-converges to x^2/2; gradients converge in the graph sense")
def _attouch_quad(s: Settings):
    c = _Checks("attouch-scaled-quadratic", "Mosco g_n -> g gives subdiff g = liminf subdiff g_n")
    epi = _attouch(c, s, lambda n: Quadratic(1.0 + 1.0 / n, 1.0 / n), Quadratic(1.0), "quadratic")
    return c.report(_tail(s), epi=epi.to_dict())


# ---------------------------------------------------------------------------
# background facts

FN_CATALOG = {
    "quadratic": Quadratic(1.0),
    "quadratic-shifted": Quadratic(2.0, 0.5),
    "abs": AbsShift(0.0),
    "abs-shifted": AbsShift(0.5),
    "box": IndicatorBox(-1.0, 1.0),
    "box-unit": IndicatorBox(0.0, 1.0),
    "linear": LinearFn(0.5),
    "quadratic-plus-linear": Sum((Quadratic(1.0), LinearFn(-0.5))),
}


@_register("maximality-class-Fstar", "maximality criterion",
           "g + g* lies in class F* for every catalog g; the indicator of {(0,0)} does not")
def _maximality(s: Settings):
    W = s.window
    c = _Checks("maximality-class-Fstar", "L(f) maximal monotone iff f*(x*,x) >= <x,x*>")
    for label, g in FN_CATALOG.items():
        chk = check_class_Fstar(separable_bifn(g, W))
        c.add(f"{label}: g + g* in class F*", chk.passed, chk.report.details["min_gap"])
    chk = check_class_Fstar(point_indicator(W, (0.0, 0.0)), witness_points=[(1.0, 1.0)])
    c.add("point indicator fails class F*", not chk.passed)
    w11 = [w for w in chk.report.witnesses if np.allclose(w.point, (1.0, 1.0))]
    c.add("witness (1,1) with swapped conjugate 0 < 1", bool(w11) and w11[0].value == 0.0 and w11[0].bound == 1.0)
    if w11:
        c.evidence(w11[0], "singleton")
    c.tolerances = {"class_Fstar": W.h ** 2, "margin": 1.0}
    return c.report()


def fn_sequences():
    """Function sequences with closed-form conjugates and their candidate limits."""
    return {
        "quadratic-scaled": (lambda n: Quadratic(1.0 + 1.0 / n), Quadratic(1.0)),
        "abs-shifted": (lambda n: AbsShift(1.0 / n), AbsShift(0.0)),
        "box-widening": (lambda n: IndicatorBox(-1.0 - 1.0 / n, 1.0 + 1.0 / n), IndicatorBox(-1.0, 1.0)),
        "quadratic-tilted": (lambda n: Sum((Quadratic(1.0), LinearFn(1.0 / n))), Quadratic(1.0)),
        "abs-alternating": (lambda n: AbsShift(float((-1) ** n)), AbsShift(0.0)),
    }


@_register("conjugate-bicontinuity", "conjugation bicontinuity",
           "epi-convergence verdicts for (g_n, g) and (g_n*, g*) agree on every catalog sequence")
def _bicontinuity(s: Settings):
    line = s.line
    c = _Checks("conjugate-bicontinuity", "f = M-lim f_n iff f* = M-lim f_n*")
    rows = {}
    for label, (rule, lim) in fn_sequences().items():
        primal = _epi(FnSequence(rule, s.n_max), lim, s, grid=line)
        dual = _epi(FnSequence(lambda n, r=rule: Conjugate(r(n)), s.n_max), Conjugate(lim), s, grid=line)
        rows[label] = {"primal": primal.verdict, "dual": dual.verdict}
        c.add(f"{label}: verdicts agree", primal.verdict == dual.verdict, float(primal.passed), float(dual.passed))
    c.add("catalog contains both outcomes", len({r["primal"] for r in rows.values()}) == 2)
    c.tolerances = {"epi": s.tol if s.tol is not None else 10 * line.h}
    return c.report(_tail(s), cases=rows)


def operator_sequences():
    """Closed-form maximal monotone sequences used for the two lower-limit routes."""
    return {
        "identity-constant": lambda n: Linear(1.0),
        "linear-slopes": lambda n: Linear(1.0 + 1.0 / n),
        "alternating-axes": _alternating,
        "vertical-lines": lambda n: VerticalLine(1.0 / n),
        "abs-shifted": lambda n: SubdiffAbs(1.0 / n),
        "quadratic-tilted": lambda n: SubdiffQuadratic(1.0 + 1.0 / n, 1.0 / n),
        "box-widening": lambda n: NormalConeBox(-1.0 - 1.0 / n, 1.0 + 1.0 / n),
        "horizontal-lines": lambda n: HorizontalLine(0.5 - 1.0 / n),
    }


@_register("resolvent-liminf", "resolvent lower limit",
           "liminf T_n computed from graphs and from resolvents J_{T_n}(x,x*) -> x agree")
def _resolvent_liminf(s: Settings):
    W = s.window
    tol = default_liminf_tol(W)
    c = _Checks("resolvent-liminf", "liminf T_n = {(x,x*) : J_{T_n}(x,x*) -> x}")
    rows = {}
    for label, rule in operator_sequences().items():
        ops = OperatorSequence(rule, s.n_max)
        lg = liminf_graphs(ops, W, tail=s.tail, tol=tol)
        lr = liminf_resolvent(ops, W, tail=s.tail, tol=tol)
        d = hausdorff(lg, lr)
        bound = resolvent_bound(ops, W, tail=s.tail) if len(lg) else None
        rows[label] = {"graphs": len(lg), "resolvents": len(lr), "hausdorff": d, "resolvent_bound": bound}
        c.add(f"{label}: Hausdorff(graphs, resolvents)", d <= 2 * tol, d, 2 * tol)
        if len(lg):
            c.add(f"{label}: resolvents bounded", np.isfinite(bound), bound)
    c.tolerances = {"liminf": tol, "hausdorff": 2 * tol}
    return c.report(_tail(s), cases=rows)


# ---------------------------------------------------------------------------

def available() -> list:
    return sorted(CATALOG)


def run_scenario(name: str, settings: Settings | None = None, **overrides) -> ConvergenceReport:
    """Run one catalog scenario; ``overrides`` replace fields of :class:`Settings`."""
    if name not in CATALOG:
        raise KeyError(f"unknown scenario {name!r}; available: {', '.join(available())}")
    settings = replace(settings or Settings(), **overrides)
    sc = CATALOG[name]
    report = sc.run(settings)
    report.details.setdefault("description", sc.description)
    report.details["settings"] = {
        "window": settings.window.to_dict(), "line": settings.line.to_dict(),
        "n_max": settings.n_max, "tail": settings.tail,
    }
    return report


def run_all(settings: Settings | None = None, **overrides) -> dict:
    return {name: run_scenario(name, settings, **overrides) for name in available()}
