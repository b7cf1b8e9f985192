"""Command-line front end: JSON scenario specs in, JSON/CSV reports out.

Exit codes: 0 when every verdict is the expected one, 1 on a mismatch,
2 on a usage or spec error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .conjugate import METHODS, conjugate_values
from .core import (
    AbsShift,
    ConvergenceReport,
    DualPair,
    FiniteGraph,
    FnSpec,
    Grid,
    HorizontalLine,
    IndicatorBox,
    Linear,
    LinearFn,
    NormalConeBox,
    OperatorGraph,
    OperatorSpec,
    Quadratic,
    SubdiffAbs,
    SubdiffQuadratic,
    Sum,
    VerticalLine,
    Witness,
    hausdorff,
)
from .fitzpatrick import (
    check_class_F,
    check_class_Fstar,
    fitzpatrick_fn,
    is_monotone,
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
)
from .resolvent import resolve_oracle, resolve_rows
from .subdiff import separable_bifn

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2

KINDS = {
    "Linear": Linear,
    "SubdiffQuadratic": SubdiffQuadratic,
    "SubdiffAbs": SubdiffAbs,
    "NormalConeBox": NormalConeBox,
    "VerticalLine": VerticalLine,
    "HorizontalLine": HorizontalLine,
    "FiniteGraph": FiniteGraph,
    "Quadratic": Quadratic,
    "AbsShift": AbsShift,
    "IndicatorBox": IndicatorBox,
    "LinearFn": LinearFn,
    "Sum": Sum,
}


class SpecError(Exception):
    pass


# ---------------------------------------------------------------------------
# spec loading

def _schema():
    return json.loads(resources.files("monorep").joinpath("schema.json").read_text())


def load_spec(path) -> dict:
    """Parse and validate a spec file; errors carry line or field locations."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SpecError(f"{path}: cannot read spec ({exc.strerror})") from None
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None
    validator = jsonschema.Draft202012Validator(_schema())
    errors = sorted(validator.iter_errors(spec), key=lambda e: list(e.absolute_path))
    if errors:
        lines = [f"{path}: field '{_field(e.absolute_path)}': {e.message}" for e in errors]
        raise SpecError("\n".join(lines))
    return spec


def _field(path) -> str:
    out = ""
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "<root>"


def _value(v):
    return np.asarray(v, dtype=float) if isinstance(v, list) else float(v)


def build_object(obj: dict, dim: int, where: str):
    """An OperatorSpec or FnSpec from ``{kind, params}``."""
    kind, params = obj["kind"], dict(obj.get("params", {}))
    try:
        if kind == "FiniteGraph":
            pts = np.asarray(params.pop("points", []), dtype=float).reshape(-1, 2 * dim)
            if params:
                raise TypeError(f"unexpected params {sorted(params)}")
            return FiniteGraph(OperatorGraph(pts, dim))
        if kind == "Sum":
            terms = params.pop("terms", [])
            if params:
                raise TypeError(f"unexpected params {sorted(params)}")
            return Sum(tuple(build_object(t, dim, f"{where}.params.terms[{i}]") for i, t in enumerate(terms)))
        return KINDS[kind](**{k: _value(v) for k, v in params.items()})
    except (TypeError, ValueError) as exc:
        raise SpecError(f"field '{where}': cannot build {kind}: {exc}") from None


def _affine_params(params: dict, n: int) -> dict:
    out = {}
    for k, v in params.items():
        if isinstance(v, dict):
            c0 = np.asarray(v["c0"], dtype=float)
            c1 = np.asarray(v.get("c1", 0.0), dtype=float)
            val = c0 + c1 / n
            out[k] = val.tolist() if val.ndim else float(val)
        else:
            out[k] = v
    return out


def sequence_rule(seq: dict, dim: int):
    """``n -> term`` for the two closed-form rules."""
    if seq["rule"] == "alternating":
        even = build_object(seq["even"], dim, "sequence.even")
        odd = build_object(seq["odd"], dim, "sequence.odd")
        return lambda n: even if n % 2 == 0 else odd
    build_object({"kind": seq["kind"], "params": _affine_params(seq["params"], 1)}, dim, "sequence")
    return lambda n: build_object({"kind": seq["kind"], "params": _affine_params(seq["params"], n)},
                                  dim, "sequence")


class Context:
    """A validated spec plus command-line overrides."""

    def __init__(self, spec: dict, args):
        self.spec = spec
        self.args = args
        self.dim = spec["dimension"]
        w = spec["window"]
        if w["hi"] <= w["lo"]:
            raise SpecError("field 'window': hi must exceed lo")
        self.lo, self.hi, self.n = float(w["lo"]), float(w["hi"]), int(w["n"])
        self.tols = dict(spec.get("tolerances", {}))
        if getattr(args, "tol", None) is not None:
            self.tols["tol"] = args.tol
        self.tail = args.tail if getattr(args, "tail", None) is not None else spec.get("tail", 50)
        self.n_max = args.nmax if getattr(args, "nmax", None) is not None else spec.get("n_max", 200)
        if self.tail > self.n_max:
            raise SpecError(f"tail {self.tail} exceeds n_max {self.n_max}")
        expect = spec.get("expect", "pass")
        if isinstance(expect, dict):
            expect = expect.get(getattr(args, "command", ""), "pass")
        self.expect = expect

    def tol(self, key, default=None):
        return self.tols.get(key, self.tols.get("tol", default))

    @property
    def fn_grid(self) -> Grid:
        return Grid.uniform(self.lo, self.hi, self.n, dim=self.dim)

    @property
    def window(self) -> Grid:
        return Grid.uniform(self.lo, self.hi, self.n, dim=2 * self.dim)

    def need(self, key):
        if key not in self.spec:
            raise SpecError(f"field '{key}': required by this command")
        return self.spec[key]

    def obj(self, key, want):
        o = build_object(self.need(key), self.dim, key)
        if not isinstance(o, want):
            raise SpecError(f"field '{key}': expected {'an operator' if want is OperatorSpec else 'a function'}")
        return o

    def method(self, default):
        return getattr(self.args, "method", None) or self.spec.get("method", default)

    def probe_points(self):
        pts = self.spec.get("probes", {}).get("points")
        if pts is None:
            return None
        arr = np.asarray(pts, dtype=float)
        if arr.shape[1] != 2 * self.dim:
            raise SpecError(f"field 'probes.points': rows need {2 * self.dim} entries")
        return arr


# ---------------------------------------------------------------------------
# commands; each returns (report, tables)

def _fold(reports: dict, **details) -> ConvergenceReport:
    witnesses = []
    for name, r in reports.items():
        witnesses += [Witness(w.point, w.value, w.bound, f"{name}: {w.note}") for w in r.witnesses]
    verdict = "pass" if all(r.verdict == "pass" for r in reports.values()) else "fail"
    if verdict == "fail" and not witnesses:
        witnesses = [Witness((), math.nan, math.nan, "inconclusive sub-check")]
    return ConvergenceReport(verdict, witnesses, details={k: r.to_dict() for k, r in reports.items()} | details)


def cmd_conjugate(ctx: Context):
    g = ctx.obj("function", FnSpec)
    grid = ctx.fn_grid
    method = ctx.method("brute")
    if method not in METHODS:
        raise SpecError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    vals = conjugate_values(g.sample(grid), grid, method)
    h = grid.h
    tol = ctx.tol("tol", h * h)
    pts = grid.points()
    table = {"s": pts, "conjugate": vals.ravel()}
    details = {"method": method, "grid": grid.to_dict()}
    witnesses = []
    if g.has_conjugate:
        exact = g.conj(pts)
        inner = grid.interior_mask(ctx.tol("margin", 1.0)).ravel() & np.isfinite(exact)
        with np.errstate(invalid="ignore"):
            err = np.where(inner, np.abs(vals.ravel() - exact), 0.0)
        k = int(np.argmax(err))
        details["max_interior_error"] = float(err[k])
        table["closed_form"] = exact
        if err[k] > tol:
            witnesses.append(Witness(tuple(pts[k].tolist()), float(vals.ravel()[k]), float(exact[k]),
                                     "grid conjugate departs from the closed form"))
    report = ConvergenceReport("fail" if witnesses else "pass", witnesses, {"tol": tol}, details=details)
    return report, {"conjugate": table}


def cmd_fitzpatrick(ctx: Context):
    T = ctx.obj("operator", OperatorSpec)
    W = ctx.window
    phi = fitzpatrick_fn(T, W)
    chk = check_class_F(phi, ctx.tol("class", 1e-9), ctx.spec.get("witness_points"))
    X, S = np.meshgrid(*W.axes, indexing="ij")
    table = {"x": X.ravel(), "xstar": S.ravel(), "phi": phi.values.ravel()}
    return _fold({"class_F": chk.report}, window=W.to_dict()), {"fitzpatrick": table}


def cmd_check(ctx: Context):
    W = ctx.window
    wp = ctx.spec.get("witness_points")
    if "operator" in ctx.spec:
        T = ctx.obj("operator", OperatorSpec)
        F = fitzpatrick_fn(T, W)
        graph = T.graph if isinstance(T, FiniteGraph) else T.sample(W)
    else:
        g = ctx.obj("function", FnSpec)
        F = separable_bifn(g, W)
        graph = None
    names = ctx.spec.get("checks", ["class_F", "class_Fstar"] + (["monotone", "maximal_window"] if graph is not None else []))
    out = {}
    for name in names:
        if name == "class_F":
            out[name] = check_class_F(F, ctx.tol("class", 1e-9), wp).report
        elif name == "class_Fstar":
            out[name] = check_class_Fstar(F, tol=ctx.tols.get("class"), margin=ctx.tol("margin", 1.0),
                                          witness_points=wp).report
        elif graph is None:
            raise SpecError(f"field 'checks': {name} needs an operator")
        elif name == "monotone":
            out[name] = is_monotone(graph).report
        else:
            out[name] = maximality_audit(graph, W, margin=ctx.tols.get("margin", 1.0), witness_points=wp).report
    return _fold(out, window=W.to_dict()), {}


def cmd_resolve(ctx: Context):
    pts = ctx.probe_points()
    if pts is None:
        raise SpecError("field 'probes.points': resolve needs explicit probe points")
    d = ctx.dim
    if "operator" in ctx.spec:
        T, g = ctx.obj("operator", OperatorSpec), None
    else:
        g = ctx.obj("function", FnSpec)
        T = g.operator()
        if T is None:
            raise SpecError("field 'function': no closed-form subdifferential")
    try:
        Z = resolve_rows(T, pts[:, :d], pts[:, d:])
    except ValueError as exc:
        raise SpecError(str(exc)) from None
    table = {f"x{i}": pts[:, i] for i in range(2 * d)} | {f"z{i}": Z[:, i] for i in range(d)}
    witnesses, details = [], {"operator": T.to_dict()}
    if g is not None:
        grid = ctx.fn_grid
        tol = ctx.tol("tol", grid.h)
        O = np.array([resolve_oracle(g, DualPair(p[:d], p[d:]), grid) for p in pts])
        err = np.abs(Z - O).max(axis=1)
        details["max_oracle_gap"] = float(err.max())
        table |= {f"oracle{i}": O[:, i] for i in range(d)}
        for k in np.flatnonzero(err > tol + 1e-12):
            witnesses.append(Witness(tuple(pts[k].tolist()), float(err[k]), tol, "closed form departs from the grid oracle"))
    report = ConvergenceReport("fail" if witnesses else "pass", witnesses, {"tol": ctx.tol("tol", ctx.fn_grid.h)},
                               details=details)
    return report, {"resolve": table}


def _op_sequence(ctx: Context) -> OperatorSequence:
    rule = sequence_rule(ctx.need("sequence"), ctx.dim)
    if not isinstance(rule(1), OperatorSpec):
        raise SpecError("field 'sequence': expected operator terms")
    return OperatorSequence(rule, ctx.n_max)


def cmd_liminf(ctx: Context):
    seq = _op_sequence(ctx)
    W = ctx.window
    method = ctx.method("both")
    if method not in ("graphs", "resolvent", "both"):
        raise SpecError(f"unknown method {method!r}; choose graphs, resolvent or both")
    tol = ctx.tol("liminf", default_liminf_tol(W))
    slack = ctx.tols.get("slack", 1.0)
    probes = W.points()
    extra = ctx.probe_points()
    if extra is not None:
        probes = np.concatenate([extra, probes])
    found = {}
    if method in ("graphs", "both"):
        found["graphs"] = liminf_graphs(seq, W, tail=ctx.tail, tol=tol, slack=slack, probes=probes)
    if method in ("resolvent", "both"):
        found["resolvent"] = liminf_resolvent(seq, probes, tail=ctx.tail, tol=tol, slack=slack)
    details = {k: {"points": g.points, "count": len(g)} for k, g in found.items()}
    details["method"] = method
    witnesses = []
    if method == "both":
        d = hausdorff(found["graphs"], found["resolvent"])
        details["hausdorff"] = d
        if not d <= 2 * tol:
            witnesses.append(Witness((), d, 2 * tol, "graph and resolvent lower limits disagree"))
    idx = seq.tail_indices(ctx.tail)
    report = ConvergenceReport("fail" if witnesses else "pass", witnesses,
                               {"liminf": tol, "slack": slack, "hausdorff": 2 * tol}, (idx[0], idx[-1]), details)
    tables = {f"liminf_{k}": {"x": g.xs.ravel(), "xstar": g.xstars.ravel()} for k, g in found.items()}
    return report, tables


def cmd_epi(ctx: Context):
    seq_spec = ctx.need("sequence")
    rule = sequence_rule(seq_spec, ctx.dim)
    limit = build_object(ctx.need("limit"), ctx.dim, "limit")
    first = rule(1)
    W = ctx.window
    rep = ctx.spec.get("representative")
    if isinstance(first, OperatorSpec):
        if not isinstance(limit, OperatorSpec):
            raise SpecError("field 'limit': expected an operator to match the sequence")
        if rep == "separable":
            raise SpecError("field 'representative': operator sequences use fitzpatrick_indicator")
        try:
            fs = FnSequence(lambda n: representative_of_convex_graph(rule(n), W), ctx.n_max)
            cand = representative_of_convex_graph(limit, W)
        except ValueError as exc:
            raise SpecError(str(exc)) from None
        grid = W
    else:
        if not isinstance(limit, FnSpec):
            raise SpecError("field 'limit': expected a function to match the sequence")
        if rep == "separable":
            fs = FnSequence(lambda n: separable_bifn(rule(n), W), ctx.n_max)
            cand, grid = separable_bifn(limit, W), W
        else:
            fs, cand, grid = FnSequence(rule, ctx.n_max), limit, ctx.fn_grid
    stride = ctx.spec.get("probes", {}).get("stride", 4)
    probes = ctx.probe_points() if grid is W else None
    if probes is not None:
        from .limits import default_probes
        idx = default_probes(grid, ctx.tols.get("margin", 1.0), stride)
        lattice = np.stack([grid.axes[a][idx[:, a]] for a in range(grid.dim)], axis=1)
        probes = np.concatenate([probes, lattice])
    report = epi_convergence_report(fs, cand, probes=probes, tail=ctx.tail, tol=ctx.tol("epi"), grid=grid,
                                    margin=ctx.tols.get("margin", 1.0), stride=stride)
    return report, {}


COMMANDS = {
    "conjugate": cmd_conjugate,
    "fitzpatrick": cmd_fitzpatrick,
    "check": cmd_check,
    "resolve": cmd_resolve,
    "liminf": cmd_liminf,
    "epi": cmd_epi,
}


# ---------------------------------------------------------------------------
# output

def _clean(obj):
    """JSON-ready copy: 12 significant digits, ``+inf`` as a string, nan as null."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "+inf" if x > 0 else "-inf"
        return float(f"{x:.12g}") + 0.0
    return obj


def dumps(payload) -> str:
    return json.dumps(_clean(payload), sort_keys=True, indent=2) + "\n"


def _fmt(x) -> str:
    x = float(x)
    if math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    return f"{x:.12g}"


def write_csv(path: Path, table: dict):
    cols = list(table)
    data = [np.asarray(table[c]).ravel() for c in cols]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for row in zip(*data):
            w.writerow([_fmt(v) for v in row])


def emit(name: str, payload: dict, tables: dict, out: str | None):
    if out is None:
        sys.stdout.write(dumps(payload))
        return
    d = Path(out)
    d.mkdir(parents=True, exist_ok=True)
    (d / f"{name}.json").write_text(dumps(payload))
    for tname, table in tables.items():
        write_csv(d / f"{name}.{tname}.csv", table)


# ---------------------------------------------------------------------------

def _parser():
    p = argparse.ArgumentParser(prog="monorep", description="Representative functions of monotone operators.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="directory for JSON/CSV reports (stdout JSON when omitted)")
        sp.add_argument("--tol", type=float, help="override the main tolerance")
        sp.add_argument("--tail", type=int, help="number of tail terms")
        sp.add_argument("--nmax", type=int, help="sequence horizon")

    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("spec", help="scenario spec (JSON)")
        common(sp)
        if name == "liminf":
            sp.add_argument("--method", choices=["graphs", "resolvent", "both"])
        elif name == "conjugate":
            sp.add_argument("--method", choices=list(METHODS))
    sp = sub.add_parser("verify", help="run catalog scenarios")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("name", nargs="?")
    g.add_argument("--all", action="store_true")
    common(sp)
    return p


def _positive(args):
    for flag in ("tol", "tail", "nmax"):
        v = getattr(args, flag, None)
        if v is not None and not v > 0:
            raise SpecError(f"--{flag} must be positive")


def _run_verify(args) -> int:
    from .verify import Settings, available, run_scenario

    overrides = {k: v for k, v in (("tol", args.tol), ("tail", args.tail), ("n_max", args.nmax)) if v is not None}
    settings = Settings(**overrides)
    if settings.tail > settings.n_max:
        raise SpecError(f"tail {settings.tail} exceeds n_max {settings.n_max}")
    names = available() if args.all else [args.name]
    if not args.all and args.name not in available():
        raise SpecError(f"unknown scenario {args.name!r}; available: {', '.join(available())}")
    worst = EXIT_OK
    summary = {}
    for name in names:
        report = run_scenario(name, settings)
        summary[name] = report.verdict
        payload = {"command": "verify", "scenario": name, "expected": "pass", "version": __version__,
                   "report": report.to_dict()}
        if args.out is not None or not args.all:
            emit(name, payload, {}, args.out)
        if report.verdict != "pass":
            worst = EXIT_MISMATCH
    if args.all:
        payload = {"command": "verify", "scenarios": summary, "version": __version__}
        emit("summary", payload, {}, args.out)
    return worst


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        _positive(args)
        if args.command == "verify":
            return _run_verify(args)
        spec = load_spec(args.spec)
        ctx = Context(spec, args)
        report, tables = COMMANDS[args.command](ctx)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    name = spec.get("name", Path(args.spec).stem)
    payload = {"command": args.command, "spec": name, "expected": ctx.expect,
               "version": __version__, "report": report.to_dict()}
    emit(f"{name}.{args.command}", payload, tables, args.out)
    return EXIT_OK if report.verdict == ctx.expect else EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
