"""Computable representative functions of maximal monotone operators on
finite windows: Fitzpatrick functions, grid conjugates, class tests,
resolvents, graph lower limits and epi-convergence diagnostics."""
from ._accel import backend, set_backend, using_backend
from .conjugate import argmax_1d, conjugate, swap_conjugate
from .core import (
    INF,
    AbsShift,
    BiFn,
    Conjugate,
    ConvergenceReport,
    DualPair,
    FiniteGraph,
    FnSpec,
    Grid,
    HorizontalLine,
    IndicatorBox,
    Interval,
    Linear,
    LinearFn,
    NormalConeBox,
    OperatorGraph,
    OperatorSpec,
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
from .fitzpatrick import (
    ClassCheck,
    check_class_F,
    check_class_Fstar,
    extract_L,
    fitzpatrick_fn,
    is_monotone,
    maximality_audit,
    representative_of_convex_graph,
)
from .limits import (
    FnSequence,
    OperatorSequence,
    epi_convergence_report,
    liminf_graphs,
    liminf_resolvent,
    resolvent_bound,
)
from .resolvent import duality_map, resolve, resolve_oracle
from .subdiff import separable_bifn, subdifferential, symmetrized_representative

__version__ = "0.1.0"
