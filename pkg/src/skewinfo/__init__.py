"""Monotone quantum metrics from Morozova-Chentsov functions and metric adjusted skew information."""

from .errors import (
    ContinuationError,
    DomainError,
    ParameterError,
    PositivityError,
    QuadratureError,
    RegularityError,
    SkewInfoError,
    UnsupportedMetricError,
)
from .harness import SUITES, SamplerConfig, run_all, run_suite
from .mcfunc import (
    NON_REGULAR,
    KernelGrid,
    MCFunction,
    builtin,
    check_axioms,
    eval_c,
    eval_c_hat,
    eval_d,
    eval_f_lambda,
    metric_constant,
    numeric_metric_constant,
    perturbed,
)
from .qig import (
    QuantumChannel,
    aggregate,
    correlation,
    evolve,
    lambda_skew_info,
    metric,
    mixture_skew_info,
    partial_trace_channel,
    skew_info,
    skew_info_commutator,
    variance,
    wyd_trace_formula,
)
from .quadrature import QuadratureConfig
from .report import PropertyReport
from .representation import (
    HRepresentation,
    RepresentingMeasure,
    boundary_density_oracle,
    h_repr_of,
    measure_of,
    metric_constant_integral,
    reconstruct_from_h,
    reconstruct_from_measure,
)

__version__ = "0.1.0"
