"""Exact one-dimensional optimal transport between lattice measures under convolution."""
from .counterexample import (
    ASYMPTOTIC_CONSTANT,
    SandwichBounds,
    SweepResult,
    SweepRow,
    ViolationReport,
    asymptotic_sweep,
    family,
    monotonicity_violation,
    odd_separation,
    pfold_family,
    radiation_plan,
    ratio_identity_failures,
    sandwich,
)
from .cyclic import CycleVerdict, cyclic_monotonicity_check
from .exceptions import (
    DegenerateScaleError,
    LatticeMismatchError,
    MarginalMismatchError,
    PreconditionError,
    UnsupportedInstanceError,
)
from .gaussian import (
    GaussianSpec,
    MonotoneTrace,
    gaussian_monotone_trace,
    logconcave_variant_trace,
    matched_gaussian,
    w2_to_gaussian,
)
from .lp import lp_oracle
from .measure import (
    LatticeMeasure,
    MomentSummary,
    binomial_sigma_weight,
    convolution_power,
    convolve,
    dirac,
    moments,
    normalized_power,
    rademacher_sum,
    scale,
    translate,
)
from .surd import Surd
from .transport import (
    CostSpec,
    OTResult,
    TransportPlan,
    cost_matrix,
    halving_gap,
    monotone_coupling,
    support_distance_lower_bound,
    tanaka_gap,
    transport_cost,
    verify_marginals,
    w_distance,
)

__version__ = "0.1.0"
