"""Bootstrap-driven PLS regression toolkit.

Core capabilities: PLS1 and sparse PLS fitting, pairs-bootstrap BCa
confidence intervals, bootstrap and cross-validation component-count
criteria, static and dynamic significant-predictor selection, logistic PLS
with divergence guards, and a simulation harness for accuracy/stability
benchmarks.
"""

from .bootstrap import (
    BootstrapDistribution,
    ConfidenceInterval,
    ResamplePlan,
    bca_interval,
    collect_pairs_statistic,
    percentile_interval,
    resample_pairs,
)
from .errors import (
    BoundaryNotIntegral,
    ConfigError,
    DegenerateDirection,
    DimensionMismatch,
    EmptySupport,
    MissingColumn,
    NoValidEta,
    NonBinaryResponse,
    NonFiniteInput,
    ParseError,
    PlsbootError,
    SeparationDivergence,
    SingleClass,
    TooFewReplicates,
    TooManyComponents,
    ZeroVarianceColumn,
)
from .pls import Dataset, PlsFit, pls_fit, pls_weight, predict, standardize
from .seeding import derive_rng, derive_seed

__version__ = "0.1.0"
