"""Monte Carlo approximation of Piterbarg constants.

Piterbarg constants are expectations of penalized suprema of fractional
Brownian motion,

    E sup_{t in K} exp( sqrt(2) B_alpha(t) - (1 + d) |t|^alpha ),

with K the half-line or the whole line.  Exact values are known only for
the Brownian case alpha = 1; this package approximates the general case by
restricting the supremum to a grid delta * Z truncated to [-T, T], samples
the paths exactly via circulant embedding, and reports the discretization,
truncation, and statistical error components of the approximation.
"""

from .fbm import (
    CirculantSpectrum,
    FgnSpec,
    PathGrid,
    cholesky_sample,
    circulant_spectrum,
    fgn_autocovariance,
    load_spectrum,
    rescale_path,
    sample_fgn,
    sample_two_sided_path,
    save_spectrum,
    spectrum_from_json,
    spectrum_to_json,
)
from .estimator import (
    Domain,
    EstimateResult,
    EstimatorConfig,
    SupRecord,
    estimate_constant,
    grid_count,
    replication_stream,
    sup_functional,
    subsampled_functionals,
)
from .budget import (
    BudgetReport,
    discretization_bound,
    plan_horizon,
    total_budget,
    truncation_bound,
)
from .closed_form import (
    RateConstant,
    piterbarg_bm_full,
    piterbarg_bm_half,
    rate_constant,
    zeta_half,
)
from .rate_study import (
    GapDecayResult,
    GapPoint,
    RatePoint,
    rate_points_csv,
    run_gap_decay,
    run_rate_study_bm,
)

__version__ = "0.1.0"

__all__ = [
    "CirculantSpectrum",
    "FgnSpec",
    "PathGrid",
    "cholesky_sample",
    "circulant_spectrum",
    "fgn_autocovariance",
    "load_spectrum",
    "rescale_path",
    "sample_fgn",
    "sample_two_sided_path",
    "save_spectrum",
    "spectrum_from_json",
    "spectrum_to_json",
    "Domain",
    "EstimateResult",
    "EstimatorConfig",
    "SupRecord",
    "estimate_constant",
    "grid_count",
    "replication_stream",
    "sup_functional",
    "subsampled_functionals",
    "BudgetReport",
    "discretization_bound",
    "plan_horizon",
    "total_budget",
    "truncation_bound",
    "RateConstant",
    "piterbarg_bm_full",
    "piterbarg_bm_half",
    "rate_constant",
    "zeta_half",
    "GapDecayResult",
    "GapPoint",
    "RatePoint",
    "rate_points_csv",
    "run_gap_decay",
    "run_rate_study_bm",
    "__version__",
]
