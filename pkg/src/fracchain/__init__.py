"""Discrete-time semi-Markov chains, fractional difference operators and scaling limits."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    AccuracyError,
    DegenerateInputError,
    DomainError,
    FracChainError,
    NumericRangeError,
    SingularityError,
    UnsupportedInputError,
    ValidationError,
)
from .fracops import (  # noqa: E402
    FracKernel,
    SolutionGrid,
    frac_bernoulli_pmf,
    frac_bernoulli_pmf_table,
    frac_diff,
    frac_diff_seq,
    gen_frac_deriv,
    nb_forward_solve,
    residual_backward,
    solve_backward,
)
from .limits import (  # noqa: E402
    DistanceReport,
    ScalingExperiment,
    frac_poisson_limit_experiment,
    inverse_stable_cdf,
    inverse_stable_density,
    ks_statistic,
    ml_waiting_time_sample,
    sibuya_limit_experiment,
)
from .numerics import gen_binom, log_gamma, mittag_leffler, wright_density_kernel  # noqa: E402
from .semimarkov import (  # noqa: E402
    JumpChain,
    MarkovSpec,
    PathSample,
    SemiMarkovSpec,
    TimeChangeSpec,
    decompose,
    enumerate_exact,
    markov_pmf,
    simulate,
    time_change_sample,
    timechange_autocorr,
)
from .series import TruncatedPowerSeries, counting_pmf_via_gf, ps_binomial, ps_inv, ps_mul  # noqa: E402
from .stochastic import (  # noqa: E402
    DiscretePmf,
    FiniteStep,
    PointMass,
    RenewalPath,
    RngStream,
    Sibuya,
    dml_sample,
    renewal_path,
    sibuya_counting_moments,
    sibuya_counting_pmf,
    sibuya_pmf,
    sibuya_potential,
    sibuya_sample,
    sibuya_survival,
)

__all__ = [
    "AccuracyError",
    "DegenerateInputError",
    "DiscretePmf",
    "DistanceReport",
    "DomainError",
    "FiniteStep",
    "FracChainError",
    "FracKernel",
    "JumpChain",
    "MarkovSpec",
    "NumericRangeError",
    "PathSample",
    "PointMass",
    "RenewalPath",
    "RngStream",
    "ScalingExperiment",
    "SemiMarkovSpec",
    "Sibuya",
    "SingularityError",
    "SolutionGrid",
    "TimeChangeSpec",
    "TruncatedPowerSeries",
    "UnsupportedInputError",
    "ValidationError",
    "counting_pmf_via_gf",
    "decompose",
    "dml_sample",
    "enumerate_exact",
    "frac_bernoulli_pmf",
    "frac_bernoulli_pmf_table",
    "frac_diff",
    "frac_diff_seq",
    "frac_poisson_limit_experiment",
    "gen_binom",
    "gen_frac_deriv",
    "inverse_stable_cdf",
    "inverse_stable_density",
    "ks_statistic",
    "log_gamma",
    "markov_pmf",
    "mittag_leffler",
    "ml_waiting_time_sample",
    "nb_forward_solve",
    "ps_binomial",
    "ps_inv",
    "ps_mul",
    "renewal_path",
    "residual_backward",
    "sibuya_counting_moments",
    "sibuya_counting_pmf",
    "sibuya_limit_experiment",
    "sibuya_pmf",
    "sibuya_potential",
    "sibuya_sample",
    "sibuya_survival",
    "simulate",
    "solve_backward",
    "time_change_sample",
    "timechange_autocorr",
    "wright_density_kernel",
]
