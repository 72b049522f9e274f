"""Second-order predictive distributions and their entropy-based uncertainty decomposition."""

from .distributions import (
    Categorical,
    Dirichlet,
    EmpiricalEnsemble,
    FiniteMixture,
    IntervalUniform,
    PointMass,
    SecondOrderDistribution,
    validate,
)
from .ensemble import EnsemblePrediction, ensemble_decompose, js_divergence, parse_member_matrix
from .errors import (
    ConsistencyFailure,
    DimensionMismatch,
    DistributionError,
    EmptyEnsemble,
    IntegrationFailure,
    InvalidSpec,
    NegativeProbability,
    SumNotOne,
)
from .integrate import (
    ENTROPY_NATS,
    EngineConfig,
    ExpectationResult,
    Integrand,
    digamma,
    dirichlet_expected_entropy,
    expect,
    kl_to,
    mc_expect,
    quadrature_1d,
)
from .measures import (
    EntropyBounds,
    UncertaintyTriple,
    aleatoric_bounds,
    aleatoric_uncertainty,
    decompose,
    epistemic_mutual_information,
    kl_divergence,
    shannon_entropy,
    total_uncertainty,
)
from .simulate import (
    DEFAULT_SCHEDULE,
    BayesState,
    CurvePoint,
    bayes_update,
    learning_curve,
)

__version__ = "0.1.0"

__all__ = [
    "Categorical",
    "Dirichlet",
    "EmpiricalEnsemble",
    "FiniteMixture",
    "IntervalUniform",
    "PointMass",
    "SecondOrderDistribution",
    "validate",
    "EnsemblePrediction",
    "ensemble_decompose",
    "js_divergence",
    "parse_member_matrix",
    "ConsistencyFailure",
    "DimensionMismatch",
    "DistributionError",
    "EmptyEnsemble",
    "IntegrationFailure",
    "InvalidSpec",
    "NegativeProbability",
    "SumNotOne",
    "ENTROPY_NATS",
    "EngineConfig",
    "ExpectationResult",
    "Integrand",
    "digamma",
    "dirichlet_expected_entropy",
    "expect",
    "kl_to",
    "mc_expect",
    "quadrature_1d",
    "EntropyBounds",
    "UncertaintyTriple",
    "aleatoric_bounds",
    "aleatoric_uncertainty",
    "decompose",
    "epistemic_mutual_information",
    "kl_divergence",
    "shannon_entropy",
    "total_uncertainty",
    "DEFAULT_SCHEDULE",
    "BayesState",
    "CurvePoint",
    "bayes_update",
    "learning_curve",
]
