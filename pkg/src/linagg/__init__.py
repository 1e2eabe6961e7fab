"""linagg: a numerical laboratory for least-squares aggregation on orthonormal dictionaries.

Builds the classical functional dictionaries (trigonometric, histogram,
piecewise polynomial, Haar), fits least-squares estimators on their spans
through the centered-Gram linear system, computes small-ball constants and
closed-form risk envelopes, and runs seeded Monte-Carlo campaigns that
confront the empirical quantities with the quantitative claims they should
satisfy (excess-risk concentration around D*C^2/n, beta0 scaling laws,
centered-Gram operator-norm scaling, concentration-inequality tail coverage).
"""

__version__ = "0.1.0"

from .dictionaries import (
    FOURIER,
    FULL_CIRCLE,
    HAAR,
    HISTOGRAM,
    PIECEWISE_POLY,
    SYMMETRIC_CIRCLE,
    UNIT_INTERVAL,
    Dictionary,
    Domain,
    gram_identity_error,
    gram_matrix,
    make_dictionary,
)
from .errors import (
    DomainError,
    FitError,
    NumericError,
    ParameterError,
    UnsupportedDictionaryError,
)
from .fejer import (
    fejer_as_model_function,
    fejer_coefficients,
    fejer_eval,
    fejer_l2_sq,
    fejer_tail_bound,
    fejer_tail_check,
)
from .model import (
    ModelFunction,
    NormReport,
    evaluate,
    l2_by_quadrature,
    norms,
    sup_ratio,
    support_probability,
)
from .smallball import (
    LambdaClass,
    MembershipReport,
    SmallBallEstimate,
    estimate_beta0,
    lambda_membership,
    lambda_norm,
    norm_ratio_caps,
    paley_zygmund_lower,
    sample_lambda_members,
    smallball_probability,
    sobolev_inclusion_check,
    sobolev_q_threshold,
    superlevel_probabilities,
    uniform_smallball_lower,
    zeta_even,
)

__all__ = [name for name in dir() if not name.startswith("_")]
