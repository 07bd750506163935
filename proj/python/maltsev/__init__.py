"""Deciding congruence meet semidistributivity with square closures, the
Sigma_n identity packages, and experiments on the Lambda_l family."""

from ._core import (
    Algebra,
    BudgetExceeded,
    Error,
    InputError,
    LambdaFree,
    ParseError,
    catalog,
    check_projection_model,
    decide_sdmeet,
    delta_equals_rectangles,
    emit_sigma,
    eq2_closure,
    h_compose,
    lambda_identities,
    lemma5_reduction_check,
    parse_algebra,
    search_sigma_in_lambda,
    sigma_witness,
    square_convention,
    v_compose,
    validate_lambda_on_free,
)

__all__ = [
    "Algebra",
    "BudgetExceeded",
    "Error",
    "InputError",
    "LambdaFree",
    "ParseError",
    "catalog",
    "check_projection_model",
    "decide_sdmeet",
    "delta_equals_rectangles",
    "emit_sigma",
    "eq2_closure",
    "h_compose",
    "lambda_identities",
    "lemma5_reduction_check",
    "parse_algebra",
    "search_sigma_in_lambda",
    "sigma_witness",
    "square_convention",
    "v_compose",
    "validate_lambda_on_free",
]
