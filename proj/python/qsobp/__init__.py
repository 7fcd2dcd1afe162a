"""Evolution operators of bisexual populations."""

from ._qsobp import (
    Error,
    Operator,
    apply,
    classify_quadratic,
    construct,
    fixed_points_t,
    four_type_operator,
    invariant_line_c,
    is_identity,
    iterate,
    jacobian,
    predict_limit_v4,
    predict_limit_w,
    run_cli,
    t_step,
    two_type_operator,
    v4_step,
    w_step,
)

__all__ = [
    "Error",
    "Operator",
    "apply",
    "classify_quadratic",
    "construct",
    "fixed_points_t",
    "four_type_operator",
    "invariant_line_c",
    "is_identity",
    "iterate",
    "jacobian",
    "predict_limit_v4",
    "predict_limit_w",
    "run_cli",
    "t_step",
    "two_type_operator",
    "v4_step",
    "w_step",
]
