"""Numerics near q = 1: evaluation, limit fitting, dilogarithm constants."""
from .dilog import cubic_root, li2, reference_constants
from .evaluate import (
    MultisumEvaluator,
    SeriesValue,
    eval_hb,
    eval_series_at,
    function_log_evaluator,
    h_log_evaluator,
    hb_log_evaluator,
    multisum_log_evaluator,
    series_log_evaluator,
)
from .fit import AsymptoticEstimate, estimate_V, fit_limit, root_of_unity_limit, schedule, track_logs
from .pi2 import Pi2RationalVerdict, pi2_rational_test

__all__ = [
    "AsymptoticEstimate",
    "MultisumEvaluator",
    "Pi2RationalVerdict",
    "SeriesValue",
    "cubic_root",
    "estimate_V",
    "eval_hb",
    "eval_series_at",
    "fit_limit",
    "function_log_evaluator",
    "h_log_evaluator",
    "hb_log_evaluator",
    "li2",
    "multisum_log_evaluator",
    "pi2_rational_test",
    "reference_constants",
    "root_of_unity_limit",
    "schedule",
    "series_log_evaluator",
    "track_logs",
]
