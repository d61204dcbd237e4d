"""Cesaro-weighted explicit formula for generalised Hardy-Littlewood numbers.

The exact side is the weighted sum of r_{l,2}(n), the number of ways of
writing n = m1^l + m2^2 weighted by the von Mangoldt function of m1.  The
analytic side is the seven-term development M1..M7 built from zeta zeros
and Bessel functions of complex order.
"""

from .arith import (
    CesaroParams,
    SieveTable,
    build_lambda_table,
    direct_cesaro,
    exp_sum_identity_check,
    rep_count,
    rep_counts,
)
from .explicit import (
    EvalReport,
    TermBreakdown,
    TruncationConfig,
    evaluate,
)
from .zeros import ZeroSet, bundled_zeros_path, load_zeros

__all__ = [
    "CesaroParams",
    "EvalReport",
    "SieveTable",
    "TermBreakdown",
    "TruncationConfig",
    "ZeroSet",
    "build_lambda_table",
    "bundled_zeros_path",
    "direct_cesaro",
    "evaluate",
    "exp_sum_identity_check",
    "load_zeros",
    "rep_count",
    "rep_counts",
]

__version__ = "0.1.0"
