"""Truncated Wiener chaos expansions of scalar SDEs.

Thin wrapper over the C++ core; see ``help(wienerchaos.solve)``.
"""

from ._core import (
    ChaosError,
    Solution,
    count,
    enumerate,
    euler_maruyama,
    eval_E,
    eval_e,
    gbm_variance_exact,
    hermite,
    kl_partial,
    psi,
    rate_fit,
    solve,
    table_row,
    tail_sum,
    triple_scalar,
)

__all__ = [
    "ChaosError",
    "Solution",
    "count",
    "enumerate",
    "euler_maruyama",
    "eval_E",
    "eval_e",
    "gbm_variance_exact",
    "hermite",
    "kl_partial",
    "psi",
    "rate_fit",
    "solve",
    "table_row",
    "tail_sum",
    "triple_scalar",
]
__version__ = "1.0.0"
