from .linop import LinOp, NormEstimate
from .tools import (
    Op_apply,
    Op_matrix,
    Op_operator,
    hs_norm,
    kernel_of,
    multiplication_operator,
    multiplier_operator,
    mu,
    mu_inverse,
    op_quantize,
    operator_norm,
    right_quantize,
    right_symbol,
    symbol_l2_norm,
)

__all__ = [
    "LinOp",
    "NormEstimate",
    "Op_apply",
    "Op_matrix",
    "Op_operator",
    "hs_norm",
    "kernel_of",
    "multiplication_operator",
    "multiplier_operator",
    "mu",
    "mu_inverse",
    "op_quantize",
    "operator_norm",
    "right_quantize",
    "right_symbol",
    "symbol_l2_norm",
]
