"""Verification toolkit for stabilizer-code programs.

Parse programs in a small stabilizer-centric language, push assertions
through them with forward Hoare-style proof rules, decide implications
over signed-Pauli tableaus, and cross-check every symbolic proof against
a dense density-matrix interpreter.
"""

from .pauli import (
    GateApp,
    SignedPauli,
    StabilizerExpr,
    commutes,
    conjugate_by_gate,
    expr_conjugate,
    expr_mul,
    expr_to_matrix,
    mul_pauli,
    parse_expr,
    parse_pauli,
)

__all__ = [
    "GateApp",
    "SignedPauli",
    "StabilizerExpr",
    "commutes",
    "conjugate_by_gate",
    "expr_conjugate",
    "expr_mul",
    "expr_to_matrix",
    "mul_pauli",
    "parse_expr",
    "parse_pauli",
]

__version__ = "0.1.0"
