"""Conformable derivative and integral operators (C++ core)."""

import json as _json

from ._core import (
    ConvergenceError,
    DomainError,
    Error,
    EvalResult,
    NonDifferentiable,
    NonFinite,
    PreconditionError,
    SyntaxError,
    UnknownIdentifier,
    __version__,
    deriv_at_terminal,
    deriv_closed_form,
    deriv_limit,
    derivative,
    evaluate,
    evaluate_dual,
    i_of_t,
    integral,
    order_convert,
    parse,
    t_of_i,
    verify,
)


def verify_report(modes=("original", "corrected")):
    """Run the verification harness and return the report as a dict."""
    return _json.loads(verify(list(modes))["json"])


__all__ = [
    "ConvergenceError",
    "DomainError",
    "Error",
    "EvalResult",
    "NonDifferentiable",
    "NonFinite",
    "PreconditionError",
    "SyntaxError",
    "UnknownIdentifier",
    "deriv_at_terminal",
    "deriv_closed_form",
    "deriv_limit",
    "derivative",
    "evaluate",
    "evaluate_dual",
    "i_of_t",
    "integral",
    "order_convert",
    "parse",
    "t_of_i",
    "verify",
    "verify_report",
]
