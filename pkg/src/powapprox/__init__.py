"""Best uniform rational approximation of ``x**alpha`` in high precision."""

__version__ = "0.1.0"

from .numeric import PrecisionContext, make_context  # noqa: E402
from .targets import abs_pow_on_sym, pow_on_unit  # noqa: E402
from .remez import (  # noqa: E402
    MinimaxResult,
    RemezOptions,
    best_polynomial,
    best_rational,
    paradiagonal_degree,
)
from .asymptotics import abs_constant, pow_constant  # noqa: E402

__all__ = [
    "PrecisionContext",
    "make_context",
    "pow_on_unit",
    "abs_pow_on_sym",
    "MinimaxResult",
    "RemezOptions",
    "best_polynomial",
    "best_rational",
    "paradiagonal_degree",
    "pow_constant",
    "abs_constant",
]
