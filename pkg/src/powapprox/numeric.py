"""Arbitrary-precision scalar arithmetic.

Every computation in the package runs inside a :class:`PrecisionContext`,
which owns a private :class:`mpmath.MPContext`.  Values are plain ``mpf``
objects of that context; keeping one mpmath context per precision avoids
touching the global ``mpmath.mp`` state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
from mpmath import libmp

MIN_PRECISION_BITS = 64

ELEMENTARY_KINDS = ("exp", "log", "sin", "cos", "sqrt", "gamma")


class PrecisionError(ValueError):
    """Raised for invalid precision requests."""


class DomainError(ValueError):
    """Raised when an argument lies outside a function's natural domain."""


@dataclass(frozen=True)
class PrecisionContext:
    precision_bits: int
    guard_bits: int = 0
    mp: mpmath.ctx_mp.MPContext = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.precision_bits < MIN_PRECISION_BITS:
            raise PrecisionError(
                f"precision_bits must be >= {MIN_PRECISION_BITS}, got {self.precision_bits}"
            )
        if self.guard_bits < 0:
            raise PrecisionError("guard_bits must be non-negative")
        mp = mpmath.MPContext()
        mp.prec = self.precision_bits
        object.__setattr__(self, "mp", mp)

    def __getstate__(self):
        return {"precision_bits": self.precision_bits, "guard_bits": self.guard_bits}

    def __setstate__(self, state):
        object.__setattr__(self, "precision_bits", state["precision_bits"])
        object.__setattr__(self, "guard_bits", state["guard_bits"])
        self.__post_init__()

    @property
    def digits(self) -> int:
        """Decimal digits carried by the significand."""
        return libmp.prec_to_dps(self.precision_bits)

    @property
    def eps(self):
        return self.mp.ldexp(self.mp.one, 1 - self.precision_bits)

    def mpf(self, value):
        """Convert ``value`` (number, string or foreign mpf) into this context."""
        if isinstance(value, str):
            return self.mp.mpf(value)
        if hasattr(value, "_mpf_"):
            # foreign-context mpf: re-round explicitly to this precision
            return self.mp.make_mpf(
                libmp.mpf_pos(value._mpf_, self.precision_bits, libmp.round_nearest)
            )
        return self.mp.mpf(value)

    def mpc(self, re, im=0):
        return self.mp.mpc(self.mpf(re), self.mpf(im))

    def internal(self, extra_bits: int | None = None):
        """Context manager raising the working precision for an internal computation."""
        extra = self.guard_bits if extra_bits is None else extra_bits
        return self.mp.extraprec(extra)

    def refined(self, extra_bits: int = 64) -> PrecisionContext:
        return PrecisionContext(self.precision_bits + extra_bits, self.guard_bits)


def make_context(precision_bits: int, guard_bits: int = 0) -> PrecisionContext:
    return PrecisionContext(int(precision_bits), int(guard_bits))


def decimal_digits_for(precision_bits: int) -> int:
    """Digits needed so that printing then parsing reproduces every bit."""
    return int(math.ceil(precision_bits * math.log10(2))) + 2


def to_decimal(ctx: PrecisionContext, x, digits: int | None = None) -> str:
    """Serialize ``x`` as a decimal string with an explicit digit count."""
    digits = decimal_digits_for(ctx.precision_bits) if digits is None else digits
    value = ctx.mpf(x)
    if ctx.mp.isinf(value) or ctx.mp.isnan(value):
        return str(value)
    return libmp.to_str(value._mpf_, digits, strip_zeros=True, min_fixed=1, max_fixed=0)


def from_decimal(ctx: PrecisionContext, text: str):
    return ctx.mp.mpf(text)


def pow_real(ctx: PrecisionContext, x, alpha):
    """``x**alpha`` for real ``x >= 0`` through ``exp(alpha*log x)``.

    The logarithm and exponential are evaluated at twice the context
    precision, so the rounded result is correct to the context precision
    even when ``alpha * log x`` is large.
    """
    mp = ctx.mp
    x = ctx.mpf(x)
    alpha = ctx.mpf(alpha)
    if x < 0:
        raise DomainError(f"negative base {x} in pow_real")
    if x == 0:
        if alpha <= 0:
            raise DomainError("0**alpha requires alpha > 0")
        return mp.zero
    if alpha == 1:
        return x
    with mp.workprec(2 * ctx.precision_bits + ctx.guard_bits):
        y = mp.exp(alpha * mp.log(x))
    return +y


def elementary(ctx: PrecisionContext, kind: str, x):
    mp = ctx.mp
    x = ctx.mpf(x)
    if kind == "exp":
        return mp.exp(x)
    if kind == "log":
        if x <= 0:
            raise DomainError(f"log of non-positive argument {x}")
        return mp.log(x)
    if kind == "sin":
        return mp.sin(x)
    if kind == "cos":
        return mp.cos(x)
    if kind == "sqrt":
        if x < 0:
            raise DomainError(f"sqrt of negative argument {x}")
        return mp.sqrt(x)
    if kind == "gamma":
        if x <= 0 and x == mp.floor(x):
            raise DomainError(f"gamma pole at {x}")
        return mp.gamma(x)
    raise ValueError(f"unknown elementary function {kind!r}; expected one of {ELEMENTARY_KINDS}")


def sin_pi(ctx: PrecisionContext, x):
    """``sin(pi*x)``, exact zero at integers."""
    return ctx.mp.sinpi(ctx.mpf(x))


def cos_pi(ctx: PrecisionContext, x):
    return ctx.mp.cospi(ctx.mpf(x))
