"""The functions under approximation: ``x**alpha`` on [0,1] and ``|x|**alpha`` on [-1,1].

Substituting ``t**2`` for ``x`` turns a best approximation of ``x**alpha``
on [0,1] of type (m, n) into one of ``|t|**(2 alpha)`` on [-1,1] of type
(2m, 2n) with the same error; :func:`transfer_degrees` encodes that map.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .numeric import DomainError, PrecisionContext, pow_real


class Kind(str, enum.Enum):
    POW_ON_01 = "pow01"
    ABS_POW_ON_SYM = "abspow"


class Direction(str, enum.Enum):
    TO_SYM = "to_sym"
    TO_UNIT = "to_unit"


@dataclass(frozen=True)
class TargetFunction:
    """A member of the ``x**alpha`` family together with its interval.

    ``alpha`` is kept as an exact rational string ("1/3", "0.75") so the
    object is hashable, picklable and independent of any working precision.
    """

    kind: Kind
    alpha: str

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "alpha", str(self.alpha).strip())
        if self.exact_alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    @property
    def exact_alpha(self) -> Fraction:
        return Fraction(self.alpha)

    @property
    def interval(self) -> tuple[int, int]:
        return (0, 1) if self.kind is Kind.POW_ON_01 else (-1, 1)

    @property
    def is_even(self) -> bool:
        return self.kind is Kind.ABS_POW_ON_SYM

    @property
    def breakpoints(self) -> tuple[int, ...]:
        """Interior points where the target is not smooth."""
        return (0,) if self.kind is Kind.ABS_POW_ON_SYM else ()

    def alpha_value(self, ctx: PrecisionContext):
        return fraction_to_mpf(ctx, self.exact_alpha)

    def integer_alpha(self) -> int | None:
        q = self.exact_alpha
        return q.numerator if q.denominator == 1 else None

    def __call__(self, ctx: PrecisionContext, x):
        return eval_target(self, ctx, x)

    def derivative(self, ctx: PrecisionContext, x):
        """Derivative of the target; ``+-inf`` at the origin when ``alpha < 1``.

        At the kink ``x = 0`` of ``|x|**alpha`` zero is returned, so a
        sign-change search for a critical point stops there.
        """
        mp = ctx.mp
        x = ctx.mpf(x)
        alpha = self.alpha_value(ctx)
        ax = abs(x)
        if ax == 0:
            if self.kind is Kind.ABS_POW_ON_SYM:
                return mp.zero
            if alpha < 1:
                return mp.inf
            return mp.one if alpha == 1 else mp.zero
        d = alpha * pow_real(ctx, ax, alpha) / ax
        return -d if x < 0 else d


def pow_on_unit(alpha) -> TargetFunction:
    return TargetFunction(Kind.POW_ON_01, str(alpha))


def abs_pow_on_sym(alpha) -> TargetFunction:
    return TargetFunction(Kind.ABS_POW_ON_SYM, str(alpha))


def eval_target(f: TargetFunction, ctx: PrecisionContext, x):
    x = ctx.mpf(x)
    lo, hi = f.interval
    if x < lo or x > hi:
        raise DomainError(f"x = {x} outside [{lo}, {hi}]")
    return pow_real(ctx, abs(x), f.alpha_value(ctx))


def transfer_degrees(m: int, n: int, direction: Direction | str) -> tuple[int, int]:
    if m < 0 or n < 0:
        raise ValueError("degrees must be non-negative")
    direction = Direction(direction)
    if direction is Direction.TO_SYM:
        return 2 * m, 2 * n
    if m % 2 or n % 2:
        raise ValueError(f"cannot halve odd degrees ({m}, {n})")
    return m // 2, n // 2


def transfer_target(f: TargetFunction, direction: Direction | str) -> TargetFunction:
    """Companion target under the ``x -> t**2`` substitution."""
    direction = Direction(direction)
    alpha = f.exact_alpha
    if direction is Direction.TO_SYM:
        if f.kind is not Kind.POW_ON_01:
            raise ValueError("to_sym expects an x**alpha target on [0,1]")
        return abs_pow_on_sym(_fraction_str(2 * alpha))
    if f.kind is not Kind.ABS_POW_ON_SYM:
        raise ValueError("to_unit expects an |x|**alpha target on [-1,1]")
    return pow_on_unit(_fraction_str(alpha / 2))


def _fraction_str(q) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def fraction_to_mpf(ctx: PrecisionContext, q: Fraction):
    return ctx.mp.mpf(q.numerator) / q.denominator


@dataclass(frozen=True)
class CustomTarget:
    """Arbitrary smooth callback target, used for cross-checks of the engine.

    ``func(ctx, x)`` and ``deriv(ctx, x)`` receive context mpf values.
    """

    func: Callable
    deriv: Callable
    interval: tuple = (0, 1)
    name: str = "custom"
    is_even: bool = False
    breakpoints: tuple = ()

    def __call__(self, ctx: PrecisionContext, x):
        return self.func(ctx, ctx.mpf(x))

    def derivative(self, ctx: PrecisionContext, x):
        return self.deriv(ctx, ctx.mpf(x))

    def integer_alpha(self):
        return None
