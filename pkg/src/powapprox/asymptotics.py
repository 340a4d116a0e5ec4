"""Limit constants, error normalization, extrapolation and classical bounds.

For ``x**alpha`` on [0,1] the scaled errors ``exp(2 pi sqrt(alpha n)) E_nn``
tend to ``4**(1+alpha) |sin(pi alpha)|``; for ``|x|**alpha`` on [-1,1] the
scale is ``exp(pi sqrt(alpha n))`` and the limit ``4**(1+alpha/2)
|sin(pi alpha/2)|``.  The rate of approach is not known, so every
extrapolated value carries a heuristic error bar.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence

from .numeric import PrecisionContext, make_context, to_decimal

# reference value of Bernstein's constant for |x| and the refuted conjecture
BERNSTEIN_BETA_1 = "0.280169499"
BERNSTEIN_BAND = 0.005


class ExtrapolationError(ValueError):
    pass


class Family(str, enum.Enum):
    ON01 = "on01"
    ON_SYM = "onSym"


def _ctx(ctx):
    return ctx if ctx is not None else make_context(128)


def exact_alpha(alpha) -> Fraction:
    if isinstance(alpha, Fraction):
        return alpha
    return Fraction(str(alpha))


def _alpha(ctx: PrecisionContext, alpha):
    q = exact_alpha(alpha)
    if q <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    return q, ctx.mp.mpf(q.numerator) / q.denominator


def pow_constant(alpha, ctx: PrecisionContext | None = None):
    """``4**(1+alpha) |sin(pi alpha)|``, the limit for ``x**alpha`` on [0,1]."""
    ctx = _ctx(ctx)
    mp = ctx.mp
    q, a = _alpha(ctx, alpha)
    if q.denominator == 1:
        return mp.zero
    return mp.power(4, 1 + a) * abs(_sinpi_exact(ctx, q))


def abs_constant(alpha, ctx: PrecisionContext | None = None):
    """``4**(1+alpha/2) |sin(pi alpha/2)|``, the limit for ``|x|**alpha`` on [-1,1]."""
    ctx = _ctx(ctx)
    q, _ = _alpha(ctx, alpha)
    return pow_constant(q / 2, ctx)


def _sinpi_exact(ctx, q: Fraction):
    # sin(pi p/r) with the rational argument reduced before rounding
    mp = ctx.mp
    with mp.extraprec(16):
        return +mp.sinpi(mp.mpf(q.numerator) / q.denominator)


def _scale(ctx, n, alpha, family):
    mp = ctx.mp
    _, a = _alpha(ctx, alpha)
    root = mp.sqrt(a * n)
    return mp.exp(2 * mp.pi * root) if Family(family) is Family.ON01 else mp.exp(mp.pi * root)


def normalize_error(n: int, alpha, E, family: Family | str = Family.ON01,
                    ctx: PrecisionContext | None = None):
    """``exp(2 pi sqrt(alpha n)) E`` on [0,1], ``exp(pi sqrt(alpha n)) E`` on [-1,1]."""
    ctx = _ctx(ctx)
    E = ctx.mpf(E)
    if E <= 0:
        raise ValueError("E must be positive (integer alpha has no normalized sequence)")
    if n < 1:
        raise ValueError("n must be at least 1")
    return _scale(ctx, n, alpha, family) * E


def denormalize_error(n: int, alpha, y, family: Family | str = Family.ON01,
                      ctx: PrecisionContext | None = None):
    ctx = _ctx(ctx)
    return ctx.mpf(y) / _scale(ctx, n, alpha, family)


# ------------------------------------------------------------ extrapolation

def extrapolate_limit(values: Sequence, model: str = "richardson_sqrt",
                      ctx: PrecisionContext | None = None):
    """Estimate ``lim y_n`` from ``[(n, y_n), ...]``; returns ``(limit, error_bar)``.

    ``richardson_sqrt`` fits ``L + c/sqrt(n)`` (plus ``d/n`` with six or
    more entries) by least squares; ``aitken`` applies the delta-squared
    transform to the last three entries.  The error bar is the spread
    between the extrapolant and the one obtained without the last entry.
    """
    ctx = _ctx(ctx)
    pts = [(int(n), ctx.mpf(y)) for n, y in values]
    if len(pts) < 4:
        raise ExtrapolationError("extrapolation needs at least 4 entries")
    if any(b[0] <= a[0] for a, b in zip(pts, pts[1:])):
        raise ExtrapolationError("n must be strictly increasing")
    if model == "richardson_sqrt":
        fit = _richardson_sqrt
    elif model == "aitken":
        fit = _aitken
    else:
        raise ValueError(f"unknown model {model!r}")
    limit = fit(ctx, pts)
    previous = fit(ctx, pts[:-1])
    return limit, abs(limit - previous)


def _richardson_sqrt(ctx, pts):
    mp = ctx.mp
    cols = 3 if len(pts) >= 6 else 2
    rows = []
    for n, _ in pts:
        s = 1 / mp.sqrt(n)
        rows.append([mp.one, s, s * s][:cols])
    A = mp.matrix(rows)
    b = mp.matrix([y for _, y in pts])
    # normal equations are fine at this size and precision
    AtA = A.T * A
    if abs(mp.det(AtA)) <= mp.eps * mp.norm(AtA) ** cols:
        raise ExtrapolationError("degenerate least-squares fit")
    coef = mp.lu_solve(AtA, A.T * b)
    return coef[0]


def _aitken(ctx, pts):
    y0, y1, y2 = (y for _, y in pts[-3:])
    d1, d2 = y1 - y0, y2 - y1
    dd = d2 - d1
    if d1 == 0 and d2 == 0:
        return y2
    if dd == 0:
        raise ExtrapolationError("aitken: zero second difference")
    return y2 - d2 * d2 / dd


# ------------------------------------------------------------ classical bounds

class Bounds(NamedTuple):
    lower: object
    upper: object


@dataclass(frozen=True)
class BoundSpec:
    """A published bound on ``E_nn``.

    ``constants_known`` marks bounds whose constants are explicit.  The
    others are formula shapes with every unknown constant set to one and
    serve only as qualitative references.
    """

    name: str
    family: Family
    constants_known: bool
    lower_formula: str | None
    upper_formula: str | None
    lower: Callable | None = field(default=None, repr=False, compare=False)
    upper: Callable | None = field(default=None, repr=False, compare=False)
    min_n: int = 1
    alpha: str | None = None

    @property
    def qualitative(self) -> bool:
        return not self.constants_known


def _bounds_table():
    def e(mp, x):
        return mp.exp(x)

    def sq(mp, n, a):
        return mp.sqrt(a * n)

    return {
        "Newman": BoundSpec(
            "Newman", Family.ON_SYM, True, "exp(-9 sqrt(n))/2", "3 exp(-sqrt(n))",
            lambda mp, n, a: e(mp, -9 * mp.sqrt(n)) / 2,
            lambda mp, n, a: 3 * e(mp, -mp.sqrt(n)), min_n=4, alpha="1"),
        "Bulanov_sqrt": BoundSpec(
            "Bulanov_sqrt", Family.ON01, True, "exp(-pi sqrt(2n))/3",
            "exp(-pi sqrt(2n) (1 - n**(-1/4)))",
            lambda mp, n, a: e(mp, -mp.pi * mp.sqrt(2 * n)) / 3,
            lambda mp, n, a: e(mp, -mp.pi * mp.sqrt(2 * n) * (1 - mp.power(n, -0.25))),
            alpha="1/2"),
        "Vjacheslavov_sqrt": BoundSpec(
            "Vjacheslavov_sqrt", Family.ON01, True, "exp(-pi sqrt(2n))/3", "exp(-pi sqrt(2n))",
            lambda mp, n, a: e(mp, -mp.pi * mp.sqrt(2 * n)) / 3,
            lambda mp, n, a: e(mp, -mp.pi * mp.sqrt(2 * n)), alpha="1/2"),
        "Ganelius": BoundSpec(
            "Ganelius", Family.ON01, False, "exp(-2 pi sqrt(alpha n))",
            "exp(-2 pi sqrt(alpha n) + n**(1/4))",
            lambda mp, n, a: e(mp, -2 * mp.pi * sq(mp, n, a)),
            lambda mp, n, a: e(mp, -2 * mp.pi * sq(mp, n, a) + mp.power(n, 0.25))),
        "FreudSzabados": BoundSpec(
            "FreudSzabados", Family.ON01, False, None, "exp(-n**(1/3))",
            None, lambda mp, n, a: e(mp, -mp.cbrt(n))),
        "Gonchar_upper": BoundSpec(
            "Gonchar_upper", Family.ON01, False, None, "exp(-pi sqrt(alpha n))",
            None, lambda mp, n, a: e(mp, -mp.pi * sq(mp, n, a))),
        "Gonchar_lower": BoundSpec(
            "Gonchar_lower", Family.ON01, False, "exp(-4 pi sqrt(alpha n))", None,
            lambda mp, n, a: e(mp, -4 * mp.pi * sq(mp, n, a)), None),
    }


BOUNDS = _bounds_table()


def historical_bound(spec: BoundSpec | str, n: int, alpha="1/2",
                     ctx: PrecisionContext | None = None) -> Bounds:
    """Evaluate a bound at ``n``; ``None`` marks a side the bound does not give.

    The Bulanov and Vjacheslavov upper sides contain unknown constants and
    are returned as shapes even though their lower sides are explicit.
    """
    ctx = _ctx(ctx)
    spec = BOUNDS[spec] if isinstance(spec, str) else spec
    if n < spec.min_n:
        raise ValueError(f"{spec.name} holds for n >= {spec.min_n}, got n = {n}")
    q, a = _alpha(ctx, alpha)
    if spec.alpha is not None and q != Fraction(spec.alpha):
        raise ValueError(f"{spec.name} concerns alpha = {spec.alpha} only")
    mp = ctx.mp
    lower = spec.lower(mp, n, a) if spec.lower else None
    upper = spec.upper(mp, n, a) if spec.upper else None
    return Bounds(lower, upper)


def bernstein_large_alpha(alpha, ctx: PrecisionContext | None = None):
    """``Gamma(alpha) |sin(pi alpha / 2)| / pi``, the large-alpha asymptote of beta(alpha)."""
    ctx = _ctx(ctx)
    mp = ctx.mp
    q, a = _alpha(ctx, alpha)
    if q.denominator == 1 and q.numerator % 2 == 0:
        return mp.zero
    return mp.gamma(a) * abs(_sinpi_exact(ctx, q / 2)) / mp.pi


# ------------------------------------------------------------ estimates

@dataclass
class ConstantEstimate:
    alpha: object
    entries: list  # (n, E, normalized)
    extrapolated: object
    error_bar: object
    target: object
    model: str = "richardson_sqrt"
    alternatives: dict = field(default_factory=dict)

    def to_dict(self, ctx: PrecisionContext) -> dict:
        dec = lambda v: to_decimal(ctx, v, 30)  # noqa: E731
        return {
            "alpha": str(self.alpha),
            "entries": [{"n": n, "E": dec(E), "normalized": dec(y)} for n, E, y in self.entries],
            "extrapolated": dec(self.extrapolated),
            "error_bar": dec(self.error_bar),
            "error_bar_note": "heuristic: spread of the last two extrapolants",
            "target": dec(self.target),
            "model": self.model,
            "alternatives": {k: [dec(v[0]), dec(v[1])] for k, v in self.alternatives.items()},
        }


def constant_estimate(alpha, entries, ctx: PrecisionContext | None = None,
                      family: Family | str = Family.ON01,
                      model: str = "richardson_sqrt") -> ConstantEstimate:
    """Normalize ``[(n, E), ...]`` and extrapolate; both models are reported."""
    ctx = _ctx(ctx)
    rows = sorted((int(n), ctx.mpf(E)) for n, E in entries)
    table = [(n, E, normalize_error(n, alpha, E, family, ctx)) for n, E in rows]
    seq = [(n, y) for n, _, y in table]
    alternatives = {}
    for name in ("richardson_sqrt", "aitken"):
        try:
            alternatives[name] = extrapolate_limit(seq, name, ctx)
        except ExtrapolationError:
            pass
    if model not in alternatives:
        raise ExtrapolationError(f"{model} extrapolation failed")
    limit, bar = alternatives[model]
    target = pow_constant(alpha, ctx) if Family(family) is Family.ON01 else abs_constant(alpha, ctx)
    return ConstantEstimate(str(alpha), table, limit, bar, target, model, alternatives)


def bernstein_constant_estimate(max_m: int = 40, ctx: PrecisionContext | None = None,
                                solver=None) -> ConstantEstimate:
    """``m E_m0(|x|, [-1,1])`` over even ``m <= max_m``, extrapolated in ``1/m``.

    The sequence is extrapolated by least squares on ``L + c/m**2 + d/m**4``
    over the last six entries; the error bar is the change when the last
    entry is dropped.  ``solver(m)`` overrides the polynomial engine call.
    """
    from .remez import best_polynomial
    from .targets import abs_pow_on_sym

    if max_m < 10:
        raise ValueError("max_m must be at least 10")
    ctx = _ctx(ctx)
    f = abs_pow_on_sym(1)
    solve = solver or (lambda m: best_polynomial(f, m, ctx).error)
    entries = []
    for m in range(2, max_m + 1, 2):
        E = ctx.mpf(solve(m))
        entries.append((m, E, m * E))
    seq = [(m, y) for m, _, y in entries]
    limit, bar = _even_poly_extrapolate(ctx, seq)
    alternatives = {"inverse_square": (limit, bar)}
    try:
        alternatives["aitken"] = extrapolate_limit(seq, "aitken", ctx)
    except ExtrapolationError:
        pass
    return ConstantEstimate("1", entries, limit, bar, ctx.mpf(BERNSTEIN_BETA_1),
                            "inverse_square", alternatives)


def _even_poly_extrapolate(ctx, seq, window: int = 6):
    mp = ctx.mp

    def fit(pts):
        A = mp.matrix([[mp.one, mp.mpf(1) / m**2, mp.mpf(1) / m**4] for m, _ in pts])
        b = mp.matrix([y for _, y in pts])
        return mp.lu_solve(A.T * A, A.T * b)[0]

    tail = seq[-window:]
    if len(tail) < 4:
        raise ExtrapolationError("need at least 4 entries")
    limit = fit(tail)
    return limit, abs(limit - fit(seq[-window - 1:-1]))


def refuted_bernstein_conjecture(ctx: PrecisionContext | None = None):
    """``1 / (2 sqrt(pi))``, once conjectured to equal beta(1)."""
    ctx = _ctx(ctx)
    return 1 / (2 * ctx.mp.sqrt(ctx.mp.pi))


@dataclass
class EpsilonRelationRow:
    n: int
    ratio: object  # E / (4 |sin pi alpha|) * exp(2 pi sqrt(alpha n))
    root: object  # ratio ** (1/alpha), tends to 4
    identity_residual: object  # |4 |sin| ratio - normalized| / normalized


def epsilon_relation_check(entries, alpha, ctx: PrecisionContext | None = None) -> list:
    """Tabulate ``E exp(2 pi sqrt(alpha n)) / (4 |sin pi alpha|)``, whose limit is ``4**alpha``.

    The quantity is the normalized error divided by ``4 |sin pi alpha|``;
    the residual column measures that identity as computed.
    """
    ctx = _ctx(ctx)
    mp = ctx.mp
    q, a = _alpha(ctx, alpha)
    if q.denominator == 1:
        raise ValueError("alpha must not be an integer (sin(pi alpha) = 0)")
    s = abs(_sinpi_exact(ctx, q))
    rows = []
    for n, E in entries:
        E = ctx.mpf(E)
        ratio = E / (4 * s) * mp.exp(2 * mp.pi * mp.sqrt(a * n))
        normalized = normalize_error(n, q, E, Family.ON01, ctx)
        resid = abs(4 * s * ratio - normalized) / normalized
        rows.append(EpsilonRelationRow(int(n), ratio, mp.power(ratio, 1 / a), resid))
    return rows


def ganelius_exponent(entries, alpha, ctx: PrecisionContext | None = None) -> float:
    """Growth exponent of ``log E + 2 pi sqrt(alpha n)`` in ``n``.

    Least-squares slope of ``log |d_n - d_0 + 1|`` against ``log n``,
    where ``d_n = log E_n + 2 pi sqrt(alpha n)`` and ``d_0`` is the first
    entry; the offset keeps the logarithm defined.  An upper bound of the
    shape ``exp(-2 pi sqrt(alpha n) + c n**(1/4))`` permits exponents up to 1/4.
    """
    ctx = _ctx(ctx)
    mp = ctx.mp
    _, a = _alpha(ctx, alpha)
    d = [(n, mp.log(ctx.mpf(E)) + 2 * mp.pi * mp.sqrt(a * n)) for n, E in entries]
    if len(d) < 3:
        raise ValueError("need at least 3 entries")
    d0 = d[0][1]
    xs = [float(mp.log(n)) for n, _ in d]
    ys = [float(mp.log(abs(v - d0) + 1)) + 0.0 for _, v in d]
    xm, ym = sum(xs) / len(xs), sum(ys) / len(ys)
    sxx = sum((x - xm) ** 2 for x in xs)
    return sum((x - xm) * (y - ym) for x, y in zip(xs, ys)) / sxx
