"""Complex transforms of a best approximant to ``x**alpha`` and boundary probes.

Starting from the best approximant ``r`` of type (n+1+floor(alpha), n) with
error ``eps``:

    r_n(z)   = (z**a - r(z)) / (z**a + r(z))
    R_n(w)   = (4 w**(2a) - 1) / w**a * r_n(eps**(1/a) w) - 1 / w**a
    Phi_n(w) = (R_n + sqrt(R_n**2 - 4)) / (8 w**a)
    Psi_n(w) = psi(Phi_n(w)),   psi(z) = z / (sin(pi a) + s i cos(pi a) z)

for ``Im w >= 0`` with ``s = upper_sign``; the lower half plane uses the
reflected map (``-s``) so that ``Psi_n(conj w) = conj Psi_n(w)``.  All
powers use the principal branch with the cut along the negative axis.
With that branch only ``s = +1`` gives ``|Psi_n| -> 1`` along the negative
axis: for real ``r`` and ``z = -x + 0i``, ``|psi(r_n(z))| = 1`` exactly when
``s = +1``.  ``s = -1`` is kept available for comparison.
The square root is taken on the branch with ``|R + sqrt(R**2 - 4)| >= 2``;
when both roots have modulus 2 (``R`` real in [-2, 2]) the root whose
imaginary part has the sign of ``Im w`` is used, positive for real ``w``.
Real ``w`` therefore give boundary values from the upper half plane.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from .numeric import PrecisionContext
from .rational import RationalApproximant


class TransformError(ArithmeticError):
    """A pole or branch point of the transform chain was hit."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


DEFAULT_RADIUS = 4


@dataclass
class TransformContext:
    alpha: object  # context mpf
    r_star: RationalApproximant
    epsilon_n: object
    R: object = DEFAULT_RADIUS
    n: int | None = None
    upper_sign: int = 1

    def __post_init__(self):
        if self.R <= 0:
            raise ValueError("R must be positive")
        if self.epsilon_n <= 0:
            raise ValueError("epsilon_n must be positive")
        if self.upper_sign not in (1, -1):
            raise ValueError("upper_sign must be +1 or -1")

    @property
    def ctx(self) -> PrecisionContext:
        return self.r_star.ctx

    @classmethod
    def from_result(cls, result, R=DEFAULT_RADIUS, upper_sign: int = 1) -> TransformContext:
        ctx = result.ctx
        alpha = result.target.alpha_value(ctx)
        return cls(alpha, result.approximant, result.error, ctx.mpf(R), result.n, upper_sign)


def _cplx(ctx, z):
    mp = ctx.mp
    if isinstance(z, (tuple, list)):
        return mp.mpc(ctx.mpf(z[0]), ctx.mpf(z[1]))
    if isinstance(z, complex):
        return mp.mpc(z.real, z.imag)
    return mp.mpc(z)


def _power(ctx, z, a):
    """Principal ``z**a`` for complex ``z``; ``z = -x + 0i`` lands on arg +pi."""
    mp = ctx.mp
    if z == 0:
        return mp.mpc(0)
    return mp.exp(a * mp.log(z))


def cayley(za, rz):
    """``(za - rz) / (za + rz)``."""
    den = za + rz
    if den == 0:
        raise TransformError("z**alpha + r(z) vanishes", None)
    return (za - rz) / den


def eval_r_n(z, tctx: TransformContext, boundary: bool = False):
    """``(z**a - r(z)) / (z**a + r(z))``.

    Points on the negative axis are rejected unless ``boundary`` is set, in
    which case the limit from the upper half plane is returned.
    """
    ctx = tctx.ctx
    z = _cplx(ctx, z)
    if z.imag == 0 and z.real < 0 and not boundary:
        raise TransformError("z on the branch cut", z)
    za = _power(ctx, z, tctx.alpha)
    rz = tctx.r_star(z)
    den = za + rz
    if den == 0 or abs(den) <= ctx.eps * (abs(za) + abs(rz)):
        raise TransformError("z**alpha + r(z) vanishes", z)
    return (za - rz) / den


def eval_R_n(w, tctx: TransformContext):
    ctx = tctx.ctx
    mp = ctx.mp
    w = _cplx(ctx, w)
    if w == 0:
        raise TransformError("w = 0", w)
    a = tctx.alpha
    wa = _power(ctx, w, a)
    z = mp.power(tctx.epsilon_n, 1 / a) * w
    r = eval_r_n(z, tctx, boundary=True)
    return (4 * wa * wa - 1) / wa * r - 1 / wa


def _branch_sqrt(ctx, R, w):
    mp = ctx.mp
    d = R * R - 4
    if d == 0:
        raise TransformError("branch point R**2 = 4", w)
    s = mp.sqrt(d)
    big, small = abs(R + s), abs(R - s)
    if abs(big - small) <= 64 * ctx.eps * (big + small):
        # both roots of modulus 2: pick Im(s) by the half plane of w
        want = 1 if w.imag >= 0 else -1
        return s if (s.imag >= 0) == (want > 0) else -s
    return s if big > small else -s


def psi(ctx, z, alpha, sign: int = 1):
    """``z / (sin(pi alpha) + sign i cos(pi alpha) z)``."""
    mp = ctx.mp
    s, c = mp.sinpi(alpha), mp.cospi(alpha)
    den = s + sign * mp.mpc(0, 1) * c * z
    if den == 0:
        raise TransformError("pole of psi", z)
    return z / den


def eval_Phi_Psi(w, tctx: TransformContext):
    """``(Phi_n(w), Psi_n(w))``; see the module docstring for branch choices."""
    ctx = tctx.ctx
    w = _cplx(ctx, w)
    R = eval_R_n(w, tctx)
    s = _branch_sqrt(ctx, R, w)
    wa = _power(ctx, w, tctx.alpha)
    phi = (R + s) / (8 * wa)
    sign = tctx.upper_sign if w.imag >= 0 else -tctx.upper_sign
    return phi, psi(ctx, phi, tctx.alpha, sign)


def quadratic_residual(w, tctx: TransformContext):
    """Relative residual of ``64 w**(2a) Phi**2 - 16 w**a R Phi + 4 = 0``."""
    ctx = tctx.ctx
    w = _cplx(ctx, w)
    R = eval_R_n(w, tctx)
    phi, _ = eval_Phi_Psi(w, tctx)
    wa = _power(ctx, w, tctx.alpha)
    u = 8 * wa * phi
    terms = [abs(u * u), abs(2 * R * u), ctx.mpf(4)]
    return abs(u * u - 2 * R * u + 4) / max(terms)


# ------------------------------------------------------------ spot checks

@dataclass
class BoundaryReport:
    R: float
    n: int | None
    alpha: str
    grids: dict
    empirical_c1: float | None
    empirical_c2: float | None
    empirical_c3: float | None
    failures: int
    nonvanishing: bool
    min_abs_psi: float | None
    max_quadratic_residual: float | None
    max_reflection_error: float | None
    excluded: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


def _log_grid(ctx, lo, hi, count):
    mp = ctx.mp
    a, b = mp.log(lo), mp.log(hi)
    return [mp.exp(a + (b - a) * k / (count - 1)) for k in range(count)]


def boundary_spot_check(tctx: TransformContext, R=None, samples: int = 60,
                      circle_samples: int = 48, extent=1) -> BoundaryReport:
    """Sample the boundary quantities controlling ``log |Psi_n|``.

    * ``c1 = sup |log|Psi(w)|| |w|**(2a)`` over the negative axis outside the disc;
    * ``c2 = sup |log|Psi(w) w**a 4 sin(pi a)|| |w|**a`` over the positive axis;
    * ``c3 = sup |log|Psi(w)||`` on the circle ``|w| = R``.

    Radii run log-uniformly from ``R`` to ``extent * eps**(-1/a)``; with
    the default ``extent = 1`` that is the image of the approximation
    interval under ``w = eps**(-1/a) z``.  An off-axis polar grid checks that
    ``Psi`` does not vanish and that reflection holds.  Evaluation failures
    are counted and excluded; the constants are reported, not judged.
    """
    ctx = tctx.ctx
    mp = ctx.mp
    R = ctx.mpf(R if R is not None else tctx.R)
    a = tctx.alpha
    top = ctx.mpf(extent) * mp.power(tctx.epsilon_n, -1 / a)
    radii = _log_grid(ctx, R * (1 + mp.mpf(10) ** -3), top, samples)
    sin_a = mp.sinpi(a)
    failures = 0
    excluded = []
    psi_abs = []
    residuals = []
    reflection = []

    def evaluate(w):
        nonlocal failures
        try:
            _, val = eval_Phi_Psi(w, tctx)
        except TransformError as exc:
            failures += 1
            excluded.append(mp.nstr(w, 8) + ": " + str(exc))
            return None
        psi_abs.append(abs(val))
        return val

    c1 = c2 = c3 = None
    for r in radii:
        w = mp.mpc(-r, 0)
        v = evaluate(w)
        if v is not None and v != 0:
            q = abs(mp.log(abs(v))) * mp.power(r, 2 * a)
            c1 = q if c1 is None else max(c1, q)
        w = mp.mpc(r, 0)
        v = evaluate(w)
        if v is not None and v != 0:
            q = abs(mp.log(abs(v * mp.power(r, a) * 4 * sin_a))) * mp.power(r, a)
            c2 = q if c2 is None else max(c2, q)
    for k in range(circle_samples):
        # skip the two real points of the circle
        theta = mp.pi * (2 * k + 1) / circle_samples
        w = R * mp.expjpi(theta / mp.pi)
        v = evaluate(w)
        if v is not None and v != 0:
            q = abs(mp.log(abs(v)))
            c3 = q if c3 is None else max(c3, q)
    off_axis = [r * mp.expjpi(mp.mpf(t) / 8) for r in radii[:: max(1, samples // 12)]
                for t in (1, 3, 5, 7)]
    for w in off_axis:
        v = evaluate(w)
        vc = evaluate(mp.conj(w))
        if v is not None and vc is not None:
            reflection.append(abs(vc - mp.conj(v)) / max(abs(v), ctx.eps))
        try:
            residuals.append(quadratic_residual(w, tctx))
        except TransformError:
            pass

    fl = lambda v: None if v is None else float(v)  # noqa: E731
    return BoundaryReport(
        R=float(R), n=tctx.n, alpha=mp.nstr(a, 12),
        grids={"negative_axis": len(radii), "positive_axis": len(radii),
               "circle": circle_samples, "off_axis": 2 * len(off_axis),
               "radius_range": [float(R), float(top)]},
        empirical_c1=fl(c1), empirical_c2=fl(c2), empirical_c3=fl(c3),
        failures=failures,
        nonvanishing=all(v > 0 for v in psi_abs),
        min_abs_psi=fl(min(psi_abs)) if psi_abs else None,
        max_quadratic_residual=fl(max(residuals)) if residuals else None,
        max_reflection_error=fl(max(reflection)) if reflection else None,
        excluded=excluded,
    )


def stability(reports: list, threshold: float = 0.5, floor: float = 1e-12) -> dict:
    """Relative change of each empirical constant between consecutive reports.

    Constants below ``floor`` are rounding noise around an exact zero and
    count as unchanged.
    """
    out = {}
    for key in ("empirical_c1", "empirical_c2", "empirical_c3"):
        changes = []
        for r0, r1 in zip(reports, reports[1:]):
            v0, v1 = getattr(r0, key), getattr(r1, key)
            if v0 is None or v1 is None:
                continue
            big = max(abs(v0), abs(v1))
            changes.append(abs(v1 - v0) / big if big > floor else 0.0)
        out[key] = {"changes": changes, "stable": all(c < threshold for c in changes)}
    return out
