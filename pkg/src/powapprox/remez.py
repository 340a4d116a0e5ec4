"""Best uniform polynomial and rational approximation by Remez exchange.

Each iteration

1. solves the leveled-error interpolation problem
   ``p(x_i) - (f(x_i) - s_i*lam) q(x_i) = 0`` on the reference
   ``x_0 < ... < x_{m+n+1}``, reduced to an (n+1)x(n+1) eigenvalue problem
   for ``lam``; the eigenvalue whose ``q`` keeps one sign on the reference is
   taken;
2. brackets the zeros of ``e = f - r`` between neighbouring reference
   points and, in each of the resulting segments, locates the extremum of
   the error by a bracketed root search on ``e'`` (this stays robust where
   ``f'`` blows up, e.g. at the origin for ``x**alpha``, ``alpha < 1``);
3. replaces the whole reference by those extrema.

Iteration stops when the extremal error values are level to the requested
tolerance.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

from .numeric import PrecisionContext, to_decimal
from .rational import RationalApproximant, barycentric_weights, lagrange_row
from .targets import Kind, TargetFunction

log = logging.getLogger(__name__)


class RemezError(RuntimeError):
    """Base class for engine failures."""


class ConvergenceError(RemezError):
    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class SingularReference(RemezError):
    """No pole-free leveled solution exists on the current reference."""


@dataclass
class RemezOptions:
    max_iterations: int = 60
    tolerance: float | None = None
    init: str = "auto"
    initial_reference: Sequence | None = None
    continuation: bool = True
    samples_per_segment: int = 12
    record_trace: bool = False
    strict: bool = True


@dataclass
class Alternant:
    points: list
    signs: list
    leveled_error: object

    def __len__(self):
        return len(self.points)


@dataclass
class IterationRecord:
    iteration: int
    leveled_error: object
    min_deviation: object
    max_deviation: object
    levelness: object


@dataclass
class MinimaxResult:
    target: object
    m: int
    n: int
    approximant: RationalApproximant
    error: object
    alternant: Alternant
    iterations: int
    levelness: object
    defect: int
    converged: bool
    precision_bits: int
    reference: list = field(default_factory=list)
    trace: list = field(default_factory=list)
    degenerate: bool = False

    @property
    def ctx(self) -> PrecisionContext:
        return self.approximant.ctx

    def error_function(self, x):
        return self.target(self.ctx, x) - self.approximant(x)


def default_tolerance(ctx: PrecisionContext) -> float:
    """Levelness target: a quarter of the working digits, and never above 1e-10."""
    return min(10.0 ** (-(ctx.digits / 4)), 1e-10)


def paradiagonal_degree(n: int, alpha) -> int:
    """Numerator degree ``n + 1 + floor(alpha)`` of the paradiagonal sequence."""
    from fractions import Fraction

    q = Fraction(str(alpha)) if not isinstance(alpha, Fraction) else alpha
    if q <= 0 or q.denominator == 1:
        raise ValueError(f"alpha must be positive and not an integer, got {alpha}")
    if n < 0:
        raise ValueError("n must be non-negative")
    return n + 1 + math.floor(q)


def best_polynomial(f, m: int, ctx: PrecisionContext, opts: RemezOptions | None = None) -> MinimaxResult:
    return best_rational(f, m, 0, ctx, opts)


def best_rational(f, m: int, n: int, ctx: PrecisionContext,
                  opts: RemezOptions | None = None) -> MinimaxResult:
    """Best uniform approximation of type (m, n) to ``f`` on its interval."""
    if m < 0 or n < 0:
        raise ValueError("degrees must be non-negative")
    opts = opts or RemezOptions()
    m_eff, n_eff = m, n
    if getattr(f, "is_even", False):
        # the best approximant of an even function is even
        m_eff, n_eff = m - m % 2, n - n % 2
    defect = min(m - m_eff, n - n_eff)

    k = f.integer_alpha() if hasattr(f, "integer_alpha") else None
    if isinstance(f, TargetFunction) and k is not None and (
        (f.kind is Kind.POW_ON_01 and k <= m) or (f.kind is Kind.ABS_POW_ON_SYM and k % 2 == 0 and k <= m_eff)
    ):
        return _exact_result(f, m, n, ctx, k, defect)

    reference = None
    if opts.initial_reference is not None:
        reference = [ctx.mpf(x) for x in opts.initial_reference]
        if len(reference) != m_eff + n_eff + 2:
            reference = resample_reference(ctx, reference, m_eff + n_eff + 2, f.interval)
    elif opts.continuation and n_eff > 0 and m_eff + n_eff > 2 and opts.init == "auto":
        reference = _continuation_reference(f, m_eff, n_eff, ctx, opts)
    if reference is None:
        reference = initial_reference(ctx, f, m_eff + n_eff + 2, opts.init)

    result = _remez(f, m_eff, n_eff, ctx, opts, reference)
    result.m, result.n, result.defect = m, n, defect
    result.approximant.m, result.approximant.n = m, n
    return result


def initial_reference(ctx: PrecisionContext, f, size: int, init: str = "auto") -> list:
    """Chebyshev-Lobatto reference, squared toward 0 for ``x**alpha`` on [0,1].

    For even targets on a symmetric interval a symmetric reference with an
    even number of points forces a zero leveled error, so ``size + 1``
    symmetric points are generated and the leftmost is dropped.
    """
    mp = ctx.mp
    lo, hi = (ctx.mpf(v) for v in f.interval)
    even = getattr(f, "is_even", False) and lo == -hi
    count = size + 1 if even else size
    u = [(1 - mp.cospi(mp.mpf(j) / (count - 1))) / 2 for j in range(count)]
    if init in ("auto", "clustered") and getattr(f, "kind", None) is Kind.POW_ON_01:
        u = [v * v for v in u]
    elif init in ("auto", "clustered") and even:
        # the same clustering mirrored around the kink at the origin
        u = [(1 + v * abs(v)) / 2 for v in (2 * w - 1 for w in u)]
    pts = [lo + (hi - lo) * v for v in u]
    return pts[1:] if even else pts


def resample_reference(ctx: PrecisionContext, reference, size: int, interval) -> list:
    """Adapt a converged reference to a problem with ``size`` reference points.

    On [0, lo=0] the positive points are handled in ``log x``: when points
    are added, the geometric spacing below the smallest positive point is
    extended downward (the alternant of a higher-degree approximant to
    ``x**alpha`` reaches deeper toward the singularity); otherwise points are
    interpolated by index.  Symmetric problems resample the nonnegative
    half and mirror it.
    """
    mp = ctx.mp
    lo, hi = (ctx.mpf(v) for v in interval)
    old = sorted(ctx.mpf(x) for x in reference)
    if len(old) == size:
        return old
    if lo == 0 and old[0] == 0 and len(old) >= 3:
        logs = [mp.log(x) for x in old[1:]]
        want = size - 1
        if want > len(logs):
            step = logs[1] - logs[0]
            extra = want - len(logs)
            logs = [logs[0] - step * (extra - j) for j in range(extra)] + logs
        else:
            logs = _index_interp(mp, logs, want)
        pts = [mp.zero] + [mp.exp(v) for v in logs]
        pts[-1] = hi
        return pts
    if lo < 0 < hi:
        pos = []
        for x in sorted(abs(v) for v in old):
            # mirrored extrema agree only to working accuracy
            if not pos or x - pos[-1] > mp.mpf(10) ** -8 * x:
                pos.append(x)
        if pos[0] != 0:
            pos = [mp.zero] + pos
        half = resample_reference(ctx, pos, size // 2 + 1, (0, hi))
        pts = sorted({-x for x in half} | set(half))
        if len(pts) > size:
            pts = pts[1:]
        return pts
    return _index_interp(mp, old, size)


def _index_interp(mp, values, size):
    k = len(values)
    out = []
    for j in range(size):
        s = mp.mpf(j) * (k - 1) / (size - 1) if size > 1 else mp.zero
        i = max(0, min(int(mp.floor(s)), k - 2))
        t = s - i
        out.append(values[i] * (1 - t) + values[i + 1] * t)
    return out


def _continuation_reference(f, m, n, ctx, opts):
    """Seed reference for (m, n) from the converged ladder (m-n+k, k), k < n."""
    low = PrecisionContext(min(ctx.precision_bits, 192))
    sub_opts = RemezOptions(max_iterations=opts.max_iterations, tolerance=1e-12,
                            init="auto", continuation=False, strict=False,
                            samples_per_segment=opts.samples_per_segment)
    reference = None
    step = 2 if getattr(f, "is_even", False) else 1
    for k in range(n % step + max(0, n - m), n, step):
        mm, nn = m - n + k, k
        size = mm + nn + 2
        ref = (resample_reference(low, reference, size, f.interval) if reference is not None
               else initial_reference(low, f, size, "auto"))
        try:
            reference = _remez(f, mm, nn, low, sub_opts, ref).reference
        except RemezError:
            reference = ref
    if reference is None:
        return None
    return resample_reference(ctx, [ctx.mpf(x) for x in reference], m + n + 2, f.interval)


# ---------------------------------------------------------------- core loop

def _remez(f, m, n, ctx, opts, reference) -> MinimaxResult:
    mp = ctx.mp
    tol = opts.tolerance if opts.tolerance is not None else default_tolerance(ctx)
    tol = mp.mpf(tol)
    interval = f.interval
    xs = sorted(ctx.mpf(x) for x in reference)
    trace = []
    levelness = mp.inf
    approx = None
    lam = None
    err_max = None
    new_ref = None
    converged = False
    prev_xs = xs
    prev_lam = None
    stall = ctx.mp.ldexp(ctx.mp.one, -(ctx.precision_bits // 2))
    it = 0
    for it in range(1, opts.max_iterations + 1):
        fs = [f(ctx, x) for x in xs]
        try:
            if approx is None:
                approx, lam = _bootstrap_solve(ctx, xs, fs, m, n, interval)
            approx, lam = solve_leveled(ctx, xs, fs, m, n, interval, guide=approx, guide_level=lam)
        except SingularReference:
            if approx is None or prev_xs is xs:
                raise
            # damp: move halfway back toward the previous reference
            xs = sorted((a + b) / 2 for a, b in zip(xs, prev_xs))
            continue
        if abs(lam) <= mp.eps * 16 * max(abs(v) for v in fs) and _vanishes(ctx, f, approx):
            return _degenerate(f, m, n, ctx, approx, xs, it)
        try:
            new_ref, values = locate_extrema(ctx, f, approx, xs, lam, opts.samples_per_segment)
        except SingularReference:
            if prev_xs is xs:
                raise
            xs = sorted((a + b) / 2 for a, b in zip(xs, prev_xs))
            continue
        devs = [abs(v) for v in values]
        err_max, err_min = max(devs), min(devs)
        levelness = err_max / err_min - 1
        if opts.record_trace:
            trace.append(IterationRecord(it, abs(lam), err_min, err_max, levelness))
        log.debug("remez (%d,%d) it=%d lam=%s levelness=%s", m, n, it,
                  mp.nstr(lam, 8), mp.nstr(levelness, 3))
        prev_xs = xs
        xs = new_ref
        # the leveled error must also have settled; a levelness below the
        # stagnation threshold bounds the next change of lam already
        settled = levelness <= stall or (
            prev_lam is not None and abs(abs(lam) - abs(prev_lam)) <= stall * abs(lam))
        prev_lam = lam
        if levelness <= tol and settled:
            converged = True
            break

    signs = [1 if v > 0 else -1 for v in values]
    result = MinimaxResult(
        target=f, m=m, n=n, approximant=approx, error=err_max,
        alternant=Alternant(list(new_ref), signs, err_max), iterations=it,
        levelness=levelness, defect=0, converged=converged,
        precision_bits=ctx.precision_bits, reference=list(new_ref), trace=trace,
    )
    if not converged and opts.strict:
        raise ConvergenceError(
            f"Remez ({m},{n}) did not converge in {opts.max_iterations} iterations; "
            f"levelness {mp.nstr(levelness, 5)}", result)
    return result


def _vanishes(ctx, f, approx) -> bool:
    lo, hi = (ctx.mpf(v) for v in f.interval)
    scale = max(abs(f(ctx, lo)), abs(f(ctx, hi)), ctx.mp.one)
    probe = [lo + (hi - lo) * ctx.mp.mpf(j) / 37 for j in range(38)]
    return all(abs(f(ctx, x) - approx(x)) <= 64 * ctx.eps * scale for x in probe)


def _degenerate(f, m, n, ctx, approx, xs, it):
    zero = ctx.mp.zero
    return MinimaxResult(
        target=f, m=m, n=n, approximant=approx, error=zero,
        alternant=Alternant(list(xs), [1] * len(xs), zero), iterations=it,
        levelness=zero, defect=0, converged=True, precision_bits=ctx.precision_bits,
        reference=list(xs), degenerate=True,
    )


def _exact_result(f, m, n, ctx, k, defect):
    """``f`` is itself a polynomial of degree k <= m: r = f, E = 0."""
    lo, hi = (ctx.mpf(v) for v in f.interval)
    size = max(m, n) + 1
    nodes = [lo + (hi - lo) * ctx.mp.mpf(j) / max(size - 1, 1) for j in range(size)]
    weights = barycentric_weights(ctx, nodes)
    approx = RationalApproximant(ctx, m, n, nodes, weights, [f(ctx, t) for t in nodes],
                                 [ctx.mp.one] * size, f.interval)
    res = _degenerate(f, m, n, ctx, approx, nodes, 0)
    res.defect = defect
    return res


# ---------------------------------------------------------- leveled solve

def _spread_indices(count: int, total: int) -> list[int]:
    """``count`` indices spread evenly over ``range(total)``, endpoints included."""
    if count == 1:
        return [0]
    return sorted({round(k * (total - 1) / (count - 1)) for k in range(count)})


def _subspace_basis(ctx, nodes, degree):
    """Basis of values at ``nodes`` of polynomials of degree <= ``degree``.

    Returns ``(B, sub)``: the polynomial is parametrized by its values at
    the node subset ``sub`` and ``B`` maps those to the values at all nodes
    by Lagrange interpolation.
    """
    mp = ctx.mp
    total = len(nodes)
    if degree + 1 >= total:
        return mp.eye(total), list(range(total))
    sub = _spread_indices(degree + 1, total)
    sub_nodes = [nodes[i] for i in sub]
    sub_w = barycentric_weights(ctx, sub_nodes)
    B = mp.zeros(total, degree + 1)
    for i, t in enumerate(nodes):
        for j, v in enumerate(lagrange_row(ctx, sub_nodes, sub_w, t)):
            B[i, j] = v
    return B, sub


def solve_leveled(ctx: PrecisionContext, xs, fs, m: int, n: int, interval,
                  guide: RationalApproximant | None = None, guide_level=None):
    """Rational ``r`` of type (m, n) and ``lam`` with ``f - r = (-1)**i lam`` on ``xs``.

    For ``x**alpha`` the values of ``q`` span dozens of orders of magnitude
    across [0, 1], so equations and unknowns are equilibrated with the
    denominator of ``guide`` (the previous iterate) when one is given.
    """
    mp = ctx.mp
    N = len(xs)
    if N != m + n + 2:
        raise ValueError(f"reference has {N} points, expected {m + n + 2}")
    M = max(m, n)
    support = _spread_indices(M + 1, N)
    if len(support) != M + 1:
        raise SingularReference("cannot place support nodes")
    nodes = [xs[i] for i in support]
    weights = barycentric_weights(ctx, nodes)
    L = mp.matrix([lagrange_row(ctx, nodes, weights, x) for x in xs])
    Y, p_sub = _subspace_basis(ctx, nodes, m)
    Z, q_sub = _subspace_basis(ctx, nodes, n)

    row = [mp.one] * N
    dp = [mp.one] * (m + 1)
    dq = [mp.one] * (n + 1)
    if guide is not None:
        level = abs(guide_level) if guide_level else mp.zero
        gq = [abs(guide.denominator(x)) for x in xs]
        if all(v > 0 for v in gq):
            row = [1 / (gq[i] * (abs(fs[i]) + level)) for i in range(N)]
            node_q = [gq[i] for i in support]
            node_f = [abs(fs[i]) + level for i in support]
            dp = [node_q[k] * node_f[k] for k in p_sub]
            dq = [node_q[k] for k in q_sub]

    P = L * Y
    Qm = L * Z
    for i in range(N):
        for j in range(m + 1):
            P[i, j] *= row[i] * dp[j]
        for j in range(n + 1):
            Qm[i, j] *= row[i] * dq[j]
    Qf, Rf = mp.qr(P, mode="full")
    U = Qf[:, m + 1:]
    FQ = mp.matrix(N, n + 1)
    SQ = mp.matrix(N, n + 1)
    for i in range(N):
        s = 1 if i % 2 == 0 else -1
        for j in range(n + 1):
            FQ[i, j] = fs[i] * Qm[i, j]
            SQ[i, j] = s * Qm[i, j]
    G = U.T * FQ
    H = U.T * SQ
    try:
        A = mp.inverse(H) * G if n > 0 else mp.matrix([[G[0, 0] / H[0, 0]]])
    except ZeroDivisionError as exc:
        raise SingularReference("degenerate leveled system") from exc
    if n == 0:
        eigvals, eigvecs = [A[0, 0]], mp.matrix([[1]])
    else:
        eigvals, eigvecs = mp.eig(A)
    scale = max(abs(v) for v in fs) or mp.one
    candidates = []
    for j, ev in enumerate(eigvals):
        if abs(mp.im(ev)) > mp.sqrt(mp.eps) * (abs(ev) + scale * mp.eps):
            continue
        vec = [eigvecs[i, j] for i in range(n + 1)]
        pivot = max(vec, key=abs)
        c = mp.matrix([mp.re(v / pivot) for v in vec])
        qv = Qm * c
        signs = {mp.sign(qv[i]) for i in range(N)}
        if len(signs) != 1 or 0 in signs:
            continue
        candidates.append((abs(mp.re(ev)), mp.re(ev), c))
    if not candidates:
        raise SingularReference("no pole-free leveled solution on reference")
    _, lam, c = min(candidates, key=lambda t: t[0])
    qvals = Qm * c
    rhs = mp.matrix([(fs[i] - (lam if i % 2 == 0 else -lam)) * qvals[i] for i in range(N)])
    top = Qf[:, : m + 1].T * rhs
    d = mp.lu_solve(Rf[: m + 1, : m + 1], top)
    for j in range(m + 1):
        d[j] *= dp[j]
    for j in range(n + 1):
        c[j] *= dq[j]
    a = Y * d
    b = Z * c
    approx = RationalApproximant(ctx, m, n, nodes, weights,
                                 [a[i] for i in range(M + 1)], [b[i] for i in range(M + 1)],
                                 interval).normalized()
    return approx, lam


def _bootstrap_solve(ctx, xs, fs, m, n, interval):
    """Unguided solve, repeated at raised precision until the leveling residual is small.

    Without a previous iterate the equations cannot be equilibrated, and
    the lost digits grow with the spread of ``q`` over the interval.
    """
    mp = ctx.mp
    last_exc = None
    for extra in (0, ctx.precision_bits, 3 * ctx.precision_bits, 7 * ctx.precision_bits):
        with mp.extraprec(extra):
            try:
                approx, lam = solve_leveled(ctx, xs, fs, m, n, interval)
            except SingularReference as exc:
                last_exc = exc
                continue
            worst = max(abs(fs[i] - approx(x) - (lam if i % 2 == 0 else -lam)) for i, x in enumerate(xs))
        if worst <= mp.sqrt(ctx.eps) * abs(lam):
            return approx, lam
    if last_exc is not None and extra == 7 * ctx.precision_bits:
        raise last_exc
    return approx, lam


# ------------------------------------------------------- extremum search

def _bracket_root(ctx, g, a, b, ga, gb, xtol, max_iter=400):
    """Root of ``g`` in [a, b] with ``ga*gb <= 0``: Illinois steps, bisection fallback."""
    mp = ctx.mp
    if ga == 0:
        return a
    if gb == 0:
        return b
    side = 0
    for _ in range(max_iter):
        if abs(b - a) <= xtol:
            break
        if mp.isfinite(ga) and mp.isfinite(gb) and ga != gb:
            c = b - gb * (b - a) / (gb - ga)
            width = b - a
            lo_, hi_ = (a, b) if a < b else (b, a)
            if not (lo_ < c < hi_) or min(abs(c - a), abs(c - b)) < abs(width) * mp.mpf(2) ** -40 and side == 0:
                c = (a + b) / 2
        else:
            c = (a + b) / 2
        gc = g(c)
        if gc == 0:
            return c
        if (gc > 0) == (gb > 0):
            b, gb = c, gc
            if side == -1 and mp.isfinite(ga):
                ga /= 2
            side = -1
        else:
            a, ga = c, gc
            if side == 1 and mp.isfinite(gb):
                gb /= 2
            side = 1
    return (a + b) / 2


def _segment_samples(ctx, a, b, count):
    """Sample points in [a, b]; geometric when the segment spans decades."""
    mp = ctx.mp
    pts = []
    if a >= 0 and b > 0 and (a == 0 or b / a > 8):
        lo_pos = a if a > 0 else b * mp.mpf(2) ** -(3 * count)
        ratio = (b / lo_pos) ** (mp.one / count)
        pts = [lo_pos * ratio ** j for j in range(count + 1)]
        if a == 0:
            pts = [mp.zero] + pts
    elif b <= 0 and a < 0 and (b == 0 or a / b > 8):
        return [-x for x in reversed(_segment_samples(ctx, -b, -a, count))]
    elif a < 0 < b:
        left = _segment_samples(ctx, a, mp.zero, count)
        right = _segment_samples(ctx, mp.zero, b, count)
        return left[:-1] + right
    else:
        pts = [a + (b - a) * mp.mpf(j) / count for j in range(count + 1)]
    pts[0], pts[-1] = a, b
    return pts


def locate_extrema(ctx: PrecisionContext, f, approx, xs, lam, samples: int = 12):
    """New reference: one extremum of the signed error per zero-delimited segment."""
    mp = ctx.mp
    lo, hi = (ctx.mpf(v) for v in f.interval)
    err = lambda x: f(ctx, x) - approx(x)  # noqa: E731
    derr = lambda x: f.derivative(ctx, x) - approx.derivative(x)  # noqa: E731
    N = len(xs)
    sgn0 = 1 if lam > 0 else -1
    evals = [err(x) for x in xs]
    breakpoints = [ctx.mpf(bp) for bp in getattr(f, "breakpoints", ())]
    zero_tol_bits = ctx.precision_bits // 2 + 16
    zeros = []
    for i in range(N - 1):
        a, b = xs[i], xs[i + 1]
        ea, eb = evals[i], evals[i + 1]
        if ea == 0 or eb == 0 or (ea > 0) == (eb > 0):
            raise SingularReference(f"no sign change of the error between reference points {i} and {i + 1}")
        xtol = abs(b - a) * mp.mpf(2) ** -zero_tol_bits
        zeros.append(_bracket_root(ctx, err, a, b, ea, eb, xtol))
    bounds = [lo] + zeros + [hi]
    new_ref, values = [], []
    xtol_bits = ctx.precision_bits // 2 + 24
    for i in range(N):
        sgn = sgn0 if i % 2 == 0 else -sgn0
        a, b = bounds[i], bounds[i + 1]
        pts = _segment_samples(ctx, a, b, samples)
        if xs[i] not in pts:
            pts = sorted(pts + [xs[i]])
        for bp in breakpoints:
            if a < bp < b and bp not in pts:
                pts = sorted(pts + [bp])
        vals = [sgn * err(x) for x in pts]
        j = max(range(len(pts)), key=lambda k: vals[k])
        x_best, v_best = pts[j], vals[j]
        # refine interior maxima by a bracketed search on the derivative sign
        cands = []
        if 0 < j:
            cands.append((pts[j - 1], pts[j]))
        if j < len(pts) - 1:
            cands.append((pts[j], pts[j + 1]))
        g = lambda x: sgn * derr(x)  # noqa: E731
        for l, r in cands:
            gl, gr = g(l), g(r)
            if gl > 0 and gr < 0 or (gl > 0 and gr == 0) or (gl == 0 and gr < 0):
                xtol = abs(r - l) * mp.mpf(2) ** -xtol_bits
                x = _bracket_root(ctx, g, l, r, gl, gr, xtol)
                v = sgn * err(x)
                if v > v_best:
                    x_best, v_best = x, v
        for bp in breakpoints:
            if x_best != bp and abs(x_best - bp) <= abs(b - a) * mp.mpf(2) ** -(xtol_bits - 8):
                # the derivative jumps at a kink; the search converges onto it
                x_best, v_best = bp, sgn * err(bp)
        new_ref.append(x_best)
        values.append(sgn * v_best)
    return new_ref, values


# ------------------------------------------------------------ diagnostics

def error_zero_count(result: MinimaxResult, f=None, grid_size: int = 400, cap: int = 6400) -> int:
    """Sign changes of ``f - r`` on a refinement grid of the open interval.

    The grid is geometric toward the origin and is refined until two
    successive counts agree.  A vanishing error function is degenerate and
    rejected.
    """
    f = f or result.target
    ctx = result.ctx
    if result.degenerate or result.error == 0:
        raise ValueError("degenerate result: the error function vanishes identically")
    previous = None
    size = grid_size
    while size <= cap:
        count = _sign_changes(ctx, f, result.approximant, _diagnostic_grid(ctx, f, result, size))
        if count == previous:
            return count
        previous = count
        size *= 2
    raise RemezError(f"zero count did not stabilize up to {cap} grid points")


def _diagnostic_grid(ctx, f, result, size):
    """Grid through every alternant point plus samples between them."""
    lo, hi = (ctx.mpf(v) for v in f.interval)
    pts = sorted(set(result.alternant.points) | {lo, hi})
    per = max(4, size // max(1, len(pts) - 1))
    grid = []
    for a, b in zip(pts, pts[1:]):
        grid.extend(_segment_samples(ctx, a, b, per)[:-1])
    grid.append(hi)
    return [x for x in grid if lo < x < hi] if lo == 0 else grid


def _sign_changes(ctx, f, approx, grid):
    signs = []
    for x in grid:
        v = f(ctx, x) - approx(x)
        if v != 0:
            signs.append(v > 0)
    return sum(1 for s0, s1 in zip(signs, signs[1:]) if s0 != s1)


@dataclass
class EquioscillationReport:
    alternation_count: int
    alternation_points: list
    levelness: object
    max_deviation: object
    reported_error: object
    relative_gap: object
    optimal: bool

    def to_dict(self, ctx) -> dict:
        return {
            "alternation_count": self.alternation_count,
            "alternation_points": [to_decimal(ctx, x) for x in self.alternation_points],
            "levelness": ctx.mp.nstr(self.levelness, 6),
            "max_deviation": to_decimal(ctx, self.max_deviation),
            "reported_error": to_decimal(ctx, self.reported_error),
            "relative_gap": ctx.mp.nstr(self.relative_gap, 6),
            "optimal": self.optimal,
        }


def equioscillation_diagnostics(result: MinimaxResult, f=None, approx=None,
                                per_segment: int = 24, tolerance: float = 1e-10) -> EquioscillationReport:
    """Re-derive the extremal structure of ``f - r`` on a fine grid.

    Local extrema of the error are located by refinement, collapsed into
    runs of equal sign keeping the largest, and the alternation count is
    the number of those runs whose magnitude reaches ``(1 - 1e-10) E``.
    ``approx`` replaces the result's approximant (e.g. a perturbed copy).
    """
    f = f or result.target
    ctx = result.ctx
    mp = ctx.mp
    approx = approx or result.approximant
    lo, hi = (ctx.mpf(v) for v in f.interval)
    err = lambda x: f(ctx, x) - approx(x)  # noqa: E731
    derr = lambda x: f.derivative(ctx, x) - approx.derivative(x)  # noqa: E731
    pts = sorted(set(result.reference or result.alternant.points) | {lo, hi})
    grid = []
    for a, b in zip(pts, pts[1:]):
        grid.extend(_segment_samples(ctx, a, b, per_segment)[:-1])
    grid.append(hi)
    for bp in getattr(f, "breakpoints", ()):
        grid.append(ctx.mpf(bp))
    grid = sorted(set(grid))
    vals = [err(x) for x in grid]
    extrema = []
    xtol_bits = ctx.precision_bits // 2 + 24
    for k, (x, v) in enumerate(zip(grid, vals)):
        left = vals[k - 1] if k > 0 else None
        right = vals[k + 1] if k < len(grid) - 1 else None
        av = abs(v)
        if (left is None or av >= abs(left)) and (right is None or av >= abs(right)):
            sgn = 1 if v > 0 else -1
            best_x, best_v = x, v
            g = lambda t, s=sgn: s * derr(t)  # noqa: E731
            brackets = []
            if k > 0:
                brackets.append((grid[k - 1], x))
            if right is not None:
                brackets.append((x, grid[k + 1]))
            for l, r in brackets:
                gl, gr = g(l), g(r)
                if gl > 0 and gr < 0:
                    t = _bracket_root(ctx, g, l, r, gl, gr, abs(r - l) * mp.mpf(2) ** -xtol_bits)
                    tv = err(t)
                    if abs(tv) > abs(best_v) and (tv > 0) == (v > 0):
                        best_x, best_v = t, tv
            extrema.append((best_x, best_v))
    # collapse equal-sign runs
    runs = []
    for x, v in extrema:
        if v == 0:
            continue
        if runs and (runs[-1][1] > 0) == (v > 0):
            if abs(v) > abs(runs[-1][1]):
                runs[-1] = (x, v)
        else:
            runs.append((x, v))
    max_dev = max(abs(v) for _, v in runs) if runs else mp.zero
    thresh = (1 - mp.mpf(tolerance)) * max_dev
    big = [(x, v) for x, v in runs if abs(v) >= thresh]
    # longest alternating chain among the large extrema
    chain = []
    for x, v in big:
        if not chain or (chain[-1][1] > 0) != (v > 0):
            chain.append((x, v))
    levelness = (max_dev / min(abs(v) for _, v in _top_runs(runs, result)) - 1) if runs else mp.zero
    reported = result.error
    gap = abs(max_dev - reported) / reported if reported else mp.zero
    required = result.m + result.n + 2 - result.defect
    optimal = len(chain) >= required and levelness <= tolerance
    return EquioscillationReport(len(chain), [x for x, _ in chain], levelness, max_dev,
                                 reported, gap, optimal)


def _top_runs(runs, result):
    """The ``m+n+2-defect`` alternating extrema that matter for leveling."""
    need = result.m + result.n + 2 - result.defect
    if len(runs) <= need:
        return runs
    # drop the smallest extremal runs in pairs of the smallest magnitude at the ends
    ranked = sorted(runs, key=lambda t: abs(t[1]), reverse=True)
    return ranked[:need]
