"""Green potential on the slit plane matching ``log w`` on an interval.

For ``a > 1`` we look for a measure ``nu >= 0`` on ``[b, a]`` whose Green
potential in ``C \\ (-inf, 0]``,

    p(w) = int log|(sqrt w + sqrt t) / (sqrt w - sqrt t)| dnu(t),

equals ``log w`` on ``[b, a]`` and exceeds it on ``(0, b)``.

In ``x = sqrt w``, ``y = sqrt t`` the kernel is ``log(x + y) - log|x - y|``.
The density in ``y`` is expanded as ``sum_k c_k T_k(s) / sqrt(1 - s**2)``
with ``y = m + h s``; the logarithmic part then has closed-form moments
(``int log|s - s'| T_k(s') / sqrt(1 - s'**2) ds' = -pi T_k(s) / k``) and the
smooth part ``log(x + y)`` is integrated by Gauss-Chebyshev quadrature.
Collocation at Chebyshev points fixes ``c`` for a given ``b``, and ``b``
is the root of ``sum_k (-1)**k c_k``: the density must vanish like a
square root at ``b`` (a soft edge), while it keeps an inverse square root
at ``a``.  Everything runs in float64.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev
from scipy.optimize import brentq

SQRT2 = math.sqrt(2.0)


class GreenSolverError(RuntimeError):
    pass


def green_function_slit(w, t):
    """Green function of ``C \\ (-inf, 0]`` with pole at ``t``, both points positive."""
    w = np.asarray(w, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(w <= 0) or np.any(t <= 0):
        raise ValueError("w and t must be positive")
    sw, st = np.sqrt(w), np.sqrt(t)
    with np.errstate(divide="ignore"):
        g = np.log(np.abs((sw + st) / (sw - st)))
    return g if g.ndim else float(g)


@dataclass
class GreenPotentialSolution:
    a: float
    b: float
    node_count: int
    coefficients: np.ndarray = field(repr=False)
    total_mass: float = 0.0
    residual: float = 0.0
    quadrature_count: int = 0

    @property
    def _map(self):
        A, B = math.sqrt(self.a), math.sqrt(self.b)
        return (A + B) / 2, (A - B) / 2

    @property
    def nodes(self) -> np.ndarray:
        """Chebyshev collocation points, in ``t``."""
        m, h = self._map
        return (m + h * _cheb_roots(self.node_count)) ** 2

    @property
    def density(self) -> np.ndarray:
        """``dnu/dt`` at :attr:`nodes`."""
        m, h = self._map
        s = _cheb_roots(self.node_count)
        y = m + h * s
        sigma = chebyshev.chebval(s, self.coefficients) / np.sqrt(1 - s * s)
        return sigma / (2 * y)

    def density_profile(self, samples: int = 2001) -> tuple[np.ndarray, np.ndarray]:
        """``(t, f)`` where ``f`` is the density stripped of its endpoint factor."""
        m, h = self._map
        s = np.cos(np.linspace(np.pi, 0, samples))
        return (m + h * s) ** 2, chebyshev.chebval(s, self.coefficients)

    def potential(self, w) -> np.ndarray:
        w = np.atleast_1d(np.asarray(w, dtype=float))
        m, h = self._map
        return _potential(np.sqrt(w), m, h, self.coefficients, self.quadrature_count)

    def to_dict(self) -> dict:
        return {
            "a": repr(self.a),
            "b": repr(self.b),
            "node_count": self.node_count,
            "total_mass": repr(self.total_mass),
            "residual": repr(self.residual),
            "nodes": [repr(v) for v in self.nodes],
            "density": [repr(v) for v in self.density],
        }


def _cheb_roots(count):
    return np.cos(np.pi * (2 * np.arange(count) + 1) / (2 * count))


def _log_moments(s, h, count):
    """``int log|x - y| T_k(s') / sqrt(1 - s'**2) ds'`` for ``x = m + h s``.

    Includes the ``log h`` shift; valid inside and outside [-1, 1].
    """
    s = np.asarray(s, dtype=float)
    k = np.arange(1, count)
    out = np.empty((s.size, count))
    inside = np.abs(s) <= 1
    si = s[inside]
    out[inside, 0] = np.pi * math.log(h / 2)
    out[inside, 1:] = -np.pi * np.cos(np.outer(np.arccos(si), k)) / k
    so = s[~inside]
    if so.size:
        # s = (z + 1/z)/2 with |z| < 1
        z = so - np.sign(so) * np.sqrt(so * so - 1)
        out[~inside, 0] = np.pi * np.log(h / (2 * np.abs(z)))
        out[~inside, 1:] = -np.pi * z[:, None] ** k / k
    return out


def _plus_matrix(x, m, h, count, quad):
    th = np.pi * (2 * np.arange(quad) + 1) / (2 * quad)
    yq = m + h * np.cos(th)
    Tq = np.cos(np.outer(th, np.arange(count)))
    return (np.pi / quad) * np.log(x[:, None] + yq[None, :]) @ Tq


def _potential(x, m, h, c, quad):
    count = len(c)
    plus = _plus_matrix(x, m, h, count, quad)
    minus = _log_moments((x - m) / h, h, count)
    return h * (plus - minus) @ c


def _collocate(a, b, count, quad):
    A, B = math.sqrt(a), math.sqrt(b)
    m, h = (A + B) / 2, (A - B) / 2
    s = _cheb_roots(count)
    x = m + h * s
    K = h * (_plus_matrix(x, m, h, count, quad) - _log_moments(s, h, count))
    return np.linalg.solve(K, 2 * np.log(x))


def _edge_value(a, b, count, quad):
    c = _collocate(a, b, count, quad)
    return float(np.sum(c * (-1.0) ** np.arange(count)))


def solve_extremal(a: float, node_count: int = 200, xtol: float = 1e-13,
                   quadrature_factor: int = 4) -> GreenPotentialSolution:
    """Solve for ``b`` and the density; raises :class:`GreenSolverError` on failure."""
    a = float(a)
    if not a > 1:
        raise ValueError("a must exceed 1")
    if node_count < 50:
        raise ValueError("node_count must be at least 50")
    quad = quadrature_factor * node_count
    edge = lambda b: _edge_value(a, b, node_count, quad)  # noqa: E731

    # scan geometrically for the sign change of the edge coefficient
    grid = np.geomspace(1e-3, a * (1 - 1e-6), 60)
    values = [edge(b) for b in grid]
    brackets = [i for i in range(len(grid) - 1) if np.sign(values[i]) != np.sign(values[i + 1])]
    if not brackets:
        raise GreenSolverError(f"no soft-edge endpoint found for a = {a}")
    i = brackets[0]
    b = brentq(edge, grid[i], grid[i + 1], xtol=xtol * grid[i], rtol=4 * np.finfo(float).eps,
               maxiter=200)

    c = _collocate(a, b, node_count, quad)
    sol = GreenPotentialSolution(a, b, node_count, c, quadrature_count=quad)
    _, f = sol.density_profile()
    if f.min() < -1e-8 * np.abs(f).max():
        raise GreenSolverError(f"negative density for a = {a} (min {f.min():.3e})")
    m, h = sol._map
    sol.total_mass = float(h * np.pi * c[0])
    # residual at the collocation points and halfway between them
    s = np.cos(np.pi * np.arange(2 * node_count + 1)[1:-1] / (2 * node_count))
    x = m + h * s
    sol.residual = float(np.max(np.abs(_potential(x, m, h, c, quad) - 2 * np.log(x))))
    return sol


def check_inequality(sol: GreenPotentialSolution, samples: int = 400) -> dict:
    """``p - log w`` below ``b`` and the sign of ``p`` on a wide grid."""
    below = np.geomspace(1e-8, sol.b * (1 - 1e-3), samples)
    gap = sol.potential(below) - np.log(below)
    wide = np.geomspace(1e-8, 100 * sol.a, samples)
    return {"min_gap_below_b": float(gap.min()), "strict": bool(gap.min() > 0),
            "min_potential": float(sol.potential(wide).min())}


_CACHE: dict = {}


def cached_solution(a: float, node_count: int = 200) -> GreenPotentialSolution:
    key = (float(a), int(node_count))
    if key not in _CACHE:
        _CACHE[key] = solve_extremal(a, node_count)
    return _CACHE[key]


def comparison_parameters(alpha: float, epsilon_n: float) -> tuple[float, float]:
    """``(a, c)`` with ``a = |4 sin(pi alpha) / eps|**(1/alpha)``, ``c = |4 sin(pi alpha)|**(1/alpha)``."""
    alpha = float(alpha)
    if alpha <= 0 or alpha == int(alpha):
        raise ValueError("alpha must be positive and not an integer")
    if epsilon_n <= 0:
        raise ValueError("epsilon_n must be positive")
    s = abs(4 * math.sin(math.pi * alpha))
    return (s / epsilon_n) ** (1 / alpha), s ** (1 / alpha)


def comparison_potential(alpha: float, epsilon_n: float, w, node_count: int = 200):
    """``-alpha p_a(c w)`` with ``a`` and ``c`` from :func:`comparison_parameters`."""
    a, c = comparison_parameters(alpha, epsilon_n)
    if a <= 1:
        raise ValueError(f"a = {a} must exceed 1; epsilon_n is too large")
    sol = cached_solution(a, node_count)
    return -float(alpha) * sol.potential(c * np.asarray(w, dtype=float))


@dataclass
class LimitRow:
    a: float
    b: float
    b_gap: float  # |b - sqrt 2|
    mass_ratio: float  # exp(pi sqrt(2 |nu|)) / a
    mass_gap: float  # |mass_ratio - 4|
    total_mass: float
    residual: float


def _row(sol: GreenPotentialSolution) -> LimitRow:
    ratio = math.exp(math.pi * math.sqrt(2 * sol.total_mass)) / sol.a
    return LimitRow(sol.a, sol.b, abs(sol.b - SQRT2), ratio, abs(ratio - 4),
                    sol.total_mass, sol.residual)


def verify_limits(a_values, node_count: int = 200, workers: int = 1) -> dict:
    """Ladder table with monotonicity flags and a node-doubling check per entry."""
    a_values = [float(a) for a in a_values]
    if any(a <= 1 for a in a_values) or any(y <= x for x, y in zip(a_values, a_values[1:])):
        raise ValueError("a_values must be increasing and exceed 1")
    jobs = [(a, node_count) for a in a_values] + [(a, 2 * node_count) for a in a_values]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            sols = list(pool.map(_solve_job, jobs))
    else:
        sols = [_solve_job(j) for j in jobs]
    base, doubled = sols[: len(a_values)], sols[len(a_values):]
    rows = [_row(s) for s in base]
    doubling = [abs(s2.b - s1.b) / s1.b for s1, s2 in zip(base, doubled)]
    return {
        "rows": rows,
        "b_gap_decreasing": all(r1.b_gap < r0.b_gap for r0, r1 in zip(rows, rows[1:])),
        "mass_gap_decreasing": all(r1.mass_gap < r0.mass_gap for r0, r1 in zip(rows, rows[1:])),
        "mass_increasing": all(r1.total_mass > r0.total_mass for r0, r1 in zip(rows, rows[1:])),
        "doubling_relative_change": doubling,
    }


def _solve_job(job):
    a, n = job
    return solve_extremal(a, n)
