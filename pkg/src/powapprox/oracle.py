"""Brute-force discrete minimax on grids, independent of the Remez engine.

Polynomial problems are a single linear program; rational problems use
the differential correction algorithm, a sequence of linear programs that
converges to the discrete rational minimax error.  Everything runs in
float64 through scipy's HiGHS solver: the oracle checks the engine's
structure to a few digits, not its last bits.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import chebyshev
from scipy.optimize import linprog

from .targets import Kind


class OracleError(RuntimeError):
    pass


_HIGHS = {"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10}


def oracle_grid(f, grid_size: int, power: int = 4) -> np.ndarray:
    """Grid clustered toward the origin, nested under ``N -> 2N - 1``.

    ``u`` runs uniformly over [0, 1] and ``x = u**power``; symmetric
    intervals mirror the construction.  With ``power = 1`` the grid is
    uniform.
    """
    lo, hi = (float(v) for v in f.interval)
    if lo == 0:
        u = np.linspace(0.0, 1.0, grid_size)
        return lo + (hi - lo) * u**power
    u = np.linspace(-1.0, 1.0, grid_size)
    return np.sign(u) * np.abs(u) ** power * hi


def _values(f, x: np.ndarray) -> np.ndarray:
    if getattr(f, "kind", None) in (Kind.POW_ON_01, Kind.ABS_POW_ON_SYM):
        return np.abs(x) ** float(f.exact_alpha)
    return np.array([float(f.func(None, v)) for v in x])


def _basis(x: np.ndarray, lo: float, hi: float, degree: int) -> np.ndarray:
    t = (2 * x - (lo + hi)) / (hi - lo)
    return chebyshev.chebvander(t, degree)


def discrete_minimax_poly(f, m: int, grid_size: int, power: int = 4) -> float:
    """``min_p max_i |f(x_i) - p(x_i)|`` over polynomials of degree ``m``."""
    if grid_size < 10 * (m + 2):
        raise ValueError(f"grid_size must be at least {10 * (m + 2)}")
    x = oracle_grid(f, grid_size, power)
    y = _values(f, x)
    lo, hi = (float(v) for v in f.interval)
    V = _basis(x, lo, hi, m)
    k = m + 1
    ones = np.ones((len(x), 1))
    A = np.vstack([np.hstack([-V, -ones]), np.hstack([V, -ones])])
    b = np.concatenate([-y, y])
    cost = np.zeros(k + 1)
    cost[-1] = 1.0
    res = linprog(cost, A_ub=A, b_ub=b, bounds=[(None, None)] * k + [(0, None)],
                  method="highs", options=_HIGHS)
    if res.status != 0:
        raise OracleError(f"polynomial LP failed: {res.message}")
    return float(np.max(np.abs(y - V @ res.x[:k])))


def discrete_minimax_rational(f, m: int, n: int, grid_size: int, power: int = 4,
                              max_iterations: int = 100, rtol: float = 1e-13) -> float:
    """Discrete rational minimax error by differential correction.

    Iterate: given the current error ``d`` and denominator ``q_k``, solve
    ``min z`` subject to ``|f q - p| - d q <= z q_k`` on the grid with the
    denominator coefficients bounded by one; the new ``p/q`` has error no
    larger than ``d``, and the errors decrease to the discrete optimum.
    Large grids are warm-started from the solution on a nested coarse grid.
    """
    if grid_size < 10 * (m + n + 2):
        raise ValueError(f"grid_size must be at least {10 * (m + n + 2)}")
    if n == 0:
        return discrete_minimax_poly(f, m, grid_size, power)
    return _differential_correction(f, m, n, grid_size, power, max_iterations, rtol)[0]


def _differential_correction(f, m, n, grid_size, power, max_iterations, rtol):
    x = oracle_grid(f, grid_size, power)
    y = _values(f, x)
    lo, hi = (float(v) for v in f.interval)
    Vp = _basis(x, lo, hi, m)
    Vq = _basis(x, lo, hi, n)

    coarse = (grid_size - 1) // 8 + 1
    if grid_size > 1000 and coarse >= 10 * (m + n + 2):
        _, p_coef, q_coef = _differential_correction(f, m, n, coarse, power, max_iterations, rtol)
    else:
        # start from the best polynomial on the grid
        p_coef = _poly_fit(Vp, y)
        q_coef = np.zeros(n + 1)
        q_coef[0] = 1.0
    q_prev = Vq @ q_coef
    if np.any(q_prev <= 0):
        p_coef = _poly_fit(Vp, y)
        q_coef = np.zeros(n + 1)
        q_coef[0] = 1.0
        q_prev = Vq @ q_coef
    delta = float(np.max(np.abs(y - (Vp @ p_coef) / q_prev)))
    if delta == 0.0:
        return 0.0, p_coef, q_coef

    kp, kq = m + 1, n + 1
    cost = np.zeros(kp + kq + 1)
    cost[-1] = 1.0
    bounds = [(None, None)] * kp + [(-1.0, 1.0)] * kq + [(None, None)]
    fq = y[:, None] * Vq
    # q must stay non-negative on the grid
    A3 = np.hstack([np.zeros_like(Vp), -Vq, np.zeros((len(x), 1))])
    b = np.zeros(3 * len(x))
    for _ in range(max_iterations):
        qk = q_prev[:, None]
        # +(f q - p) - d q - z qk <= 0 and -(f q - p) - d q - z qk <= 0
        A1 = np.hstack([-Vp, fq - delta * Vq, -qk])
        A2 = np.hstack([Vp, -fq - delta * Vq, -qk])
        res = linprog(cost, A_ub=np.vstack([A1, A2, A3]), b_ub=b, bounds=bounds,
                      method="highs", options=_HIGHS)
        if res.status != 0:
            raise OracleError(f"differential correction LP failed: {res.message}")
        p_new, q_new = res.x[:kp], res.x[kp:kp + kq]
        q_vals = Vq @ q_new
        if np.any(q_vals <= 0):
            # a root of q touched the grid at float64 resolution; keep the last iterate
            break
        new_delta = float(np.max(np.abs(y - (Vp @ p_new) / q_vals)))
        if new_delta >= delta * (1 - rtol):
            break
        scale = np.max(np.abs(q_vals))
        delta, q_prev = new_delta, q_vals / scale
        p_coef, q_coef = p_new / scale, q_new / scale
    return delta, p_coef, q_coef


def _poly_fit(V, y):
    k = V.shape[1]
    ones = np.ones((len(y), 1))
    A = np.vstack([np.hstack([-V, -ones]), np.hstack([V, -ones])])
    b = np.concatenate([-y, y])
    cost = np.zeros(k + 1)
    cost[-1] = 1.0
    res = linprog(cost, A_ub=A, b_ub=b, bounds=[(None, None)] * k + [(0, None)],
                  method="highs", options=_HIGHS)
    if res.status != 0:
        raise OracleError(f"polynomial LP failed: {res.message}")
    return res.x[:k]
