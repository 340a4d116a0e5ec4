import math

import numpy as np
import pytest

from powapprox.oracle import discrete_minimax_poly, discrete_minimax_rational, oracle_grid
from powapprox.remez import best_rational
from powapprox.targets import CustomTarget, abs_pow_on_sym, pow_on_unit


def _exp(c, x):
    return math.exp(x) if c is None else c.mp.exp(x)


EXP = CustomTarget(_exp, _exp, (-1, 1), "exp")


def test_grid_is_nested():
    f = pow_on_unit("1/2")
    coarse, fine = oracle_grid(f, 101, 4), oracle_grid(f, 201, 4)
    assert np.array_equal(fine[::2], coarse)
    g = oracle_grid(abs_pow_on_sym(1), 11, 1)
    assert np.allclose(g, -g[::-1])


def test_poly_oracle_known_values():
    assert discrete_minimax_poly(pow_on_unit("1/2"), 1, 2001) == pytest.approx(0.125, rel=1e-6)
    assert discrete_minimax_poly(abs_pow_on_sym(1), 2, 2001) == pytest.approx(0.125, rel=1e-6)


def test_grid_size_checked():
    with pytest.raises(ValueError):
        discrete_minimax_rational(pow_on_unit("1/2"), 3, 3, 50)


@pytest.mark.parametrize("m,n", [(1, 1), (2, 2), (3, 1)])
def test_rational_oracle_matches_engine(ctx128, m, n):
    f = pow_on_unit("1/3")
    E = float(best_rational(f, m, n, ctx128).error)
    assert discrete_minimax_rational(f, m, n, 2001) == pytest.approx(E, rel=1e-3)


def test_custom_target_cross_check(ctx128):
    E = float(best_rational(EXP, 2, 2, ctx128).error)
    assert discrete_minimax_rational(EXP, 2, 2, 2001, power=1) == pytest.approx(E, rel=1e-4)


def test_sqrt_two_one_to_four_digits(ctx128):
    f = pow_on_unit("1/2")
    E = float(best_rational(f, 2, 1, ctx128).error)
    assert discrete_minimax_rational(f, 2, 1, 10001) == pytest.approx(E, rel=5e-5)


def test_discrete_error_grows_with_grid_and_stays_below_engine(ctx128):
    f = pow_on_unit("3/4")
    E = float(best_rational(f, 2, 2, ctx128).error)
    values = [discrete_minimax_rational(f, 2, 2, N) for N in (101, 201, 401, 801)]
    assert all(b >= a * (1 - 1e-9) for a, b in zip(values, values[1:]))
    assert values[-1] <= E * (1 + 1e-9)
