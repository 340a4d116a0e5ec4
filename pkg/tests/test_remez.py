import pytest

from powapprox.numeric import make_context
from powapprox.rational import RationalApproximant
from powapprox.remez import (
    RemezOptions,
    best_polynomial,
    best_rational,
    default_tolerance,
    equioscillation_diagnostics,
    error_zero_count,
    paradiagonal_degree,
)
from powapprox.targets import CustomTarget, abs_pow_on_sym, pow_on_unit


def test_linear_fit_of_sqrt(ctx128):
    # p(x) = x + 1/8 with error exactly 1/8
    res = best_polynomial(pow_on_unit("1/2"), 1, ctx128)
    assert abs(res.error - ctx128.mpf("0.125")) < ctx128.mpf("1e-30")


def test_quadratic_fit_of_abs(ctx128):
    res = best_polynomial(abs_pow_on_sym(1), 2, ctx128)
    assert abs(res.error - ctx128.mpf("0.125")) < ctx128.mpf("1e-30")
    assert res.defect == 0


def test_rational_sqrt_structure(ctx128):
    f = pow_on_unit("1/2")
    res = best_rational(f, 4, 3, ctx128)
    assert res.converged
    assert len(res.alternant) == 4 + 3 + 2
    assert res.levelness <= 1e-10
    signs = res.alternant.signs
    assert all(s0 == -s1 for s0, s1 in zip(signs, signs[1:]))
    rep = equioscillation_diagnostics(res)
    assert rep.optimal and rep.alternation_count == 9
    assert error_zero_count(res) == 2 * 3 + 2


def test_perturbation_breaks_optimality(ctx128):
    res = best_rational(pow_on_unit("1/2"), 3, 2, ctx128)
    bad = res.approximant.perturbed(1, ctx128.mpf("1e-6"))
    assert not equioscillation_diagnostics(res, approx=bad).optimal


def test_even_target_reduces_degrees(ctx128):
    f = abs_pow_on_sym(1)
    even = best_rational(f, 4, 4, ctx128)
    odd = best_rational(f, 5, 5, ctx128)
    assert odd.defect == 1 and even.defect == 0
    assert abs(odd.error - even.error) <= 1e-25 * even.error


def test_integer_alpha_is_exact(ctx128):
    res = best_rational(pow_on_unit(2), 3, 1, ctx128)
    assert res.error == 0 and res.degenerate
    with pytest.raises(ValueError):
        error_zero_count(res)


def test_custom_target(ctx128):
    f = CustomTarget(lambda c, x: c.mp.exp(x), lambda c, x: c.mp.exp(x), (-1, 1), "exp")
    res = best_rational(f, 2, 2, ctx128)
    assert res.converged and equioscillation_diagnostics(res).optimal
    assert 1e-5 < res.error < 1e-4


def test_seeded_reference_gives_same_answer(ctx128):
    f = pow_on_unit("1/2")
    a = best_rational(f, 5, 4, ctx128)
    b = best_rational(f, 6, 5, ctx128, RemezOptions(initial_reference=a.reference))
    c = best_rational(f, 6, 5, ctx128)
    assert abs(b.error - c.error) <= 1e-20 * c.error


def test_paradiagonal_degree():
    assert paradiagonal_degree(6, "1/2") == 7
    assert paradiagonal_degree(6, "2.5") == 9
    with pytest.raises(ValueError):
        paradiagonal_degree(3, 1)


def test_tolerance_scales_with_precision():
    assert default_tolerance(make_context(64)) == 1e-10
    assert default_tolerance(make_context(672)) < 1e-40


def test_negative_degree_rejected(ctx128):
    with pytest.raises(ValueError):
        best_rational(pow_on_unit("1/2"), -1, 2, ctx128)


def test_approximant_type(ctx128):
    res = best_rational(pow_on_unit("1/3"), 3, 2, ctx128)
    assert isinstance(res.approximant, RationalApproximant)
    x = ctx128.mpf("0.3")
    assert abs(res.error_function(x)) <= res.error * (1 + 1e-8)


def test_chebyshev_example(ctx128):
    # x^2 - (x - 1/8) = (1/8) T_2(2x - 1)
    res = best_polynomial(CustomTarget(lambda c, x: x * x, lambda c, x: 2 * x), 1, ctx128)
    assert abs(res.error - ctx128.mpf("0.125")) < ctx128.mpf("1e-30")


def test_abs_degree_ten(ctx128):
    res = best_polynomial(abs_pow_on_sym(1), 10, ctx128)
    assert 0.25 <= 10 * res.error <= 0.31


def test_smallest_rational_case(ctx128):
    res = best_rational(pow_on_unit("1/2"), 1, 1, ctx128)
    assert len(res.alternant) == 4 and res.levelness <= 1e-10


def test_trace_obeys_sandwich(ctx128):
    # min |error on reference| <= E <= max |error| at every step
    res = best_rational(pow_on_unit("1/3"), 4, 3, ctx128, RemezOptions(record_trace=True))
    assert res.trace
    slack = 1 + 1e-20
    for rec in res.trace:
        assert rec.min_deviation <= res.error * slack
        assert res.error <= rec.max_deviation * slack
