import pytest

from powapprox.asymptotics import (
    BOUNDS,
    ExtrapolationError,
    abs_constant,
    bernstein_constant_estimate,
    bernstein_large_alpha,
    constant_estimate,
    denormalize_error,
    epsilon_relation_check,
    extrapolate_limit,
    ganelius_exponent,
    historical_bound,
    normalize_error,
    refuted_bernstein_conjecture,
    pow_constant,
)


@pytest.mark.parametrize("alpha,value", [("1/2", 8), ("1/4", 4), ("3/4", 8), ("2", 0)])
def test_pow_constant_values(ctx128, alpha, value):
    assert abs(pow_constant(alpha, ctx128) - value) < ctx128.mpf("1e-35")


def test_abs_constant_values(ctx128):
    assert abs(abs_constant(1, ctx128) - 8) < ctx128.mpf("1e-35")
    assert abs(abs_constant("1/2", ctx128) - 4) < ctx128.mpf("1e-35")


def test_normalization_inverse(ctx128):
    y = normalize_error(18, "1/2", "1e-8", "on01", ctx128)
    assert abs(y - ctx128.mp.exp(6 * ctx128.mp.pi) * ctx128.mpf("1e-8")) < ctx128.mpf("1e-28")
    assert abs(denormalize_error(18, "1/2", y, "on01", ctx128) - ctx128.mpf("1e-8")) < ctx128.mpf("1e-45")
    with pytest.raises(ValueError):
        normalize_error(3, "1/2", 0, "on01", ctx128)


def test_richardson_recovers_model(ctx128):
    mp = ctx128.mp
    seq = [(n, 8 - 3 / mp.sqrt(n) + mp.mpf(2) / n) for n in range(4, 15)]
    limit, bar = extrapolate_limit(seq, "richardson_sqrt", ctx128)
    assert abs(limit - 8) < ctx128.mpf("1e-30") and bar < ctx128.mpf("1e-30")


def test_aitken_on_geometric(ctx128):
    seq = [(n, 1 + ctx128.mpf(2) ** -n) for n in range(1, 6)]
    limit, _ = extrapolate_limit(seq, "aitken", ctx128)
    assert abs(limit - 1) < ctx128.mpf("1e-30")


def test_extrapolation_input_checks(ctx128):
    with pytest.raises(ExtrapolationError):
        extrapolate_limit([(1, 1), (2, 2), (3, 3)], ctx=ctx128)
    with pytest.raises(ExtrapolationError):
        extrapolate_limit([(1, 1), (3, 2), (2, 3), (4, 4)], ctx=ctx128)
    with pytest.raises(ValueError):
        extrapolate_limit([(1, 1), (2, 2), (3, 3), (4, 4)], "euler", ctx128)


def test_constant_estimate_on_synthetic_data(ctx128):
    mp = ctx128.mp
    entries = [(n, (8 - 1 / mp.sqrt(n)) * mp.exp(-2 * mp.pi * mp.sqrt(n / mp.mpf(2))))
               for n in range(4, 12)]
    est = constant_estimate("1/2", entries, ctx128)
    assert abs(est.extrapolated - 8) < ctx128.mpf("1e-25")
    assert est.target == pow_constant("1/2", ctx128)
    assert set(est.alternatives) == {"richardson_sqrt", "aitken"}
    assert est.to_dict(ctx128)["model"] == "richardson_sqrt"


def test_bounds_table(ctx128):
    b = historical_bound("Newman", 4, 1, ctx128)
    assert b.lower < b.upper
    with pytest.raises(ValueError):
        historical_bound("Newman", 3, 1, ctx128)
    with pytest.raises(ValueError):
        historical_bound("Bulanov_sqrt", 4, "1/3", ctx128)
    assert historical_bound("Gonchar_lower", 5, "1/3", ctx128).upper is None
    assert BOUNDS["Ganelius"].qualitative and not BOUNDS["Newman"].qualitative


def test_bernstein_helpers(ctx128):
    # synthetic m E_m = 0.28 + 1/m**2 extrapolates back to 0.28
    est = bernstein_constant_estimate(20, ctx128, solver=lambda m: (ctx128.mpf("0.28") + ctx128.mpf(1) / m**2) / m)
    assert abs(est.extrapolated - ctx128.mpf("0.28")) < ctx128.mpf("1e-25")
    assert abs(refuted_bernstein_conjecture(ctx128) - ctx128.mpf("0.28209479177387814")) < 1e-15
    assert bernstein_large_alpha(2, ctx128) == 0
    with pytest.raises(ValueError):
        bernstein_constant_estimate(8, ctx128)


def test_epsilon_relation_identity(ctx128):
    mp = ctx128.mp
    entries = [(n, mp.exp(-2 * mp.pi * mp.sqrt(n * mp.mpf("0.25")))) for n in (4, 8, 16)]
    for row in epsilon_relation_check(entries, "1/4", ctx128):
        assert row.identity_residual < ctx128.mpf("1e-36")
    with pytest.raises(ValueError):
        epsilon_relation_check(entries, 1, ctx128)


def test_ganelius_exponent_of_pure_rate(ctx128):
    mp = ctx128.mp
    entries = [(n, 8 * mp.exp(-2 * mp.pi * mp.sqrt(n / mp.mpf(2)))) for n in range(4, 12)]
    assert abs(ganelius_exponent(entries, "1/2", ctx128)) < 1e-12
