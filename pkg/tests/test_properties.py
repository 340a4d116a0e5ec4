from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from powapprox.asymptotics import abs_constant, denormalize_error, normalize_error, pow_constant
from powapprox.numeric import from_decimal, make_context, to_decimal
from powapprox.targets import abs_pow_on_sym, eval_target

CTX = make_context(160)

alphas = st.fractions(min_value=Fraction(1, 100), max_value=Fraction(7, 2)).filter(lambda q: q > 0)


@given(st.floats(allow_nan=False, allow_infinity=False), st.integers(64, 700))
def test_decimal_round_trip(x, bits):
    ctx = make_context(bits)
    v = ctx.mpf(x) / 3
    assert from_decimal(ctx, to_decimal(ctx, v)) == v


@given(alphas, st.floats(0, 1))
def test_abs_target_is_even(alpha, x):
    f = abs_pow_on_sym(str(alpha))
    assert eval_target(f, CTX, x) == eval_target(f, CTX, -x)


@settings(max_examples=50)
@given(alphas, st.integers(1, 400), st.floats(1e-200, 1.0), st.sampled_from(["on01", "onSym"]))
def test_normalize_inverts(alpha, n, E, family):
    y = normalize_error(n, alpha, E, family, CTX)
    back = denormalize_error(n, alpha, y, family, CTX)
    assert abs(back - CTX.mpf(E)) <= CTX.eps * 8 * CTX.mpf(E)


@given(alphas)
def test_pow_constant_matches_abs_at_double_alpha(alpha):
    assert abs(pow_constant(alpha, CTX) - abs_constant(2 * alpha, CTX)) <= 64 * CTX.eps
