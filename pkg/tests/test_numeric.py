import pickle

import mpmath
import pytest

from powapprox.numeric import (
    DomainError,
    PrecisionError,
    cos_pi,
    elementary,
    from_decimal,
    make_context,
    pow_real,
    sin_pi,
    to_decimal,
)


def test_rejects_low_precision():
    with pytest.raises(PrecisionError):
        make_context(32)


def test_contexts_are_independent():
    a, b = make_context(64), make_context(512)
    before = mpmath.mp.prec
    assert a.mp.prec == 64 and b.mp.prec == 512
    assert mpmath.mp.prec == before
    third = a.mpf(1) / 3
    assert b.mpf(third) == third  # exact widening


def test_decimal_round_trip_is_bit_exact(ctx256):
    x = ctx256.mp.pi / 7
    assert from_decimal(ctx256, to_decimal(ctx256, x)) == x


def test_pow_real(ctx128):
    mp = ctx128.mp
    assert pow_real(ctx128, 0, "0.5") == 0
    assert pow_real(ctx128, 4, "0.5") == 2
    assert abs(pow_real(ctx128, "1e-300", "0.25") - mp.mpf("1e-75")) < mp.mpf("1e-110")
    with pytest.raises(DomainError):
        pow_real(ctx128, -1, "0.5")
    with pytest.raises(DomainError):
        pow_real(ctx128, 0, -1)


def test_elementary_domains(ctx128):
    assert elementary(ctx128, "exp", 0) == 1
    with pytest.raises(DomainError):
        elementary(ctx128, "log", 0)
    with pytest.raises(DomainError):
        elementary(ctx128, "gamma", -2)
    with pytest.raises(ValueError):
        elementary(ctx128, "tan", 1)


def test_trig_pi_exact_at_integers(ctx128):
    assert sin_pi(ctx128, 3) == 0
    assert cos_pi(ctx128, "0.5") == 0


def test_context_pickles():
    ctx = make_context(200)
    back = pickle.loads(pickle.dumps(ctx))
    assert back.precision_bits == 200 and back.mp.prec == 200


def test_exp_log_identity():
    for bits in (64, 200, 672):
        ctx = make_context(bits)
        mp = ctx.mp
        for k in range(1, 40):
            x = mp.mpf(k) ** 3 / 7
            assert abs(mp.exp(mp.log(x)) - x) <= mp.ldexp(x, -bits + 8)
