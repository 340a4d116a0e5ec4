from fractions import Fraction

import pytest

from powapprox.numeric import DomainError
from powapprox.targets import (
    Kind,
    abs_pow_on_sym,
    eval_target,
    pow_on_unit,
    transfer_degrees,
    transfer_target,
)


def test_basic_properties():
    f = pow_on_unit("1/3")
    assert f.kind is Kind.POW_ON_01
    assert f.exact_alpha == Fraction(1, 3)
    assert f.interval == (0, 1)
    g = abs_pow_on_sym(1)
    assert g.is_even and g.interval == (-1, 1) and g.breakpoints == (0,)


def test_rejects_nonpositive_alpha():
    with pytest.raises(ValueError):
        pow_on_unit(0)


def test_eval_and_domain(ctx128):
    g = abs_pow_on_sym("0.5")
    assert eval_target(g, ctx128, "-0.25") == ctx128.mpf("0.5")
    with pytest.raises(DomainError):
        eval_target(pow_on_unit("0.5"), ctx128, -1)


def test_transfer_round_trip():
    f = pow_on_unit("3/4")
    g = transfer_target(f, "to_sym")
    assert g == abs_pow_on_sym("3/2")
    assert transfer_target(g, "to_unit") == f
    assert transfer_degrees(3, 2, "to_sym") == (6, 4)
    assert transfer_degrees(6, 4, "to_unit") == (3, 2)
    with pytest.raises(ValueError):
        transfer_degrees(5, 4, "to_unit")
