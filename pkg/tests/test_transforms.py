import pytest

from powapprox.remez import best_rational
from powapprox.targets import pow_on_unit
from powapprox.transforms import (
    BoundaryReport,
    TransformContext,
    TransformError,
    cayley,
    eval_Phi_Psi,
    eval_R_n,
    eval_r_n,
    boundary_spot_check,
    psi,
    quadratic_residual,
    stability,
)


@pytest.fixture(scope="module")
def tctx(ctx128):
    res = best_rational(pow_on_unit("1/2"), 5, 4, ctx128)
    return TransformContext.from_result(res)


def test_cayley():
    assert cayley(3, 1) == 0.5
    with pytest.raises(TransformError):
        cayley(1, -1)


def test_branch_cut_handling(tctx):
    with pytest.raises(TransformError):
        eval_r_n(-0.5, tctx)
    v = eval_r_n(-0.5, tctx, boundary=True)
    assert v.imag != 0


def test_psi_is_unimodular_on_the_cut(ctx128):
    # z = -x from above: psi maps r_n to the unit circle for real r
    mp = ctx128.mp
    a = mp.mpf("0.3")
    for x, r in (("0.2", "0.5"), ("0.7", "0.1")):
        za = mp.exp(a * mp.log(mp.mpc(-mp.mpf(x), 0)))
        z = cayley(za, mp.mpf(r))
        assert abs(abs(psi(ctx128, z, a, 1)) - 1) < mp.mpf("1e-35")


def test_reflection_and_quadratic(tctx):
    mp = tctx.ctx.mp
    w = mp.mpc(7, 3)
    _, v = eval_Phi_Psi(w, tctx)
    _, vc = eval_Phi_Psi(mp.conj(w), tctx)
    assert abs(vc - mp.conj(v)) < mp.mpf("1e-30") * abs(v)
    assert quadratic_residual(w, tctx) < mp.mpf("1e-30")


def test_spot_check_report(tctx):
    rep = boundary_spot_check(tctx, samples=20, circle_samples=16)
    assert isinstance(rep, BoundaryReport)
    assert rep.nonvanishing and rep.failures == 0
    assert rep.max_quadratic_residual < 1e-30
    assert rep.max_reflection_error < 1e-30
    assert '"empirical_c1"' in rep.to_json()


def test_context_validation(tctx):
    with pytest.raises(ValueError):
        TransformContext(tctx.alpha, tctx.r_star, tctx.epsilon_n, R=-1)
    with pytest.raises(ValueError):
        TransformContext(tctx.alpha, tctx.r_star, tctx.epsilon_n, upper_sign=0)


def test_stability_flags():
    def rep(c1):
        return BoundaryReport(4.0, 1, "0.5", {}, c1, 1e-14, 1.0, 0, True, 0.1, 0.0, 0.0)

    out = stability([rep(1.0), rep(1.1), rep(3.0)])
    assert out["empirical_c1"]["changes"][0] == pytest.approx(0.1 / 1.1)
    assert not out["empirical_c1"]["stable"]
    assert out["empirical_c2"]["stable"]  # below the noise floor


def test_psi_is_identity_at_one_half(ctx128):
    z = ctx128.mp.mpc("0.3", "-1.2")
    assert psi(ctx128, z, ctx128.mpf("0.5")) == z


def test_R_n_where_prefactor_vanishes(tctx):
    # 4 w**(2a) = 1 leaves only -w**(-a)
    mp = tctx.ctx.mp
    a = tctx.alpha
    w = mp.power(mp.mpf(1) / 4, 1 / (2 * a))
    assert abs(eval_R_n(w, tctx) + mp.power(w, -a)) < mp.mpf("1e-35")
