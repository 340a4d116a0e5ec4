from powapprox.rational import RationalApproximant, barycentric_weights


def _example(ctx):
    # r(x) = (x^2 + 1) / (x + 2) on three nodes
    nodes = [ctx.mpf(v) for v in ("-1", "0", "1")]
    w = barycentric_weights(ctx, nodes)
    p = [x * x + 1 for x in nodes]
    q = [x + 2 for x in nodes]
    return RationalApproximant(ctx, 2, 1, nodes, w, p, q, (-1, 1))


def test_evaluation_and_derivative(ctx128):
    r = _example(ctx128)
    mp = ctx128.mp
    x = mp.mpf("0.3")
    exact = (x * x + 1) / (x + 2)
    assert abs(r(x) - exact) < mp.mpf("1e-35")
    assert r(mp.mpf(0)) == mp.mpf("0.5")
    d = ((2 * x) * (x + 2) - (x * x + 1)) / (x + 2) ** 2
    assert abs(r.derivative(x) - d) < mp.mpf("1e-35")
    assert abs(r.derivative(mp.mpf(1)) - mp.mpf(4) / 9) < mp.mpf("1e-35")


def test_normalized_and_sign_changes(ctx128):
    r = _example(ctx128).normalized()
    assert r.denominator(r.midpoint) == 1
    assert r.denominator_sign_changes([ctx128.mpf(v) for v in (-1, 0, 1)]) == 0


def test_dict_round_trip(ctx128):
    r = _example(ctx128)
    back = RationalApproximant.from_dict(ctx128, r.to_dict())
    assert back.nodes == r.nodes and back.num_values == r.num_values
    assert back.interval == (-1, 1)
