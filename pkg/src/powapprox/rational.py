"""Rational functions in barycentric form.

A type (m, n) rational ``p/q`` is stored through the values of ``p`` and
``q`` at ``max(m, n) + 1`` support nodes ``t_k``:

    r(x) = sum_k w_k p(t_k) / (x - t_k)  /  sum_k w_k q(t_k) / (x - t_k)

with ``w_k = 1 / prod_{j != k} (t_k - t_j)``.  The polynomial of lower
degree satisfies moment constraints ``sum_k w_k v_k t_k**j = 0`` for
``j < |m - n|``; they are imposed by the solver, not re-checked here.
"""

from __future__ import annotations

from dataclasses import dataclass

from .numeric import PrecisionContext, to_decimal


def barycentric_weights(ctx: PrecisionContext, nodes):
    one = ctx.mp.one
    weights = []
    for k, tk in enumerate(nodes):
        prod = one
        for j, tj in enumerate(nodes):
            if j != k:
                prod *= tk - tj
        weights.append(one / prod)
    return weights


def lagrange_row(ctx: PrecisionContext, nodes, weights, x):
    """Values ``L_k(x)`` of the Lagrange basis polynomials at ``x``."""
    for k, tk in enumerate(nodes):
        if x == tk:
            return [ctx.mp.one if j == k else ctx.mp.zero for j in range(len(nodes))]
    ell = ctx.mp.one
    for tk in nodes:
        ell *= x - tk
    return [ell * wk / (x - tk) for tk, wk in zip(nodes, weights)]


@dataclass
class RationalApproximant:
    ctx: PrecisionContext
    m: int
    n: int
    nodes: list
    weights: list
    num_values: list
    den_values: list
    interval: tuple

    @property
    def midpoint(self):
        lo, hi = self.interval
        return (self.ctx.mpf(lo) + self.ctx.mpf(hi)) / 2

    def _node_index(self, x):
        for k, tk in enumerate(self.nodes):
            if x == tk:
                return k
        return None

    def __call__(self, x):
        k = self._node_index(x)
        if k is not None:
            return self.num_values[k] / self.den_values[k]
        num = den = 0
        for tk, wk, ak, bk in zip(self.nodes, self.weights, self.num_values, self.den_values):
            c = wk / (x - tk)
            num += c * ak
            den += c * bk
        return num / den

    def derivative(self, x):
        k = self._node_index(x)
        if k is not None:
            # polynomial derivatives at a node via the differentiation matrix
            tk, wk = self.nodes[k], self.weights[k]
            ak, bk = self.num_values[k], self.den_values[k]
            dp = dq = 0
            for j, (tj, wj, aj, bj) in enumerate(
                zip(self.nodes, self.weights, self.num_values, self.den_values)
            ):
                if j == k:
                    continue
                c = (wj / wk) / (tk - tj)
                dp += c * (aj - ak)
                dq += c * (bj - bk)
            return (dp * bk - ak * dq) / (bk * bk)
        num = den = dnum = dden = 0
        for tk, wk, ak, bk in zip(self.nodes, self.weights, self.num_values, self.den_values):
            inv = 1 / (x - tk)
            c = wk * inv
            num += c * ak
            den += c * bk
            dnum -= c * inv * ak
            dden -= c * inv * bk
        return (dnum * den - num * dden) / (den * den)

    def numerator(self, x):
        return self._poly(self.num_values, x)

    def denominator(self, x):
        return self._poly(self.den_values, x)

    def _poly(self, values, x):
        row = lagrange_row(self.ctx, self.nodes, self.weights, x)
        return sum((lk * vk for lk, vk in zip(row, values)), self.ctx.mp.zero)

    def normalized(self) -> RationalApproximant:
        """Copy scaled so that ``q(midpoint) = 1``."""
        s = self.denominator(self.midpoint)
        return RationalApproximant(
            self.ctx, self.m, self.n, list(self.nodes), list(self.weights),
            [a / s for a in self.num_values], [b / s for b in self.den_values],
            self.interval,
        )

    def denominator_sign_changes(self, points) -> int:
        signs = [self.denominator(x) > 0 for x in points]
        return sum(1 for s0, s1 in zip(signs, signs[1:]) if s0 != s1)

    def perturbed(self, index: int, delta) -> RationalApproximant:
        """Copy with ``num_values[index]`` shifted by ``delta``."""
        values = list(self.num_values)
        values[index] += delta
        return RationalApproximant(self.ctx, self.m, self.n, list(self.nodes), list(self.weights),
                                   values, list(self.den_values), self.interval)

    def to_dict(self) -> dict:
        dec = lambda v: to_decimal(self.ctx, v)  # noqa: E731
        return {
            "m": self.m,
            "n": self.n,
            "interval": [str(self.interval[0]), str(self.interval[1])],
            "nodes": [dec(v) for v in self.nodes],
            "weights": [dec(v) for v in self.weights],
            "num_values": [dec(v) for v in self.num_values],
            "den_values": [dec(v) for v in self.den_values],
        }

    @classmethod
    def from_dict(cls, ctx: PrecisionContext, data: dict) -> RationalApproximant:
        parse = ctx.mp.mpf
        lo, hi = (int(v) if v.lstrip("-").isdigit() else parse(v) for v in data["interval"])
        return cls(
            ctx, int(data["m"]), int(data["n"]),
            [parse(v) for v in data["nodes"]],
            [parse(v) for v in data["weights"]],
            [parse(v) for v in data["num_values"]],
            [parse(v) for v in data["den_values"]],
            (lo, hi),
        )
