"""JSON form of :class:`MinimaxResult`.

Every scalar is written as a decimal string with enough digits to restore
the exact binary value at the recorded precision.
"""

from __future__ import annotations

import json

from .numeric import make_context, to_decimal
from .rational import RationalApproximant
from .remez import Alternant, MinimaxResult
from .targets import TargetFunction

FORMAT_VERSION = 1


def result_to_dict(result: MinimaxResult) -> dict:
    ctx = result.ctx
    dec = lambda v: to_decimal(ctx, v)  # noqa: E731
    target = result.target
    if not isinstance(target, TargetFunction):
        raise TypeError("only x**alpha family targets can be serialized")
    return {
        "format": FORMAT_VERSION,
        "kind": target.kind.value,
        "alpha": target.alpha,
        "m": result.m,
        "n": result.n,
        "precision_bits": result.precision_bits,
        "E": dec(result.error),
        "levelness": dec(result.levelness),
        "iterations": result.iterations,
        "defect": result.defect,
        "converged": result.converged,
        "degenerate": result.degenerate,
        "alternant": {
            "points": [dec(x) for x in result.alternant.points],
            "signs": list(result.alternant.signs),
        },
        "reference": [dec(x) for x in result.reference],
        "approximant": result.approximant.to_dict(),
    }


def result_from_dict(data: dict) -> MinimaxResult:
    if data.get("format") != FORMAT_VERSION:
        raise ValueError(f"unsupported result format {data.get('format')!r}")
    ctx = make_context(int(data["precision_bits"]))
    parse = ctx.mp.mpf
    target = TargetFunction(data["kind"], data["alpha"])
    approx = RationalApproximant.from_dict(ctx, data["approximant"])
    E = parse(data["E"])
    return MinimaxResult(
        target=target, m=int(data["m"]), n=int(data["n"]), approximant=approx, error=E,
        alternant=Alternant([parse(x) for x in data["alternant"]["points"]],
                            list(data["alternant"]["signs"]), E),
        iterations=int(data["iterations"]), levelness=parse(data["levelness"]),
        defect=int(data["defect"]), converged=bool(data["converged"]),
        precision_bits=ctx.precision_bits,
        reference=[parse(x) for x in data["reference"]],
        degenerate=bool(data["degenerate"]),
    )


def dumps(result: MinimaxResult, **kw) -> str:
    return json.dumps(result_to_dict(result), **kw)


def loads(text: str) -> MinimaxResult:
    return result_from_dict(json.loads(text))
