"""Runs of the engine over a range of degrees, with caching.

Consecutive degrees are solved in order and each converged reference
seeds the next problem, which is much cheaper than independent starts.
With several workers the degrees are distributed over processes instead
and each job seeds itself by continuation.
"""

from __future__ import annotations

import logging
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .asymptotics import BOUNDS, Family, historical_bound, normalize_error
from .cache import NullCache, make_key
from .numeric import make_context, to_decimal
from .remez import RemezError, RemezOptions, best_rational, paradiagonal_degree
from .serialize import result_from_dict, result_to_dict
from .targets import Kind, TargetFunction

log = logging.getLogger(__name__)

CSV_COLUMNS = ["alpha", "n", "m", "precision_bits", "E", "normalized", "lower_bound", "upper_bound"]


def parse_range(text: str) -> list[int]:
    """``"4..14"``, ``"4..14:2"``, ``"6"`` or ``"2,4,6"``."""
    text = text.strip()
    m = re.fullmatch(r"(\d+)\.\.(\d+)(?::(\d+))?", text)
    if m:
        lo, hi, step = int(m[1]), int(m[2]), int(m[3] or 1)
        if hi < lo or step < 1:
            raise ValueError(f"empty range {text!r}")
        return list(range(lo, hi + 1, step))
    try:
        values = [int(v) for v in text.split(",")]
    except ValueError:
        raise ValueError(f"bad range {text!r}") from None
    if any(v < 0 for v in values):
        raise ValueError("degrees must be non-negative")
    return values


def numerator_degree(rule: str, n: int, alpha) -> int:
    """Resolve ``auto`` (paradiagonal), ``n``, ``n+K``, ``n-K`` or a fixed integer."""
    rule = str(rule).strip()
    if rule == "auto":
        return paradiagonal_degree(n, alpha)
    m = re.fullmatch(r"n([+-]\d+)?", rule)
    if m:
        value = n + int(m[1] or 0)
    else:
        value = int(rule)
    if value < 0:
        raise ValueError(f"numerator degree {value} is negative")
    return value


def make_target(alpha, family: Family | str) -> TargetFunction:
    kind = Kind.POW_ON_01 if Family(family) is Family.ON01 else Kind.ABS_POW_ON_SYM
    return TargetFunction(kind, str(alpha))


@dataclass
class SweepRow:
    alpha: str
    n: int
    m: int
    precision_bits: int
    E: object = None
    normalized: object = None
    lower_bound: object = None
    upper_bound: object = None
    converged: bool = False
    error: str | None = None
    result: object = None

    def csv_fields(self, ctx) -> list[str]:
        dec = lambda v: "" if v is None else to_decimal(ctx, v)  # noqa: E731
        return [self.alpha, str(self.n), str(self.m), str(self.precision_bits),
                dec(self.E), dec(self.normalized), dec(self.lower_bound), dec(self.upper_bound)]


def _bounds_for(f: TargetFunction, m: int, n: int, ctx):
    """Explicit published bounds on ``E_nn`` that apply to this row."""
    if m != n:
        return None, None
    alpha = f.exact_alpha
    if f.kind is Kind.ABS_POW_ON_SYM and alpha == 1 and n >= 4:
        b = historical_bound(BOUNDS["Newman"], n, 1, ctx)
        return b.lower, b.upper
    if f.kind is Kind.POW_ON_01 and alpha == Fraction(1, 2):
        return historical_bound(BOUNDS["Bulanov_sqrt"], n, "1/2", ctx).lower, None
    return None, None


def solve_one(f: TargetFunction, m: int, n: int, precision_bits: int, cache=None,
              initial_reference=None):
    """Cached engine call; returns a :class:`MinimaxResult`."""
    cache = cache or NullCache()
    key = make_key("approx", f.alpha, m, n, precision_bits, kind=f.kind.value)
    hit = cache.get(key)
    if hit is not None:
        return result_from_dict(hit)
    ctx = make_context(precision_bits)
    opts = RemezOptions(initial_reference=initial_reference)
    result = best_rational(f, m, n, ctx, opts)
    cache.put(key, result_to_dict(result))
    return result


def _row_from_result(f, m, n, bits, result, family):
    ctx = result.ctx
    row = SweepRow(f.alpha, n, m, bits, E=result.error, converged=result.converged, result=result)
    if result.error > 0 and n >= 1:
        row.normalized = normalize_error(n, f.exact_alpha, result.error, family, ctx)
    row.lower_bound, row.upper_bound = _bounds_for(f, m, n, ctx)
    return row


def _job(args):
    # runs in a worker process: return plain data, mpf values do not pickle
    f, m, n, bits, cache, family = args
    try:
        return result_to_dict(solve_one(f, m, n, bits, cache)), None
    except (RemezError, ArithmeticError) as exc:
        return None, str(exc)


def run_sweep(alpha, n_values, precision_bits: int, family: Family | str = Family.ON01,
              m_rule: str = "auto", cache=None, workers: int = 1, on_row=None) -> list[SweepRow]:
    """Solve each ``n`` in ``n_values``; failures become rows with ``error`` set.

    ``on_row(row)`` is called as soon as each row is finished, so callers
    can stream progress to disk.
    """
    f = make_target(alpha, family)
    cache = cache or NullCache()
    jobs = [(f, numerator_degree(m_rule, n, f.exact_alpha), n, precision_bits, cache, family)
            for n in sorted(n_values)]
    rows = []
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            for (f_, m, n, bits, _, fam), (data, err) in zip(jobs, pool.map(_job, jobs)):
                if err is None:
                    row = _row_from_result(f_, m, n, bits, result_from_dict(data), fam)
                else:
                    row = SweepRow(f_.alpha, n, m, bits, error=err)
                rows.append(row)
                if on_row:
                    on_row(row)
        return rows
    reference = None
    for f_, m, n, bits, cache_, fam in jobs:
        try:
            result = solve_one(f_, m, n, bits, cache_, initial_reference=reference)
            reference = result.reference
            row = _row_from_result(f_, m, n, bits, result, fam)
        except (RemezError, ArithmeticError) as exc:
            log.warning("(%d,%d) failed: %s", m, n, exc)
            row = SweepRow(f_.alpha, n, m, bits, error=str(exc))
            reference = None
        rows.append(row)
        if on_row:
            on_row(row)
    return rows
