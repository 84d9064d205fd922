"""The lower bound ``2^(n/2) - 5 * 2^(3n/8 + log2(n) * log2(n/2))`` on the
number of bipartite DRR connection sets, and where it turns positive.

The sign comes from comparing exponents: the bound is positive exactly when
``n/8 > log2(5) + log2(n) * log2(n/2)``.  Both sides are evaluated with
``decimal`` at 60 digits; a difference too small to resolve raises.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext

PRECISION = 60
HORIZON = 10**6


@dataclass(frozen=True)
class BoundValue:
    n: int
    sign: int
    exact_value: int | None
    log2_margin: Decimal

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "sign": self.sign,
            "exact_value": None if self.exact_value is None else str(self.exact_value),
            "log2_margin": f"{self.log2_margin:.12f}",
        }


def _log2(x: int) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = PRECISION
        return Decimal(x).ln() / Decimal(2).ln()


def log2_margin(n: int) -> Decimal:
    """``n/8 - log2(5) - log2(n) * log2(n/2)``: positive iff the bound is."""
    with localcontext() as ctx:
        ctx.prec = PRECISION
        return Decimal(n) / 8 - _log2(5) - _log2(n) * (_log2(n) - 1)


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def _exact(n: int) -> int | None:
    # the second exponent is an integer only for powers of two with 8 | 3n
    if not _is_power_of_two(n) or n < 8:
        return None
    k = n.bit_length() - 1
    return 2 ** (n // 2) - 5 * 2 ** (3 * n // 8 + k * (k - 1))


def drr_lower_bound(n: int) -> BoundValue:
    if n < 2 or n % 2:
        raise ValueError("n must be an even integer >= 2")
    margin = log2_margin(n)
    if abs(margin) < Decimal(10) ** (-(PRECISION - 15)):
        raise ArithmeticError(f"cannot resolve the sign at n = {n}")
    sign = 1 if margin > 0 else -1
    exact = _exact(n)
    if exact is not None and (exact > 0) != (sign > 0):
        raise ArithmeticError(f"exact value and exponent comparison disagree at n = {n}")
    return BoundValue(n, sign, exact, margin)


def _float_margin(n: int) -> float:
    return n / 8 - math.log2(5) - math.log2(n) * math.log2(n / 2)


def bound_crossover(horizon: int = HORIZON) -> int:
    """Smallest even ``n`` with the bound positive at every even ``m`` in ``[n, horizon]``."""
    last_nonpositive = 0
    for n in range(2, horizon + 1, 2):
        f = _float_margin(n)
        sign = (1 if f > 0 else -1) if abs(f) > 1e-6 else drr_lower_bound(n).sign
        if sign <= 0:
            last_nonpositive = n
    return last_nonpositive + 2
