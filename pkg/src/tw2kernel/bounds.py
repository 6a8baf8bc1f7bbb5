"""Exact integer bound functions that drive the kernelization thresholds.

Everything is Python int arithmetic; epsilon is a Fraction.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionViolation

# thresholds used by the reduction lemmas
BICONNECTED_FACTOR = 1988
LADDER_RUNGS = 9
LONG_PATH_PER_U = 118
LONG_PATH_BASE = 86
TREE_PER_LEAF = 876
FREQUENT_U_FACTOR = 9
FREQUENT_U_BASE = 7
FREQUENT_X_BLOCKS = 11


def _binom(n, k):
    return math.comb(n, k) if n >= k >= 0 else 0


def _nonneg(*vals):
    for v in vals:
        if v < 0:
            raise PreconditionViolation(f"bound arguments must be non-negative, got {v}")


def cbound(t, x):
    _nonneg(t, x)
    return _binom(x, 3) * (t + 1) + _binom(x, 2) * (2 * t + 3)


def ybound(t, x):
    _nonneg(t, x)
    return 6 * _binom(x, 2) * (3 * t + 3 + cbound(t, x + 3 * t + 3))


def lbound(t, x, y):
    _nonneg(t, x, y)
    return y * (x + y - 1) * (t + 2) + x + y


def pbound(t, x, y, k):
    _nonneg(t, x, y, k)
    return max(1, lbound(t, x, y) * (2 * k + 3) + 3976 * k * x * y - 3 * k - 4)


def gbound(t, x, y):
    _nonneg(t, x, y)
    return (cbound(t, x + y) * (BICONNECTED_FACTOR * x + 1)
            * pbound(t, x, 4, 30 * x + 3) + x + y)


def modulator_cap(t, eps):
    """ceil(eps * t * (3t+4)): the largest linked tidy modulator we can face."""
    eps = Fraction(eps)
    return math.ceil(eps * t * (3 * t + 4))


def bound(t, eps):
    _nonneg(t)
    eps = Fraction(eps)
    if eps < 1:
        raise PreconditionViolation(f"epsilon must be at least 1, got {eps}")
    x = modulator_cap(t, eps)
    return max(4, gbound(t, x, ybound(t, x)))


@dataclass(frozen=True)
class BoundTable:
    cbound: int
    ybound: int
    lbound: int
    pbound: int
    gbound: int
    bound: int


def eval_bounds(t, x, y, k, eps=1):
    """All six bound values for one parameter tuple."""
    return BoundTable(
        cbound=cbound(t, x),
        ybound=ybound(t, x),
        lbound=lbound(t, x, y),
        pbound=pbound(t, x, y, k),
        gbound=gbound(t, x, y),
        bound=bound(t, eps),
    )
