"""Scaled exponential integral ``e^x E1(x)`` for positive real ``x``."""

import math

EULER_GAMMA = 0.57721566490153286061
_EPS = 1e-16
_MAX_ITER = 500


def _e1_series(x):
    # E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
    total = 0.0
    term = 1.0
    for k in range(1, _MAX_ITER):
        term *= -x / k
        contrib = term / k
        total += contrib
        if abs(contrib) < _EPS * abs(total):
            break
    return -EULER_GAMMA - math.log(x) - total


def _scaled_cf(x):
    # e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- ...))), modified Lentz.
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -float(i * i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"continued fraction for E1 did not converge at x={x}")


def exp_e1_scaled(x: float) -> float:
    """Return ``e^x * E1(x)``; tends to ``1/x`` for large ``x`` without overflow."""
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"exp_e1_scaled needs x > 0, got {x}")
    if x <= 1.0:
        return math.exp(x) * _e1_series(x)
    return _scaled_cf(x)
