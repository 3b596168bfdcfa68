"""Reference computations that share no code path with the package under test."""

import math

import mpmath
import numpy as np

mpmath.mp.dps = 30

LN2 = math.log(2.0)


def e1_scaled(x):
    """e^x E1(x) from the defining integral, in extended precision."""
    x = mpmath.mpf(x)
    val = mpmath.quad(lambda t: mpmath.exp(-x * (t - 1)) / t, [1, 1 + 1 / x, mpmath.inf])
    return float(val)


def ergodic_se(lambda_x, lambda_y):
    """E[log2(1 + X/(Y+1))], X and Y exponential with the given means.

    Conditions on Y; for fixed Y = y the inner expectation is
    E ln(1 + X/c) = e^{c/lx} E1(c/lx) with c = y + 1.
    """
    lx, ly = mpmath.mpf(lambda_x), mpmath.mpf(lambda_y)

    def inner(y):
        c = (y + 1) / lx
        return mpmath.exp(c) * mpmath.e1(c) * mpmath.exp(-y / ly) / ly

    return float(mpmath.quad(inner, [0, ly, 10 * ly, mpmath.inf]) / mpmath.log(2))


def ergodic_A_1_2():
    """E log2(1 + X + Y) for means (1, 2) through the density of X + Y."""
    f = lambda s: mpmath.log(1 + s) * (mpmath.exp(-s / 2) - mpmath.exp(-s))
    return float(mpmath.quad(f, [0, 1, 10, mpmath.inf]) / mpmath.log(2))


def snr(d, p_dbm=21.0, noise_dbm=-89.0, h=1.5, fc=5.9):
    pl = 40 * math.log10(d) + 7.65 - 2 * 17.3 * math.log10(h - 1) + 2.7 * math.log10(fc)
    return 10 ** ((p_dbm - pl - noise_dbm) / 10)


def oma_objectives(members, pos_T, pos_D, fading, beta=0.5):
    n = len(members)
    eta2 = (1 - beta) * math.log2(1 + fading.g_T_D * snr(math.dist(pos_T, pos_D)))
    out = []
    for r in range(n):
        out.append(min(beta * math.log2(1 + fading.g_relay_member[r][k] * snr(math.dist(members[r], members[k])))
                       for k in range(n) if k != r) + eta2)
    return out


def noma_objectives(members, pos_T, pos_D, fading):
    n = len(members)
    x = fading.g_T_D * snr(math.dist(pos_T, pos_D))
    rho = (math.sqrt(1 + x) - 1) / x
    eta2 = math.log2(1 + rho * x)
    out = []
    for r in range(n):
        legs = [math.log2(1 + fading.g_relay_member[r][k] * snr(math.dist(members[r], members[k]))
                          / (rho * fading.g_T_member[k] * snr(math.dist(pos_T, members[k])) + 1))
                for k in range(n) if k != r]
        legs.append(math.log2(1 + fading.g_relay_D[r] * snr(math.dist(members[r], pos_D)) / (rho * x + 1)))
        out.append(min(legs) + eta2)
    return out


def one_center_radius(points, half_width, step=0.5):
    """Grid minimax radius; the grid spacing bounds the overestimate by step/sqrt(2)."""
    axis = np.arange(-half_width, half_width + step / 2, step)
    best = math.inf
    for x in axis:
        col = np.column_stack((np.full_like(axis, x), axis))
        d = np.sqrt(((col[:, None, :] - points[None, :, :]) ** 2).sum(-1)).max(1)
        best = min(best, float(d.min()))
    return best


def binomial_z(p_hat, p, n):
    return abs(p_hat - p) / math.sqrt(max(p * (1 - p), 1.0 / n) / n)
