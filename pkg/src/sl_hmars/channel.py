"""Path loss, mean SNR, Rayleigh power gains and the NOMA power factor."""

from dataclasses import dataclass
from functools import cached_property
import math

import numpy as np


@dataclass(frozen=True)
class ChannelParams:
    """Radio parameters shared by every link.

    ``alpha`` is the exponent the location-based formulas assume; the simulated
    links always follow the 40 dB/decade path-loss model below, which is the
    same thing for the default ``alpha=4``.
    """

    tx_power_dbm: float = 21.0
    noise_dbm: float = -89.0
    alpha: float = 4.0
    beta: float = 0.5
    carrier_ghz: float = 5.9
    antenna_height_m: float = 1.5

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise ValueError(f"beta must lie in (0, 1), got {self.beta}")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.antenna_height_m <= 1.0:
            raise ValueError("antenna height must exceed 1 m for the path-loss model")
        if self.carrier_ghz <= 0:
            raise ValueError("carrier frequency must be positive")

    @property
    def path_loss_1m_db(self) -> float:
        """Path loss at 1 m, i.e. everything except the distance term."""
        h = self.antenna_height_m
        return (7.65 - 17.3 * math.log10(h - 1.0) - 17.3 * math.log10(h - 1.0)
                + 2.7 * math.log10(self.carrier_ghz))

    @cached_property
    def rho_eff(self) -> float:
        """Mean SNR at 1 m; ``mean_snr_linear(d) == rho_eff * d**-4``."""
        return 10.0 ** ((self.tx_power_dbm - self.path_loss_1m_db - self.noise_dbm) / 10.0)


def path_loss_db(d, params: ChannelParams = ChannelParams()):
    """PL = 40 log10(d) + 7.65 - 17.3 log10(h_t-1) - 17.3 log10(h_r-1) + 2.7 log10(f_c[GHz])."""
    d = np.asarray(d, dtype=float)
    if np.any(d <= 0):
        raise ValueError("distance must be positive")
    pl = 40.0 * np.log10(d) + params.path_loss_1m_db
    return float(pl) if pl.ndim == 0 else pl


def mean_snr_linear(d, params: ChannelParams = ChannelParams()):
    pl = path_loss_db(d, params)
    return 10.0 ** ((params.tx_power_dbm - pl - params.noise_dbm) / 10.0)


def snr_from_sq_distance(d2, params: ChannelParams):
    # d2 is a squared distance; rho_eff / d^4 avoids a sqrt and a log per link.
    # A zero distance (relay to itself) maps to inf and is masked by callers.
    with np.errstate(divide="ignore"):
        return params.rho_eff / (d2 * d2)


def sample_fading(rng: np.random.Generator, size=None):
    """Exp(1) power gain(s) by inverse CDF, ``-ln(u)`` with ``u`` in (0, 1]."""
    u = 1.0 - rng.random(size)
    return -np.log(u)


def power_factor(x):
    """NOMA power factor that gives v_D the same SE as under a 50 % time share.

    Solves ``log2(1 + p*x) = 0.5*log2(1 + x)`` for ``p``. The closed form
    ``(sqrt(1+x) - 1)/x`` is evaluated as ``1/(sqrt(1+x) + 1)``, which is the same
    quantity without the cancellation at small ``x`` and gives 0.5 at ``x = 0``.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("power_factor needs a non-negative SNR")
    p = 1.0 / (np.sqrt(1.0 + x) + 1.0)
    return float(p) if p.ndim == 0 else p
