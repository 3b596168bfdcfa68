"""Per-realization spectral efficiencies and brute-force relay selection.

Operation counting: every multiply/divide is one ``mul``, every add, subtract
or comparison is one ``add``, and every log/exp/pow/sqrt is one ``trans``.
The brute-force searches evaluate each link formula as written for every
(relay, receiver) pair, including that pair's distance and mean SNR; nothing
is shared between relay candidates or between the two schemes.
"""

from dataclasses import dataclass
import math

import numpy as np

from .channel import ChannelParams, power_factor, sample_fading, snr_from_sq_distance

OMA = "OMA"
NOMA = "NOMA"

# Cost of one squared distance (2 sub, 2 mul, 1 add) and of turning it into a
# mean SNR rho / (d2 * d2).
_SQDIST = (2, 3, 0)
_SNR = (2, 0, 0)


@dataclass
class OpCounter:
    mul: int = 0
    add: int = 0
    trans: int = 0

    def tick(self, mul=0, add=0, trans=0, times=1):
        self.mul += mul * times
        self.add += add * times
        self.trans += trans * times

    def merge(self, other: "OpCounter"):
        self.tick(other.mul, other.add, other.trans)

    @property
    def arithmetic(self) -> int:
        return self.mul + self.add

    def as_tuple(self):
        return (self.mul, self.add, self.trans)


def _tick(counter, cost, times=1):
    if counter is not None:
        counter.tick(*cost, times=times)


def _sum_costs(*costs):
    return tuple(sum(c[k] for c in costs) for k in range(3))


@dataclass(frozen=True, eq=False)
class FadingDraw:
    """Exp(1) power gains for one trial; ``g_relay_member[r, n]`` is link r -> n."""

    g_relay_member: np.ndarray
    g_relay_D: np.ndarray
    g_T_member: np.ndarray
    g_T_D: float


def draw_fading(n: int, rng: np.random.Generator) -> FadingDraw:
    g = sample_fading(rng, (n, n))
    g_rD = sample_fading(rng, n)
    g_Tn = sample_fading(rng, n)
    g_TD = float(sample_fading(rng))
    return FadingDraw(g, g_rD, g_Tn, g_TD)


@dataclass(frozen=True)
class SEReport:
    scheme: str
    relay_index: int
    worst_member_index: int  # -1 when v_D is the bottleneck of a NOMA relay
    eta_1: float
    eta_2: float

    @property
    def eta_total(self) -> float:
        return self.eta_1 + self.eta_2


def se_oma_member(g, snr, beta=0.5):
    return beta * np.log2(1.0 + g * snr)


def se_oma_interferer(g_TD, snr_TD, beta=0.5):
    return (1.0 - beta) * np.log2(1.0 + g_TD * snr_TD)


def se_noma_member(g_rn, snr_rn, g_Tn, snr_Tn, rho_factor):
    """Full-band SE of a relay->member link with v_T's superposed signal as noise."""
    return np.log2(1.0 + g_rn * snr_rn / (rho_factor * g_Tn * snr_Tn + 1.0))


def se_noma_vd(g_rD, snr_rD, g_TD, snr_TD, rho_factor):
    # v_D decodes the relay's multicast first, with its own unicast as interference.
    return se_noma_member(g_rD, snr_rD, g_TD, snr_TD, rho_factor)


def se_noma_interferer(g_TD, snr_TD, rho_factor):
    return np.log2(1.0 + rho_factor * g_TD * snr_TD)


def _sq_dist_matrix(points):
    diff = points[:, None, :] - points[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _sq_dist_to(points, p):
    diff = points - p
    return np.einsum("ij,ij->i", diff, diff)


def interferer_snr(scenario, params: ChannelParams) -> float:
    d2 = float(_sq_dist_to(scenario.pos_T[None, :], scenario.pos_D)[0])
    return float(snr_from_sq_distance(d2, params))


def oma_member_se_matrix(scenario, fading: FadingDraw, params: ChannelParams):
    """``se[r, n]`` of the relay -> member OMA links; the diagonal is +inf."""
    snr = snr_from_sq_distance(_sq_dist_matrix(scenario.members), params)
    with np.errstate(divide="ignore"):
        se = se_oma_member(fading.g_relay_member, snr, params.beta)
    np.fill_diagonal(se, np.inf)
    return se


def noma_rho(scenario, fading: FadingDraw, params: ChannelParams) -> float:
    """Power factor from the realized v_T -> v_D channel."""
    return power_factor(fading.g_T_D * interferer_snr(scenario, params))


def noma_member_se_matrix(scenario, fading: FadingDraw, params: ChannelParams, rho):
    snr = snr_from_sq_distance(_sq_dist_matrix(scenario.members), params)
    snr_T = snr_from_sq_distance(_sq_dist_to(scenario.members, scenario.pos_T), params)
    with np.errstate(divide="ignore"):
        se = se_noma_member(fading.g_relay_member, snr, fading.g_T_member[None, :],
                            snr_T[None, :], rho)
    np.fill_diagonal(se, np.inf)
    return se


def noma_vd_se(scenario, fading: FadingDraw, params: ChannelParams, rho):
    snr_rD = snr_from_sq_distance(_sq_dist_to(scenario.members, scenario.pos_D), params)
    return se_noma_vd(fading.g_relay_D, snr_rD, fading.g_T_D, interferer_snr(scenario, params), rho)


# Per (relay, member) pair: distance + SNR, g*snr, 1+, log2, beta*, min-compare.
_OMA_PAIR = _sum_costs(_SQDIST, _SNR, (2, 2, 1))
# Per pair: signal distance/SNR, interferer distance/SNR, rho*g*snr + 1, ratio,
# 1+, log2, min-compare.
_NOMA_PAIR = _sum_costs(_SQDIST, _SNR, (1, 0, 0), _SQDIST, _SNR, (2, 1, 0), (1, 2, 1))
# v_T -> v_D link: distance, SNR, g*snr, then 1+ and log2 and the share factor.
_ETA2_OMA = _sum_costs(_SQDIST, _SNR, (2, 2, 1))
# rho = 1/(sqrt(1 + x) + 1), then log2(1 + rho*x).
_RHO = _sum_costs(_SQDIST, _SNR, (2, 2, 1))
_ETA2_NOMA = (1, 1, 1)
# Per relay candidate: add eta_2, compare against the running best.
_RELAY = (0, 2, 0)


def bfs_select_oma(scenario, fading: FadingDraw, params: ChannelParams,
                   counter: OpCounter = None) -> SEReport:
    """Relay maximizing worst-member OMA SE plus the interferer's OMA SE.

    Uses the true positions and the realized gains. Ties go to the lowest index.
    """
    n = scenario.n
    se = oma_member_se_matrix(scenario, fading, params)
    worst = se.min(axis=1)
    eta_2 = float(se_oma_interferer(fading.g_T_D, interferer_snr(scenario, params), params.beta))
    r = int(np.argmax(worst))
    _tick(counter, _OMA_PAIR, n * (n - 1))
    _tick(counter, _ETA2_OMA)
    _tick(counter, _RELAY, n)
    return SEReport(OMA, r, int(np.argmin(se[r])), float(worst[r]), eta_2)


def bfs_select_noma(scenario, fading: FadingDraw, params: ChannelParams,
                    counter: OpCounter = None) -> SEReport:
    """Relay maximizing min(worst-member, v_D) NOMA SE plus the interferer's NOMA SE."""
    n = scenario.n
    rho = noma_rho(scenario, fading, params)
    se = noma_member_se_matrix(scenario, fading, params, rho)
    se_D = noma_vd_se(scenario, fading, params, rho)
    worst_member = se.min(axis=1)
    worst = np.minimum(worst_member, se_D)
    eta_2 = float(se_noma_interferer(fading.g_T_D, interferer_snr(scenario, params), rho))
    r = int(np.argmax(worst))
    _tick(counter, _RHO)
    _tick(counter, _NOMA_PAIR, n * (n - 1))
    _tick(counter, _NOMA_PAIR, n)  # v_D leg
    _tick(counter, _ETA2_NOMA)
    _tick(counter, _RELAY, n)
    bottleneck = int(np.argmin(se[r])) if worst_member[r] <= se_D[r] else -1
    return SEReport(NOMA, r, bottleneck, float(worst[r]), eta_2)


def bfs_select_hybrid(scenario, fading, params, counter=None):
    """Both searches plus the final scheme comparison (NOMA on ties).

    Returns ``(best, oma_report, noma_report)``.
    """
    oma = bfs_select_oma(scenario, fading, params, counter)
    noma = bfs_select_noma(scenario, fading, params, counter)
    _tick(counter, (0, 1, 0))
    return (noma if noma.eta_total >= oma.eta_total else oma), oma, noma


def achieved_se(scenario, fading: FadingDraw, params: ChannelParams, scheme: str,
                relay: int) -> SEReport:
    """Objective value of a given (scheme, relay) under true positions and gains."""
    members = scenario.members
    snr = snr_from_sq_distance(_sq_dist_to(members, members[relay]), params)
    snr_TD = interferer_snr(scenario, params)
    g = fading.g_relay_member[relay]
    with np.errstate(divide="ignore"):
        if scheme == OMA:
            se = se_oma_member(g, snr, params.beta)
            se[relay] = np.inf
            eta_2 = float(se_oma_interferer(fading.g_T_D, snr_TD, params.beta))
            return SEReport(OMA, relay, int(np.argmin(se)), float(se.min()), eta_2)
        if scheme == NOMA:
            rho = noma_rho(scenario, fading, params)
            snr_T = snr_from_sq_distance(_sq_dist_to(members, scenario.pos_T), params)
            se = se_noma_member(g, snr, fading.g_T_member, snr_T, rho)
            se[relay] = np.inf
            snr_rD = snr_from_sq_distance(_sq_dist_to(members[relay:relay + 1], scenario.pos_D), params)
            se_D = float(se_noma_vd(fading.g_relay_D[relay], snr_rD[0], fading.g_T_D, snr_TD, rho))
            eta_2 = float(se_noma_interferer(fading.g_T_D, snr_TD, rho))
            m = float(se.min())
            return SEReport(NOMA, relay, int(np.argmin(se)) if m <= se_D else -1, min(m, se_D), eta_2)
    raise ValueError(f"unknown scheme {scheme!r}")
