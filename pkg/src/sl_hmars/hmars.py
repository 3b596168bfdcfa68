"""Location-based hybrid multiple access and relay selection (H-MARS).

Given only reported positions, pick an OMA relay near the approximate 1-center
of the group and a NOMA relay on the segment from the far anchor toward v_D,
then activate NOMA when its estimated success probability is at least OMA's.
All fading gains are taken as 1 (no sidelink CSI).
"""

from dataclasses import dataclass
from enum import Enum
import math

import numpy as np

from .channel import ChannelParams, power_factor
from .links import NOMA, OMA, OpCounter
from .scenario import Point2D
from .special import exp_e1_scaled

LN2 = math.log(2.0)
_DEGENERATE_GAP = 1e-6
_NUDGE = 1e-4

SHARED = "shared"
TIME_SHARE = "time_share"


class OutageConvention(str, Enum):
    """How the outage expressions read their lambda parameters.

    ``REDERIVED`` treats lambda as the mean of the scaled exponential variate,
    consistent with the ergodic-SE formula. ``AS_PRINTED`` treats it as a rate.
    """

    AS_PRINTED = "as_printed"
    REDERIVED = "rederived"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        return cls(str(value).replace("-", "_").lower())


@dataclass(frozen=True)
class ErgodicTerms:
    lambda_x: float
    lambda_y: float
    A: float
    B: float

    @property
    def se(self) -> float:
        return max(self.A - self.B, 0.0)


@dataclass(frozen=True)
class HmarsDecision:
    scheme: str
    relay_oma: int
    relay_noma: int
    anchor_i: int
    anchor_j: int
    target_point_oma: Point2D
    target_point_noma: Point2D
    rho: float
    c1: float
    c2: float
    gamma: float
    lhs: float
    rhs: float

    @property
    def relay(self) -> int:
        return self.relay_noma if self.scheme == NOMA else self.relay_oma


def _tick(counter, mul=0, add=0, trans=0, times=1):
    if counter is not None:
        counter.tick(mul, add, trans, times)


def _sq_dists(points, p, counter=None):
    diff = points - p
    _tick(counter, mul=2, add=3, times=len(points))
    return np.einsum("ij,ij->i", diff, diff)


def _argmax(values, counter=None):
    _tick(counter, add=1, times=len(values))
    return int(np.argmax(values))


def _argmin(values, counter=None):
    _tick(counter, add=1, times=len(values))
    return int(np.argmin(values))


def select_oma_relay(reported, counter: OpCounter = None):
    """Anchors (i, j), midpoint of the pair, and the member nearest to it.

    ``i`` is the member farthest from v_D and ``j`` the member farthest from ``i``;
    the midpoint stands in for the minimax (1-center) relay location.
    """
    members = reported.members
    i = _argmax(_sq_dists(members, reported.pos_D, counter), counter)
    j = _argmax(_sq_dists(members, members[i], counter), counter)
    target = 0.5 * (members[i] + members[j])
    _tick(counter, mul=2, add=2)
    relay = _argmin(_sq_dists(members, target, counter), counter)
    return i, j, Point2D(*target), relay


def _dist_pow(d, alpha):
    # d^-alpha with a floor so coincident points stay finite.
    return max(d, 1e-9) ** -alpha


def select_noma_relay(reported, params: ChannelParams, anchor_i: int = None,
                      counter: OpCounter = None):
    """Point on segment anchor_i -> v_D where both NOMA legs see equal SINR.

    Solves ``c2 * d**-a == c1 * (d_iD - d)**-a`` for the distance ``d`` from the
    anchor and returns ``(target_point, relay_id, c1, c2)``.
    """
    members = reported.members
    if anchor_i is None:
        anchor_i = _argmax(_sq_dists(members, reported.pos_D, counter), counter)
    a = params.alpha
    p_i = members[anchor_i]
    d_TD = math.dist(reported.pos_T, reported.pos_D)
    d_Ti = math.dist(reported.pos_T, p_i)
    d_iD = math.dist(p_i, reported.pos_D)
    _tick(counter, mul=6, add=9, trans=3)
    if d_iD == 0.0:
        raise ValueError("anchor member coincides with v_D")
    inv_rho = 1.0 / params.rho_eff
    rho = power_factor(params.rho_eff * _dist_pow(d_TD, a))
    c1 = rho * _dist_pow(d_Ti, a) + inv_rho
    c2 = rho * _dist_pow(d_TD, a) + inv_rho
    w1 = c1 ** (-1.0 / a)
    w2 = c2 ** (-1.0 / a)
    d_hat = w1 / (w1 + w2) * d_iD
    target = p_i + (reported.pos_D - p_i) * (d_hat / d_iD)
    _tick(counter, mul=10, add=6, trans=6)
    relay = _argmin(_sq_dists(members, target, counter), counter)
    return Point2D(*target), relay, c1, c2


def ergodic_terms(lambda_x: float, lambda_y: float) -> ErgodicTerms:
    """A and B of ``E[log2(1 + X/(Y+1))] = A - B`` for exponential X, Y with these means.

    A is the ergodic SE of ``log2(1 + X + Y)`` (hypoexponential sum), B that of
    ``log2(1 + Y)``.
    """
    if not (lambda_x > 0 and lambda_y > 0):
        raise ValueError("lambda_x and lambda_y must be positive")
    ly = lambda_y
    if abs(lambda_x - ly) < _DEGENERATE_GAP * lambda_x:
        ly = lambda_x * (1.0 + _NUDGE)
    fx = exp_e1_scaled(1.0 / lambda_x)
    fy = exp_e1_scaled(1.0 / ly)
    A = (fx / (1.0 - ly / lambda_x) + fy / (1.0 - lambda_x / ly)) / LN2
    B = fy / LN2
    return ErgodicTerms(lambda_x, lambda_y, A, B)


def expected_noma_se(lambda_x: float, lambda_y: float) -> float:
    return ergodic_terms(lambda_x, lambda_y).se


def noma_outage(lambda_x, lambda_y, gamma, convention=OutageConvention.REDERIVED):
    convention = OutageConvention.parse(convention)
    share = lambda_x / (lambda_x + lambda_y * gamma)
    if convention is OutageConvention.AS_PRINTED:
        return 1.0 - share * math.exp(-lambda_y * gamma)
    return 1.0 - share * math.exp(-gamma / lambda_x)


def oma_outage(lambda_x, gamma, convention=OutageConvention.REDERIVED):
    convention = OutageConvention.parse(convention)
    if convention is OutageConvention.AS_PRINTED:
        return -math.expm1(-lambda_x * gamma)
    return -math.expm1(-gamma / lambda_x)


def _serving_distance(members, relay, i, j):
    # Distance from the relay to the anchor it must cover; when the relay is the
    # anchor itself, the other anchor takes its place.
    other = j if relay == i else i
    return math.dist(members[relay], members[other])


def noma_legs(reported, params, relay_noma, anchor_i, anchor_j, rho):
    """(lambda_x, lambda_y) for the member leg and the v_D leg of the NOMA relay."""
    a, r0 = params.alpha, params.rho_eff
    members = reported.members
    d_ri = _serving_distance(members, relay_noma, anchor_i, anchor_j)
    d_Ti = math.dist(reported.pos_T, members[anchor_i])
    d_rD = math.dist(members[relay_noma], reported.pos_D)
    d_TD = math.dist(reported.pos_T, reported.pos_D)
    return ((r0 * _dist_pow(d_ri, a), rho * r0 * _dist_pow(d_Ti, a)),
            (r0 * _dist_pow(d_rD, a), rho * r0 * _dist_pow(d_TD, a)))


def gamma_threshold(reported, relay_noma, anchor_i, anchor_j, params: ChannelParams,
                    counter: OpCounter = None) -> float:
    """SINR threshold min(gamma_i, gamma_D), each ``2**(A - B) - 1`` of its leg."""
    rho = power_factor(params.rho_eff * _dist_pow(math.dist(reported.pos_T, reported.pos_D), params.alpha))
    legs = noma_legs(reported, params, relay_noma, anchor_i, anchor_j, rho)
    return _gamma_from_legs(legs, counter)


def leg_gamma(lambda_x: float, lambda_y: float) -> float:
    """SINR whose Shannon SE equals the leg's ergodic NOMA SE."""
    return 2.0 ** expected_noma_se(lambda_x, lambda_y) - 1.0


def _gamma_from_legs(legs, counter=None):
    gammas = [leg_gamma(lx, ly) for lx, ly in legs]
    # per leg: two reciprocals, two E1 calls, two ratios, 1-ratio twice, two
    # divisions, sum, two /ln2, A-B, 2**x, -1; then the min.
    _tick(counter, mul=8, add=6, trans=3, times=len(legs))
    _tick(counter, add=1)
    return min(gammas)


def oma_threshold(gamma: float, beta: float, mapping: str = TIME_SHARE) -> float:
    """SINR threshold an OMA link must reach for the same target SE.

    With ``TIME_SHARE`` the link only holds the channel a fraction ``beta`` of the
    time, so ``beta*log2(1+x) >= log2(1+gamma)`` needs ``x >= (1+gamma)**(1/beta) - 1``.
    ``SHARED`` reuses ``gamma`` unchanged.
    """
    if mapping == SHARED:
        return gamma
    if mapping == TIME_SHARE:
        return math.expm1(math.log1p(gamma) / beta)
    raise ValueError(f"unknown OMA threshold mapping {mapping!r}")


def decide(reported, params: ChannelParams = ChannelParams(),
           convention=OutageConvention.REDERIVED, counter: OpCounter = None,
           oma_gamma: str = TIME_SHARE) -> HmarsDecision:
    """Run both relay approximations and the NOMA activation test.

    ``reported`` is the scenario as seen by the planner (use ``Scenario.reported()``
    or any scenario whose true positions are the reported ones). ``oma_gamma``
    selects the OMA threshold mapping, see :func:`oma_threshold`.
    """
    convention = OutageConvention.parse(convention)
    if reported.n < 2:
        raise ValueError("need at least two members")
    a, r0 = params.alpha, params.rho_eff
    members = reported.members
    i, j, target_oma, relay_oma = select_oma_relay(reported, counter)
    target_noma, relay_noma, c1, c2 = select_noma_relay(reported, params, i, counter)
    rho = power_factor(r0 * _dist_pow(math.dist(reported.pos_T, reported.pos_D), a))

    legs = noma_legs(reported, params, relay_noma, i, j, rho)
    # three more distances, d^-a and rho*r0 products for the lambdas
    _tick(counter, mul=12, add=9, trans=6)
    gamma = _gamma_from_legs(legs, counter)

    lhs = min(1.0 - noma_outage(lx, ly, gamma, convention) for lx, ly in legs)
    lam_oma = r0 * _dist_pow(_serving_distance(members, relay_oma, i, j), a)
    rhs = 1.0 - oma_outage(lam_oma, oma_threshold(gamma, params.beta, oma_gamma), convention)
    _tick(counter, mul=6, add=5, trans=4)  # OMA threshold, lambda and success term
    _tick(counter, mul=5, add=3, trans=1, times=2)  # each NOMA leg's success term
    _tick(counter, add=2)  # min of legs, final comparison

    scheme = NOMA if lhs >= rhs else OMA
    return HmarsDecision(scheme, relay_oma, relay_noma, i, j, target_oma, target_noma,
                         rho, c1, c2, gamma, lhs, rhs)
