"""Random multicast-group topologies and interferer placement.

The group center is the coordinate origin. Members are a Poisson number of
points uniform on the disk of radius ``R``; the mode-2 transmitter v_T and its
receiver v_D sit at fixed polar positions around the center.
"""

from dataclasses import dataclass, field, replace
import math
from typing import NamedTuple

import numpy as np


class Point2D(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class ScenarioParams:
    radius: float = 50.0
    node_density: float = 0.0025
    d0T: float = 150.0
    d0D: float = 60.0
    azimuth_T: float = 0.0
    azimuth_D: float = 0.0
    r_e: float = 0.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if not self.node_density > 0:
            raise ValueError(f"node_density must be positive, got {self.node_density}")
        if self.d0T < 0 or self.d0D < 0:
            raise ValueError("interferer distances must be non-negative")
        if self.r_e < 0:
            raise ValueError(f"r_e must be non-negative, got {self.r_e}")

    @property
    def mean_group_size(self) -> float:
        return self.node_density * math.pi * self.radius ** 2


@dataclass(frozen=True, eq=False)
class Scenario:
    """True geometry plus the (possibly perturbed) positions a planner sees.

    ``members`` and ``reported_members`` are ``(N, 2)`` arrays; the interferer
    positions are length-2 arrays.
    """

    members: np.ndarray
    pos_T: np.ndarray
    pos_D: np.ndarray
    reported_members: np.ndarray = field(default=None)
    reported_T: np.ndarray = field(default=None)
    reported_D: np.ndarray = field(default=None)

    def __post_init__(self):
        members = np.asarray(self.members, dtype=float).reshape(-1, 2)
        if len(members) < 2:
            raise ValueError("a multicast group needs at least two members")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "pos_T", np.asarray(self.pos_T, dtype=float))
        object.__setattr__(self, "pos_D", np.asarray(self.pos_D, dtype=float))
        for name, src in (("reported_members", members),
                          ("reported_T", self.pos_T), ("reported_D", self.pos_D)):
            val = getattr(self, name)
            val = src.copy() if val is None else np.asarray(val, dtype=float)
            object.__setattr__(self, name, val)
        if self.reported_members.shape != members.shape:
            raise ValueError("reported_members must match members in shape")

    @property
    def n(self) -> int:
        return len(self.members)

    def reported(self) -> "Scenario":
        """The scenario as a location-only planner sees it."""
        return Scenario(self.reported_members, self.reported_T, self.reported_D)


def distance(p, q) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def _truncated_poisson(mean: float, rng: np.random.Generator) -> int:
    # Inverse CDF of Poisson(mean) conditioned on N >= 2; pmf ratios avoid
    # under/overflow for tiny and large means alike.
    u = rng.random()
    terms = [1.0]
    k = 2
    while True:
        k += 1
        terms.append(terms[-1] * mean / k)
        if terms[-1] < 1e-17 * sum(terms):
            break
    total = math.fsum(terms)
    acc = 0.0
    for i, t in enumerate(terms):
        acc += t / total
        if u < acc:
            return i + 2
    return len(terms) + 1


def sample_group(params: ScenarioParams, rng: np.random.Generator) -> np.ndarray:
    """Member positions as an ``(N, 2)`` array, ``N ~ Poisson`` resampled until ``N >= 2``."""
    mean = params.mean_group_size
    # Rejection is exact but hopeless when P(N >= 2) is tiny.
    if mean >= 1.0:
        n = 0
        while n < 2:
            n = int(rng.poisson(mean))
    else:
        n = _truncated_poisson(mean, rng)
    r = params.radius * np.sqrt(rng.random(n))
    theta = rng.uniform(0.0, 2.0 * np.pi, n)
    return np.column_stack((r * np.cos(theta), r * np.sin(theta)))


def place_interferers(params: ScenarioParams) -> tuple:
    pos_T = Point2D(params.d0T * math.cos(params.azimuth_T), params.d0T * math.sin(params.azimuth_T))
    pos_D = Point2D(params.d0D * math.cos(params.azimuth_D), params.d0D * math.sin(params.azimuth_D))
    if distance(pos_T, pos_D) == 0.0:
        raise ValueError("v_T and v_D coincide (d_TD = 0)")
    return pos_T, pos_D


def _offsets(n: int, r_e: float, rng: np.random.Generator) -> np.ndarray:
    # Uniform radius in [0, r_e] (not uniform over the disk area), uniform angle.
    radius = r_e * rng.random(n)
    angle = rng.uniform(0.0, 2.0 * np.pi, n)
    return np.column_stack((radius * np.cos(angle), radius * np.sin(angle)))


def perturb_locations(scenario: Scenario, r_e: float, rng: np.random.Generator) -> Scenario:
    """Attach reported positions that are each within ``r_e`` of the truth.

    Members first, then v_T, then v_D consume the stream, so a fixed stream gives
    offsets that simply scale with ``r_e``.
    """
    if r_e < 0:
        raise ValueError(f"r_e must be non-negative, got {r_e}")
    off = _offsets(scenario.n + 2, r_e, rng)
    return replace(
        scenario,
        reported_members=scenario.members + off[:-2],
        reported_T=scenario.pos_T + off[-2],
        reported_D=scenario.pos_D + off[-1],
    )


def make_scenario(params: ScenarioParams, topology_rng: np.random.Generator,
                  error_rng: np.random.Generator) -> Scenario:
    members = sample_group(params, topology_rng)
    pos_T, pos_D = place_interferers(params)
    return perturb_locations(Scenario(members, pos_T, pos_D), params.r_e, error_rng)
