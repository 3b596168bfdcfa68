"""Relay selection and hybrid OMA/NOMA multiple access for sidelink multicast.

Location-based relay selection (H-MARS) next to brute-force benchmarks, plus
a seeded Monte Carlo harness for sweeping interferer geometry.
"""

from .channel import ChannelParams, mean_snr_linear, path_loss_db, power_factor
from .hmars import HmarsDecision, OutageConvention, decide
from .links import FadingDraw, OpCounter, SEReport, bfs_select_noma, bfs_select_oma
from .scenario import Point2D, Scenario, ScenarioParams, make_scenario

__version__ = "0.1.0"

__all__ = [
    "ChannelParams",
    "FadingDraw",
    "HmarsDecision",
    "OpCounter",
    "OutageConvention",
    "Point2D",
    "SEReport",
    "Scenario",
    "ScenarioParams",
    "bfs_select_noma",
    "bfs_select_oma",
    "decide",
    "make_scenario",
    "mean_snr_linear",
    "path_loss_db",
    "power_factor",
]
