"""Cross-checks of the closed forms and selectors against independent oracles.

Each check returns a :class:`Check`; :func:`validate` runs them all with one
seed and is what the ``validate`` CLI subcommand reports.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy import integrate

from .channel import ChannelParams, mean_snr_linear, power_factor
from .hmars import decide, expected_noma_se, noma_outage, oma_outage, select_noma_relay, select_oma_relay
from .links import bfs_select_noma, bfs_select_oma, draw_fading
from .scenario import Scenario
from .special import exp_e1_scaled

E1_POINTS = (0.01, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0)
# Midpoint of a farthest pair is within sqrt(3) of the optimal 1-center radius.
ONE_CENTER_FACTOR = math.sqrt(3.0)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    measured: float
    tolerance: float

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.passed))
        object.__setattr__(self, "measured", float(self.measured))
        object.__setattr__(self, "tolerance", float(self.tolerance))


def quad_exp_e1_scaled(x: float) -> float:
    """e^x E1(x) as the integral of e^-u / (x + u) over u >= 0."""
    f = lambda u: math.exp(-u) / (x + u)
    head, _ = integrate.quad(f, 0.0, 1.0, epsabs=0.0, epsrel=1e-13, limit=200)
    tail, _ = integrate.quad(f, 1.0, np.inf, epsabs=0.0, epsrel=1e-13, limit=200)
    return head + tail


def quad_expected_noma_se(lambda_x: float, lambda_y: float) -> float:
    """E[log2(1 + X/(Y+1))] for exponential X, Y with means lambda_x, lambda_y.

    Uses E ln(1+Z) = int P(Z > s)/(1+s) ds with
    P(X/(Y+1) > s) = e^{-s/lx} / (1 + s ly/lx), after s = lx*u.
    """
    lx, ly = lambda_x, lambda_y
    f = lambda u: math.exp(-u) * lx / ((1.0 + lx * u) * (1.0 + ly * u))
    val, _ = integrate.quad(f, 0.0, np.inf, epsabs=0.0, epsrel=1e-12, limit=400)
    return val / math.log(2.0)


def grid_one_center_radius(points: np.ndarray, radius: float, step: float = 0.5) -> float:
    """Smallest max-distance to ``points`` over a square grid covering the disk."""
    axis = np.arange(-radius, radius + step / 2, step)
    gx, gy = np.meshgrid(axis, axis)
    grid = np.column_stack((gx.ravel(), gy.ravel()))
    best = np.inf
    for chunk in np.array_split(grid, max(1, len(grid) // 4096)):
        d2 = ((chunk[:, None, :] - points[None, :, :]) ** 2).sum(axis=2)
        best = min(best, float(np.sqrt(d2.max(axis=1)).min()))
    return best


def _random_disk(rng, n, radius):
    r = radius * np.sqrt(rng.random(n))
    t = rng.uniform(0, 2 * np.pi, n)
    return np.column_stack((r * np.cos(t), r * np.sin(t)))


def _random_scenario(rng, n, radius=50.0):
    members = _random_disk(rng, n, radius)
    dT = rng.uniform(1.2, 4.0) * radius
    dD = rng.uniform(0.3, 2.5) * radius
    aT, aD = rng.uniform(0, 2 * np.pi, 2)
    pos_T = (dT * math.cos(aT), dT * math.sin(aT))
    pos_D = (dD * math.cos(aD), dD * math.sin(aD))
    return Scenario(members, pos_T, pos_D)


def check_rho_identity(rng, count=1000, tol=1e-12) -> Check:
    x = np.exp(rng.uniform(math.log(1e-6), math.log(1e6), count))
    rho = power_factor(x)
    err = np.abs(0.5 * np.log2(1.0 + x) - np.log2(1.0 + rho * x)).max()
    return Check("rho_identity", bool(err < tol), float(err), tol)


def check_exp_e1(tol=1e-10) -> list:
    worst = max(abs(exp_e1_scaled(x) - quad_exp_e1_scaled(x)) / quad_exp_e1_scaled(x) for x in E1_POINTS)
    big = exp_e1_scaled(1e6)
    asym = (1.0 / 1e6) * (1.0 - 1.0 / 1e6)
    big_err = abs(big - asym) / asym
    return [Check("e1_vs_quadrature", worst <= tol, worst, tol),
            Check("e1_large_x", math.isfinite(big) and big_err <= 1e-6, big_err, 1e-6)]


def check_ergodic_se(rng, tol=1e-3) -> list:
    ref = expected_noma_se(1.0, 2.0)
    checks = [Check("ergodic_se_1_2", abs(ref - 0.4711) <= tol, abs(ref - 0.4711), tol)]
    worst = 0.0
    for lx, ly in np.exp(rng.uniform(math.log(1e-2), math.log(1e3), (20, 2))):
        worst = max(worst, abs(expected_noma_se(lx, ly) - quad_expected_noma_se(lx, ly)))
    checks.append(Check("ergodic_se_random_pairs", worst <= tol, worst, tol))
    deg = max(abs(expected_noma_se(lam, lam) - quad_expected_noma_se(lam, lam)) for lam in (0.1, 1.0, 10.0))
    checks.append(Check("ergodic_se_degenerate", deg <= tol, deg, tol))
    return checks


def _binomial_z(p_hat, p, draws):
    sigma = max(math.sqrt(p * (1.0 - p) / draws), 1.0 / draws)
    return abs(p_hat - p) / sigma


def check_outage_sampling(rng, triples=10, draws=10**6, n_sigma=3.0) -> list:
    """Rederived outage expressions against direct sampling of the exponentials."""
    worst_noma = worst_oma = 0.0
    for _ in range(triples):
        lx, ly = np.exp(rng.uniform(math.log(0.1), math.log(100.0), 2))
        gamma = math.exp(rng.uniform(math.log(0.05), math.log(20.0)))
        X = lx * rng.exponential(1.0, draws)
        Y = ly * rng.exponential(1.0, draws)
        z_n = _binomial_z(np.mean(X / (Y + 1.0) < gamma), noma_outage(lx, ly, gamma), draws)
        z_o = _binomial_z(np.mean(X < gamma), oma_outage(lx, gamma), draws)
        worst_noma = max(worst_noma, z_n)
        worst_oma = max(worst_oma, z_o)
    return [Check("noma_outage_vs_sampling", worst_noma <= n_sigma, worst_noma, n_sigma),
            Check("oma_outage_vs_sampling", worst_oma <= n_sigma, worst_oma, n_sigma)]


def rescan_oma(sc, fading, params):
    """Objective of every relay, evaluated link by link through the dB path-loss route."""
    n = sc.n
    eta_2 = (1 - params.beta) * math.log2(
        1 + fading.g_T_D * mean_snr_linear(math.dist(sc.pos_T, sc.pos_D), params))
    out = []
    for r in range(n):
        worst = min(params.beta * math.log2(
            1 + fading.g_relay_member[r, k] * mean_snr_linear(math.dist(sc.members[r], sc.members[k]), params))
            for k in range(n) if k != r)
        out.append(worst + eta_2)
    return out


def rescan_noma(sc, fading, params):
    n = sc.n
    x_TD = fading.g_T_D * mean_snr_linear(math.dist(sc.pos_T, sc.pos_D), params)
    rho = (math.sqrt(1 + x_TD) - 1) / x_TD
    eta_2 = math.log2(1 + rho * x_TD)
    out = []
    for r in range(n):
        legs = []
        for k in range(n):
            if k == r:
                continue
            s = fading.g_relay_member[r, k] * mean_snr_linear(math.dist(sc.members[r], sc.members[k]), params)
            i = rho * fading.g_T_member[k] * mean_snr_linear(math.dist(sc.pos_T, sc.members[k]), params)
            legs.append(math.log2(1 + s / (i + 1)))
        s_D = fading.g_relay_D[r] * mean_snr_linear(math.dist(sc.members[r], sc.pos_D), params)
        legs.append(math.log2(1 + s_D / (rho * x_TD + 1)))
        out.append(min(legs) + eta_2)
    return out


def check_bfs_optimality(rng, instances=100, max_n=10, params=ChannelParams()) -> list:
    gap_oma = gap_noma = -np.inf
    for _ in range(instances):
        sc = _random_scenario(rng, int(rng.integers(2, max_n + 1)))
        fading = draw_fading(sc.n, rng)
        gap_oma = max(gap_oma, max(rescan_oma(sc, fading, params))
                      - bfs_select_oma(sc, fading, params).eta_total)
        gap_noma = max(gap_noma, max(rescan_noma(sc, fading, params))
                       - bfs_select_noma(sc, fading, params).eta_total)
    tol = 1e-9
    return [Check("bfs_oma_optimal", gap_oma <= tol, gap_oma, tol),
            Check("bfs_noma_optimal", gap_noma <= tol, gap_noma, tol)]


def check_one_center(rng, instances=20, n=20, radius=50.0) -> Check:
    """Farthest-pair midpoint against a 0.5 m grid search for the minimax point."""
    worst_ratio = 0.0
    ok = True
    for _ in range(instances):
        sc = _random_scenario(rng, n, radius)
        i, j, mid, _ = select_oma_relay(sc)
        reach = float(np.sqrt(((sc.members - np.asarray(mid)) ** 2).sum(axis=1)).max())
        ok &= reach >= 0.5 * math.dist(sc.members[i], sc.members[j]) - 1e-9
        worst_ratio = max(worst_ratio, reach / grid_one_center_radius(sc.members, radius))
    return Check("one_center_factor", bool(ok and worst_ratio <= ONE_CENTER_FACTOR),
                 worst_ratio, ONE_CENTER_FACTOR)


def noma_balance_residual(sc, params=ChannelParams()) -> float:
    """Relative mismatch of c2 d^-a and c1 (d_iD - d)^-a at the NOMA target point."""
    i, _, _, _ = select_oma_relay(sc)
    target, _, c1, c2 = select_noma_relay(sc, params, i)
    a = params.alpha
    d = math.dist(sc.members[i], target)
    d_iD = math.dist(sc.members[i], sc.pos_D)
    lhs = c2 * d ** -a
    rhs = c1 * (d_iD - d) ** -a
    return abs(lhs - rhs) / abs(rhs)


def check_noma_balance(rng, instances=100, tol=1e-9) -> Check:
    worst = max(noma_balance_residual(_random_scenario(rng, int(rng.integers(2, 40))))
                for _ in range(instances))
    return Check("noma_balance_residual", worst <= tol, worst, tol)


def check_decision_determinism(rng, params=ChannelParams()) -> Check:
    sc = _random_scenario(rng, 20)
    same = decide(sc, params) == decide(Scenario(sc.members.copy(), sc.pos_T.copy(), sc.pos_D.copy()), params)
    return Check("decision_determinism", bool(same), float(same), 1.0)


@dataclass(frozen=True)
class ValidationReport:
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def validate(seed: int = 2024, outage_draws: int = 10**6) -> ValidationReport:
    rng = np.random.default_rng(seed)
    checks = [check_rho_identity(rng)]
    checks += check_exp_e1()
    checks += check_ergodic_se(rng)
    checks += check_outage_sampling(rng, draws=outage_draws)
    checks += check_bfs_optimality(rng)
    checks.append(check_one_center(rng))
    checks.append(check_noma_balance(rng))
    checks.append(check_decision_determinism(rng))
    return ValidationReport(checks)
