"""Seeded Monte Carlo experiments: SE sweeps, NOMA duty cycle, validation, CSV.

Every trial draws from its own streams derived from ``(master_seed,
trial_index)``, so the same trial index sees the same topology, fading and
location-error directions at every sweep point, and results do not depend on
how trials are split across workers.
"""

from concurrent.futures import ProcessPoolExecutor
import csv
from dataclasses import asdict, dataclass, field, fields, replace
import json
import math
from typing import NamedTuple

import numpy as np

from .channel import ChannelParams
from .hmars import TIME_SHARE, OutageConvention, decide
from .links import NOMA, OpCounter, achieved_se, bfs_select_hybrid, draw_fading
from .scenario import ScenarioParams, make_scenario

DEFAULT_SWEEP = {
    "d0D_over_R": [0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0],
    "d0T_over_R": [1.5, 2.0, 2.5, 3.0],
    "r_e": [0.0, 5.0, 10.0],
}

CSV_COLUMNS = [
    "d0D_over_R", "d0T_over_R", "r_e", "se_bfs_oma", "se_bfs_noma", "se_hmars",
    "noma_duty_cycle", "ops_bfs_mul", "ops_bfs_add", "ops_bfs_trans",
    "ops_hmars_mul", "ops_hmars_add", "ops_hmars_trans", "trials",
]
SEM_COLUMNS = ["sem_bfs_oma", "sem_bfs_noma", "sem_hmars"]

# Stream slots within one trial.
_TOPOLOGY, _FADING, _LOCATION_ERROR = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: ScenarioParams = field(default_factory=ScenarioParams)
    channel: ChannelParams = field(default_factory=ChannelParams)
    trials: int = 100_000
    master_seed: int = 2024
    convention: OutageConvention = OutageConvention.REDERIVED
    oma_gamma: str = TIME_SHARE
    sweep: dict = field(default_factory=lambda: {k: list(v) for k, v in DEFAULT_SWEEP.items()})

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ConfigError("master_seed must be an unsigned 64-bit integer")
        object.__setattr__(self, "convention", OutageConvention.parse(self.convention))
        sweep = {k: list(v) for k, v in DEFAULT_SWEEP.items()}
        for key, values in dict(self.sweep).items():
            if key not in DEFAULT_SWEEP:
                raise ConfigError(f"unknown sweep parameter {key!r}")
            values = [float(v) for v in values]
            if not values or not all(math.isfinite(v) for v in values):
                raise ConfigError(f"sweep {key!r} needs finite values")
            if key == "r_e" and any(v < 0 for v in values):
                raise ConfigError("r_e sweep values must be >= 0")
            if key != "r_e" and any(v <= 0 for v in values):
                raise ConfigError(f"sweep {key!r} values must be positive")
            sweep[key] = values
        object.__setattr__(self, "sweep", sweep)

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        doc = dict(doc)
        try:
            if "scenario" in doc:
                doc["scenario"] = ScenarioParams(**doc["scenario"])
            if "channel" in doc:
                doc["channel"] = ChannelParams(**doc["channel"])
            unknown = set(doc) - {f.name for f in fields(cls)}
            if unknown:
                raise ConfigError(f"unknown config fields: {sorted(unknown)}")
            return cls(**doc)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError("config document must be a JSON object")
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["convention"] = self.convention.value
        return doc


class TrialOutcome(NamedTuple):
    se_bfs_oma: float
    se_bfs_noma: float
    se_hmars: float
    hmars_noma: bool
    n_members: int
    ops_bfs: tuple
    ops_hmars: tuple


@dataclass(frozen=True)
class MetricRecord:
    d0D_over_R: float
    d0T_over_R: float
    r_e: float
    se_bfs_oma: float
    se_bfs_noma: float
    se_hmars: float
    noma_duty_cycle: float
    ops_bfs: tuple
    ops_hmars: tuple
    trials: int
    sem_bfs_oma: float = 0.0
    sem_bfs_noma: float = 0.0
    sem_hmars: float = 0.0

    def row(self, with_sem=False):
        out = [self.d0D_over_R, self.d0T_over_R, self.r_e, self.se_bfs_oma, self.se_bfs_noma,
               self.se_hmars, self.noma_duty_cycle, *self.ops_bfs, *self.ops_hmars, self.trials]
        if with_sem:
            out += [self.sem_bfs_oma, self.sem_bfs_noma, self.sem_hmars]
        return out


def trial_rngs(master_seed: int, trial_index: int):
    """Independent (topology, fading, location-error) generators for one trial."""
    return tuple(np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(trial_index, slot)))
                 for slot in (_TOPOLOGY, _FADING, _LOCATION_ERROR))


def run_trial(config: ExperimentConfig, trial_index: int, scenario: ScenarioParams = None) -> TrialOutcome:
    """One topology/fading draw: both BFS optima and the SE H-MARS actually achieves."""
    params = scenario or config.scenario
    topo_rng, fading_rng, err_rng = trial_rngs(config.master_seed, trial_index)
    sc = make_scenario(params, topo_rng, err_rng)
    fading = draw_fading(sc.n, fading_rng)
    ch = config.channel

    ops_bfs = OpCounter()
    _, oma, noma = bfs_select_hybrid(sc, fading, ch, ops_bfs)

    ops_h = OpCounter()
    d = decide(sc.reported(), ch, config.convention, ops_h, oma_gamma=config.oma_gamma)
    got = achieved_se(sc, fading, ch, d.scheme, d.relay)
    return TrialOutcome(oma.eta_total, noma.eta_total, got.eta_total, d.scheme == NOMA, sc.n,
                        ops_bfs.as_tuple(), ops_h.as_tuple())


def _run_chunk(args):
    config, scenario, start, stop = args
    return [run_trial(config, t, scenario) for t in range(start, stop)]


def run_trials(config: ExperimentConfig, scenario: ScenarioParams = None, workers: int = 1):
    """All trial outcomes for one configuration point, in trial-index order."""
    n = config.trials
    if workers <= 1 or n < 2 * workers:
        return _run_chunk((config, scenario, 0, n))
    bounds = np.linspace(0, n, workers * 4 + 1).astype(int)
    jobs = [(config, scenario, int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return [o for chunk in pool.map(_run_chunk, jobs) for o in chunk]


def _mean_sem(values):
    n = len(values)
    mean = math.fsum(values) / n
    if n < 2:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var / n)


def aggregate(outcomes, scenario: ScenarioParams) -> MetricRecord:
    if not outcomes:
        raise ValueError("no trials to aggregate")
    n = len(outcomes)
    m_oma, s_oma = _mean_sem([o.se_bfs_oma for o in outcomes])
    m_noma, s_noma = _mean_sem([o.se_bfs_noma for o in outcomes])
    m_h, s_h = _mean_sem([o.se_hmars for o in outcomes])
    duty = sum(o.hmars_noma for o in outcomes) / n
    ops_bfs = tuple(sum(o.ops_bfs[k] for o in outcomes) / n for k in range(3))
    ops_h = tuple(sum(o.ops_hmars[k] for o in outcomes) / n for k in range(3))
    R = scenario.radius
    return MetricRecord(scenario.d0D / R, scenario.d0T / R, scenario.r_e, m_oma, m_noma, m_h,
                        duty, ops_bfs, ops_h, n, s_oma, s_noma, s_h)


def run_point(config: ExperimentConfig, scenario: ScenarioParams = None, workers: int = 1) -> MetricRecord:
    scenario = scenario or config.scenario
    return aggregate(run_trials(config, scenario, workers), scenario)


def _at(config, **ratios):
    R = config.scenario.radius
    kw = {}
    if "d0D_over_R" in ratios:
        kw["d0D"] = ratios["d0D_over_R"] * R
    if "d0T_over_R" in ratios:
        kw["d0T"] = ratios["d0T_over_R"] * R
    if "r_e" in ratios:
        kw["r_e"] = ratios["r_e"]
    return replace(config.scenario, **kw)


def sweep_dd(config: ExperimentConfig, workers: int = 1, progress=None):
    """SE and duty cycle versus v_D distance, other geometry from ``config.scenario``."""
    records = []
    for dd in config.sweep["d0D_over_R"]:
        records.append(run_point(config, _at(config, d0D_over_R=dd), workers))
        if progress:
            progress(records[-1])
    return records


def _grid(config, workers, progress):
    records = []
    for r_e in config.sweep["r_e"]:
        for dt in config.sweep["d0T_over_R"]:
            records.append(run_point(config, _at(config, d0T_over_R=dt, r_e=r_e), workers))
            if progress:
                progress(records[-1])
    return records


def duty_cycle_grid(config: ExperimentConfig, workers: int = 1, progress=None):
    """NOMA duty cycle over the (r_e, d0T/R) grid at the configured v_D distance."""
    return _grid(config, workers, progress)


def sweep_dt(config: ExperimentConfig, workers: int = 1, progress=None):
    """H-MARS SE over d0T/R for each location-error radius.

    Same grid as :func:`duty_cycle_grid`; the records carry both views.
    """
    return _grid(config, workers, progress)


def _write_rows(fh, records, with_sem):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS + (SEM_COLUMNS if with_sem else []))
    for rec in records:
        writer.writerow([_fmt(v) for v in rec.row(with_sem)])


def emit_csv(records, destination, with_sem: bool = False):
    """Write records as CSV to a path or an open text stream."""
    if hasattr(destination, "write"):
        _write_rows(destination, records, with_sem)
        return
    try:
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            _write_rows(fh, records, with_sem)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {destination}: {exc}") from exc


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def read_csv(path):
    with open(path, encoding="utf-8", newline="") as fh:
        return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(fh)]
