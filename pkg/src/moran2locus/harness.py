"""Experiment orchestration: configuration, replicate pools, the named
experiments behind the command line, and CSV/JSON input/output.

Replicate ``k`` of an experiment always uses seed
``replicate_seed(master_seed, k)`` and results are collected in index
order, so outputs do not depend on the number of worker threads.
"""

from __future__ import annotations

import csv
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import stats

from . import analytics as an
from . import fluid
from .model import CLASS_NAMES, Parameters, PopulationState, SimplexPoint, noise_bound
from .simulator import ConfigurationError, ReplicateSummary, SimConfig, replicate_seed, run

__all__ = [
    "THREADS_ENV",
    "EXPERIMENTS",
    "PRESETS",
    "QUANTILE_LEVELS",
    "ExperimentConfig",
    "SweepPoint",
    "SweepResult",
    "WindowResult",
    "PhaseCheckReport",
    "OdeCompareReport",
    "default_threads",
    "parse_config_file",
    "build_config",
    "run_replicates",
    "fixation_stats",
    "run_simulate",
    "run_sweep",
    "tstar_curve",
    "run_phase_check",
    "run_ode_compare",
    "SUMMARY_COLUMNS",
    "TRAJECTORY_COLUMNS",
    "LINEAGE_COLUMNS",
    "write_summary_csv",
    "read_summary_csv",
    "write_trajectory_csv",
    "read_trajectory_csv",
    "write_sweep_csv",
    "read_sweep_csv",
    "write_tstar_csv",
    "read_tstar_csv",
    "write_ode_compare_csv",
    "read_ode_compare_csv",
    "write_json",
    "dumps_json",
]

THREADS_ENV = "MORAN2LOCUS_THREADS"
EXPERIMENTS = ("simulate", "sweep", "tstar-curve", "phases", "phase-check", "ode-compare",
               "validate", "constants")
QUANTILE_LEVELS = (0.10, 0.25, 0.50, 0.75, 0.90)

THEOREM_CHECK = {"n": 100_000, "mu": 10 ** -3.75, "s": 0.1, "r": 10 ** -2.5}
FIGURE_1 = {"n": 10_000_000, "mu": 2e-6, "s": 1e-4, "r": 0.0,
            "r_values": tuple(float(v) for v in np.linspace(0.0, 5e-5, 51))}
PRESETS = {"theorem-check": THEOREM_CHECK, "figure-1": FIGURE_1}


def default_threads() -> int:
    env = os.environ.get(THREADS_ENV, "").strip()
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ConfigurationError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
        if n < 1:
            raise ConfigurationError(f"{THREADS_ENV} must be positive, got {n}")
        return n
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one command-line invocation needs."""

    params: Parameters
    experiment: str = "simulate"
    replicates: int = 1
    master_seed: int = 0
    threads: Optional[int] = None
    out: Optional[Path] = None
    sample_dt: Optional[float] = None
    max_time: float = math.inf
    max_events: Optional[int] = None
    track_lineage: bool = False
    initial: Optional[tuple] = None
    r_values: Optional[tuple] = None
    epsilon: float = an.DEFAULT_EPSILON
    delta: float = an.DEFAULT_DELTA
    slack: float = 2.0
    epsilon0: Optional[float] = None
    step: Optional[float] = None
    regime_hi: float = 10.0
    regime_lo: float = 1.0

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigurationError(f"unknown experiment {self.experiment!r}")
        if self.replicates < 1:
            raise ConfigurationError(f"replicates must be >= 1, got {self.replicates}")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {self.master_seed}")
        if self.threads is not None and self.threads < 1:
            raise ConfigurationError(f"threads must be >= 1, got {self.threads}")
        if self.r_values is not None and len(set(self.r_values)) != len(self.r_values):
            raise ConfigurationError("sweep points must be distinct")
        if not self.slack >= 1.0:
            raise ConfigurationError(f"slack must be >= 1, got {self.slack}")
        if self.initial is not None and (len(self.initial) != 4 or sum(self.initial) != self.params.N):
            raise ConfigurationError(f"initial counts {self.initial} must be four counts summing to N")

    @property
    def worker_count(self) -> int:
        return self.threads if self.threads is not None else default_threads()

    @property
    def eps0(self) -> float:
        return self.epsilon0 if self.epsilon0 is not None else self.delta ** 4 / 4

    def sim_config(self, seed: int, **overrides) -> SimConfig:
        init = None
        if self.initial is not None:
            init = PopulationState(*self.initial)
        kw = dict(params=self.params, seed=seed, max_time=self.max_time,
                  max_events=self.max_events, sample_interval=self.sample_dt,
                  track_lineage=self.track_lineage, initial_state=init)
        kw.update(overrides)
        return SimConfig(**kw)


def _parse_bool(v: str) -> bool:
    low = v.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigurationError(f"not a boolean: {v!r}")


def _parse_floats(v) -> tuple:
    if isinstance(v, (tuple, list)):
        return tuple(float(x) for x in v)
    text = str(v).strip()
    if ":" in text:
        # start:stop:count
        a, b, m = text.split(":")
        return tuple(float(x) for x in np.linspace(float(a), float(b), int(m)))
    return tuple(float(x) for x in text.split(",") if x.strip())


def _parse_int_tuple(v) -> tuple:
    if isinstance(v, (tuple, list)):
        return tuple(int(x) for x in v)
    return tuple(int(x) for x in str(v).split(","))


def _parse_int(v) -> int:
    return int(float(v)) if isinstance(v, str) and ("e" in v.lower()) else int(v)


def _opt_float(v):
    return None if v is None or str(v).strip().lower() in ("", "none") else float(v)


# config key -> (ExperimentConfig field or parameter name, parser)
_KEYS: dict[str, tuple[str, Callable]] = {
    "n": ("n", _parse_int),
    "mu": ("mu", float),
    "s": ("s", float),
    "r": ("r", float),
    "seed": ("master_seed", _parse_int),
    "replicates": ("replicates", _parse_int),
    "threads": ("threads", lambda v: None if str(v).lower() == "auto" else _parse_int(v)),
    "out": ("out", lambda v: None if v is None else Path(v)),
    "sample_dt": ("sample_dt", _opt_float),
    "max_time": ("max_time", lambda v: math.inf if v is None else float(v)),
    "max_events": ("max_events", lambda v: None if v is None else _parse_int(v)),
    "track_lineage": ("track_lineage", lambda v: v if isinstance(v, bool) else _parse_bool(v)),
    "initial": ("initial", _parse_int_tuple),
    "r_values": ("r_values", _parse_floats),
    "epsilon": ("epsilon", float),
    "delta": ("delta", float),
    "slack": ("slack", float),
    "epsilon0": ("epsilon0", _opt_float),
    "step": ("step", _opt_float),
    "regime_hi": ("regime_hi", float),
    "regime_lo": ("regime_lo", float),
}
CONFIG_KEYS = tuple(_KEYS) + ("preset",)


def parse_config_file(path) -> dict:
    """Read ``key = value`` lines (UTF-8, ``#`` starts a comment)."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_").lower()
            if key not in CONFIG_KEYS:
                raise ConfigurationError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = value
    return out


def build_config(experiment: str, file_values: Optional[dict] = None,
                 flag_values: Optional[dict] = None) -> ExperimentConfig:
    """Merge preset, config-file and flag values (later wins) into a
    validated :class:`ExperimentConfig`."""
    file_values = dict(file_values or {})
    flag_values = {k: v for k, v in (flag_values or {}).items() if v is not None}
    preset = flag_values.pop("preset", None) or file_values.pop("preset", None)
    file_values.pop("preset", None)
    merged: dict = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigurationError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        merged.update(PRESETS[preset])
    merged.update(file_values)
    merged.update(flag_values)
    values = {}
    for key, raw in merged.items():
        if key not in _KEYS:
            raise ConfigurationError(f"unknown setting {key!r}")
        name, parse = _KEYS[key]
        try:
            values[name] = parse(raw)
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(f"bad value for {key}: {raw!r} ({exc})") from None
    missing = [k for k in ("n", "mu", "s") if k not in values]
    if missing:
        raise ConfigurationError(f"missing model parameters {missing}; give flags or a --preset")
    try:
        params = Parameters(values.pop("n"), values.pop("mu"), values.pop("s"), values.pop("r", 0.0))
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(str(exc)) from None
    return ExperimentConfig(params=params, experiment=experiment, **values)


# ---------------------------------------------------------------------------
# replicate pool


def run_replicates(make_config: Callable[[int, int], SimConfig], indices: Sequence[int],
                   master_seed: int, threads: int = 1) -> list[ReplicateSummary]:
    """Run one simulation per index with seed ``replicate_seed(master_seed, i)``.

    ``make_config(index, seed)`` builds each :class:`SimConfig`.  Results
    come back in the order of ``indices`` whatever ``threads`` is.
    """
    def job(i):
        return run(make_config(i, replicate_seed(master_seed, i)))

    if threads <= 1 or len(indices) <= 1:
        return [job(i) for i in indices]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(job, indices))


def fixation_stats(summaries: Sequence[ReplicateSummary]) -> dict:
    """Quantiles, mean and standard error of the fixation times among the
    replicates that fixed."""
    times = np.array([x.fixation_time for x in summaries if x.fixed], dtype=float)
    out = {"replicates": len(summaries), "fixed": int(times.size)}
    if times.size == 0:
        out.update(quantiles={f"{q:g}": None for q in QUANTILE_LEVELS}, mean=None, se=None)
        return out
    qs = np.quantile(times, QUANTILE_LEVELS)
    out["quantiles"] = {f"{q:g}": float(v) for q, v in zip(QUANTILE_LEVELS, qs)}
    out["mean"] = float(times.mean())
    out["se"] = float(times.std(ddof=1) / math.sqrt(times.size)) if times.size > 1 else 0.0
    return out


def _regime_and_tstar(params: Parameters, hi: float = 10.0, lo: float = 1.0):
    if params.mu == 0:
        return None, None
    return an.classify_regime(params, hi, lo), an.t_star(params)


def _params_dict(p: Parameters) -> dict:
    return {"N": p.N, "mu": p.mu, "s": p.s, "r": p.r}


# ---------------------------------------------------------------------------
# simulate / sweep


@dataclass(frozen=True)
class SimulateResult:
    config: ExperimentConfig
    summaries: list
    aggregate: dict


def run_simulate(cfg: ExperimentConfig) -> SimulateResult:
    start = time.perf_counter()
    summaries = run_replicates(lambda i, seed: cfg.sim_config(seed), range(cfg.replicates),
                               cfg.master_seed, cfg.worker_count)
    regime, ts = _regime_and_tstar(cfg.params, cfg.regime_hi, cfg.regime_lo)
    agg = {"params": _params_dict(cfg.params), "regime": regime.tag if regime else None,
           "t_star": ts}
    agg.update(fixation_stats(summaries))
    agg["master_seed"] = cfg.master_seed
    agg["runtime_seconds"] = time.perf_counter() - start
    return SimulateResult(cfg, summaries, agg)


@dataclass(frozen=True)
class SweepPoint:
    params: Parameters
    regime: Optional[str]
    t_star: Optional[float]
    quantiles: dict
    mean: Optional[float]
    se: Optional[float]
    replicates: int
    fixed: int

    def as_dict(self) -> dict:
        return {"params": _params_dict(self.params), "regime": self.regime, "t_star": self.t_star,
                "quantiles": self.quantiles, "mean": self.mean, "se": self.se,
                "replicates": self.replicates, "fixed": self.fixed}


@dataclass(frozen=True)
class SweepResult:
    points: list
    summaries: list = field(repr=False, default_factory=list)
    runtime_seconds: float = 0.0


def _sweep_params(cfg: ExperimentConfig) -> list[Parameters]:
    rs = cfg.r_values if cfg.r_values is not None else (cfg.params.r,)
    try:
        return [replace(cfg.params, recombination_prob=float(r)) for r in rs]
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from None


def run_sweep(cfg: ExperimentConfig) -> SweepResult:
    """``replicates`` runs at each sweep point.  Replicate ``k`` of point
    ``j`` uses global index ``j * replicates + k``."""
    start = time.perf_counter()
    plist = _sweep_params(cfg)
    m = cfg.replicates

    def make(i, seed):
        return replace(cfg.sim_config(seed), params=plist[i // m])

    summaries = run_replicates(make, range(len(plist) * m), cfg.master_seed, cfg.worker_count)
    points = []
    for j, p in enumerate(plist):
        chunk = summaries[j * m:(j + 1) * m]
        regime, ts = _regime_and_tstar(p, cfg.regime_hi, cfg.regime_lo)
        st = fixation_stats(chunk)
        points.append(SweepPoint(p, regime.tag if regime else None, ts, st["quantiles"],
                                 st["mean"], st["se"], st["replicates"], st["fixed"]))
    return SweepResult(points, summaries, time.perf_counter() - start)


def tstar_curve(cfg: ExperimentConfig) -> list[tuple]:
    """``(r, t_star(r), regime)`` for each sweep point."""
    rows = []
    for p in _sweep_params(cfg):
        regime = an.classify_regime(p, cfg.regime_hi, cfg.regime_lo)
        rows.append((p.r, an.t_star(p), regime.tag))
    return rows


# ---------------------------------------------------------------------------
# phase check

PROBABILITY_FLOORS = {
    "t1": lambda e, d: 1 - 17 * e,
    "t2": lambda e, d: 1 - 21 * e,
    "t3": lambda e, d: 1 - 25 * e - 7 * d - d * d,
    "t4": lambda e, d: 1 - 26 * e - 7 * d - d * d,
}


@dataclass(frozen=True)
class WindowResult:
    window: an.Window
    evaluable: bool
    passes: int
    total: int
    floor: Optional[float]
    note: str = ""

    @property
    def fraction(self) -> Optional[float]:
        return self.passes / self.total if self.evaluable and self.total else None

    def as_dict(self) -> dict:
        w = self.window
        return {"name": w.name, "at": w.at, "time": w.time, "quantity": w.quantity,
                "lower": w.lower, "upper": w.upper, "evaluable": self.evaluable,
                "passes": self.passes, "total": self.total, "fraction": self.fraction,
                "floor": self.floor, "note": self.note}


@dataclass(frozen=True)
class PhaseCheckReport:
    params: Parameters
    regime: an.Regime
    branch: str
    slack: float
    schedule: an.PhaseSchedule
    results: list
    symmetry_pvalue: Optional[float]
    summaries: list = field(repr=False, default_factory=list)
    values: dict = field(repr=False, default_factory=dict)

    @property
    def schedule_valid(self) -> bool:
        return self.schedule.ordered

    def result(self, name: str) -> WindowResult:
        for res in self.results:
            if res.window.name == name:
                return res
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {
            "params": _params_dict(self.params),
            "regime": self.regime.tag, "rho": self.regime.rho, "branch": self.branch,
            "slack": self.slack,
            "schedule": self.schedule.times(),
            "schedule_violations": list(self.schedule.violations),
            "windows": [r.as_dict() for r in self.results],
            "symmetry_pvalue": self.symmetry_pvalue,
            "replicates": len(self.summaries),
        }

    def text(self) -> str:
        lines = [f"regime {self.regime.tag} (rho = {self.regime.rho:.4g}); formulas use {self.branch}",
                 f"window slack factor {self.slack:g}"]
        for k, v in self.schedule.times().items():
            lines.append(f"  {k:<9} = {v:.6g}")
        for v in self.schedule.violations:
            lines.append(f"  schedule violation: {v}")
        lines.append(f"{'window':<8} {'time':>10} {'lower':>12} {'upper':>12} {'inside':>9}  floor")
        for res in self.results:
            w = res.window
            frac = f"{res.passes}/{res.total}" if res.evaluable else "n/a"
            floor = f"{res.floor:.3f}" if res.floor is not None else "-"
            lines.append(f"{w.name:<8} {w.time:>10.4g} {w.lower:>12.5g} {w.upper:>12.5g} "
                         f"{frac:>9}  {floor}  {res.note}")
        if self.symmetry_pvalue is not None:
            lines.append(f"type-1/type-2 symmetry at t2: exact binomial p = {self.symmetry_pvalue:.4g}")
        return "\n".join(lines)


def _quantity(counts: np.ndarray, n: int, quantity: str) -> np.ndarray:
    cols = {"x0": [0], "x1": [1], "x2": [2], "x3": [3], "x1+x2": [1, 2]}[quantity]
    return counts[..., cols].sum(axis=-1) / n


def _cadlag_counts(summary: ReplicateSummary, times: np.ndarray) -> np.ndarray:
    st, counts = summary.sample_arrays()
    idx = np.searchsorted(st, times, side="right") - 1
    return counts[np.clip(idx, 0, None)]


def run_phase_check(cfg: ExperimentConfig) -> PhaseCheckReport:
    """Sample replicates at the phase times and count how often each
    (slack-widened) window holds.

    Windows at negative or non-finite phase times are reported as not
    evaluable.  Raises :class:`analytics.DegenerateParameterError` for
    ``mu = 0``.
    """
    p = cfg.params
    if p.mu == 0:
        raise an.DegenerateParameterError("mu = 0: no mutation, so the phases are undefined")
    regime = an.classify_regime(p, cfg.regime_hi, cfg.regime_lo)
    chain = an.derive_constants(cfg.epsilon, cfg.delta, p)
    sched = an.phase_schedule(p, chain)
    windows = [w.widened(cfg.slack) for w in an.phase_predictions(sched, p, chain)]
    phase_times = {k: v for k, v in sched.times().items() if k in ("t1", "t2", "t3", "t4")}
    valid = {k: v for k, v in phase_times.items() if math.isfinite(v) and v >= 0}
    grid = np.array(sorted(set(valid.values())), dtype=float)

    def make(i, seed):
        return cfg.sim_config(seed, sample_times=tuple(grid) if grid.size else None,
                              sample_interval=None)

    summaries = run_replicates(make, range(cfg.replicates), cfg.master_seed, cfg.worker_count)
    n = p.N
    values: dict = {}
    results = []
    for w in windows:
        if w.at == "t5":
            t_fix = np.array([x.fixation_time if x.fixed else np.nan for x in summaries])
            inside = (t_fix >= w.lower) & (t_fix <= w.upper)
            values[w.name] = t_fix
            results.append(WindowResult(w, True, int(inside.sum()), len(summaries), None))
            continue
        floor = PROBABILITY_FLOORS[w.at](cfg.epsilon, cfg.delta)
        if w.at not in valid:
            results.append(WindowResult(w, False, 0, len(summaries), floor,
                                        f"{w.at} = {w.time:.4g} is not a valid time"))
            continue
        t = valid[w.at]
        vals = np.array([_quantity(_cadlag_counts(x, np.array([t]))[0], n, w.quantity)
                         for x in summaries])
        values[w.name] = vals
        inside = (vals >= w.lower) & (vals <= w.upper)
        results.append(WindowResult(w, True, int(inside.sum()), len(summaries), floor))

    pvalue = None
    if "t2_x1" in values and "t2_x2" in values:
        w1 = next(r.window for r in results if r.window.name == "t2_x1")
        in1 = (values["t2_x1"] >= w1.lower) & (values["t2_x1"] <= w1.upper)
        in2 = (values["t2_x2"] >= w1.lower) & (values["t2_x2"] <= w1.upper)
        only1, only2 = int((in1 & ~in2).sum()), int((in2 & ~in1).sum())
        # exact McNemar: discordant replicates split 50/50 under symmetry
        pvalue = 1.0 if only1 + only2 == 0 else float(
            stats.binomtest(only1, only1 + only2, 0.5).pvalue)
    return PhaseCheckReport(p, regime, chain.branch, cfg.slack, sched, results, pvalue,
                            summaries, values)


# ---------------------------------------------------------------------------
# ODE comparison


@dataclass(frozen=True)
class OdeCompareReport:
    params: Parameters
    window: tuple
    requested_window: tuple
    epsilon0: float
    lipschitz: float
    bound: float
    deviations: np.ndarray
    seeds: list

    @property
    def exceedances(self) -> int:
        return int((self.deviations > self.epsilon0).sum())

    @property
    def frequency(self) -> float:
        return self.exceedances / self.deviations.size

    @property
    def standard_error(self) -> float:
        f = self.frequency
        return math.sqrt(f * (1 - f) / self.deviations.size)

    @property
    def consistent(self) -> bool:
        return self.frequency <= self.bound + 3 * self.standard_error

    def as_dict(self) -> dict:
        return {
            "params": _params_dict(self.params),
            "window": list(self.window), "requested_window": list(self.requested_window),
            "epsilon0": self.epsilon0, "lipschitz_k": self.lipschitz,
            "bound": self.bound, "exceedances": self.exceedances,
            "frequency": self.frequency, "se": self.standard_error,
            "consistent": self.consistent,
            "median_deviation": float(np.median(self.deviations)),
            "replicates": int(self.deviations.size),
        }


def run_ode_compare(cfg: ExperimentConfig, window: Optional[tuple] = None) -> OdeCompareReport:
    """Sup-distance between each replicate and the full-drift ODE anchored
    at that replicate's state at the window start.

    The default window is ``[t1, t2]`` of the phase schedule, with a
    negative ``t1`` moved up to 0.
    """
    p = cfg.params
    if window is None:
        if p.mu == 0:
            raise an.DegenerateParameterError("mu = 0: t1 and t2 are undefined")
        chain = an.derive_constants(cfg.epsilon, cfg.delta, p)
        sched = an.phase_schedule(p, chain)
        requested = (sched.t1, sched.t2)
    else:
        requested = tuple(float(v) for v in window)
    a, b = max(requested[0], 0.0), requested[1]
    if not b >= a:
        raise an.ScheduleError(f"empty comparison window [{requested[0]}, {requested[1]}]")
    step = cfg.step if cfg.step is not None else 1e-3 / p.s
    grid = fluid.uniform_grid(a, b, step)
    k = fluid.estimate_lipschitz()
    bound = fluid.dn_probability_bound(b - a, cfg.eps0, k * p.s, noise_bound(p))

    def make(i, seed):
        # a window ending at 0 only needs the initial state
        stop = dict(max_time=b) if b > 0 else dict(max_events=0)
        return cfg.sim_config(seed, sample_times=tuple(grid), sample_interval=None,
                              track_lineage=False, **stop)

    def one(i):
        seed = replicate_seed(cfg.master_seed, i)
        summ = run(make(i, seed))
        anchor = _cadlag_counts(summ, grid[:1])[0] / p.N
        sol = fluid.integrate(SimplexPoint(*anchor[1:]), p, (a, b), step, fluid.FULL_BETA)
        return fluid.sup_deviation(summ, sol, (a, b)), seed

    idx = range(cfg.replicates)
    if cfg.worker_count <= 1:
        out = [one(i) for i in idx]
    else:
        with ThreadPoolExecutor(max_workers=cfg.worker_count) as pool:
            out = list(pool.map(one, idx))
    devs = np.array([d for d, _ in out])
    return OdeCompareReport(p, (a, b), requested, cfg.eps0, k, bound, devs, [sd for _, sd in out])


# ---------------------------------------------------------------------------
# files

SUMMARY_COLUMNS = ("seed", "N", "mu", "s", "r", "regime", "t_star", "T_fix", "events",
                   "termination")
TRAJECTORY_COLUMNS = ("time", "x0", "x1", "x2", "x3")
LINEAGE_COLUMNS = ("x1m", "x1r", "x2m", "x2r", "x3m", "x3r", "x0r")
SWEEP_COLUMNS = ("r", "N", "mu", "s", "regime", "t_star", "q10", "q25", "q50", "q75", "q90",
                 "mean", "se", "replicates", "fixed")


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _ensure_parent(path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)


def write_summary_csv(path, summaries: Sequence[ReplicateSummary], params_list=None,
                      hi: float = 10.0, lo: float = 1.0) -> None:
    """One row per replicate; ``params_list[i]`` gives replicate ``i``'s
    parameters when they differ (sweeps)."""
    path = Path(path)
    _ensure_parent(path)
    cache: dict = {}
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for i, x in enumerate(summaries):
            p = params_list[i]
            if p not in cache:
                cache[p] = _regime_and_tstar(p, hi, lo)
            regime, ts = cache[p]
            w.writerow([_fmt(v) for v in (x.seed, p.N, p.mu, p.s, p.r,
                                          regime.tag if regime else "undefined", ts,
                                          x.fixation_time, x.event_count, x.termination)])


def read_summary_csv(path) -> list[dict]:
    conv = {"seed": int, "N": int, "mu": float, "s": float, "r": float, "regime": str,
            "t_star": float, "T_fix": float, "events": int, "termination": str}
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != SUMMARY_COLUMNS:
            raise ValueError(f"unexpected summary header {header}")
        for rec in reader:
            rows.append({k: (None if v == "" else conv[k](v)) for k, v in zip(header, rec)})
    return rows


def write_trajectory_csv(path, summary: ReplicateSummary) -> None:
    path = Path(path)
    _ensure_parent(path)
    lineage = bool(summary.samples) and summary.samples[0].ledger is not None
    cols = TRAJECTORY_COLUMNS + (LINEAGE_COLUMNS if lineage else ())
    order = [CLASS_NAMES.index(c[1:]) for c in LINEAGE_COLUMNS]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for smp in summary.samples:
            row = [repr(float(smp.time)), *smp.state.counts]
            if lineage:
                arr = smp.ledger.as_array()
                row += [int(arr[j]) for j in order]
            w.writerow(row)


def read_trajectory_csv(path) -> tuple[tuple, np.ndarray, np.ndarray]:
    """Return ``(columns, times, counts)``; ``counts`` has one integer
    column per non-time column."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header[:5] != TRAJECTORY_COLUMNS or header[5:] not in ((), LINEAGE_COLUMNS):
            raise ValueError(f"unexpected trajectory header {header}")
        times, counts = [], []
        for rec in reader:
            times.append(float(rec[0]))
            counts.append([int(v) for v in rec[1:]])
    return header, np.array(times), np.array(counts, dtype=np.int64).reshape(-1, len(header) - 1)


def _open_out(path_or_file):
    # yields a text handle for a path (created) or an already open file
    if hasattr(path_or_file, "write"):
        return _Borrowed(path_or_file)
    path = Path(path_or_file)
    _ensure_parent(path)
    return open(path, "w", newline="", encoding="utf-8")


class _Borrowed:
    def __init__(self, fh):
        self.fh = fh

    def __enter__(self):
        return self.fh

    def __exit__(self, *exc):
        return False


def write_sweep_csv(path_or_file, result: SweepResult) -> None:
    with _open_out(path_or_file) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for pt in result.points:
            q = [pt.quantiles[f"{lv:g}"] for lv in QUANTILE_LEVELS]
            w.writerow([_fmt(v) for v in (pt.params.r, pt.params.N, pt.params.mu, pt.params.s,
                                          pt.regime, pt.t_star, *q, pt.mean, pt.se,
                                          pt.replicates, pt.fixed)])


ODE_COMPARE_COLUMNS = ("seed", "sup_deviation", "exceeded")


def write_ode_compare_csv(path_or_file, rows) -> None:
    with _open_out(path_or_file) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ODE_COMPARE_COLUMNS)
        for seed, dev, exceeded in rows:
            w.writerow((int(seed), repr(float(dev)), int(bool(exceeded))))


def read_ode_compare_csv(path) -> list[tuple]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        if tuple(next(reader)) != ODE_COMPARE_COLUMNS:
            raise ValueError("unexpected ode-compare header")
        return [(int(a), float(b), bool(int(c))) for a, b, c in reader]


def read_sweep_csv(path) -> list[dict]:
    ints = {"N", "replicates", "fixed"}
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != SWEEP_COLUMNS:
            raise ValueError(f"unexpected sweep header {header}")
        for rec in reader:
            row = {}
            for k, v in zip(header, rec):
                if v == "":
                    row[k] = None
                elif k == "regime":
                    row[k] = v
                else:
                    row[k] = int(v) if k in ints else float(v)
            rows.append(row)
    return rows


def write_tstar_csv(path_or_file, rows) -> None:
    with _open_out(path_or_file) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("r", "t_star", "regime"))
        for r, ts, tag in rows:
            w.writerow((repr(float(r)), repr(float(ts)), tag))


def read_tstar_csv(path) -> list[tuple]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        if tuple(next(reader)) != ("r", "t_star", "regime"):
            raise ValueError("unexpected t-star header")
        return [(float(a), float(b), c) for a, b, c in reader]


def _jsonable(obj):
    # non-finite floats become null, numpy scalars become Python numbers
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, Path):
        return str(obj)
    return obj


def dumps_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(path, obj) -> None:
    path = Path(path)
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_json(obj))
