"""Exact (Gillespie) simulation of the two-locus Moran chain.

Random numbers come from numpy's ``Philox`` counter-based bit generator.
Replicate ``k`` of an experiment with master seed ``m`` is seeded with
:func:`replicate_seed`, i.e. the first 64-bit word of
``numpy.random.SeedSequence([m, k])``, so a replicate's stream depends only
on ``(m, k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels as K
from .model import Parameters, PopulationState, SimplexPoint, SubtypeLedger

__all__ = [
    "ConfigurationError",
    "SimConfig",
    "Sample",
    "ReplicateSummary",
    "replicate_seed",
    "make_generator",
    "run",
    "run_with_lineage",
    "sample_trajectory",
]

_TERMINATION = {
    K.FIXED: "fixed",
    K.TIME_CAP: "time_cap",
    K.EVENT_CAP: "event_cap",
    K.ABSORBED: "absorbed_unfixable",
}

# grid points handed to the kernel per chunk when max_time is unbounded
_GRID_CHUNK = 4096
_NO_EVENT_CAP = np.iinfo(np.int64).max


class ConfigurationError(ValueError):
    """Invalid :class:`SimConfig`."""


def replicate_seed(master_seed: int, index: int) -> int:
    """64-bit seed of replicate ``index`` under ``master_seed``."""
    seq = np.random.SeedSequence([int(master_seed), int(index)])
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def make_generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed)))


@dataclass(frozen=True)
class SimConfig:
    params: Parameters
    seed: int = 0
    max_time: float = math.inf
    max_events: Optional[int] = None
    sample_interval: Optional[float] = None
    sample_times: Optional[tuple] = None
    track_lineage: bool = False
    initial_state: Optional[PopulationState] = None

    def validate(self) -> None:
        if not isinstance(self.params, Parameters):
            raise ConfigurationError("params must be a Parameters instance")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not self.max_time > 0:
            raise ConfigurationError(f"max_time must be positive, got {self.max_time}")
        if self.max_events is not None and self.max_events < 0:
            raise ConfigurationError(f"max_events must be nonnegative, got {self.max_events}")
        if self.sample_interval is not None and not (
            self.sample_interval > 0 and math.isfinite(self.sample_interval)
        ):
            raise ConfigurationError(
                f"sample_interval must be positive, got {self.sample_interval}")
        if self.sample_times is not None:
            st = np.asarray(self.sample_times, dtype=float)
            if st.ndim != 1 or np.any(st < 0) or np.any(np.diff(st) <= 0):
                raise ConfigurationError("sample_times must be nonnegative and strictly increasing")
        init = self.initial_state
        if init is not None and init.n != self.params.N:
            raise ConfigurationError(
                f"initial state {init.counts} does not sum to N={self.params.N}")

    @property
    def start(self) -> PopulationState:
        if self.initial_state is None:
            return PopulationState.all_type(0, self.params.N)
        return self.initial_state


@dataclass(frozen=True)
class Sample:
    time: float
    state: PopulationState
    ledger: Optional[SubtypeLedger] = None


@dataclass(frozen=True)
class ReplicateSummary:
    seed: int
    fixation_time: Optional[float]
    event_count: int
    final_state: PopulationState
    termination: str
    samples: tuple = field(default=(), repr=False)

    @property
    def fixed(self) -> bool:
        return self.termination == "fixed"

    @property
    def end_time(self) -> float:
        return self.final_state.time

    def sample_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Sample times and an ``(n, 4)`` array of type counts."""
        times = np.array([smp.time for smp in self.samples])
        counts = np.array([smp.state.counts for smp in self.samples], dtype=np.int64)
        return times, counts.reshape(-1, 4)


class _Grid:
    """Supplies sample times to the kernel in chunks, so long or unbounded
    runs never materialize the whole grid."""

    def __init__(self, config: SimConfig):
        self.extendable = False
        self.interval = config.sample_interval
        if config.sample_times is not None:
            self.times = np.asarray(config.sample_times, dtype=float)
            return
        if self.interval is None:
            self.times = np.empty(0)
            return
        if math.isfinite(config.max_time):
            self.total = int(math.floor(config.max_time / self.interval)) + 1
        else:
            self.total = None
        self.next_index = 0
        self.extend()

    def extend(self) -> None:
        stop = self.next_index + _GRID_CHUNK
        if self.total is not None:
            stop = min(stop, self.total)
        self.times = self.interval * np.arange(self.next_index, stop, dtype=float)
        self.next_index = stop
        self.extendable = self.total is None or stop < self.total


def _simulate(config: SimConfig, lineage: bool) -> ReplicateSummary:
    config.validate()
    p = config.params
    start = config.start
    gen = make_generator(config.seed)
    max_events = _NO_EVENT_CAP if config.max_events is None else int(config.max_events)
    max_time = float(config.max_time)
    if lineage:
        state = SubtypeLedger.from_state(start).as_array()
        kernel = K.run_lineage
    else:
        state = np.array(start.counts, dtype=np.int64)
        kernel = K.run_aggregate
    width = state.shape[0]

    grid = _Grid(config)
    chunks_t, chunks_x = [], []
    t, pending, events = float(start.time), -1.0, 0
    while True:
        buf_t = np.empty(grid.times.shape[0])
        buf_x = np.empty((grid.times.shape[0], width), dtype=np.int64)
        # skip grid points before the starting time
        si = int(np.searchsorted(grid.times, t, side="left"))
        status, t, pending, events, si, bi = kernel(
            state, t, pending, events, gen, p.N, p.mu, p.s, p.r, max_time, max_events,
            grid.times, si, grid.extendable, buf_t, buf_x, 0,
        )
        chunks_t.append(buf_t[:bi])
        chunks_x.append(buf_x[:bi])
        if status != K.NEED_SAMPLES:
            break
        grid.extend()

    times = np.concatenate(chunks_t) if chunks_t else np.empty(0)
    rows = np.concatenate(chunks_x) if chunks_x else np.empty((0, width), dtype=np.int64)

    def make_sample(time, row):
        if lineage:
            ledger = SubtypeLedger.from_array(row)
            return Sample(float(time), PopulationState(*ledger.type_counts(), time=float(time)), ledger)
        return Sample(float(time), PopulationState(*(int(v) for v in row), time=float(time)))

    final = make_sample(t, state)
    samples = []
    if config.sample_interval is not None or config.sample_times is not None:
        if times.shape[0] == 0 or times[0] > start.time:
            init_row = SubtypeLedger.from_state(start).as_array() if lineage else start.counts
            samples.append(make_sample(start.time, init_row))
        samples.extend(make_sample(tt, row) for tt, row in zip(times, rows))
        if samples[-1].time < t:
            samples.append(final)
    termination = _TERMINATION[status]
    return ReplicateSummary(
        seed=int(config.seed),
        fixation_time=float(t) if termination == "fixed" else None,
        event_count=int(events),
        final_state=final.state,
        termination=termination,
        samples=tuple(samples),
    )


def run(config: SimConfig) -> ReplicateSummary:
    """Simulate the aggregated chain until fixation of AB or a cap.

    Each step draws an exponential waiting time with the total channel rate
    and picks a channel in proportion to its rate.  Stops when all
    individuals are type 3 (``"fixed"``), when no channel has positive rate
    (``"absorbed_unfixable"``), or at ``max_time``/``max_events``.  Output
    is a deterministic function of the config.
    """
    if config.track_lineage:
        return run_with_lineage(config)
    return _simulate(config, lineage=False)


def run_with_lineage(config: SimConfig) -> ReplicateSummary:
    """Like :func:`run`, tracking mutation- and recombination-born lineages.

    Samples carry a :class:`SubtypeLedger`.  Initial individuals of types
    1-3 are booked as mutation-born.  This path simulates every death, so
    it is slower than :func:`run` and meant for moderate ``N``.
    """
    return _simulate(config, lineage=True)


def sample_trajectory(summary: ReplicateSummary, times) -> list[SimplexPoint]:
    """Piecewise-constant (cadlag) read-out of the recorded samples.

    Times past the last sample are allowed only when the run ended in an
    absorbing state, which then persists forever.
    """
    if not summary.samples:
        raise ValueError("run was not sampled; set sample_interval or sample_times")
    st, counts = summary.sample_arrays()
    q = np.atleast_1d(np.asarray(times, dtype=float))
    absorbing = summary.termination in ("fixed", "absorbed_unfixable")
    if np.any(q < st[0]) or (not absorbing and np.any(q > st[-1])):
        raise ValueError(f"query times outside the sampled range [{st[0]}, {st[-1]}]")
    idx = np.searchsorted(st, q, side="right") - 1
    n = summary.final_state.n
    return [SimplexPoint(counts[i, 1] / n, counts[i, 2] / n, counts[i, 3] / n) for i in idx]
