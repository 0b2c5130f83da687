"""State types and transition rates of the two-locus Moran model.

Types are numbered by their beneficial alleles: 0 = ab, 1 = Ab, 2 = aB,
3 = AB.  Individuals of type 0, 1/2 and 3 die at rates 1, 1 - s and
1 - 2s; each death is replaced at once by a newborn that copies a random
parent (probability 1 - r) or takes its two loci from two independent
random parents (probability r).  Every a and b allele mutates to A or B
at rate mu.

All functions here are pure.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, fields

import numpy as np

from . import _kernels as K

__all__ = [
    "Parameters",
    "PopulationState",
    "SimplexPoint",
    "ChannelRates",
    "SubtypeLedger",
    "SubtypeRates",
    "CHANNEL_NAMES",
    "CHANNEL_JUMPS",
    "InvalidLedgerError",
    "ln_plus",
    "replacement_probabilities",
    "channel_rates",
    "drift",
    "noise",
    "noise_bound",
    "growth_rates",
    "subtype_channel_rates",
]


class InvalidLedgerError(ValueError):
    """A :class:`SubtypeLedger` does not add up to its population state."""


def ln_plus(x: float) -> float:
    """``ln(x)`` for ``x > 1`` and 0 otherwise."""
    return math.log(x) if x > 1.0 else 0.0


@dataclass(frozen=True)
class Parameters:
    """Model configuration ``(N, mu, s, r)``.

    ``mutation_rate = 0`` is accepted so that mutation-free dynamics can be
    simulated; the closed-form predictions in :mod:`analytics` need it
    positive.
    """

    n_individuals: int
    mutation_rate: float
    selection: float
    recombination_prob: float = 0.0

    def __post_init__(self):
        n = self.n_individuals
        if isinstance(n, float) and n.is_integer():
            object.__setattr__(self, "n_individuals", int(n))
            n = int(n)
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
            raise ValueError(f"N must be an integer, got {n!r}")
        object.__setattr__(self, "n_individuals", int(n))
        if n < 2:
            raise ValueError(f"N must be at least 2, got {n}")
        if not 0.0 <= self.mutation_rate < 1.0:
            raise ValueError(f"mu must lie in [0, 1), got {self.mutation_rate}")
        if not 0.0 < self.selection <= 0.5:
            raise ValueError(f"s must lie in (0, 1/2], got {self.selection}")
        if not 0.0 <= self.recombination_prob < 1.0:
            raise ValueError(f"r must lie in [0, 1), got {self.recombination_prob}")
        if n % 2:
            warnings.warn(
                f"N={n} is odd; the chain is well defined but N counts chromosomes "
                "of N/2 diploid organisms",
                stacklevel=3,
            )

    @property
    def N(self) -> int:
        return self.n_individuals

    @property
    def mu(self) -> float:
        return self.mutation_rate

    @property
    def s(self) -> float:
        return self.selection

    @property
    def r(self) -> float:
        return self.recombination_prob

    @classmethod
    def from_power_law(cls, n: int, a: float, b: float, c: float) -> "Parameters":
        """``mu = N^-a``, ``r = N^-b``, ``s = N^-c``."""
        return cls(n, float(n) ** -a, float(n) ** -c, float(n) ** -b)


@dataclass(frozen=True)
class SimplexPoint:
    """Type fractions ``(xi1, xi2, xi3)``; ``xi0`` is implied."""

    xi1: float
    xi2: float
    xi3: float

    @property
    def xi0(self) -> float:
        return 1.0 - self.xi1 - self.xi2 - self.xi3

    def as_array(self) -> np.ndarray:
        return np.array([self.xi1, self.xi2, self.xi3])

    def is_valid(self, tol: float = 1e-12) -> bool:
        return min(self.xi1, self.xi2, self.xi3) >= -tol and self.xi0 >= -tol


@dataclass(frozen=True)
class PopulationState:
    """Counts of types ab, Ab, aB, AB at a given time."""

    x0: int
    x1: int
    x2: int
    x3: int
    time: float = 0.0

    def __post_init__(self):
        if min(self.x0, self.x1, self.x2, self.x3) < 0:
            raise ValueError(f"negative count in {self}")
        if self.time < 0:
            raise ValueError(f"negative time {self.time}")

    @property
    def n(self) -> int:
        return self.x0 + self.x1 + self.x2 + self.x3

    @property
    def counts(self) -> tuple[int, int, int, int]:
        return (self.x0, self.x1, self.x2, self.x3)

    def fractions(self) -> SimplexPoint:
        n = self.n
        return SimplexPoint(self.x1 / n, self.x2 / n, self.x3 / n)

    def check(self, params: Parameters) -> None:
        if self.n != params.N:
            raise ValueError(f"counts {self.counts} do not sum to N={params.N}")

    @classmethod
    def all_type(cls, i: int, n: int, time: float = 0.0) -> "PopulationState":
        c = [0, 0, 0, 0]
        c[i] = n
        return cls(*c, time=time)


CHANNEL_NAMES = (
    "birth1",  # 0 -> 1, includes a -> A mutation
    "birth2",  # 0 -> 2, includes b -> B mutation
    "birth3",  # 0 -> 3
    "t1_to_0",
    "t1_to_2",
    "t1_to_3",  # includes b -> B mutation
    "t2_to_0",
    "t2_to_1",
    "t2_to_3",  # includes a -> A mutation
    "t3_to_0",
    "t3_to_1",
    "t3_to_2",
)

# change of (x0, x1, x2, x3) per channel
CHANNEL_JUMPS = np.zeros((12, 4), dtype=np.int64)
for _k, (_src, _dst) in enumerate(zip(K.CHANNEL_SRC, K.CHANNEL_DST)):
    CHANNEL_JUMPS[_k, _src] -= 1
    CHANNEL_JUMPS[_k, _dst] += 1


@dataclass(frozen=True)
class ChannelRates:
    """Aggregated jump rates of the four-type chain, one per channel."""

    birth1: float
    birth2: float
    birth3: float
    t1_to_0: float
    t1_to_2: float
    t1_to_3: float
    t2_to_0: float
    t2_to_1: float
    t2_to_3: float
    t3_to_0: float
    t3_to_1: float
    t3_to_2: float
    total: float

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in CHANNEL_NAMES])

    @classmethod
    def from_array(cls, values) -> "ChannelRates":
        values = [float(v) for v in values]
        total = 0.0
        for v in values:
            total += v
        return cls(*values, total=total)


def replacement_probabilities(xi: SimplexPoint, r: float) -> np.ndarray:
    """Probabilities ``(f0, f1, f2, f3)`` that a newborn has each type."""
    z0, z1, z2, z3 = xi.xi0, xi.xi1, xi.xi2, xi.xi3
    q = 1.0 - r
    return np.array([
        q * z0 + r * (z0 + z1) * (z0 + z2),
        q * z1 + r * (z1 + z3) * (z0 + z1),
        q * z2 + r * (z0 + z2) * (z2 + z3),
        q * z3 + r * (z1 + z3) * (z2 + z3),
    ])


def channel_rates(state: PopulationState, params: Parameters) -> ChannelRates:
    """Twelve aggregated transition rates out of ``state``.

    A total of zero means ``state`` is absorbing.
    """
    out = np.empty(12)
    total = K.fill_rates(state.x0, state.x1, state.x2, state.x3,
                         params.N, params.mu, params.s, params.r, out)
    return ChannelRates(*out.tolist(), total=total)


def drift(xi: SimplexPoint, params: Parameters) -> np.ndarray:
    """Mean velocity of ``(xi1, xi2, xi3)`` under the rescaled chain.

    Selection pushes each type at rate s per beneficial allele above the
    population mean, recombination moves mass along ``(1, 1, -1)`` in
    proportion to the linkage disequilibrium ``xi0*xi3 - xi1*xi2``, and
    mutation feeds types 1 and 2 from type 0 and type 3 from types 1, 2.
    """
    s, r, mu = params.s, params.r, params.mu
    z0, z1, z2, z3 = xi.xi0, xi.xi1, xi.xi2, xi.xi3
    mean_load = 1.0 - z1 - z2 - 2.0 * z3
    gamma = (z0 * z3 - z1 * z2) * (1.0 - s * z1 - s * z2 - 2.0 * s * z3)
    return np.array([
        s * mean_load * z1 + r * gamma + mu * (z0 - z1),
        s * mean_load * z2 + r * gamma + mu * (z0 - z2),
        s * (mean_load + 1.0) * z3 - r * gamma + mu * (z1 + z2),
    ])


_JUMP_NORM2 = np.array([float(np.sum(j[1:] ** 2)) for j in CHANNEL_JUMPS])


def noise(state: PopulationState, params: Parameters) -> float:
    """Exact ``sum_k |jump_k / N|^2 * rate_k`` over the twelve channels."""
    rates = channel_rates(state, params).as_array()
    return float(np.dot(_JUMP_NORM2, rates)) / params.N ** 2


def noise_bound(params: Parameters) -> float:
    """Uniform bound ``48 / N`` on :func:`noise`."""
    return 48.0 / params.N


def growth_rates(state: PopulationState, params: Parameters) -> tuple[float, float, float, float]:
    """Per-capita net growth ``(G0, G1, G2, G3)`` of lineages of each type."""
    s, r, mu = params.s, params.r, params.mu
    xi = state.fractions()
    z0, z1, z2, z3 = xi.xi0, xi.xi1, xi.xi2, xi.xi3
    fit = 1.0 - s * z1 - s * z2 - 2.0 * s * z3
    load = z1 + z2 + 2.0 * z3
    g0 = -s * load - r * z3 * fit - 2.0 * mu
    g1 = s * (1.0 - load) - r * z2 * fit - mu
    g2 = s * (1.0 - load) - r * z1 * fit - mu
    g3 = s * (2.0 - load) - r * z0 * fit
    return g0, g1, g2, g3


@dataclass(frozen=True)
class SubtypeLedger:
    """Lineage-resolved counts: ``m`` descends from a mutation-born founder,
    ``r`` from a recombination-born one, ``x0_founder`` from the initial
    type-0 population."""

    x0_founder: int
    x0r: int
    x1m: int
    x1r: int
    x2m: int
    x2r: int
    x3m: int
    x3r: int

    def as_array(self) -> np.ndarray:
        """Counts in kernel class order ``0f, 0r, 1m, 1r, 2m, 2r, 3m, 3r``."""
        return np.array([getattr(self, f.name) for f in fields(self)], dtype=np.int64)

    @classmethod
    def from_array(cls, a) -> "SubtypeLedger":
        return cls(*(int(v) for v in a))

    @classmethod
    def from_state(cls, state: PopulationState) -> "SubtypeLedger":
        """Initial ledger: type 0 are founders, other types count as mutation-born."""
        return cls(state.x0, 0, state.x1, 0, state.x2, 0, state.x3, 0)

    def type_counts(self) -> tuple[int, int, int, int]:
        return (self.x0_founder + self.x0r, self.x1m + self.x1r,
                self.x2m + self.x2r, self.x3m + self.x3r)

    def check(self, state: PopulationState) -> None:
        if min(self.as_array()) < 0 or self.type_counts() != state.counts:
            raise InvalidLedgerError(f"{self} inconsistent with counts {state.counts}")


CLASS_NAMES = ("0f", "0r", "1m", "1r", "2m", "2r", "3m", "3r")


@dataclass(frozen=True)
class SubtypeRates:
    """Rates of the lineage-resolved chain.

    ``replacement[c, d]`` is the rate at which an individual of class ``c``
    dies and is replaced by a newborn of class ``d``; ``mutation[c, d]`` the
    rate at which a class-``c`` individual mutates into class ``d``.
    ``founders`` holds the creation rates of new lineages (``M1, M2, M3`` by
    mutation, ``R0 .. R3`` by recombination).  ``births``/``deaths`` are the
    total up/down rates of each class count.
    """

    replacement: np.ndarray
    mutation: np.ndarray
    founders: dict
    births: np.ndarray
    deaths: np.ndarray

    def collapse(self) -> ChannelRates:
        """Sum class-level transitions into the twelve type-level channels."""
        flows = self.replacement + self.mutation
        ct = K.CLASS_TYPE
        values = []
        for src, dst in zip(K.CHANNEL_SRC, K.CHANNEL_DST):
            values.append(flows[np.ix_(ct == src, ct == dst)].sum())
        return ChannelRates.from_array(values)


def subtype_channel_rates(state: PopulationState, ledger: SubtypeLedger,
                          params: Parameters) -> SubtypeRates:
    """Class-level rates under the lineage tagging used by the simulator.

    Every founder starts a tracked lineage at its birth time.
    """
    ledger.check(state)
    n, mu, s, r = params.N, params.mu, params.s, params.r
    cls = ledger.as_array().astype(float)
    frac = cls / n
    newborn = (1.0 - r) * frac
    pair_frac = np.zeros(8)  # recombinant newborn class distribution
    founder_prob = np.zeros(8)
    for p in range(8):
        for q in range(8):
            w = frac[p] * frac[q]
            if w == 0.0:
                continue
            c = K.newborn_class(p, q)
            pair_frac[c] += w
            if c != p and c != q:
                founder_prob[c] += w
    newborn = newborn + r * pair_frac
    death = np.array([K._death_weight(c, s) for c in range(8)]) * cls
    replacement = np.outer(death, newborn)
    np.fill_diagonal(replacement, 0.0)

    mutation = np.zeros((8, 8))
    mutation[K.C0F, K.C1M] = mutation[K.C0F, K.C2M] = mu * cls[K.C0F]
    mutation[K.C0R, K.C1M] = mutation[K.C0R, K.C2M] = mu * cls[K.C0R]
    for c in (K.C1M, K.C1R, K.C2M, K.C2R):
        mutation[c, K.C3M] = mu * cls[c]

    total_death = death.sum()
    founders = {
        "M1": mu * state.x0,
        "M2": mu * state.x0,
        "M3": mu * (state.x1 + state.x2),
    }
    for name, c in (("R0", K.C0R), ("R1", K.C1R), ("R2", K.C2R), ("R3", K.C3R)):
        founders[name] = (total_death - death[c]) * r * founder_prob[c]
    flows = replacement + mutation
    births = flows.sum(axis=0)
    deaths = flows.sum(axis=1)
    return SubtypeRates(replacement, mutation, founders, births, deaths)
