"""Auxiliary closed forms: birth-death survival, biased-walk ruin and the
logistic curve, with Monte Carlo estimators to cross-check them."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .analytics import DomainError

__all__ = [
    "LogisticCurve",
    "ResidualReport",
    "bd_survival",
    "ruin_before",
    "logistic_value",
    "logistic_from_anchor",
    "logistic_is_ode_solution",
    "phase5_down_odds",
    "mc_bd_survival",
    "mc_ruin_before",
]


def bd_survival(selection_gap: float, t: float, initial: int = 1) -> float:
    """P(a linear birth-death process is alive at time ``t``).

    Each individual gives birth at rate 1 and dies at rate ``1 - g``.
    One founder survives with ``g / (1 - (1-g) e^{-g t})``; ``k`` founders
    are independent lines, ``1 - (1 - p1)^k``.
    """
    g = float(selection_gap)
    if not 0 < g < 1:
        raise DomainError(f"selection_gap must lie in (0, 1), got {g}")
    if not t >= 0:
        raise DomainError(f"t must be nonnegative, got {t}")
    if int(initial) != initial or initial < 1:
        raise DomainError(f"initial must be a positive integer, got {initial}")
    # 1 - (1-g) e^{-gt} written as g + (1-g)(1 - e^{-gt}); exact at t = 0
    p1 = g / (g - (1.0 - g) * math.expm1(-g * t))
    p1 = min(p1, 1.0)
    if initial == 1:
        return p1
    if p1 == 1.0:
        return 1.0
    return -math.expm1(initial * math.log1p(-p1))


def ruin_before(level_up: int, start: int, q: float) -> float:
    """P(a walk from ``start`` hits 0 before ``level_up``).

    ``q`` is the ratio of down- to up-step probabilities.  Evaluated as
    ``(q^L - q^k)/(q^L - 1)`` rewritten with ``expm1`` so that ``q^L`` is
    never formed.
    """
    L, k = int(level_up), int(start)
    if L != level_up or L < 1:
        raise DomainError(f"level_up must be a positive integer, got {level_up}")
    if k != start or k < 0:
        raise DomainError(f"start must be a nonnegative integer, got {start}")
    if k > L:
        raise DomainError(f"start={k} exceeds level_up={L}")
    if not q > 0:
        raise DomainError(f"q must be positive, got {q}")
    if k == 0:
        return 1.0
    if k == L:
        return 0.0
    if q == 1.0:
        return 1.0 - k / L
    lq = math.log1p(q - 1.0) if abs(q - 1.0) < 0.5 else math.log(q)
    if lq > 0:
        return math.expm1((k - L) * lq) / math.expm1(-L * lq)
    return math.exp(k * lq) * math.expm1((L - k) * lq) / math.expm1(L * lq)


def phase5_down_odds(s: float, r: float) -> float:
    """Down/up odds ``(1 - s - r)/(1 - 2s + r)`` of the type-1/2 count
    once AB is common."""
    return (1.0 - s - r) / (1.0 - 2.0 * s + r)


@dataclass(frozen=True)
class LogisticCurve:
    """``f(t) = 1 / (1 + B e^{-rate (t - anchor)})``."""

    B_coeff: float
    rate: float
    anchor_time: float

    def __post_init__(self):
        if not self.B_coeff > 0:
            raise DomainError(f"B_coeff must be positive, got {self.B_coeff}")

    def __call__(self, t):
        return logistic_value(self, t)

    def derivative(self, t):
        f = logistic_value(self, t)
        return self.rate * f * (1.0 - f)


def logistic_from_anchor(value_at_anchor: float, rate: float, anchor_time: float) -> LogisticCurve:
    """The logistic curve through ``(anchor_time, value_at_anchor)``;
    ``B = 1/value - 1``."""
    if not 0 < value_at_anchor < 1:
        raise DomainError(f"anchor value must lie in (0, 1), got {value_at_anchor}")
    return LogisticCurve(1.0 / value_at_anchor - 1.0, rate, anchor_time)


def logistic_value(curve: LogisticCurve, t):
    """Evaluate the curve (scalar or array ``t``)."""
    with np.errstate(over="ignore"):
        e = np.exp(-curve.rate * (np.asarray(t, dtype=float) - curve.anchor_time))
    out = 1.0 / (1.0 + curve.B_coeff * e)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ResidualReport:
    max_residual: float
    argmax_time: float
    grid: np.ndarray
    step: float


def logistic_is_ode_solution(curve: LogisticCurve, grid=None, h=None) -> ResidualReport:
    """Compare central differences of ``f`` with ``rate * f * (1 - f)``.

    The default grid spans 20 time constants from the anchor, the default
    difference step is ``1e-4 / rate``.
    """
    tau = 1.0 / abs(curve.rate) if curve.rate else 1.0
    if grid is None:
        grid = curve.anchor_time + np.linspace(0.0, 20.0 * tau, 401)
    grid = np.asarray(grid, dtype=float)
    h = 1e-4 * tau if h is None else float(h)
    fd = (logistic_value(curve, grid + h) - logistic_value(curve, grid - h)) / (2.0 * h)
    f = logistic_value(curve, grid)
    res = np.abs(np.atleast_1d(fd - curve.rate * f * (1.0 - f)))
    i = int(np.argmax(res))
    return ResidualReport(float(res[i]), float(np.atleast_1d(grid)[i]), grid, h)


# ---------------------------------------------------------------------------
# Monte Carlo oracles


@njit(cache=True, nogil=True)
def _bd_trials(g, t, initial, trials, gen):
    death = 1.0 - g
    alive = 0
    for _ in range(trials):
        k = initial
        clock = 0.0
        while k > 0:
            clock += gen.standard_exponential() / (k * (1.0 + death))
            if clock > t:
                break
            if gen.random() * (1.0 + death) < 1.0:
                k += 1
            else:
                k -= 1
        if k > 0:
            alive += 1
    return alive


@njit(cache=True, nogil=True)
def _ruin_trials(level_up, start, p_down, trials, gen):
    hits = 0
    for _ in range(trials):
        k = start
        while 0 < k < level_up:
            if gen.random() < p_down:
                k -= 1
            else:
                k += 1
        if k == 0:
            hits += 1
    return hits


def _estimate(hits: int, trials: int) -> tuple[float, float]:
    p = hits / trials
    return p, math.sqrt(p * (1.0 - p) / trials)


def mc_bd_survival(selection_gap: float, t: float, initial: int = 1, trials: int = 100_000,
                   seed: int = 0) -> tuple[float, float]:
    """Simulated survival frequency and its standard error.

    Each trial is simulated event by event; a surviving line has about
    ``e^{g t}`` members at time ``t``, so the cost grows like that too.
    """
    gen = np.random.Generator(np.random.Philox(seed))
    return _estimate(_bd_trials(float(selection_gap), float(t), int(initial), int(trials), gen),
                     trials)


def mc_ruin_before(level_up: int, start: int, q: float, trials: int = 100_000,
                   seed: int = 0) -> tuple[float, float]:
    """Simulated ruin frequency of the walk with down-step probability
    ``q/(1+q)``, and its standard error."""
    gen = np.random.Generator(np.random.Philox(seed))
    hits = _ruin_trials(int(level_up), int(start), q / (1.0 + q), int(trials), gen)
    return _estimate(hits, trials)
