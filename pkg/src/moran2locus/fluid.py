"""Fluid-limit ODE for the type fractions and its comparison with
simulated paths.

Two vector fields are available: the full mean drift (selection,
recombination and mutation) and the selection-only reduction

    b(x) = s ((1 - x1 - x2 - 2x3) x1, (1 - x1 - x2 - 2x3) x2, (2 - x1 - x2 - 2x3) x3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .analytics import DomainError
from .model import Parameters, SimplexPoint
from .simulator import ReplicateSummary

__all__ = [
    "FULL_BETA",
    "SELECTION_ONLY",
    "RangeError",
    "OdeSolution",
    "integrate",
    "uniform_grid",
    "vector_field",
    "sup_deviation",
    "dn_probability_bound",
    "estimate_lipschitz",
]

FULL_BETA = "full_beta"
SELECTION_ONLY = "selection_only"
_FIELDS = {FULL_BETA: 0, SELECTION_ONLY: 1}
SIMPLEX_TOL = 1e-9


class RangeError(ValueError):
    """Inputs do not cover the requested time window."""


@njit(cache=True, nogil=True)
def _field(x, mu, s, r, which, out):
    z1, z2, z3 = x[0], x[1], x[2]
    z0 = 1.0 - z1 - z2 - z3
    load = 1.0 - z1 - z2 - 2.0 * z3
    out[0] = s * load * z1
    out[1] = s * load * z2
    out[2] = s * (load + 1.0) * z3
    if which == 0:
        gamma = (z0 * z3 - z1 * z2) * (1.0 - s * (z1 + z2 + 2.0 * z3))
        out[0] += r * gamma + mu * (z0 - z1)
        out[1] += r * gamma + mu * (z0 - z2)
        out[2] += -r * gamma + mu * (z1 + z2)


@njit(cache=True, nogil=True)
def _rk4(x0, t0, h, steps, mu, s, r, which, out):
    k1 = np.empty(3)
    k2 = np.empty(3)
    k3 = np.empty(3)
    k4 = np.empty(3)
    y = np.empty(3)
    x = x0.copy()
    out[0] = x
    for i in range(steps):
        _field(x, mu, s, r, which, k1)
        for j in range(3):
            y[j] = x[j] + 0.5 * h * k1[j]
        _field(y, mu, s, r, which, k2)
        for j in range(3):
            y[j] = x[j] + 0.5 * h * k2[j]
        _field(y, mu, s, r, which, k3)
        for j in range(3):
            y[j] = x[j] + h * k3[j]
        _field(y, mu, s, r, which, k4)
        for j in range(3):
            x[j] += h * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) / 6.0
        out[i + 1] = x


def vector_field(x, params: Parameters, field: str = FULL_BETA) -> np.ndarray:
    """Evaluate the chosen field at ``x = (x1, x2, x3)``."""
    out = np.empty(3)
    _field(np.asarray(x, dtype=float), params.mu, params.s, params.r, _FIELDS[field], out)
    return out


@dataclass(frozen=True)
class OdeSolution:
    """RK4 solution on a uniform grid; ``values[i] = (x1, x2, x3)`` at
    ``grid[i]``.  ``max_violation`` is the largest simplex excursion found
    before clipping (0 if none exceeded the tolerance)."""

    grid: np.ndarray
    values: np.ndarray
    which_field: str
    max_violation: float = 0.0

    @property
    def clipped(self) -> bool:
        return self.max_violation > 0.0

    def points(self) -> list[SimplexPoint]:
        return [SimplexPoint(*row) for row in self.values]

    def at(self, t: float) -> SimplexPoint:
        """Value at a grid time."""
        i = int(np.searchsorted(self.grid, t))
        if i >= self.grid.shape[0] or not math.isclose(self.grid[i], t, rel_tol=1e-12, abs_tol=1e-12):
            raise RangeError(f"t={t} is not a grid time")
        return SimplexPoint(*(float(v) for v in self.values[i]))


def _simplex_excess(values: np.ndarray) -> float:
    z0 = 1.0 - values.sum(axis=1)
    return float(max(0.0, -values.min(), -z0.min()))


def uniform_grid(t0: float, t1: float, step: float) -> np.ndarray:
    """The time grid :func:`integrate` uses: the fewest equal steps of at
    most ``step`` from ``t0`` to exactly ``t1``."""
    steps = int(math.ceil((t1 - t0) / step - 1e-9)) if t1 > t0 else 0
    if steps == 0:
        return np.array([float(t0)])
    grid = t0 + ((t1 - t0) / steps) * np.arange(steps + 1)
    grid[-1] = t1
    return grid


def integrate(initial: SimplexPoint, params: Parameters, t_span: tuple, step: float | None = None,
              field: str = FULL_BETA) -> OdeSolution:
    """Fixed-step classical RK4 over ``t_span``.

    The default step is ``1e-3 / s``; it is shortened slightly so that a
    whole number of steps ends exactly at ``t_span[1]``.
    """
    if field not in _FIELDS:
        raise DomainError(f"field must be {FULL_BETA!r} or {SELECTION_ONLY!r}, got {field!r}")
    step = 1e-3 / params.s if step is None else float(step)
    if not step > 0:
        raise DomainError(f"step must be positive, got {step}")
    t0, t1 = (float(v) for v in t_span)
    if not t1 >= t0:
        raise DomainError(f"t_span must be increasing, got {t_span}")
    grid = uniform_grid(t0, t1, step)
    steps = grid.shape[0] - 1
    h = (t1 - t0) / steps if steps else 0.0
    values = np.empty((steps + 1, 3))
    x0 = np.array([initial.xi1, initial.xi2, initial.xi3], dtype=float)
    _rk4(x0, t0, h, steps, params.mu, params.s, params.r, _FIELDS[field], values)
    if not np.isfinite(values).all():
        raise DomainError(f"RK4 diverged with step {h:g}; the step must resolve the fastest "
                          f"rate (mu={params.mu:g}, r={params.r:g})")
    excess = _simplex_excess(values)
    violation = 0.0
    if excess > SIMPLEX_TOL:
        violation = excess
        values = np.clip(values, 0.0, 1.0)
        total = values.sum(axis=1, keepdims=True)
        values = np.where(total > 1.0, values / total, values)
    return OdeSolution(grid, values, field, violation)


def sup_deviation(summary: ReplicateSummary, solution: OdeSolution, window: tuple) -> float:
    """``max |X(t)/N - x(t)|`` over solution grid times inside ``window``.

    ``X`` is read from the recorded samples as a right-continuous step
    function, so the samples should include the solution grid.
    """
    a, b = (float(v) for v in window)
    g = solution.grid
    if a < g[0] - 1e-9 or b > g[-1] + 1e-9:
        raise RangeError(f"solution covers [{g[0]}, {g[-1]}], window is [{a}, {b}]")
    if not summary.samples:
        raise RangeError("replicate has no recorded samples")
    st, counts = summary.sample_arrays()
    absorbing = summary.termination in ("fixed", "absorbed_unfixable")
    if a < st[0] - 1e-9 or (not absorbing and b > st[-1] + 1e-9):
        raise RangeError(f"samples cover [{st[0]}, {st[-1]}], window is [{a}, {b}]")
    mask = (g >= a - 1e-9) & (g <= b + 1e-9)
    times = g[mask]
    # tolerate round-off between the sample grid and the ODE grid
    idx = np.searchsorted(st, times + 1e-9 * np.maximum(1.0, np.abs(times)), side="right") - 1
    idx = np.clip(idx, 0, None)
    frac = counts[idx, 1:] / summary.final_state.n
    d = np.sqrt(((frac - solution.values[mask]) ** 2).sum(axis=1))
    return float(d.max()) if d.size else 0.0


def dn_probability_bound(T: float, epsilon0: float, lipschitz: float, L: float) -> float:
    """``4 L T / Delta^2`` with ``Delta = epsilon0 e^{-lipschitz T} / 3``,
    clamped to ``[0, 1]``."""
    if not (T >= 0 and epsilon0 > 0 and L > 0 and lipschitz >= 0):
        raise DomainError("dn_probability_bound needs T >= 0 and positive epsilon0, L")
    if T == 0:
        return 0.0
    # in logs: Delta^2 underflows long before the bound leaves [0, 1]
    log_delta = math.log(epsilon0 / 3.0) - lipschitz * T
    log_bound = math.log(4.0 * L * T) - 2.0 * log_delta
    return 1.0 if log_bound >= 0.0 else math.exp(log_bound)


def _jacobian_b(x: np.ndarray) -> np.ndarray:
    # Jacobian of b/s at each row of x = (x1, x2, x3)
    x1, x2, x3 = x[:, 0], x[:, 1], x[:, 2]
    load = 1.0 - x1 - x2 - 2.0 * x3
    J = np.empty((x.shape[0], 3, 3))
    J[:, 0] = np.stack([load - x1, -x1, -2.0 * x1], axis=1)
    J[:, 1] = np.stack([-x2, load - x2, -2.0 * x2], axis=1)
    J[:, 2] = np.stack([-x3, -x3, load + 1.0 - 2.0 * x3], axis=1)
    return J


def simplex_grid(resolution: int) -> np.ndarray:
    """All ``(x1, x2, x3)`` with coordinates in ``(1/resolution) Z`` on the
    closed simplex."""
    k = np.arange(resolution + 1)
    a, b, c = np.meshgrid(k, k, k, indexing="ij")
    keep = a + b + c <= resolution
    return np.stack([a[keep], b[keep], c[keep]], axis=1) / resolution


def estimate_lipschitz(resolution: int = 50) -> float:
    """Lipschitz constant ``k`` of ``b/s`` on the simplex, measured as the
    largest spectral norm of its Jacobian over a lattice of the simplex
    (the simplex is convex, so this is the Euclidean Lipschitz constant up
    to the lattice resolution).  ``b/s`` does not depend on ``s``."""
    norms = np.linalg.norm(_jacobian_b(simplex_grid(resolution)), ord=2, axis=(1, 2))
    return float(norms.max())
