# The deterministic fluid limit and its distance from the stochastic path.

import numpy as np

from moran2locus import fluid
from moran2locus.model import Parameters, SimplexPoint
from moran2locus.simulator import SimConfig, run

p = Parameters(100_000, 10 ** -3.75, 0.1, 10 ** -2.5)

# Selection-only field from a small x1 + x2 mass: the total follows the
# logistic curve, and RK4 is fourth order
f0, s = 0.01, p.s
for h in (5.0, 2.5, 1.25):
    sol = fluid.integrate(SimplexPoint(f0 / 2, f0 / 2, 0), p, (0, 150), step=h,
                          field=fluid.SELECTION_ONLY)
    exact = 1 / (1 + (1 / f0 - 1) * np.exp(-s * sol.grid))
    print(f"step {h}: max error {np.abs(sol.values[:, :2].sum(1) - exact).max():.3e}")

# Full drift from the all-ab state
sol = fluid.integrate(SimplexPoint(0, 0, 0), p, (0, 150), step=0.1)
for t in (0.0, 30.0, 60.0, 90.0, 120.0, 150.0):
    print(t, sol.at(t))

# One simulated path sampled on the ODE grid, and the sup distance
res = run(SimConfig(p, seed=5, sample_times=tuple(sol.grid), max_time=150.0))
print("sup |X/N - x| on [0, 150]:", fluid.sup_deviation(res, sol, (0, 150)))

# Lipschitz constant of b/s and the resulting probability bound
k = fluid.estimate_lipschitz()
print("Lipschitz k =", k)
print("bound, eps0 = 0.05, T = 20:", fluid.dn_probability_bound(20, 0.05, k * s, 48 / p.N))
