# Closed forms used in the sweep argument, checked by Monte Carlo.

import numpy as np

from moran2locus import stochastic_tools as stt

# Survival of a birth-death process with birth rate 1, death rate 1 - g.
# For large t it approaches g.
for g, t in [(0.2, 1.0), (0.2, 10.0), (0.2, 30.0)]:
    exact = stt.bd_survival(g, t)
    mc, se = stt.mc_bd_survival(g, t, trials=100_000, seed=1)
    print(f"g={g} t={t:5}: closed form {exact:.5f}  MC {mc:.5f} +- {se:.5f}")

# With k founders the lines are independent
print("three founders:", stt.bd_survival(0.1, 20.0, initial=3))

# Gambler's ruin: P(hit 0 before L) for a walk with down/up odds q
q = stt.phase5_down_odds(0.1, 10 ** -2.5)
print("phase-5 odds q =", q)
for L, k in [(200, 50), (200, 150)]:
    exact = stt.ruin_before(L, k, q)
    mc, se = stt.mc_ruin_before(L, k, q, trials=100_000, seed=2)
    print(f"L={L} k={k}: {exact:.5f}  MC {mc:.5f} +- {se:.5f}")

# Large levels do not overflow
print("L = 1e5:", stt.ruin_before(10 ** 5, 50_000, 1.02))

# Logistic curve through (0, f0) with rate s, and its ODE residual
curve = stt.logistic_from_anchor(0.01, 0.1, 0.0)
print(curve(np.array([0.0, 25.0, 50.0, 100.0])))
print("max |f' - s f (1 - f)| =", stt.logistic_is_ode_solution(curve).max_residual)
