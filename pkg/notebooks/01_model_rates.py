# Two-locus Moran model: channel rates, drift and noise.
#
# Types are ab (0), Ab (1), aB (2), AB (3).  A state is the vector of type
# counts; the chain moves one individual at a time along one of twelve
# channels (src -> dst).

import numpy as np

from moran2locus import model as M
from moran2locus.model import Parameters, PopulationState

p = Parameters(1000, 1e-3, 0.1, 0.05)  # N, mu, s, r
state = PopulationState(700, 120, 100, 80)

# The twelve channel rates at this state
rates = M.channel_rates(state, p)
for name, rate in zip(M.CHANNEL_NAMES, rates.as_array()):
    print(f"{name:>8}  {rate:10.4f}")
print("total event rate", rates.total)

# Drift of the rescaled state xi = X/N.  N * beta is the net rate at which
# each count changes, so it should equal the sum of rate * jump.
xi = state.fractions()
beta = M.drift(xi, p)
net = rates.as_array() @ M.CHANNEL_JUMPS
print("N * beta        ", p.N * beta)
print("net count rates ", net[1:])

# The noise term alpha is bounded by 48/N for every state
print("alpha =", M.noise(state, p), "  bound 48/N =", M.noise_bound(p))

# Growth rates: per-capita net growth of each type.  From the all-ab state
# the single mutants grow at s - mu and a double mutant at 2s - r.
print("growth rates at all-ab:", M.growth_rates(PopulationState.all_type(0, 1000), p))
