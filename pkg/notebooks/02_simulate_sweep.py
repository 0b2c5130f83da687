# Exact (Gillespie) simulation of one selective sweep to AB fixation.

import numpy as np

from moran2locus import analytics as an
from moran2locus.model import Parameters
from moran2locus.simulator import SimConfig, replicate_seed, run, run_with_lineage

p = Parameters(20_000, 10 ** -3.5, 0.1, 10 ** -2.5)  # N, mu, s, r
res = run(SimConfig(p, seed=replicate_seed(1, 0), sample_interval=10.0))
print(res.termination, "at T =", res.fixation_time, "after", res.event_count, "events")
print("t* prediction:", an.t_star(p))

# Trajectory of the type fractions every 10 time units
times, counts = res.sample_arrays()
for t, c in zip(times[::3], counts[::3]):
    print(f"t={t:7.1f}  " + "  ".join(f"{v / p.N:6.3f}" for v in c))

# Same run with lineage tagging: how many AB individuals descend from a
# recombination event rather than a mutation?
tagged = run_with_lineage(SimConfig(p, seed=replicate_seed(1, 0), sample_interval=10.0,
                                    track_lineage=True))
mid = tagged.samples[len(tagged.samples) // 2]
print("halfway:", mid.state, "\n  ledger:", mid.ledger)

# A few replicates: the fixation time is random but concentrated near t*
T = [run(SimConfig(p, seed=replicate_seed(7, k))).fixation_time for k in range(10)]
print("fixation times:", np.round(T, 1), "median", np.median(T))
