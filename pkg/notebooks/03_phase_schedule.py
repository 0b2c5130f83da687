# Regime, t*, constants and the phase schedule.

from moran2locus import analytics as an
from moran2locus.model import Parameters

# The desk-scale preset
p = Parameters(100_000, 10 ** -3.75, 0.1, 10 ** -2.5)

print(an.validate_parameters(p).table())
reg = an.classify_regime(p)
print("\nregime:", reg.tag, "rho =", round(reg.rho, 3))
print("t*(r) =", an.t_star(p), " t*(0) =", an.t_star(p, r=0.0))

# The constant chain for the default epsilon = 1/32, delta = 1/8
chain = an.derive_constants(params=p)
for k in ("K", "C1", "C2", "eta", "C3", "K3", "C4"):
    print(f"{k:>4} = {getattr(chain, k):.6g}")
bad = [r.label for r in an.chain_relations(chain) if not r.holds]
print("relations failing:", bad or "none")

# Phase times.  At N = 1e5 the constants are large compared with ln(s/mu),
# so some times come out negative and the ordering breaks; the schedule
# says so instead of hiding it.
sched = an.phase_schedule(p, chain)
for k, v in sched.times().items():
    print(f"{k:>9} = {v:10.2f}")
print("violations:", sched.violations)

# With N large enough the schedule is ordered
big = Parameters.from_power_law(10 ** 100, 0.7, 0.5, 0.05)
print("\nN = 1e100 ordered:", an.phase_schedule(big, an.derive_constants(params=big)).ordered)

# Predicted windows, and the same widened by a slack factor of 2
for w in an.phase_predictions(sched, p, chain):
    ww = w.widened(2.0)
    print(f"{w.name:<7} [{w.lower:.4g}, {w.upper:.4g}]  x2 -> [{ww.lower:.4g}, {ww.upper:.4g}]")
