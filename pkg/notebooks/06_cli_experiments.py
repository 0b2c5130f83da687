# Driving the experiments through the command-line front end.
#
# Each call below is equivalent to a shell invocation such as
#   moran2locus simulate --preset theorem-check --replicates 4 --out runs/sim

import json
import tempfile
from pathlib import Path

from moran2locus import harness as hx
from moran2locus.cli import main

out = Path(tempfile.mkdtemp(prefix="moran2locus-"))

main(["validate", "--preset", "theorem-check"])
main(["tstar-curve", "--preset", "figure-1", "--out", str(out / "fig1")])
rows = hx.read_tstar_csv(out / "fig1" / "tstar_curve.csv")
print("figure-1 curve:", rows[0][:2], "...", rows[-1][:2])

main(["simulate", "--preset", "theorem-check", "--replicates", "4", "--seed", "1",
      "--out", str(out / "sim")])
agg = json.loads((out / "sim" / "aggregate.json").read_text())
print("\nmedian T", agg["quantiles"]["0.5"], "vs t*", agg["t_star"])

main(["sweep", "--n", "20000", "--mu", "3e-4", "--s", "0.1", "--r-values", "0,1e-3,1e-2",
      "--replicates", "4", "--out", str(out / "sweep")])

# The schedule at the preset is not ordered, so phase-check reports and exits 4
code = main(["phase-check", "--preset", "theorem-check", "--replicates", "4",
             "--out", str(out / "phase")])
print("phase-check exit code", code)
print("outputs in", out)
