"""Command-line entry point: ``moran2locus <subcommand> [flags]``.

Exit codes: 0 success, 2 configuration error, 3 I/O error,
4 schedule or parameter-regime error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import analytics as an
from . import harness as hx
from .simulator import ConfigurationError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_SCHEDULE = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("model and run settings")
    g.add_argument("--n", help="population size N")
    g.add_argument("--mu", help="mutation rate per allele")
    g.add_argument("--s", help="selective advantage per beneficial allele")
    g.add_argument("--r", help="recombination probability per replacement")
    g.add_argument("--seed", help="master seed (64-bit)")
    g.add_argument("--replicates", help="number of replicates")
    g.add_argument("--threads", help=f"worker threads (default: ${hx.THREADS_ENV} or all cores)")
    g.add_argument("--config", help="key=value configuration file")
    g.add_argument("--out", help="output directory")
    g.add_argument("--sample-dt", dest="sample_dt", help="trajectory sampling interval")
    g.add_argument("--max-time", dest="max_time", help="stop each run at this time")
    g.add_argument("--max-events", dest="max_events", help="stop each run after this many events")
    g.add_argument("--track-lineage", dest="track_lineage", action="store_const", const=True,
                   help="tag mutation- and recombination-born lineages")
    g.add_argument("--preset", choices=sorted(hx.PRESETS))
    e = p.add_argument_group("experiment settings")
    e.add_argument("--initial", help="initial counts x0,x1,x2,x3")
    e.add_argument("--r-values", dest="r_values",
                   help="sweep points: comma list or start:stop:count")
    e.add_argument("--epsilon", help="epsilon of the constant chain (default 1/32)")
    e.add_argument("--delta", help="delta of the constant chain (default 1/8)")
    e.add_argument("--slack", help="window widening factor for phase-check (default 2)")
    e.add_argument("--epsilon0", help="deviation threshold for ode-compare (default delta^4/4)")
    e.add_argument("--step", help="RK4 step for ode-compare (default 1e-3/s)")
    e.add_argument("--window", help="ode-compare window a,b (default [t1, t2])")
    e.add_argument("--regime-hi", dest="regime_hi", help="rho above which recombination dominates")
    e.add_argument("--regime-lo", dest="regime_lo", help="rho at or below which mutation dominates")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="moran2locus",
                     description="Two-locus Moran sweep simulator and predictions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _common()
    helps = {
        "simulate": "run replicates; write per-replicate summaries and an aggregate",
        "sweep": "simulate at several recombination probabilities",
        "tstar-curve": "predicted fixation time as a function of r",
        "phases": "phase schedule and predicted windows",
        "phase-check": "fraction of replicates inside each phase window",
        "ode-compare": "sup-distance between simulations and the fluid ODE",
        "validate": "finite-N sizes of the asymptotic ratios",
        "constants": "the constant chain and its defining relations",
    }
    for name in hx.EXPERIMENTS:
        sub.add_parser(name, parents=[common], help=helps[name], description=helps[name])
    return parser


_NOT_CONFIG = ("command", "config", "window")


def _config_from_args(args) -> hx.ExperimentConfig:
    file_values = {}
    if args.config:
        file_values = hx.parse_config_file(args.config)
    flags = {k: v for k, v in vars(args).items() if k not in _NOT_CONFIG}
    return hx.build_config(args.command, file_values, flags)


def _prepare_out(cfg: hx.ExperimentConfig) -> Optional[Path]:
    if cfg.out is None:
        return None
    cfg.out.mkdir(parents=True, exist_ok=True)
    probe = cfg.out / ".write-test"
    probe.write_text("")
    probe.unlink()
    return cfg.out


# ---------------------------------------------------------------------------
# subcommands


def cmd_simulate(cfg: hx.ExperimentConfig, out: Optional[Path]) -> int:
    res = hx.run_simulate(cfg)
    if out is not None:
        hx.write_summary_csv(out / "summary.csv", res.summaries,
                             [cfg.params] * len(res.summaries), cfg.regime_hi, cfg.regime_lo)
        if cfg.sample_dt is not None:
            for i, summ in enumerate(res.summaries):
                hx.write_trajectory_csv(out / "trajectories" / f"replicate_{i:05d}.csv", summ)
        hx.write_json(out / "aggregate.json", res.aggregate)
    sys.stdout.write(hx.dumps_json(res.aggregate))
    return EXIT_OK


def cmd_sweep(cfg: hx.ExperimentConfig, out: Optional[Path]) -> int:
    res = hx.run_sweep(cfg)
    if out is not None:
        hx.write_sweep_csv(out / "sweep.csv", res)
        m = cfg.replicates
        hx.write_summary_csv(out / "summary.csv", res.summaries,
                             [pt.params for pt in res.points for _ in range(m)],
                             cfg.regime_hi, cfg.regime_lo)
        hx.write_json(out / "sweep.json", {"points": [pt.as_dict() for pt in res.points],
                                           "master_seed": cfg.master_seed,
                                           "runtime_seconds": res.runtime_seconds})
    hx.write_sweep_csv(sys.stdout, res)
    return EXIT_OK


def cmd_tstar_curve(cfg: hx.ExperimentConfig, out: Optional[Path]) -> int:
    rows = hx.tstar_curve(cfg)
    if out is not None:
        hx.write_tstar_csv(out / "tstar_curve.csv", rows)
    hx.write_tstar_csv(sys.stdout, rows)
    return EXIT_OK


def _phases_payload(cfg: hx.ExperimentConfig):
    p = cfg.params
    chain = an.derive_constants(cfg.epsilon, cfg.delta, p)
    sched = an.phase_schedule(p, chain)
    windows = an.phase_predictions(sched, p, chain)
    return chain, sched, windows


def cmd_phases(cfg: hx.ExperimentConfig, out: Optional[Path]) -> int:
    chain, sched, windows = _phases_payload(cfg)
    reg = sched.regime
    lines = [f"regime {reg.tag} (rho = {reg.rho:.6g}); formulas use {sched.branch}"]
    for k, v in sched.times().items():
        lines.append(f"  {k:<9} = {v:.8g}")
    for branch, vals in sched.variants.items():
        lines.append(f"  {branch}: t3, t4, t5-, t5+ = " + ", ".join(f"{v:.6g}" for v in vals))
    for v in sched.violations:
        lines.append(f"  ordering violation: {v}")
    lines.append(f"{'window':<8} {'time':>11} {'lower':>13} {'upper':>13}   "
                 f"(x{cfg.slack:g} slack: lower, upper)")
    for w in windows:
        ww = w.widened(cfg.slack)
        lines.append(f"{w.name:<8} {w.time:>11.5g} {w.lower:>13.6g} {w.upper:>13.6g}   "
                     f"{ww.lower:.6g}, {ww.upper:.6g}")
    print("\n".join(lines))
    if out is not None:
        hx.write_json(out / "phases.json", {
            "params": hx._params_dict(cfg.params), "regime": reg.tag, "rho": reg.rho,
            "branch": sched.branch, "schedule": sched.times(),
            "variants": {b: dict(zip(("t3", "t4", "t5_minus", "t5_plus"), v))
                         for b, v in sched.variants.items()},
            "violations": list(sched.violations),
            "windows": [{"name": w.name, "at": w.at, "time": w.time, "quantity": w.quantity,
                         "lower": w.lower, "upper": w.upper} for w in windows],
        })
    return EXIT_OK


def cmd_phase_check(cfg: hx.ExperimentConfig, out: Optional[Path]) -> int:
    rep = hx.run_phase_check(cfg)
    print(rep.text())
    if out is not None:
        hx.write_json(out / "phase_check.json", rep.as_dict())
        hx.write_summary_csv(out / "summary.csv", rep.summaries,
                             [cfg.params] * len(rep.summaries), cfg.regime_hi, cfg.regime_lo)
    if not rep.schedule_valid:
        print("error: the phase schedule is invalid for these parameters "
              "(see violations above); windows at invalid times were not evaluated",
              file=sys.stderr)
        return EXIT_SCHEDULE
    return EXIT_OK


def cmd_ode_compare(cfg: hx.ExperimentConfig, out: Optional[Path], window=None) -> int:
    rep = hx.run_ode_compare(cfg, window)
    d = rep.as_dict()
    a, b = rep.window
    lines = [f"window [{a:.6g}, {b:.6g}] (requested [{rep.requested_window[0]:.6g}, "
             f"{rep.requested_window[1]:.6g}])",
             f"epsilon0 = {rep.epsilon0:.6g}, Lipschitz k = {rep.lipschitz:.6g}",
             f"exceedance frequency {rep.exceedances}/{rep.deviations.size} = {rep.frequency:.4g}"
             f" (SE {rep.standard_error:.3g}); probability bound {rep.bound:.4g}",
             f"median sup-deviation {d['median_deviation']:.6g}",
             "consistent with the bound" if rep.consistent else "EXCEEDS the bound by > 3 SE"]
    print("\n".join(lines))
    if out is not None:
        hx.write_json(out / "ode_compare.json", d)
        rows = [(seed, dev, dev > rep.epsilon0) for seed, dev in zip(rep.seeds, rep.deviations)]
        hx.write_ode_compare_csv(out / "ode_compare.csv", rows)
    return EXIT_OK


def cmd_validate(cfg: hx.ExperimentConfig, out: Optional[Path]) -> int:
    rep = an.validate_parameters(cfg.params)
    print(rep.table())
    if out is not None:
        hx.write_json(out / "validate.json", {
            "params": hx._params_dict(cfg.params),
            "checks": [{"name": c.name, "value": c.value, "threshold": c.threshold,
                        "verdict": c.verdict} for c in rep.checks]})
    return EXIT_OK


def cmd_constants(cfg: hx.ExperimentConfig, out: Optional[Path]) -> int:
    chain = an.derive_constants(cfg.epsilon, cfg.delta, cfg.params)
    rels = an.chain_relations(chain)
    lines = [f"epsilon = {chain.epsilon:g}, delta = {chain.delta:g}, slack = {chain.slack:g}, "
             f"branch = {chain.branch}"]
    for k, v in chain.as_dict().items():
        if k not in ("epsilon", "delta", "slack", "branch"):
            lines.append(f"  {k:<10} = {v:.10g}")
    for rel in rels:
        lines.append(f"  [{'ok' if rel.holds else 'FAIL'}] {rel.label}: "
                     f"{rel.lhs:.10g} {rel.op} {rel.rhs:.10g}")
    print("\n".join(lines))
    if out is not None:
        hx.write_json(out / "constants.json", {
            "constants": {k: v for k, v in chain.as_dict().items()},
            "relations": [{"label": r.label, "lhs": r.lhs, "op": r.op, "rhs": r.rhs,
                           "holds": r.holds} for r in rels]})
    return EXIT_OK


_COMMANDS = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "tstar-curve": cmd_tstar_curve,
    "phases": cmd_phases,
    "phase-check": cmd_phase_check,
    "validate": cmd_validate,
    "constants": cmd_constants,
}


def _parse_window(text):
    if text is None:
        return None
    parts = [float(v) for v in text.split(",")]
    if len(parts) != 2:
        raise ConfigurationError(f"--window needs two comma-separated times, got {text!r}")
    return tuple(parts)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        window = _parse_window(args.window)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigurationError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        out = _prepare_out(cfg)
    except OSError as exc:
        print(f"error: cannot write to {cfg.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        if args.command == "ode-compare":
            return cmd_ode_compare(cfg, out, window)
        return _COMMANDS[args.command](cfg, out)
    except (an.ScheduleError, an.DegenerateParameterError) as exc:
        print(f"schedule/regime error: {exc}", file=sys.stderr)
        return EXIT_SCHEDULE
    except (ConfigurationError, an.DomainError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
