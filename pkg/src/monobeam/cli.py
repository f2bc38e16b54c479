"""Command-line front end: ``synth``, ``analyze`` and ``montecarlo``.

Exit codes for ``synth`` report the run outcome: 0 disjoint supports,
2 converged with remaining overlap, 3 subproblem infeasible (relax the
beam requirements), 4 iteration cap; exit 1 is a usage or configuration
error for every command.  The default output directory comes from the
config, then the ``MONOBEAM_OUTPUT_DIR`` environment variable, then the
working directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import analysis
from .arrays import angle_grid
from .config import ConfigError, SynthesisConfig, load_config
from .constraints import check_feasibility, compile_constraints
from .io import config_hash, read_weights, write_csv, write_weights
from .reselection import (
    CONVERGED_NONZERO,
    DISJOINT,
    ITERATION_CAP,
    SUBPROBLEM_FAILURE,
    synthesize,
)

EXIT_CODES = {
    DISJOINT: 0,
    CONVERGED_NONZERO: 2,
    SUBPROBLEM_FAILURE: 3,
    ITERATION_CAP: 4,
}


def _output_dir(config: SynthesisConfig, override: str | None) -> Path:
    directory = override or config.output_directory \
        or os.environ.get("MONOBEAM_OUTPUT_DIR") or "."
    path = Path(directory)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _metadata(config: SynthesisConfig, command: str, **extra) -> dict:
    meta = {
        "command": command,
        "config_sha256": config_hash(config.source_text),
        "seed": config.reselection.seed,
    }
    meta.update(extra)
    return meta


def cmd_synth(config_path: str, output: str | None = None) -> int:
    """Run the synthesis described by a config and write its artifacts."""
    try:
        config = load_config(config_path)
        if len(config.beams) < 2:
            raise ConfigError("'beams' must list at least two beams to interleave")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    started = time.perf_counter()
    result = synthesize(
        config.beams, config.geometry, config.coupling,
        solver_options=config.solver, options=config.reselection,
        planar_sampling=config.planar_sampling,
    )
    elapsed = time.perf_counter() - started

    outdir = _output_dir(config, output)
    meta = _metadata(config, "synth")
    for spec, weight in zip(config.beams, result.weights):
        write_weights(outdir / f"weights_{spec.name}.csv",
                      {**meta, "beam": spec.name}, config.geometry, weight)

    pairs = sorted(result.shared_history[0]) if result.shared_history else []
    columns = ["iteration", "cost"] + [f"shared_{i}_{j}" for i, j in pairs]
    rows = [
        [l + 1, cost] + [counts[p] for p in pairs]
        for l, (cost, counts) in enumerate(
            zip(result.cost_history[1:], result.shared_history))
    ]
    write_csv(outdir / "cost_history.csv", meta, columns, rows)

    summary = {
        "status": result.status,
        "exit_code": EXIT_CODES[result.status],
        "outer_iterations": result.outer_iterations,
        "support_sizes": result.support_sizes,
        "uncovered_elements": result.uncovered.tolist(),
        "failed_beam": result.failed_beam,
        "beams": config.beam_names,
        "cost_final": (float(result.cost_history[-1])
                       if len(result.cost_history) > 1 else None),
        "elapsed_seconds": elapsed,
        "config_sha256": meta["config_sha256"],
        "seed": config.reselection.seed,
        "feasibility": [
            {"beam": spec.name, "eq_residual": r.max_equality_residual,
             "bound_violation": r.max_bound_violation, "passed": r.passed}
            for spec, r in zip(config.beams, result.feasibility)
        ],
    }
    (outdir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n",
                                         encoding="utf-8")
    print(f"{result.status}: supports {result.support_sizes}, "
          f"{result.outer_iterations} outer iterations, {elapsed:.2f}s")
    return EXIT_CODES[result.status]


def _beam_cuts(config: SynthesisConfig):
    if config.geometry.kind == "planar":
        return ("azimuth", "elevation")
    return (None,)


def _analysis_rows(config, spec, w, cut):
    """Metric row plus the dense pattern for one beam on one cut."""
    geom, coupling = config.geometry, config.coupling
    reference = abs(spec.gain) ** 2
    total_samples = sum(region.samples for region in spec.sidelobe)
    dense_n = max(1801, 10 * total_samples + 1)
    sweep = np.linspace(-90.0, 90.0, dense_n)
    pattern = analysis.beam_pattern(w, geom, coupling, sweep, cut=cut,
                                    reference_gain=reference)

    sll_grid = None
    sll_dense = None
    if spec.sidelobe:
        grid_levels = []
        dense_levels = []
        for region in spec.sidelobe:
            constraint_angles = angle_grid(region.intervals, region.samples)
            verify = analysis.beam_pattern(
                w, geom, coupling,
                np.concatenate([constraint_angles,
                                angle_grid(region.intervals, 10 * region.samples)]),
                cut=cut, reference_gain=reference)
            grid_levels.append(analysis.max_sll(
                analysis.BeamPattern(constraint_angles,
                                     verify.values[:len(constraint_angles)],
                                     reference, cut),
                region.intervals))
            dense_levels.append(analysis.max_sll(verify, region.intervals))
        sll_grid = max(grid_levels)
        sll_dense = max(dense_levels)

    boresight_cut = spec.boresight if geom.kind == "linear" else \
        (spec.boresight[0] if cut == "azimuth" else spec.boresight[1])
    beamwidth = None
    if spec.kind == "sum":
        try:
            beamwidth = analysis.beamwidth_3db(pattern, boresight_cut)
        except analysis.MeasurementError:
            beamwidth = None
    slope = analysis.slope_at(w, geom, coupling, spec.boresight,
                              axis=cut if geom.kind == "planar" else None)
    system = compile_constraints(spec, geom, coupling, config.planar_sampling)
    report = check_feasibility(w, system, config.solver.tol_eq,
                               config.solver.tol_ineq)
    boresight_value = complex(np.vdot(system.equality_rows[0], w))

    row = [
        spec.name, cut or "azimuth",
        boresight_value.real, boresight_value.imag,
        slope.real, slope.imag,
        "" if sll_grid is None else sll_grid,
        "" if sll_dense is None else sll_dense,
        "" if beamwidth is None else beamwidth,
        report.max_equality_residual, report.max_bound_violation,
        int(report.passed),
    ]
    return row, pattern


METRIC_COLUMNS = (
    "beam", "cut", "boresight_re", "boresight_im", "slope_re", "slope_im",
    "max_sll_grid_db", "max_sll_dense_db", "beamwidth_deg",
    "eq_residual", "bound_violation", "feasible",
)


def cmd_analyze(config_path: str, weight_paths, output: str | None = None) -> int:
    """Evaluate synthesized weights: dense patterns and a metrics table."""
    try:
        config = load_config(config_path)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not weight_paths:
        print("error: analyze needs at least one weights file", file=sys.stderr)
        return 1

    by_name = {spec.name: spec for spec in config.beams}
    loaded = []
    for i, path in enumerate(weight_paths):
        try:
            meta, values = read_weights(path)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        if len(values) != config.geometry.n:
            print(f"error: {path}: {len(values)} weights for an array of "
                  f"{config.geometry.n} elements", file=sys.stderr)
            return 1
        name = meta.get("beam")
        spec = by_name.get(name, config.beams[i] if i < len(config.beams) else None)
        if spec is None:
            print(f"error: {path}: no beam in the config matches", file=sys.stderr)
            return 1
        loaded.append((spec, values))

    outdir = _output_dir(config, output)
    meta = _metadata(config, "analyze")
    metric_rows = []
    for spec, values in loaded:
        for cut in _beam_cuts(config):
            row, pattern = _analysis_rows(config, spec, values, cut)
            metric_rows.append(row)
            suffix = f"_{cut}" if cut else ""
            db = pattern.power_db()
            write_csv(outdir / f"pattern_{spec.name}{suffix}.csv",
                      {**meta, "beam": spec.name, "cut": cut or "azimuth"},
                      ("theta_deg", "re", "im", "power_db"),
                      zip(pattern.angles, pattern.values.real,
                          pattern.values.imag, db))
    write_csv(outdir / "metrics.csv", meta, METRIC_COLUMNS, metric_rows)
    print(f"wrote metrics for {len(loaded)} beams to {outdir}")
    return 0


def cmd_montecarlo(config_path: str, sll_start: float, sll_end: float,
                   sll_step: float, trials: int, jobs: int = 1,
                   seed: int | None = None, output: str | None = None) -> int:
    """Sweep the side-lobe budget and report disjoint-success rates."""
    try:
        config = load_config(config_path)
        if len(config.beams) < 2:
            raise ConfigError("'beams' must list at least two beams to interleave")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if sll_step <= 0 or sll_end < sll_start or trials < 1 or jobs < 1:
        print("error: invalid sweep (need sll_start <= sll_end, sll_step > 0, "
              "trials >= 1, jobs >= 1)", file=sys.stderr)
        return 1
    count = int(round((sll_end - sll_start) / sll_step)) + 1
    levels = sll_start + sll_step * np.arange(count)
    if levels[-1] > sll_end + 1e-9:
        levels = levels[:-1]
    base_seed = config.reselection.seed if seed is None else seed

    report = analysis.monte_carlo(
        config.beams, config.geometry, config.coupling, levels,
        trials=trials, base_seed=base_seed,
        solver_options=config.solver, options=config.reselection, jobs=jobs,
    )
    outdir = _output_dir(config, output)
    meta = _metadata(config, "montecarlo", base_seed=base_seed, trials=trials)
    lo, hi = report.wilson_bounds()
    write_csv(outdir / "montecarlo.csv", meta,
              ("sll_db", "trials", "successes", "rate", "wilson_lo", "wilson_hi"),
              [
                  (level, report.trials, int(s), float(r), float(l), float(h))
                  for level, s, r, l, h in zip(report.sll_levels_db,
                                               report.successes, report.rates,
                                               lo, hi)
              ])
    write_csv(outdir / "mc_seeds.csv", meta,
              ("sll_db", "trial", "seed", "status"),
              [
                  (level, t, int(report.seeds[t]), status)
                  for level, statuses in zip(report.sll_levels_db, report.statuses)
                  for t, status in enumerate(statuses)
              ])
    for level, rate in zip(report.sll_levels_db, report.rates):
        print(f"sll {level:+.2f} dB: rate {rate:.3f} ({report.trials} trials)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monobeam",
        description="Partition an antenna array into disjoint sparse "
                    "subarrays, one per monopulse beam.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="run the synthesis from a config")
    synth.add_argument("config")
    synth.add_argument("--output", help="output directory override")

    analyze = sub.add_parser("analyze", help="evaluate synthesized weights")
    analyze.add_argument("config")
    analyze.add_argument("weights", nargs="+", help="weights CSV files")
    analyze.add_argument("--output", help="output directory override")

    mc = sub.add_parser("montecarlo", help="side-lobe sweep success study")
    mc.add_argument("config")
    mc.add_argument("--sll-start", type=float, required=True)
    mc.add_argument("--sll-end", type=float, required=True)
    mc.add_argument("--sll-step", type=float, required=True)
    mc.add_argument("--trials", type=int, default=100)
    mc.add_argument("--jobs", type=int, default=1)
    mc.add_argument("--seed", type=int, default=None)
    mc.add_argument("--output", help="output directory override")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    if args.command == "synth":
        return cmd_synth(args.config, args.output)
    if args.command == "analyze":
        return cmd_analyze(args.config, args.weights, args.output)
    return cmd_montecarlo(args.config, args.sll_start, args.sll_end,
                          args.sll_step, args.trials, args.jobs, args.seed,
                          args.output)


if __name__ == "__main__":
    sys.exit(main())
