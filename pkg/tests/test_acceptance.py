"""Acceptance gate: one test per criterion, each printing a PASS line with
its measured numbers (run with ``pytest -v`` to see one line per criterion,
``-s`` to see the details)."""

import json
import time
from pathlib import Path

import numpy as np
import pytest

from _oracles import lattice_minimum
from monobeam.analysis import beam_pattern, beamwidth_3db, max_sll, monte_carlo, slope_at
from monobeam.arrays import ArrayGeometry, CouplingModel, angle_grid, coupling_matrix
from monobeam.cli import main
from monobeam.config import load_config
from monobeam.constraints import BeamSpec, ConstraintSystem, SidelobeRegion
from monobeam.io import read_csv, read_weights
from monobeam.reselection import (
    ReselectionOptions,
    WeightVector,
    pairwise_cost,
    shared_count,
    synthesize,
)
from monobeam.solver import SolverOptions, solve_weighted_l1

DEG = np.pi / 180.0
CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def random_small_case(rng, seed):
    n = int(rng.choice([16, 32]))
    k = int(rng.choice([2, 3]))
    region = SidelobeRegion(
        ((float(rng.uniform(18.0, 30.0)), 90.0),
         (-90.0, -float(rng.uniform(18.0, 30.0)))),
        int(rng.integers(20, 41)),
        float(rng.uniform(-14.0, -8.0)),
    )
    specs = [BeamSpec(kind="sum", sidelobe=(region,))]
    for _ in range(k - 1):
        specs.append(BeamSpec(
            kind="difference",
            slope=-float(rng.uniform(1.0, 8.0)) * DEG,
            sidelobe=(region,),
        ))
    return specs, ArrayGeometry.linear(n), CouplingModel(n, float(rng.uniform(0.0, 0.3)))


def test_criterion_1_monotone_convergence():
    """Cost history never increases beyond the solver gap, 200 random runs."""
    rng = np.random.default_rng(2024)
    opts = SolverOptions()
    started = time.perf_counter()
    runs = 0
    for seed in range(200):
        specs, geom, coupling = random_small_case(rng, seed)
        result = synthesize(
            specs, geom, coupling, solver_options=opts,
            options=ReselectionOptions(seed=seed, zero_threshold=1e-4),
        )
        assert result.status != "subproblem_failure"
        history = result.cost_history
        assert history[0] == np.inf
        assert np.all(history[1:] >= 0.0)
        # the delivered solver gap, summed over the iteration's inner
        # solves, is the only permitted slack
        for i, (prev, cur) in enumerate(zip(history[1:], history[2:])):
            assert cur <= prev + result.gap_history[i + 1]
        for before, after, slack in result.inner_objectives:
            assert after <= before + slack
        runs += 1
    elapsed = time.perf_counter() - started
    assert elapsed < 300.0
    print(f"\nACCEPTANCE 1 PASS: {runs} runs monotone, {elapsed:.1f}s")


def oracle_instance(rng):
    n = int(rng.integers(2, 4))
    with_bound = n == 2 and rng.random() < 0.5
    system = ConstraintSystem(
        n=n,
        equality_rows=rng.standard_normal((n - 1, n))
        + 1j * rng.standard_normal((n - 1, n)),
        equality_rhs=rng.standard_normal(n - 1) + 1j * rng.standard_normal(n - 1),
        bound_rows=(rng.standard_normal((1, n)) + 1j * rng.standard_normal((1, n)))
        if with_bound else None,
        bounds=np.array([rng.uniform(1.0, 9.0)]) if with_bound else None,
    )
    return rng.uniform(0.1, 2.0, n), system


def test_criterion_2_solver_matches_lattice_oracle():
    """Weighted-l1 objective within 1e-3 of brute-force enumeration, 20 cases."""
    rng = np.random.default_rng(7)
    started = time.perf_counter()
    checked = 0
    worst = 0.0
    while checked < 20:
        penalties, system = oracle_instance(rng)
        oracle_objective, _ = lattice_minimum(penalties, system)
        if not np.isfinite(oracle_objective):
            continue
        solution = solve_weighted_l1(penalties, system)
        assert solution.status == "optimal"
        gap = abs(solution.objective - oracle_objective)
        worst = max(worst, gap)
        assert gap <= 1e-3
        checked += 1
    elapsed = time.perf_counter() - started
    assert elapsed < 60.0
    print(f"\nACCEPTANCE 2 PASS: 20 instances, worst gap {worst:.2e}, {elapsed:.1f}s")


def test_criterion_3_linear_array_reproduction(tmp_path):
    """120-element pair: disjoint covering supports near {53, 67}, beam metrics."""
    config_path = CONFIGS / "paper-1d.json"
    started = time.perf_counter()
    assert main(["synth", str(config_path), "--output", str(tmp_path)]) == 0
    elapsed = time.perf_counter() - started

    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["status"] == "disjoint"
    sizes = summary["support_sizes"]
    assert abs(sizes[0] - 53) <= 5 and abs(sizes[1] - 67) <= 5
    assert summary["uncovered_elements"] == []

    config = load_config(config_path)
    geom, coupling = config.geometry, config.coupling
    threshold = config.reselection.zero_threshold
    _, w_sum = read_weights(tmp_path / "weights_sum.csv")
    _, w_delta = read_weights(tmp_path / "weights_delta.csv")
    supports = shared_count([w_sum, w_delta], threshold=threshold)
    assert supports == {(0, 1): 0}
    covered = set(WeightVector(w_sum, threshold).support.tolist()) \
        | set(WeightVector(w_delta, threshold).support.tolist())
    assert covered == set(range(120))

    # boresight gain within 1e-6
    gain = beam_pattern(w_sum, geom, coupling, [0.0]).values[0]
    assert abs(gain - 1.0) <= 1e-6
    null = beam_pattern(w_delta, geom, coupling, [0.0]).values[0]
    assert abs(null) <= 1e-6

    # every sampled side-lobe constraint holds with 0.1 dB slack
    slls = []
    for spec, w in zip(config.beams, (w_sum, w_delta)):
        for region in spec.sidelobe:
            samples = angle_grid(region.intervals, region.samples)
            pattern = beam_pattern(w, geom, coupling, samples)
            level = max_sll(pattern, region.intervals)
            assert level <= region.level_db + 0.1
            slls.append(level)

    # slope of the difference beam: -100 per radian within +-1
    slope = slope_at(w_delta, geom, coupling, 0.0)
    slope_per_radian = slope / DEG
    assert abs(slope_per_radian.real - (-100.0)) <= 1.0
    assert abs(slope_per_radian.imag) <= 1e-6

    # sum-beam half-power width 0.99 +- 0.05 degrees
    fine = beam_pattern(w_sum, geom, coupling, np.linspace(-3.0, 3.0, 6001))
    width = beamwidth_3db(fine, 0.0)
    assert abs(width - 0.99) <= 0.05

    assert elapsed < 300.0
    print(f"\nACCEPTANCE 3 PASS: supports {sizes}, SLL {max(slls):.2f} dB, "
          f"slope {slope_per_radian.real:.2f}/rad, width {width:.3f} deg, "
          f"{elapsed:.1f}s")


def test_criterion_5_planar_reduction(tmp_path):
    """12x12 grid, three beams: disjoint partition, cut SLL, shared count to 0."""
    config_path = CONFIGS / "paper-2d-small.json"
    started = time.perf_counter()
    assert main(["synth", str(config_path), "--output", str(tmp_path)]) == 0

    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["status"] == "disjoint"

    config = load_config(config_path)
    threshold = config.reselection.zero_threshold
    weights = [
        read_weights(tmp_path / f"weights_{spec.name}.csv")[1]
        for spec in config.beams
    ]
    counts = shared_count(weights, threshold=threshold)
    assert all(count == 0 for count in counts.values())

    # shared-antenna history decreases monotonically to zero
    _, columns, rows = read_csv(tmp_path / "cost_history.csv")
    shared_cols = [i for i, c in enumerate(columns) if c.startswith("shared_")]
    totals = [sum(int(row[i]) for i in shared_cols) for row in rows]
    assert all(b <= a for a, b in zip(totals, totals[1:]))
    assert totals[-1] == 0

    # principal-cut side-lobe levels within the configured budget
    weight_files = [str(tmp_path / f"weights_{spec.name}.csv")
                    for spec in config.beams]
    assert main(["analyze", str(config_path), *weight_files,
                 "--output", str(tmp_path)]) == 0
    _, mcols, mrows = read_csv(tmp_path / "metrics.csv")
    sll_col = mcols.index("max_sll_grid_db")
    feasible_col = mcols.index("feasible")
    for row in mrows:
        assert float(row[sll_col]) <= -20.0 + 0.1
        assert row[feasible_col] == "1"

    elapsed = time.perf_counter() - started
    print(f"\nACCEPTANCE 5 PASS: supports {summary['support_sizes']}, "
          f"shared history {totals}, {elapsed:.1f}s")


def test_criterion_6_property_suites(tmp_path):
    """Derivative, linearity, SPD, CLI determinism and disjointness properties."""
    from monobeam.arrays import steering_derivative, steering_vector

    # steering derivative vs central differences, 1e-6 relative
    rng = np.random.default_rng(11)
    geom = ArrayGeometry.linear(24, 0.5)
    for theta in rng.uniform(-80.0, 80.0, 100):
        exact = steering_derivative(geom, theta)
        h = 1e-4
        approx = (steering_vector(geom, theta + h)
                  - steering_vector(geom, theta - h)) / (2 * h)
        assert np.linalg.norm(exact - approx) / np.linalg.norm(exact) < 1e-6

    # pattern linearity at 1e-12 relative
    coupling = CouplingModel(24, 0.1)
    grid = np.linspace(-60.0, 60.0, 241)
    for _ in range(10):
        w1 = rng.standard_normal(24) + 1j * rng.standard_normal(24)
        w2 = rng.standard_normal(24) + 1j * rng.standard_normal(24)
        a, b = rng.standard_normal(2)
        lhs = beam_pattern(a * w1 + b * w2, geom, coupling, grid).values
        rhs = (a * beam_pattern(w1, geom, coupling, grid).values
               + b * beam_pattern(w2, geom, coupling, grid).values)
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * np.max(np.abs(rhs))

    # coupling matrices stay symmetric positive definite
    for _ in range(20):
        n = int(rng.integers(2, 51))
        m = coupling_matrix(CouplingModel(n, float(rng.uniform(0.0, 0.999))))
        np.testing.assert_array_equal(m, m.T)
        np.linalg.cholesky(m)

    # CLI determinism: byte-identical reruns
    config_path = CONFIGS / "paper-2d-small.json"
    main(["synth", str(config_path), "--output", str(tmp_path / "a")])
    main(["synth", str(config_path), "--output", str(tmp_path / "b")])
    for name in ("weights_sum.csv", "weights_delta_az.csv",
                 "weights_delta_el.csv", "cost_history.csv"):
        assert (tmp_path / "a" / name).read_bytes() == \
            (tmp_path / "b" / name).read_bytes()

    # disjoint status iff thresholded coupling cost below threshold
    region = SidelobeRegion(((25.0, 90.0), (-90.0, -25.0)), 40, -9.0)
    specs = [
        BeamSpec(kind="sum", sidelobe=(region,)),
        BeamSpec(kind="difference", slope=-5.0 * DEG, sidelobe=(region,)),
    ]
    geom16 = ArrayGeometry.linear(16)
    coupling16 = CouplingModel(16, 0.0)
    for seed in range(10):
        opts = ReselectionOptions(seed=seed, zero_threshold=1e-4)
        result = synthesize(specs, geom16, coupling16, options=opts)
        zeroed = [w.thresholded() for w in result.weights]
        scale = float(np.prod([np.max(np.abs(w.values)) for w in result.weights]))
        below = pairwise_cost(zeroed) <= opts.disjoint_cost_threshold * scale
        assert (result.status == "disjoint") == below

    print("\nACCEPTANCE 6 PASS: derivative, linearity, SPD, determinism, "
          "disjointness properties")


def test_criterion_4_monte_carlo_reliability():
    """Scaled 60-element study: monotone success rate, >=0.90 at the loose end."""
    config = load_config(CONFIGS / "mc-1d-n60.json")
    levels = [-16.9, -16.8, -16.7, -16.5]
    started = time.perf_counter()
    report = monte_carlo(
        config.beams, config.geometry, config.coupling, levels,
        trials=100, base_seed=0,
        solver_options=config.solver, options=config.reselection,
    )
    elapsed = time.perf_counter() - started
    rates = report.rates
    assert elapsed < 1800.0
    assert np.all(np.diff(rates) >= 0.0)
    assert rates[-1] >= 0.90
    print(f"\nACCEPTANCE 4 PASS: rates {np.round(rates, 3).tolist()} over "
          f"{report.trials} paired trials/level, {elapsed/60:.1f} min")
