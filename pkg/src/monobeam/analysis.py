"""Beam evaluation (patterns, side-lobe levels, beamwidth, slope) and the
Monte Carlo reliability study of the synthesis procedure."""

from __future__ import annotations

import dataclasses
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .arrays import ArrayGeometry, CouplingModel, coupling_matrix, \
    effective_matrix, steering_derivative
from .reselection import DISJOINT, ReselectionOptions, synthesize
from .solver import SolverOptions


class MeasurementError(RuntimeError):
    """A pattern metric could not be extracted from the sampled grid."""


@dataclass(frozen=True, eq=False)
class BeamPattern:
    """Complex beam response sampled along a one-dimensional angle sweep.

    For planar arrays the sweep runs along a principal cut (``cut`` names
    the swept coordinate, the other is held at zero).  ``reference_gain``
    is the power level (``|gain|**2``) that 0 dB refers to.
    """

    angles: np.ndarray
    values: np.ndarray
    reference_gain: float = 1.0
    cut: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "angles", np.asarray(self.angles, float))
        object.__setattr__(self, "values", np.asarray(self.values, complex))
        if self.angles.shape != self.values.shape:
            raise ValueError("angles and values must have matching shapes")
        if self.reference_gain <= 0:
            raise ValueError("reference gain must be positive")

    def power_db(self) -> np.ndarray:
        """``10*log10(|F|^2 / reference_gain)`` with a -400 dB floor."""
        power = np.abs(self.values) ** 2 / self.reference_gain
        return 10.0 * np.log10(np.maximum(power, 1e-40))


def beam_pattern(w, geom: ArrayGeometry, coupling: CouplingModel, angles,
                 cut: str | None = None, reference_gain: float = 1.0) -> BeamPattern:
    """Evaluate ``F(theta) = vdot(M a(theta), w)`` on a sweep of angles.

    ``angles`` are scalars in degrees; planar arrays additionally need
    ``cut`` (``"azimuth"`` or ``"elevation"``) to name the swept principal
    coordinate.
    """
    sweep = np.asarray(angles, float)
    if geom.kind == "planar":
        if cut == "azimuth":
            bearing = [(float(t), 0.0) for t in sweep]
        elif cut == "elevation":
            bearing = [(0.0, float(t)) for t in sweep]
        else:
            raise ValueError("planar patterns need cut 'azimuth' or 'elevation'")
    else:
        bearing = list(sweep)
    responses = effective_matrix(geom, coupling, bearing)
    return BeamPattern(
        angles=sweep,
        values=responses.conj().T @ np.asarray(w, complex),
        reference_gain=reference_gain,
        cut=cut,
    )


def max_sll(pattern: BeamPattern, region) -> float:
    """Peak side-lobe level over ``region`` in dB relative to the reference.

    ``region`` is a union of closed intervals in degrees.  The measurement
    is only as good as the pattern's grid; use a grid several times denser
    than the constraint sampling to catch inter-sample peaks.
    """
    mask = np.zeros(pattern.angles.shape, bool)
    for lo, hi in region:
        mask |= (pattern.angles >= lo) & (pattern.angles <= hi)
    if not mask.any():
        raise ValueError("region does not intersect the pattern grid")
    peak = np.max(np.abs(pattern.values[mask]) ** 2) / pattern.reference_gain
    return 10.0 * np.log10(max(peak, 1e-40))


def beamwidth_3db(pattern: BeamPattern, boresight: float = 0.0) -> float:
    """Full width between the half-power crossings around the boresight peak.

    The peak is located within 2 degrees of ``boresight``; each crossing of
    half the peak power is found by linear interpolation of ``|F|^2``
    between the bracketing grid samples.

    Raises
    ------
    MeasurementError
        If either half-power crossing lies outside the sampled grid.
    """
    order = np.argsort(pattern.angles)
    theta = pattern.angles[order]
    power = np.abs(pattern.values[order]) ** 2
    window = np.flatnonzero(np.abs(theta - boresight) <= 2.0)
    if window.size == 0:
        raise MeasurementError("no samples within 2 degrees of boresight")
    peak_idx = window[np.argmax(power[window])]
    half = power[peak_idx] / 2.0

    def crossing(step: int) -> float:
        i = peak_idx
        while 0 <= i + step < theta.size:
            j = i + step
            if power[j] < half:
                frac = (half - power[i]) / (power[j] - power[i])
                return theta[i] + frac * (theta[j] - theta[i])
            i = j
        raise MeasurementError("half-power crossing not found within the grid")

    return crossing(+1) - crossing(-1)


def slope_at(w, geom: ArrayGeometry, coupling: CouplingModel, boresight,
             axis: str | None = None) -> complex:
    """Analytic beam slope ``vdot(M da/dtheta, w)`` at ``boresight``, per degree."""
    row = coupling_matrix(coupling) @ steering_derivative(geom, boresight, axis=axis)
    return complex(np.vdot(row, np.asarray(w, complex)))


def wilson_interval(successes: int, trials: int,
                    z: float = 1.959963984540054) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("need at least one trial")
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * np.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True, eq=False)
class MonteCarloReport:
    """Success statistics of randomized synthesis runs per side-lobe level."""

    sll_levels_db: np.ndarray
    trials: int
    successes: np.ndarray
    statuses: list[list[str]]
    seeds: np.ndarray

    def __post_init__(self):
        if np.any(self.successes < 0) or np.any(self.successes > self.trials):
            raise ValueError("success counts must lie in [0, trials]")

    @property
    def rates(self) -> np.ndarray:
        return self.successes / self.trials

    def wilson_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        pairs = [wilson_interval(int(s), self.trials) for s in self.successes]
        lo, hi = zip(*pairs)
        return np.array(lo), np.array(hi)


def _respecified(specs, level_db: float):
    out = []
    for spec in specs:
        regions = tuple(
            dataclasses.replace(region, level_db=level_db) for region in spec.sidelobe
        )
        out.append(dataclasses.replace(spec, sidelobe=regions))
    return out


def _trial_status(args) -> str:
    specs, geom, coupling, solver_options, options, seed = args
    run = synthesize(
        specs, geom, coupling,
        solver_options=solver_options,
        options=dataclasses.replace(options, seed=int(seed), init="random"),
    )
    return run.status


def monte_carlo(specs, geom: ArrayGeometry, coupling: CouplingModel,
                sll_sweep_db, trials: int, base_seed: int = 0,
                solver_options: SolverOptions | None = None,
                options: ReselectionOptions | None = None,
                jobs: int = 1) -> MonteCarloReport:
    """Success rate of finding disjoint supports across a side-lobe sweep.

    Every side-lobe level of every beam is overridden with each sweep value
    in turn; each trial re-runs the synthesis from random initial weights
    seeded ``base_seed + t``.  The same seeds are reused at every level
    (paired trials), which sharpens the monotone trend of the success rate
    in the side-lobe budget.  Failures are data, not errors.

    Parameters
    ----------
    specs : sequence of BeamSpec
    geom, coupling : ArrayGeometry, CouplingModel
    sll_sweep_db : array_like
        Side-lobe levels to test, in dB (negative).
    trials : int
        Trials per level, at least 1.
    base_seed : int
    solver_options, options : optional
    jobs : int
        Worker processes; trials are independent, aggregation is
        order-insensitive.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    levels = np.atleast_1d(np.asarray(sll_sweep_db, float))
    solver_options = solver_options or SolverOptions()
    options = options or ReselectionOptions()
    seeds = base_seed + np.arange(trials)

    successes = []
    statuses = []
    for level in levels:
        level_specs = _respecified(specs, float(level))
        tasks = [
            (level_specs, geom, coupling, solver_options, options, seed)
            for seed in seeds
        ]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                level_statuses = list(pool.map(_trial_status, tasks))
        else:
            level_statuses = [_trial_status(task) for task in tasks]
        statuses.append(level_statuses)
        successes.append(sum(s == DISJOINT for s in level_statuses))
    return MonteCarloReport(
        sll_levels_db=levels,
        trials=trials,
        successes=np.array(successes),
        statuses=statuses,
        seeds=seeds,
    )
