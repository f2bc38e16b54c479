"""Alternating reselection of sparse per-beam weights.

Each of the K beams repeatedly re-solves its convex weighted-l1 subproblem
against a penalizing vector built from the other beams' weight magnitudes,
so elements claimed by one beam become expensive for the rest.  The coupling
cost (sum of pairwise magnitude overlaps) is monotonically non-increasing
across outer iterations and bounded below by zero; when it reaches zero the
supports are disjoint and the array is partitioned into interleaved sparse
subarrays, one per beam.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .arrays import ArrayGeometry, CouplingModel
from .constraints import (
    BeamSpec,
    ConstraintSystem,
    FeasibilityReport,
    check_feasibility,
    compile_constraints,
)
from .solver import OPTIMAL, SolverOptions, real_embedding, solve_weighted_l1

DISJOINT = "disjoint"
CONVERGED_NONZERO = "converged_nonzero"
ITERATION_CAP = "iteration_cap"
SUBPROBLEM_FAILURE = "subproblem_failure"


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Complex excitation per element with a relative support threshold.

    The support is the set of elements whose magnitude exceeds
    ``zero_threshold`` times the largest magnitude; everything below is
    treated as switched off.
    """

    values: np.ndarray
    zero_threshold: float = 1e-6

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, complex))
        if not 0.0 < self.zero_threshold < 1e-3:
            raise ValueError("zero threshold must lie in (0, 1e-3)")

    @property
    def support(self) -> np.ndarray:
        """Indices of active elements."""
        mags = np.abs(self.values)
        peak = mags.max() if mags.size else 0.0
        return np.flatnonzero(mags > self.zero_threshold * peak)

    def thresholded(self) -> np.ndarray:
        """Weights with sub-threshold entries set to exact zero."""
        out = self.values.copy()
        mags = np.abs(out)
        peak = mags.max() if mags.size else 0.0
        out[mags <= self.zero_threshold * peak] = 0.0
        return out


@dataclass(frozen=True)
class ReselectionOptions:
    """Outer-loop controls.

    ``init`` chooses the starting weights: ``"random"`` draws complex
    Gaussians from ``seed``, ``"ones"`` starts every element at one,
    ``"user"`` takes ``initial_weights`` as given.
    """

    epsilon: float = 1e-5
    max_outer_iterations: int = 100
    init: str = "random"
    seed: int = 0
    disjoint_cost_threshold: float = 1e-8
    zero_threshold: float = 1e-6
    initial_weights: tuple = ()

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.max_outer_iterations < 1:
            raise ValueError("iteration cap must be positive")
        if self.init not in ("random", "ones", "user"):
            raise ValueError("init must be 'random', 'ones' or 'user'")
        if self.init == "user" and not self.initial_weights:
            raise ValueError("init='user' needs initial_weights")


@dataclass(frozen=True, eq=False)
class SynthesisResult:
    """Outcome of one reselection run.

    ``cost_history[0]`` is the ``inf`` sentinel; entries ``1..`` hold the
    coupling cost after each outer iteration and are non-increasing up to
    the solver's delivered gap.  ``gap_history[l]`` sums that gap over the
    inner solves of outer iteration ``l+1``, bounding how much
    ``cost_history[l+1]`` may exceed ``cost_history[l]``.
    ``shared_history`` records the shared element count per beam pair at
    the same cadence, and ``inner_objectives`` holds one
    ``(before, after, slack)`` triple per inner solve from the second
    visit of each beam on.
    """

    weights: list[WeightVector]
    cost_history: np.ndarray
    shared_history: list[dict[tuple[int, int], int]]
    status: str
    outer_iterations: int
    feasibility: list[FeasibilityReport] = field(default_factory=list)
    failed_beam: int | None = None
    inner_objectives: list[tuple[float, float, float]] = field(default_factory=list)
    gap_history: list[float] = field(default_factory=list)

    @property
    def support_sizes(self) -> list[int]:
        return [len(w.support) for w in self.weights]

    @property
    def uncovered(self) -> np.ndarray:
        """Element indices used by no beam."""
        n = len(self.weights[0].values)
        covered = np.zeros(n, bool)
        for w in self.weights:
            covered[w.support] = True
        return np.flatnonzero(~covered)


def _magnitudes(weights) -> np.ndarray:
    rows = [w.values if isinstance(w, WeightVector) else np.asarray(w) for w in weights]
    lengths = {len(r) for r in rows}
    if len(lengths) != 1:
        raise ValueError("weight vectors must share one length")
    return np.abs(np.vstack(rows))


def pairwise_cost(weights) -> float:
    """Coupling cost: half the sum of ``|w_i|^T |w_j|`` over ordered pairs.

    Zero exactly when every element is claimed by at most one beam.  For two
    beams this reduces to the single product ``|w_1|^T |w_2|``.
    """
    mags = _magnitudes(weights)
    if mags.shape[0] < 2:
        raise ValueError("pairwise cost needs at least two beams")
    total = mags.sum(axis=0)
    return 0.5 * float(total @ total - np.einsum("ij,ij->", mags, mags))


def penalizing_vector(weights, k: int) -> np.ndarray:
    """Elementwise sum of the other beams' magnitudes, ``sum_{j != k} |w_j|``."""
    mags = _magnitudes(weights)
    return mags.sum(axis=0) - mags[k]


def shared_count(weights, threshold: float | None = None) -> dict[tuple[int, int], int]:
    """Number of shared support elements for every beam pair ``i < j``."""
    supports = []
    for w in weights:
        if threshold is not None:
            w = WeightVector(w.values if isinstance(w, WeightVector) else w,
                             zero_threshold=threshold)
        elif not isinstance(w, WeightVector):
            w = WeightVector(w)
        supports.append(set(w.support.tolist()))
    return {
        (i, j): len(supports[i] & supports[j])
        for i, j in itertools.combinations(range(len(supports)), 2)
    }


def initial_weights(n: int, count: int, options: ReselectionOptions) -> list[np.ndarray]:
    """Starting weights for a run, per ``options.init``."""
    if options.init == "ones":
        return [np.ones(n, complex) for _ in range(count)]
    if options.init == "user":
        if len(options.initial_weights) != count:
            raise ValueError(f"expected {count} initial weight vectors")
        return [np.asarray(w, complex).copy() for w in options.initial_weights]
    rng = np.random.default_rng(options.seed)
    return [rng.standard_normal(n) + 1j * rng.standard_normal(n) for _ in range(count)]


def synthesize(specs, geom: ArrayGeometry, coupling: CouplingModel,
               solver_options: SolverOptions | None = None,
               options: ReselectionOptions | None = None,
               planar_sampling: str = "cuts") -> SynthesisResult:
    """Run the alternating reselection loop over K beams.

    Parameters
    ----------
    specs : sequence
        At least two :class:`BeamSpec` (compiled here) or pre-built
        :class:`ConstraintSystem` objects over the same array.
    geom, coupling : ArrayGeometry, CouplingModel
    solver_options : SolverOptions, optional
    options : ReselectionOptions, optional
    planar_sampling : str
        Forwarded to :func:`compile_constraints` for planar beams.

    Returns
    -------
    SynthesisResult
        Status ``"disjoint"`` when the coupling cost of the thresholded
        weights (sub-threshold entries zeroed) falls below
        ``disjoint_cost_threshold`` times the product of the per-beam peak
        magnitudes and no beam pair shares a support element,
        ``"converged_nonzero"`` when the epsilon test stopped the loop
        short of that, ``"iteration_cap"`` at the cap, and
        ``"subproblem_failure"`` (with ``failed_beam``) when any inner solve
        does not come back optimal; that usually means the beam
        requirements must be relaxed.

    Notes
    -----
    The K inner solves within one outer iteration are strictly sequential:
    each penalizing vector depends on the freshest weights of every other
    beam.  Identical inputs (including the seed) give bit-identical results.
    """
    solver_options = solver_options or SolverOptions()
    options = options or ReselectionOptions()
    systems = [
        s if isinstance(s, ConstraintSystem)
        else compile_constraints(s, geom, coupling, planar_sampling=planar_sampling)
        for s in specs
    ]
    if len(systems) < 2:
        raise ValueError("need at least two beams to interleave")
    if any(s.n != geom.n for s in systems):
        raise ValueError("all constraint systems must match the array size")

    embeddings = [real_embedding(s) for s in systems]
    weights = initial_weights(geom.n, len(systems), options)
    cost_history = [np.inf]
    shared_history = []
    inner_objectives = []
    gap_history = []
    status = ITERATION_CAP
    failed_beam = None
    outer = 0

    for outer in range(1, options.max_outer_iterations + 1):
        iteration_slack = 0.0
        for k, (system, cone) in enumerate(zip(systems, embeddings)):
            p_k = penalizing_vector(weights, k)
            before = float(p_k @ np.abs(weights[k]))
            sol = solve_weighted_l1(p_k, system, solver_options, embedding=cone)
            if sol.status != OPTIMAL:
                failed_beam = k
                break
            slack = max(sol.gap, solver_options.tol_gap * (1.0 + sol.objective))
            iteration_slack += slack
            if outer > 1:
                # the descent inequality needs the replaced iterate to be
                # feasible, which initial weights are not
                inner_objectives.append((before, sol.objective, slack))
            weights[k] = sol.w
        if failed_beam is not None:
            status = SUBPROBLEM_FAILURE
            break

        cost = pairwise_cost(weights)
        cost_history.append(cost)
        gap_history.append(iteration_slack)
        shared = shared_count(weights, options.zero_threshold)
        shared_history.append(shared)
        # interior-point iterates leave dust magnitudes instead of exact
        # zeros, so disjointness is judged on the thresholded weights
        zeroed = [WeightVector(w, options.zero_threshold).thresholded() for w in weights]
        scale = float(np.prod([np.max(np.abs(w)) for w in weights]))
        if (pairwise_cost(zeroed) <= options.disjoint_cost_threshold * scale
                and not any(shared.values())):
            status = DISJOINT
            break
        if cost_history[-2] - cost < options.epsilon:
            status = CONVERGED_NONZERO
            break

    wrapped = [WeightVector(w, options.zero_threshold) for w in weights]
    reports = [
        check_feasibility(w, s, solver_options.tol_eq, solver_options.tol_ineq)
        for w, s in zip(weights, systems)
    ] if status != SUBPROBLEM_FAILURE else []
    return SynthesisResult(
        weights=wrapped,
        cost_history=np.array(cost_history),
        shared_history=shared_history,
        status=status,
        outer_iterations=outer,
        feasibility=reports,
        failed_beam=failed_beam,
        inner_objectives=inner_objectives,
        gap_history=gap_history,
    )
