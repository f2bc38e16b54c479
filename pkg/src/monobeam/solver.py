"""Weighted-l1 minimization over a beam constraint system.

The subproblem is ``min sum_i p_i |w_i|`` over complex ``w`` subject to a
:class:`~monobeam.constraints.ConstraintSystem`.  It is rewritten as a real
second-order cone program via the epigraph trick (one auxiliary ``t_i`` per
element with ``|w_i| <= t_i``) and handed to the Clarabel interior-point
solver.  The contract is the tolerance triple in :class:`SolverOptions`,
not the algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass

import clarabel
import numpy as np
from scipy import sparse

from .constraints import ConstraintSystem, check_feasibility

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
MAX_ITERATIONS = "max_iterations"

_INFEASIBLE_STATUSES = {
    clarabel.SolverStatus.PrimalInfeasible,
    clarabel.SolverStatus.AlmostPrimalInfeasible,
}
_SOLVED_STATUSES = {
    clarabel.SolverStatus.Solved,
    clarabel.SolverStatus.AlmostSolved,
}


@dataclass(frozen=True)
class SolverOptions:
    """Tolerances and iteration cap for one subproblem solve."""

    tol_eq: float = 1e-8
    tol_ineq: float = 1e-8
    tol_gap: float = 1e-8
    max_iterations: int = 200

    def __post_init__(self):
        if min(self.tol_eq, self.tol_ineq, self.tol_gap) <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_iterations < 1:
            raise ValueError("iteration cap must be positive")


@dataclass(frozen=True, eq=False)
class SubproblemSolution:
    """Outcome of one weighted-l1 solve.

    ``status == "optimal"`` guarantees the reported residuals are within the
    requested tolerances; ``"max_iterations"`` carries the best iterate;
    ``"infeasible"`` carries NaN weights and an infinite objective.  ``gap``
    is the delivered primal-dual gap, an upper bound on how far the
    objective sits above the true minimum.
    """

    w: np.ndarray
    objective: float
    status: str
    eq_residual: float
    ineq_violation: float
    iterations: int
    gap: float = 0.0


@dataclass(frozen=True, eq=False)
class ConeProgram:
    """Real embedding of one subproblem as ``min q @ z, A z + s = b``.

    The variable layout is ``z = [Re w, Im w, t]`` (length ``3n``).  The
    first ``2 * n_equalities`` rows of ``a`` belong to the zero cone (each
    complex equality contributes its real and imaginary part); after that
    come ``n_bounds + n`` second-order cones of dimension 3, one per
    magnitude bound (``sqrt(bound), Re vdot(c, w), Im vdot(c, w)``) followed
    by one per element (``t_i, Re w_i, Im w_i``).  ``weights`` inverts the
    embedding.
    """

    n: int
    a: sparse.csc_matrix
    b: np.ndarray
    n_equalities: int
    n_bounds: int

    @property
    def n_variables(self) -> int:
        return 3 * self.n

    @property
    def cones(self) -> list:
        return [clarabel.ZeroConeT(2 * self.n_equalities)] + [
            clarabel.SecondOrderConeT(3)
        ] * (self.n_bounds + self.n)

    def weights(self, z: np.ndarray) -> np.ndarray:
        """Recover the complex weight vector from a solution ``z``."""
        return z[: self.n] + 1j * z[self.n: 2 * self.n]


def _complex_row_pair(c: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    # vdot(c, w) = (cr.wr + ci.wi) + j(cr.wi - ci.wr) over z = [wr, wi, t]
    real_part = np.concatenate([c.real, c.imag, np.zeros(n)])
    imag_part = np.concatenate([-c.imag, c.real, np.zeros(n)])
    return real_part, imag_part


def real_embedding(system: ConstraintSystem) -> ConeProgram:
    """Embed a complex constraint system as a real cone program.

    Each complex equality becomes two real equalities, each magnitude bound
    a 3-dimensional second-order cone, and each element an epigraph cone
    ``|w_i| <= t_i``, giving ``3n`` real variables in total.
    """
    n = system.n
    nv = 3 * n
    rows = []
    b = []
    for c, rhs in zip(system.equality_rows, system.equality_rhs):
        re_row, im_row = _complex_row_pair(c, n)
        rows.extend([re_row, im_row])
        b.extend([rhs.real, rhs.imag])
    for c, bound in zip(system.bound_rows, system.bounds):
        re_row, im_row = _complex_row_pair(c, n)
        rows.extend([np.zeros(nv), -re_row, -im_row])
        b.extend([np.sqrt(bound), 0.0, 0.0])
    for i in range(n):
        for j in (2 * n + i, i, n + i):
            row = np.zeros(nv)
            row[j] = -1.0
            rows.append(row)
        b.extend([0.0, 0.0, 0.0])
    a = sparse.csc_matrix(np.vstack(rows))
    return ConeProgram(
        n=n,
        a=a,
        b=np.array(b),
        n_equalities=system.n_equalities,
        n_bounds=system.n_bounds,
    )


def _floored_penalties(penalties: np.ndarray) -> np.ndarray:
    # zero-penalty elements would be free to drift; give them a tiny floor
    top = penalties.max()
    if top == 0.0:
        return np.ones_like(penalties)
    return np.maximum(penalties, 1e-12 * top)


def solve_weighted_l1(penalties, system: ConstraintSystem,
                      options: SolverOptions | None = None,
                      embedding: ConeProgram | None = None) -> SubproblemSolution:
    """Minimize ``sum_i p_i |w_i|`` over the feasible set of ``system``.

    Parameters
    ----------
    penalties : array_like
        Nonnegative per-element costs ``p`` of length ``system.n``.
    system : ConstraintSystem
    options : SolverOptions, optional
    embedding : ConeProgram, optional
        Reusable embedding of ``system`` (the embedding does not depend on
        ``penalties``); built on the fly when omitted.

    Returns
    -------
    SubproblemSolution
        The reported objective is ``penalties @ abs(w)`` with the caller's
        penalties, and residuals are measured directly on ``system``.  The
        solve is deterministic: identical inputs give bit-identical output.
    """
    options = options or SolverOptions()
    p = np.asarray(penalties, dtype=float)
    if p.shape != (system.n,):
        raise ValueError(f"penalty vector must have length {system.n}")
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise ValueError("penalties must be finite and nonnegative")
    cone = embedding if embedding is not None else real_embedding(system)
    if cone.n != system.n or cone.n_bounds != system.n_bounds:
        raise ValueError("embedding does not match the constraint system")

    q = np.zeros(cone.n_variables)
    q[2 * system.n:] = _floored_penalties(p)

    settings = clarabel.DefaultSettings()
    settings.verbose = False
    settings.max_threads = 1
    settings.max_iter = options.max_iterations
    settings.tol_gap_abs = options.tol_gap
    settings.tol_gap_rel = options.tol_gap
    settings.tol_feas = 0.1 * min(options.tol_eq, options.tol_ineq)
    solver = clarabel.DefaultSolver(
        sparse.csc_matrix((cone.n_variables, cone.n_variables)),
        q, cone.a, cone.b, cone.cones, settings,
    )
    result = solver.solve()

    if result.status in _INFEASIBLE_STATUSES:
        return SubproblemSolution(
            w=np.full(system.n, np.nan, complex),
            objective=np.inf,
            status=INFEASIBLE,
            eq_residual=np.inf,
            ineq_violation=np.inf,
            iterations=result.iterations,
            gap=np.inf,
        )

    w = cone.weights(np.asarray(result.x))
    report = check_feasibility(w, system, options.tol_eq, options.tol_ineq)
    status = OPTIMAL if (result.status in _SOLVED_STATUSES and report.passed) \
        else MAX_ITERATIONS
    gap = abs(result.obj_val - result.obj_val_dual)
    return SubproblemSolution(
        w=w,
        objective=float(p @ np.abs(w)),
        status=status,
        eq_residual=report.max_equality_residual,
        ineq_violation=report.max_bound_violation,
        iterations=result.iterations,
        gap=float(gap) if np.isfinite(gap) else np.inf,
    )
