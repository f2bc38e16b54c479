"""Compile per-beam requirements into convex constraint systems.

A beam requirement fixes the response at boresight (gain for sum beams, a
null plus a prescribed slope for difference beams) and caps the response
power at sampled side-lobe bearings.  Both pieces are affine or convex
quadratic in the complex weight vector, so each beam's feasible set is
convex.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .arrays import (
    Angle,
    ArrayGeometry,
    CouplingModel,
    angle_grid,
    coupling_matrix,
    steering_derivative,
    steering_matrix,
    steering_vector,
)


@dataclass(frozen=True)
class SidelobeRegion:
    """Sampled side-lobe bound: ``|F(theta)|^2 <= |gain|^2 * 10**(level_db/10)``.

    ``samples`` is the total across the interval union (see
    :func:`monobeam.arrays.angle_grid` for the split rule).  On planar
    arrays the same sweep is applied along each principal cut.
    """

    intervals: tuple[tuple[float, float], ...]
    samples: int
    level_db: float

    def __post_init__(self):
        object.__setattr__(
            self, "intervals",
            tuple((float(lo), float(hi)) for lo, hi in self.intervals),
        )
        if self.samples < 1:
            raise ValueError("side-lobe region needs at least one sample")
        if not self.level_db < 0:
            raise ValueError("side-lobe level must be negative (dB)")


@dataclass(frozen=True)
class BeamSpec:
    """Requirements for a single beam.

    Sum beams fix the boresight response to ``gain``; difference beams fix a
    boresight null and a response slope of ``gain * slope`` per degree.
    Planar difference beams state which principal axis the slope refers to.
    """

    kind: str
    boresight: Angle = 0.0
    gain: complex = 1.0 + 0.0j
    slope: float | None = None
    slope_axis: str | None = None
    sidelobe: tuple[SidelobeRegion, ...] = ()
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("sum", "difference"):
            raise ValueError(f"unknown beam kind {self.kind!r}")
        if self.gain == 0:
            raise ValueError("beam gain must be nonzero")
        if self.kind == "sum":
            if self.slope is not None:
                raise ValueError("sum beams take no slope constraint")
            if self.slope_axis is not None:
                raise ValueError("sum beams take no slope axis")
        else:
            if self.slope is None:
                raise ValueError("difference beams need a slope (per degree)")
        if self.slope_axis is not None and self.slope_axis not in ("azimuth", "elevation"):
            raise ValueError("slope axis must be 'azimuth' or 'elevation'")
        object.__setattr__(self, "sidelobe", tuple(self.sidelobe))


@dataclass(frozen=True, eq=False)
class ConstraintSystem:
    """Compiled convex constraints on a complex weight vector of length ``n``.

    Row ``c`` of ``equality_rows`` states ``vdot(c, w) == rhs``; row ``c`` of
    ``bound_rows`` states ``abs(vdot(c, w))**2 <= bound``.
    """

    n: int
    equality_rows: np.ndarray
    equality_rhs: np.ndarray
    bound_rows: np.ndarray = field(default=None)
    bounds: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.bound_rows is None:
            object.__setattr__(self, "bound_rows", np.zeros((0, self.n), complex))
        if self.bounds is None:
            object.__setattr__(self, "bounds", np.zeros(0))
        eq_rows = np.atleast_2d(np.asarray(self.equality_rows, complex))
        eq_rhs = np.atleast_1d(np.asarray(self.equality_rhs, complex))
        ub_rows = np.atleast_2d(np.asarray(self.bound_rows, complex))
        ub = np.atleast_1d(np.asarray(self.bounds, float))
        if eq_rows.shape[0] == 0:
            raise ValueError("a constraint system needs at least one equality")
        if eq_rows.shape != (len(eq_rhs), self.n):
            raise ValueError("equality rows/rhs shapes disagree")
        if ub_rows.shape[0] != len(ub) or (len(ub) and ub_rows.shape[1] != self.n):
            raise ValueError("bound rows/levels shapes disagree")
        if np.any(ub < 0):
            raise ValueError("magnitude bounds must be nonnegative")
        object.__setattr__(self, "equality_rows", eq_rows)
        object.__setattr__(self, "equality_rhs", eq_rhs)
        object.__setattr__(self, "bound_rows", ub_rows)
        object.__setattr__(self, "bounds", ub)

    @property
    def n_equalities(self) -> int:
        return self.equality_rows.shape[0]

    @property
    def n_bounds(self) -> int:
        return self.bound_rows.shape[0]

    def equality_residuals(self, w: np.ndarray) -> np.ndarray:
        """``|vdot(c, w) - rhs|`` for every equality row."""
        return np.abs(self.equality_rows.conj() @ w - self.equality_rhs)

    def bound_values(self, w: np.ndarray) -> np.ndarray:
        """``|vdot(c, w)|^2`` for every bound row."""
        return np.abs(self.bound_rows.conj() @ w) ** 2


@dataclass(frozen=True)
class FeasibilityReport:
    """Worst-case residuals of a weight vector against a constraint system."""

    max_equality_residual: float
    max_bound_violation: float
    tol_eq: float
    tol_ineq: float

    @property
    def passed(self) -> bool:
        return (self.max_equality_residual <= self.tol_eq
                and self.max_bound_violation <= self.tol_ineq)


def _cut_angles(sweep: np.ndarray, cut: str) -> list[tuple[float, float]]:
    if cut == "azimuth":
        return [(float(t), 0.0) for t in sweep]
    return [(0.0, float(t)) for t in sweep]


def compile_constraints(spec: BeamSpec, geom: ArrayGeometry,
                        coupling: CouplingModel,
                        planar_sampling: str = "cuts") -> ConstraintSystem:
    """Build the convex constraint system for one beam.

    Sum beams yield one equality (boresight gain); difference beams yield two
    (boresight null and slope).  Each side-lobe sample adds one magnitude
    bound ``|gain|^2 * 10**(level_db/10)``.

    Parameters
    ----------
    spec : BeamSpec
    geom : ArrayGeometry
    coupling : CouplingModel
    planar_sampling : str
        ``"cuts"`` places the side-lobe samples along the two principal cuts
        (elevation 0 sweep in azimuth plus azimuth 0 sweep in elevation);
        ``"grid"`` uses the cartesian product of the two sweeps.  Ignored for
        linear arrays.

    Returns
    -------
    ConstraintSystem
        Deterministic function of its inputs (identical spec and geometry
        give bit-identical systems).
    """
    if coupling.n != geom.n:
        raise ValueError(
            f"coupling order {coupling.n} does not match array size {geom.n}"
        )
    if planar_sampling not in ("cuts", "grid"):
        raise ValueError("planar sampling must be 'cuts' or 'grid'")
    if geom.kind == "planar" and spec.kind == "difference" and spec.slope_axis is None:
        raise ValueError("planar difference beams need a slope axis")

    m = coupling_matrix(coupling)
    mu = complex(spec.gain)
    c0 = m @ steering_vector(geom, spec.boresight)

    if spec.kind == "sum":
        eq_rows = [c0]
        eq_rhs = [mu]
    else:
        deriv_axis = spec.slope_axis if geom.kind == "planar" else None
        c1 = m @ steering_derivative(geom, spec.boresight, axis=deriv_axis)
        eq_rows = [c0, c1]
        eq_rhs = [0.0 + 0.0j, mu * spec.slope]

    bound_rows = []
    bounds = []
    for region in spec.sidelobe:
        sweep = angle_grid(region.intervals, region.samples)
        if geom.kind == "linear":
            angles = list(sweep)
        elif planar_sampling == "cuts":
            angles = _cut_angles(sweep, "azimuth") + _cut_angles(sweep, "elevation")
        else:
            angles = [(float(a), float(e)) for a in sweep for e in sweep]
        rows = (m @ steering_matrix(geom, angles)).T
        level = abs(mu) ** 2 * 10.0 ** (region.level_db / 10.0)
        bound_rows.append(rows)
        bounds.append(np.full(len(angles), level))

    if bound_rows:
        ub_rows = np.vstack(bound_rows)
        ub = np.concatenate(bounds)
    else:
        ub_rows = np.zeros((0, geom.n), complex)
        ub = np.zeros(0)
    return ConstraintSystem(
        n=geom.n,
        equality_rows=np.array(eq_rows),
        equality_rhs=np.array(eq_rhs),
        bound_rows=ub_rows,
        bounds=ub,
    )


def check_feasibility(w: np.ndarray, system: ConstraintSystem,
                      tol_eq: float = 1e-8,
                      tol_ineq: float = 1e-8) -> FeasibilityReport:
    """Measure how far ``w`` is from satisfying ``system``.

    Returns the maximum equality residual ``|vdot(c, w) - rhs|`` and the
    maximum bound violation ``max(0, |vdot(c, w)|^2 - bound)``; the report
    passes when both stay within the given tolerances.
    """
    w = np.asarray(w)
    if w.shape != (system.n,):
        raise ValueError(f"weight vector must have length {system.n}")
    eq = float(np.max(system.equality_residuals(w)))
    if system.n_bounds:
        violation = float(np.max(np.maximum(system.bound_values(w) - system.bounds, 0.0)))
    else:
        violation = 0.0
    return FeasibilityReport(
        max_equality_residual=eq,
        max_bound_violation=violation,
        tol_eq=tol_eq,
        tol_ineq=tol_ineq,
    )
