"""Array geometry, steering vectors, and the idealized mutual-coupling model.

Element positions and spacings are expressed in wavelengths, so the wave
number never appears explicitly: a spacing of 0.5 is the usual half-wavelength
grid and every phase term reduces to ``2*pi*position``.  All angles are in
degrees; radians only occur inside the phase computations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz

DEG = np.pi / 180.0

# Bearing of a target: a scalar for linear arrays, an (azimuth, elevation)
# pair for planar arrays.  Each component lives in [-90, 90] degrees.
Angle = float | tuple[float, float]


@dataclass(frozen=True, eq=False)
class ArrayGeometry:
    """Element layout of a linear or planar-grid antenna array.

    Attributes
    ----------
    kind : str
        ``"linear"`` or ``"planar"``.
    n : int
        Number of elements (``nx * ny`` for planar grids).
    spacing : float
        Inter-element spacing in wavelengths.
    positions : ndarray
        ``(n, 2)`` element coordinates in wavelengths.  Linear arrays sit on
        the x axis at ``0, d, ..., (n-1)*d``; planar grids are filled with x
        varying fastest.
    nx, ny : int or None
        Grid dimensions, planar arrays only.
    """

    kind: str
    n: int
    spacing: float
    positions: np.ndarray
    nx: int | None = None
    ny: int | None = None

    def __post_init__(self):
        if self.kind not in ("linear", "planar"):
            raise ValueError(f"unknown array kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("array needs at least one element")
        if self.spacing <= 0:
            raise ValueError("element spacing must be positive")
        if self.positions.shape != (self.n, 2):
            raise ValueError("positions must have shape (n, 2)")

    @classmethod
    def linear(cls, n: int, spacing: float = 0.5) -> "ArrayGeometry":
        """Uniform linear array of ``n`` elements along the x axis."""
        pos = np.zeros((n, 2))
        pos[:, 0] = spacing * np.arange(n)
        return cls(kind="linear", n=n, spacing=spacing, positions=pos)

    @classmethod
    def planar_grid(cls, nx: int, ny: int, spacing: float = 0.5) -> "ArrayGeometry":
        """Full rectangular ``nx x ny`` grid in the x-y plane."""
        ix, iy = np.meshgrid(np.arange(nx), np.arange(ny))
        pos = spacing * np.column_stack([ix.ravel(), iy.ravel()]).astype(float)
        return cls(kind="planar", n=nx * ny, spacing=spacing, positions=pos,
                   nx=nx, ny=ny)


@dataclass(frozen=True)
class CouplingModel:
    """Idealized mutual coupling with geometric decay ``rho**|i-j|``.

    ``rho = 0`` is the uncoupled (identity) case.  The resulting matrix is
    real, symmetric, Toeplitz, unit-diagonal and positive definite for
    ``0 <= rho < 1``.
    """

    n: int
    rho: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("matrix order must be at least 1")
        if not 0.0 <= self.rho < 1.0:
            raise ValueError("coupling coefficient must lie in [0, 1)")


def coupling_matrix(model: CouplingModel) -> np.ndarray:
    """Dense coupling matrix with entries ``rho**|i-j|``."""
    return toeplitz(model.rho ** np.arange(model.n))


def _angle_scalar(angle) -> float:
    try:
        theta = float(angle)
    except (TypeError, ValueError):
        raise ValueError(
            f"linear arrays take a scalar bearing in degrees, got {angle!r}"
        ) from None
    if not -90.0 <= theta <= 90.0:
        raise ValueError(f"bearing {theta} deg outside [-90, 90]")
    return theta


def _angle_pair(angle) -> tuple[float, float]:
    try:
        az, el = angle
        az = float(az)
        el = float(el)
    except (TypeError, ValueError):
        raise ValueError(
            f"planar arrays take an (azimuth, elevation) pair in degrees, got {angle!r}"
        ) from None
    for name, value in (("azimuth", az), ("elevation", el)):
        if not -90.0 <= value <= 90.0:
            raise ValueError(f"{name} {value} deg outside [-90, 90]")
    return az, el


def steering_matrix(geom: ArrayGeometry, angles) -> np.ndarray:
    """Steering vectors for many bearings, stacked as an ``(n, m)`` matrix.

    Parameters
    ----------
    geom : ArrayGeometry
    angles : sequence
        Scalars (linear) or (azimuth, elevation) pairs (planar), in degrees.

    Returns
    -------
    ndarray
        Complex matrix whose column ``j`` is the steering vector toward
        ``angles[j]``; every entry has unit magnitude.
    """
    x = geom.positions[:, 0]
    y = geom.positions[:, 1]
    if geom.kind == "linear":
        theta = np.array([_angle_scalar(a) for a in angles])
        return np.exp(-2j * np.pi * np.outer(x, np.sin(theta * DEG)))
    pairs = np.array([_angle_pair(a) for a in angles])
    az = pairs[:, 0] * DEG
    el = pairs[:, 1] * DEG
    u = np.cos(el) * np.sin(az)
    v = np.sin(el)
    return np.exp(-2j * np.pi * (np.outer(x, u) + np.outer(y, v)))


def steering_vector(geom: ArrayGeometry, angle: Angle) -> np.ndarray:
    """Per-element complex response of the array toward ``angle``.

    Linear arrays use ``exp(-2j*pi*d*n*sin(theta))``; planar grids use the
    direction cosines ``u = cos(el)*sin(az)``, ``v = sin(el)`` and phase
    ``exp(-2j*pi*(x*u + y*v))``, which reduces to the linear formula on the
    azimuth cut at zero elevation.

    Raises
    ------
    ValueError
        If any angle component falls outside [-90, 90] degrees.
    """
    return steering_matrix(geom, [angle])[:, 0]


def steering_derivative(geom: ArrayGeometry, angle: Angle,
                        axis: str | None = None) -> np.ndarray:
    """Exact derivative of the steering vector with respect to angle in degrees.

    The chain rule factor ``pi/180`` is included, so the result pairs
    directly with slopes quoted per degree.  Planar arrays differentiate
    along one principal coordinate at a time, selected by ``axis``
    (``"azimuth"`` or ``"elevation"``).

    Parameters
    ----------
    geom : ArrayGeometry
    angle : float or (float, float)
        Bearing in degrees.
    axis : str, optional
        Required for planar geometries; linear arrays accept ``None`` or
        ``"azimuth"``.

    Returns
    -------
    ndarray
        Complex vector of length ``geom.n``.
    """
    a = steering_vector(geom, angle)
    x = geom.positions[:, 0]
    y = geom.positions[:, 1]
    if geom.kind == "linear":
        if axis not in (None, "azimuth"):
            raise ValueError("linear arrays differentiate along azimuth only")
        theta = _angle_scalar(angle)
        return -2j * np.pi * x * np.cos(theta * DEG) * DEG * a
    az, el = _angle_pair(angle)
    if axis == "azimuth":
        factor = x * np.cos(el * DEG) * np.cos(az * DEG)
    elif axis == "elevation":
        factor = -x * np.sin(el * DEG) * np.sin(az * DEG) + y * np.cos(el * DEG)
    else:
        raise ValueError("planar derivative needs axis 'azimuth' or 'elevation'")
    return -2j * np.pi * factor * DEG * a


def effective_response(geom: ArrayGeometry, coupling: CouplingModel,
                       angle: Angle) -> np.ndarray:
    """Coupled array response ``M @ a(angle)``.

    The beam value for a weight vector ``w`` is the inner product
    ``vdot(effective_response(...), w)``.  With ``rho = 0`` this equals the
    bare steering vector.
    """
    if coupling.n != geom.n:
        raise ValueError(
            f"coupling order {coupling.n} does not match array size {geom.n}"
        )
    return coupling_matrix(coupling) @ steering_vector(geom, angle)


def effective_matrix(geom: ArrayGeometry, coupling: CouplingModel,
                     angles) -> np.ndarray:
    """Coupled steering vectors for many bearings, ``(n, m)``."""
    if coupling.n != geom.n:
        raise ValueError(
            f"coupling order {coupling.n} does not match array size {geom.n}"
        )
    return coupling_matrix(coupling) @ steering_matrix(geom, angles)


def angle_grid(region, total_samples: int) -> np.ndarray:
    """Evenly spaced bearings over a union of closed intervals (degrees).

    Samples are split among the intervals in proportion to length using the
    largest-remainder rule (ties broken toward earlier intervals), which
    makes the allocation deterministic.  Every non-degenerate interval keeps
    both endpoints and therefore at least two samples; degenerate intervals
    ``[a, a]`` contribute the single point ``a``.  Those floors mean the
    returned count can exceed the request by at most one sample per interval.

    Parameters
    ----------
    region : sequence of (lo, hi)
        Non-overlapping closed intervals inside [-90, 90].
    total_samples : int
        Requested total number of samples, at least 1.

    Returns
    -------
    ndarray
        Sample angles, ascending within each interval, intervals in the
        order given.
    """
    intervals = [(float(lo), float(hi)) for lo, hi in region]
    if not intervals:
        raise ValueError("angular region is empty")
    if total_samples < 1:
        raise ValueError("need at least one sample")
    for lo, hi in intervals:
        if hi < lo:
            raise ValueError(f"interval [{lo}, {hi}] is reversed")
        if lo < -90.0 or hi > 90.0:
            raise ValueError(f"interval [{lo}, {hi}] outside [-90, 90]")
    ordered = sorted(intervals)
    for (_, prev_hi), (next_lo, _) in zip(ordered, ordered[1:]):
        if next_lo < prev_hi:
            raise ValueError("intervals overlap")

    lengths = np.array([hi - lo for lo, hi in intervals])
    degenerate = lengths == 0.0
    counts = np.where(degenerate, 1, 0)
    remaining = total_samples - int(counts.sum())
    total_length = float(lengths.sum())
    if total_length > 0.0 and remaining > 0:
        quota = remaining * lengths / total_length
        base = np.floor(quota).astype(int)
        leftover = remaining - int(base.sum())
        # hand leftover samples to the largest fractional parts, earliest first
        order = np.lexsort((np.arange(len(intervals)), -(quota - base)))
        base[order[:leftover]] += 1
        counts = counts + base
    counts = np.where(degenerate, counts, np.maximum(counts, 2))

    parts = []
    for (lo, hi), k in zip(intervals, counts):
        parts.append(np.array([lo]) if lo == hi else np.linspace(lo, hi, k))
    return np.concatenate(parts)
