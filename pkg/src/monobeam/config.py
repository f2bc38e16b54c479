"""Declarative synthesis configuration (strict JSON).

The document has sections mirroring the library call surface: ``geometry``,
``coupling``, ``beams``, ``solver``, ``reselection``, ``output`` and
``constraints``.  Unknown keys are rejected so typos fail loudly, and every
error names the offending key path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .arrays import ArrayGeometry, CouplingModel
from .constraints import BeamSpec, SidelobeRegion
from .reselection import ReselectionOptions
from .solver import SolverOptions

DEG = np.pi / 180.0


class ConfigError(ValueError):
    """Invalid synthesis configuration; the message names the key at fault."""


@dataclass(frozen=True)
class SynthesisConfig:
    """Parsed configuration: geometry, coupling, beams and run options."""

    geometry: ArrayGeometry
    coupling: CouplingModel
    beams: tuple[BeamSpec, ...]
    solver: SolverOptions
    reselection: ReselectionOptions
    output_directory: str | None = None
    planar_sampling: str = "cuts"
    source_text: str = ""
    sample_counts: tuple[int, ...] = field(default=())

    @property
    def beam_names(self) -> list[str]:
        return [b.name for b in self.beams]


def _require_keys(section: dict, allowed: set[str], required: set[str], path: str):
    for key in section:
        if key not in allowed:
            raise ConfigError(f"unknown key '{path}.{key}'")
    for key in required:
        if key not in section:
            raise ConfigError(f"missing key '{path}.{key}'")


def _number(section: dict, key: str, path: str, default=None, kind=float):
    if key not in section:
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"'{path}.{key}' must be a number")
    return kind(value)


def _parse_geometry(section: dict) -> ArrayGeometry:
    _require_keys(section, {"kind", "n", "nx", "ny", "spacing"}, {"kind"}, "geometry")
    kind = section["kind"]
    spacing = _number(section, "spacing", "geometry", 0.5)
    try:
        if kind == "linear":
            if "n" not in section:
                raise ConfigError("missing key 'geometry.n'")
            return ArrayGeometry.linear(int(section["n"]), spacing)
        if kind == "planar":
            if "nx" not in section or "ny" not in section:
                raise ConfigError("planar geometry needs 'geometry.nx' and 'geometry.ny'")
            return ArrayGeometry.planar_grid(int(section["nx"]), int(section["ny"]), spacing)
    except ValueError as exc:
        raise ConfigError(f"geometry: {exc}") from exc
    raise ConfigError(f"'geometry.kind' must be 'linear' or 'planar', got {kind!r}")


def _parse_angle(value, path: str, planar: bool):
    if planar:
        if not (isinstance(value, list) and len(value) == 2):
            raise ConfigError(f"'{path}' must be an [azimuth, elevation] pair")
        return float(value[0]), float(value[1])
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    raise ConfigError(f"'{path}' must be a scalar bearing in degrees")


def _parse_gain(value, path: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, list) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ConfigError(f"'{path}' must be a number or [re, im] pair")


def _parse_sidelobe(entries, path: str) -> tuple[SidelobeRegion, ...]:
    if not isinstance(entries, list):
        raise ConfigError(f"'{path}' must be a list of region objects")
    regions = []
    for i, entry in enumerate(entries):
        entry_path = f"{path}[{i}]"
        if not isinstance(entry, dict):
            raise ConfigError(f"'{entry_path}' must be an object")
        _require_keys(entry, {"intervals", "samples", "level_db"},
                      {"intervals", "samples", "level_db"}, entry_path)
        intervals = entry["intervals"]
        if not (isinstance(intervals, list) and
                all(isinstance(p, list) and len(p) == 2 for p in intervals)):
            raise ConfigError(f"'{entry_path}.intervals' must be [lo, hi] pairs")
        try:
            regions.append(SidelobeRegion(
                intervals=tuple((float(lo), float(hi)) for lo, hi in intervals),
                samples=int(entry["samples"]),
                level_db=float(entry["level_db"]),
            ))
        except ValueError as exc:
            raise ConfigError(f"{entry_path}: {exc}") from exc
    return tuple(regions)


_BEAM_KEYS = {"name", "kind", "boresight", "gain", "slope", "slope_unit",
              "slope_axis", "sidelobe"}


def _parse_beam(entry: dict, index: int, planar: bool) -> BeamSpec:
    path = f"beams[{index}]"
    if not isinstance(entry, dict):
        raise ConfigError(f"'{path}' must be an object")
    _require_keys(entry, _BEAM_KEYS, {"kind"}, path)
    slope = _number(entry, "slope", path)
    unit = entry.get("slope_unit", "per_degree")
    if unit not in ("per_degree", "per_radian"):
        raise ConfigError(f"'{path}.slope_unit' must be 'per_degree' or 'per_radian'")
    if slope is not None and unit == "per_radian":
        slope *= DEG
    try:
        return BeamSpec(
            kind=entry["kind"],
            boresight=_parse_angle(entry.get("boresight", [0.0, 0.0] if planar else 0.0),
                                   f"{path}.boresight", planar),
            gain=_parse_gain(entry.get("gain", 1.0), f"{path}.gain"),
            slope=slope,
            slope_axis=entry.get("slope_axis"),
            sidelobe=_parse_sidelobe(entry.get("sidelobe", []), f"{path}.sidelobe"),
            name=str(entry.get("name", f"beam{index}")),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _parse_solver(section: dict) -> SolverOptions:
    _require_keys(section, {"tol_eq", "tol_ineq", "tol_gap", "max_iterations"},
                  set(), "solver")
    defaults = SolverOptions()
    try:
        return SolverOptions(
            tol_eq=_number(section, "tol_eq", "solver", defaults.tol_eq),
            tol_ineq=_number(section, "tol_ineq", "solver", defaults.tol_ineq),
            tol_gap=_number(section, "tol_gap", "solver", defaults.tol_gap),
            max_iterations=_number(section, "max_iterations", "solver",
                                   defaults.max_iterations, int),
        )
    except ValueError as exc:
        raise ConfigError(f"solver: {exc}") from exc


def _parse_reselection(section: dict) -> ReselectionOptions:
    allowed = {"epsilon", "max_outer_iterations", "init", "seed",
               "disjoint_cost_threshold", "zero_threshold"}
    _require_keys(section, allowed, set(), "reselection")
    defaults = ReselectionOptions()
    init = section.get("init", defaults.init)
    if init not in ("random", "ones"):
        raise ConfigError("'reselection.init' must be 'random' or 'ones'")
    try:
        return ReselectionOptions(
            epsilon=_number(section, "epsilon", "reselection", defaults.epsilon),
            max_outer_iterations=_number(section, "max_outer_iterations",
                                         "reselection",
                                         defaults.max_outer_iterations, int),
            init=init,
            seed=_number(section, "seed", "reselection", defaults.seed, int),
            disjoint_cost_threshold=_number(section, "disjoint_cost_threshold",
                                            "reselection",
                                            defaults.disjoint_cost_threshold),
            zero_threshold=_number(section, "zero_threshold", "reselection",
                                   defaults.zero_threshold),
        )
    except ValueError as exc:
        raise ConfigError(f"reselection: {exc}") from exc


def parse_config(text: str) -> SynthesisConfig:
    """Parse and validate a configuration document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("the configuration must be a JSON object")
    _require_keys(doc, {"geometry", "coupling", "beams", "solver",
                        "reselection", "output", "constraints"},
                  {"geometry", "beams"}, "config")

    geometry = _parse_geometry(doc["geometry"])
    planar = geometry.kind == "planar"

    coupling_section = doc.get("coupling", {})
    _require_keys(coupling_section, {"rho"}, set(), "coupling")
    try:
        coupling = CouplingModel(geometry.n, _number(coupling_section, "rho",
                                                     "coupling", 0.0))
    except ValueError as exc:
        raise ConfigError(f"coupling: {exc}") from exc

    beams_section = doc["beams"]
    if not isinstance(beams_section, list) or not beams_section:
        raise ConfigError("'beams' must be a non-empty list")
    beams = tuple(_parse_beam(entry, i, planar) for i, entry in enumerate(beams_section))
    names = [b.name for b in beams]
    if len(set(names)) != len(names):
        raise ConfigError("beam names must be unique")

    output_section = doc.get("output", {})
    _require_keys(output_section, {"directory"}, set(), "output")
    directory = output_section.get("directory")
    if directory is not None and not isinstance(directory, str):
        raise ConfigError("'output.directory' must be a string")

    constraints_section = doc.get("constraints", {})
    _require_keys(constraints_section, {"planar_sampling"}, set(), "constraints")
    planar_sampling = constraints_section.get("planar_sampling", "cuts")
    if planar_sampling not in ("cuts", "grid"):
        raise ConfigError("'constraints.planar_sampling' must be 'cuts' or 'grid'")

    return SynthesisConfig(
        geometry=geometry,
        coupling=coupling,
        beams=beams,
        solver=_parse_solver(doc.get("solver", {})),
        reselection=_parse_reselection(doc.get("reselection", {})),
        output_directory=directory,
        planar_sampling=planar_sampling,
        source_text=text,
        sample_counts=tuple(sum(r.samples for r in b.sidelobe) for b in beams),
    )


def load_config(path) -> SynthesisConfig:
    """Read and parse a configuration file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)
