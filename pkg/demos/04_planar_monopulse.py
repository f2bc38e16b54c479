"""Three beams on one planar grid: sum, azimuth difference, elevation difference.

A full monopulse front end needs all three beams on the same face.  Here a
10x10 grid is partitioned so each beam gets its own interleaved subarray;
the element map at the end shows who owns which antenna (S, A, E).
"""

import numpy as np

from monobeam import (
    ArrayGeometry,
    BeamSpec,
    CouplingModel,
    ReselectionOptions,
    SidelobeRegion,
    beam_pattern,
    max_sll,
    slope_at,
    synthesize,
)

DEG = np.pi / 180.0

geom = ArrayGeometry.planar_grid(10, 10, spacing=0.5)
coupling = CouplingModel(geom.n, rho=0.0)

sum_sll = (SidelobeRegion(((15.0, 90.0), (-90.0, -15.0)), samples=50, level_db=-18.0),)
dif_sll = (SidelobeRegion(((17.0, 90.0), (-90.0, -17.0)), samples=50, level_db=-18.0),)
beams = [
    BeamSpec(kind="sum", boresight=(0.0, 0.0), sidelobe=sum_sll, name="sum"),
    BeamSpec(kind="difference", boresight=(0.0, 0.0), slope=-4.0 * DEG,
             slope_axis="azimuth", sidelobe=dif_sll, name="delta_az"),
    BeamSpec(kind="difference", boresight=(0.0, 0.0), slope=-4.0 * DEG,
             slope_axis="elevation", sidelobe=dif_sll, name="delta_el"),
]

result = synthesize(beams, geom, coupling,
                    options=ReselectionOptions(seed=1, zero_threshold=1e-4))
print(f"status: {result.status}, supports {result.support_sizes}, "
      f"{len(result.uncovered)} unused elements")

for spec, w in zip(beams, result.weights):
    values = w.values
    if spec.kind == "difference":
        slope = slope_at(values, geom, coupling, (0.0, 0.0), axis=spec.slope_axis)
        print(f"{spec.name}: slope {slope.real / DEG:+.2f}/rad along {spec.slope_axis}")
    for cut in ("azimuth", "elevation"):
        pattern = beam_pattern(values, geom, coupling,
                               np.linspace(-90, 90, 3601), cut=cut)
        level = max_sll(pattern, ((17.0, 90.0), (-90.0, -17.0)))
        print(f"  {cut} cut side lobes: {level:.1f} dB")

owner = np.full(geom.n, ".", dtype=object)
for letter, w in zip("SAE", result.weights):
    owner[w.support] = letter
print()
print("element ownership (rows = y, columns = x):")
for row in owner.reshape(10, 10)[::-1]:
    print("  " + " ".join(row))
