"""Walk through the vertical potential seen by the electron.

Prints V_perp(z) for a few layer thicknesses, shows how the thin-layer
potential deepens toward the mirror-charge limit, and cross-checks the
quadrature against the multiple-image series.
"""

import numpy as np

from neontrap import (DielectricStack, Superconductor, image_series_oracle,
                      perpendicular_potential)

SC = Superconductor()

z = np.array([0.23, 0.5, 1.0, 2.0, 5.0, 10.0])

print("V_perp(z) in meV over a superconducting substrate")
print(f"{'z [nm]':>8} " + " ".join(f"L={L:g}".rjust(10) for L in (3, 10, 30))
      + "      bulk".rjust(11))
bulk = DielectricStack(SC, np.inf)
for zi in z:
    row = [perpendicular_potential(DielectricStack(SC, L), zi) for L in (3.0, 10.0, 30.0)]
    row.append(perpendicular_potential(bulk, zi))
    print(f"{zi:8.2f} " + " ".join(f"{v:10.3f}" for v in row))

print()
print("thinner layers bind harder: the substrate mirror shines through")

# oracle cross-check: the same potential from explicitly summed images
stack = DielectricStack(SC, 10.0)
v_quad = perpendicular_potential(stack, z)
v_series = image_series_oracle(stack, z, 200)
worst = np.max(np.abs((v_quad - v_series) / v_series))
print(f"\nquadrature vs image-series, L = 10 nm: worst rel. diff = {worst:.2e}")
