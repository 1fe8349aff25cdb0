"""Ground-state binding versus layer thickness.

Reproduces the headline numbers: -15.7 meV on bulk neon, -44.6 meV for a
10 nm film on a superconductor, -40.0 meV on silicon, and the excitation
gap / mean height of the 10 nm configuration.
"""

import math

from neontrap import (Dielectric, DielectricStack, Superconductor,
                      ground_state_energy, mean_height, perpendicular_gap,
                      solve_perpendicular)

SC = Superconductor()

print(f"{'L [nm]':>8} {'W_G [meV]':>12}")
for L in (3.0, 5.0, 10.0, 20.0, 50.0, math.inf):
    w = ground_state_energy(DielectricStack(SC, L))
    label = "bulk" if math.isinf(L) else f"{L:g}"
    print(f"{label:>8} {w:12.3f}")

sol = solve_perpendicular(DielectricStack(SC, 10.0), n_states=2)
print()
print(f"10 nm film on a superconductor:")
print(f"  binding energy   {sol.energies[0]:8.2f} meV")
print(f"  excitation gap   {perpendicular_gap(sol):8.2f} meV")
print(f"  mean height      {mean_height(sol):8.3f} nm")

w_si = ground_state_energy(DielectricStack(Dielectric(12.0), 10.0))
print(f"\nsame film on silicon (eps_B = 12): {w_si:.2f} meV")
