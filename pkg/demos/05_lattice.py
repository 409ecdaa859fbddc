"""The Neron-Severi lattice of E x E under SL(2, Z)."""
import random

import numpy as np

from abelfm import lattice

G = np.array(lattice.GRAM)
print("Gram matrix (E, F, Diagonal):\n", G)

# Slope curves E_ab sit on the null conic xy + xz + yz = 0.
for a, b in [(1, 0), (0, 1), (1, 1), (2, 3), (1, -1)]:
    u = lattice.slope_curve(a, b)
    print(f"E_{a},{b} = {u}  on conic: {lattice.on_conic(u)}")

# Random words in S and T preserve the form.
rng = random.Random(0)
g = lattice.random_sl2(rng, steps=12)
M = np.array(lattice.induced_action(g), dtype=object)
print("\ng =", g, "\nM^T G M == G:", (M.T.dot(G).dot(M) == G).all())

print("\ncone generators of height 2:", lattice.cone_generators(2))
orbit = lattice.orbit_transitivity(16)
print(f"orbit of E reaches {len(orbit.reached)}/{len(orbit.targets)} generators up to height 16")
schwarz = lattice.reverse_schwarz_check(8)
print(f"reverse Schwarz: {schwarz.pairs} pairs, {len(schwarz.violations)} violations")
