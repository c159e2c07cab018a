"""Tour of the built-in scenario generators and where they sit classically.

Also demonstrates the message-dimension hierarchy on the densest scenario in
the gallery: six Pauli eigenstates against the 24 snub-cube measurements.
That behaviour defeats a single classical bit by a wide margin, yet it admits
an explicit trit model, and four messages reproduce every qubit behaviour.
"""

import numpy as np

from incompat import (
    PMPolytope,
    constants,
    fw_membership,
    noisy_pauli_triple_jm,
    pauli_eigenstate_ensemble,
    pauli_set,
    planar_set,
    pm_behavior,
    snub_cube_directions,
    snub_cube_set,
)

print("named thresholds:")
for name, value in constants().items():
    print(f"  {name:15s} {value:.6f}")

print("\nplanar fan (n = 4, eta at the planar two-message threshold):")
for m in planar_set(4, constants()["pm2_planar"]):
    print("  direction", np.round(2 * m.effect0.v / m.visibility, 4), "visibility", round(m.visibility, 4))

dirs = snub_cube_directions()
gram = dirs @ dirs.T
np.fill_diagonal(gram, -2)
print("\nsnub cube: 24 vertices, 5 equidistant nearest neighbours each,")
print("  nearest-neighbour angle:", round(np.degrees(np.arccos(np.max(gram))), 3), "degrees")
print("  chiral: no vertex has its antipode in the set:",
      all(np.min(np.linalg.norm(dirs + v, axis=1)) > 1e-9 for v in dirs))

behavior = pm_behavior(pauli_eigenstate_ensemble(), snub_cube_set(1.0))
print("\neigenstates x snub cube across message dimensions:")
for d in (2, 3, 4):
    verdict = fw_membership(behavior.data, PMPolytope(d, 6, 24), max_iter=4000)
    if verdict.is_outside:
        w = verdict.witness
        print(f"  d = {d}: {verdict.status}  (witness gap Q - L = {w.Q - w.L:.4f})")
    else:
        print(f"  d = {d}: {verdict.status}  (decomposition of {len(verdict.strategies)} "
              f"strategies, error {verdict.reconstruction_error:.1e})")

triple = pauli_set("xyz", 0.6)
verdict = fw_membership(
    pm_behavior(pauli_eigenstate_ensemble(), triple).data, PMPolytope(2, 6, 3)
)
print("\nthe pauli triple at eta = 0.6:")
print("  jointly measurable:", noisy_pauli_triple_jm(0.6))
print("  eigenstate behaviour vs two messages:", verdict.status,
      "(incompatible, yet invisible to this experiment)")
