"""Classical-polytope membership, certificates, and the independent oracle.

Membership of a point in the local-correlator or message-passing polytope is
decided by Frank-Wolfe against an exact enumeration oracle.  Both possible
answers come with checkable evidence: Inside ships the convex decomposition,
Outside ships a separating witness whose classical bound is recomputed by a
fresh oracle call.  A dense phase-1 simplex over the explicit vertex list
gives a second opinion on small instances.
"""

import math

import numpy as np

from incompat import (
    BellPolytope,
    PMPolytope,
    brute_force_membership,
    enumerate_sign_assignments,
    fw_membership,
    pauli_eigenstate_ensemble,
    pauli_set,
    pm_behavior,
)

# The Tsirelson point: the two-setting quantum correlator matrix furthest
# outside the local polytope.
point = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2)
verdict = fw_membership(point, BellPolytope(2, 2))
w = verdict.witness
print("Tsirelson point:", verdict.status)
print("  witness coefficients:\n", np.round(w.M, 9))
print(f"  quantum value Q = {w.Q:.9f}, local bound L = {w.L:.9f}")

# Second opinion from the simplex over all 16 deterministic sign vertices.
vertices = np.array([s.vector().ravel() for s in enumerate_sign_assignments(2, 2)])
print("  simplex oracle says:", brute_force_membership(point.ravel(), vertices).status)

# A quantum behaviour that IS classical: six Pauli eigenstates against
# projective X and Z have a two-message model, and the verdict includes it.
behavior = pm_behavior(pauli_eigenstate_ensemble(), pauli_set("xz", 1.0))
verdict = fw_membership(behavior.data, PMPolytope(2, 6, 2))
print("\neigenstates vs projective X, Z with two messages:", verdict.status)
print("  decomposition size:", len(verdict.strategies))
print("  reconstruction error:", verdict.reconstruction_error)
for strategy, weight in zip(verdict.strategies, verdict.weights):
    print(f"  weight {weight:.4f}  messages {strategy.f}  responses {strategy.g}")
