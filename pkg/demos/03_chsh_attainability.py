"""The CHSH norm bound and its attainability on the maximally entangled state.

For any pair of Bob observables the largest possible CHSH expectation over
all of Alice's choices and all shared states is ||B0 + B1|| + ||B0 - B1||.
For traceless qubit observables the bound is already reached on |phi+> with
explicitly constructed Alice settings, so a bound of at most 2 is a complete
no-violation certificate for the pair.
"""

import numpy as np

from incompat import QubitOperator, chsh_norm_bound, chsh_operator, optimal_alice_settings
from incompat.qcore import PHI_PLUS_VEC

rng = np.random.default_rng(0)

print("random traceless pairs: bound vs attained phi+ expectation")
for k in range(6):
    v0, v1 = rng.normal(size=3), rng.normal(size=3)
    v0 *= rng.uniform(0, 1) / np.linalg.norm(v0)
    v1 *= rng.uniform(0, 1) / np.linalg.norm(v1)
    b0, b1 = QubitOperator(0.0, v0), QubitOperator(0.0, v1)
    a0, a1, value = optimal_alice_settings(b0, b1)
    bound = chsh_norm_bound(b0, b1)
    print(f"  pair {k}: bound = {bound:.10f}, attained = {value:.10f}")

print("\nnoisy X/Z pair: the bound crosses 2 exactly at eta = 1/sqrt(2)")
for eta in (0.5, 0.6, 1 / np.sqrt(2), 0.8, 1.0):
    b0 = eta * QubitOperator.pauli("x")
    b1 = eta * QubitOperator.pauli("z")
    bound = chsh_norm_bound(b0, b1)
    verdict = "no violation possible" if bound <= 2 + 1e-12 else "violation reachable"
    print(f"  eta = {eta:.4f}: bound = {bound:.6f}  ->  {verdict}")

# The dense operator agrees: its norm never exceeds the bound, and the
# constructed settings meet it on |phi+>.
b0 = 0.9 * QubitOperator.pauli("x")
b1 = 0.9 * QubitOperator.pauli("z")
a0, a1, value = optimal_alice_settings(b0, b1)
op = chsh_operator(a0, a1, b0, b1)
print("\ndense check at eta = 0.9:")
print("  operator norm:", op.norm())
print("  phi+ expectation:", op.expectation(PHI_PLUS_VEC))
print("  norm bound:", chsh_norm_bound(b0, b1))
