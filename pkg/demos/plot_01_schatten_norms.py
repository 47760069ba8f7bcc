"""
Schatten norms of small matrices
================================

Singular values drive everything: the trace norm, the Hilbert-Schmidt
norm and the operator norm are all read off the same vector.
"""

import numpy as np
from ncx.matrix_core import factor_unit_ball, hoelder_gap, schatten_norm, singular_values

rng = np.random.default_rng(0)
a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
print("singular values:", np.round(singular_values(a), 4))

for p in (1, 2, 4, np.inf):
    print(f"S_{p} norm: {schatten_norm(a, p):.4f}")

# p = 2 is just the Frobenius norm
print("Frobenius check:", np.isclose(schatten_norm(a, 2), np.linalg.norm(a)))

###############################################################################
# Hoelder: ||AB||_r <= ||A||_p ||B||_q when 1/r = 1/p + 1/q

b = rng.standard_normal((3, 3))
print("gap for p = q = 2:", hoelder_gap(a, b, 2, 2))

###############################################################################
# Any matrix splits as B* C with ||B||_2^2 = ||C||_2^2 = ||A||_1

B, C = factor_unit_ball(a)
print("B* C == A:", np.allclose(B.conj().T @ C, a))
print(schatten_norm(B, 2) ** 2, schatten_norm(C, 2) ** 2, schatten_norm(a, 1))
