"""
Walsh and Fourier coefficients of matrix-valued functions
=========================================================

A dyadic function lives on 2^N cells, a trigonometric one on an M-point
grid of the circle.  Both are stored as stacks of d x d matrices.
"""

import numpy as np
from ncx.opfunc import (DyadicFn, TrigFn, fourier_coeff, l1_s1_norm, l2_s2_inner,
                        walsh_coeff, walsh_index_product, walsh_row)

N = 3
rows = np.stack([walsh_row(n, N) for n in range(2 ** N)])
print(rows)

# the Walsh system is orthonormal, exactly, in integer arithmetic
print("orthonormal:", np.array_equal(rows @ rows.T // 2 ** N, np.eye(2 ** N, dtype=int)))

# products of Walsh functions are Walsh functions, the index is an XOR
print("w_3 w_5 = w_%d" % walsh_index_product(3, 5))
print(np.array_equal(walsh_row(3, N) * walsh_row(5, N), walsh_row(6, N)))

###############################################################################
# A matrix-valued Rademacher series and its coefficients

x0 = np.array([[1, 2], [0, 1]])
x1 = np.array([[0, 1], [1, 0]])
f = DyadicFn.from_walsh({1: x0, 2: x1}, N)
print(walsh_coeff(f, 1).real)
print("L1(S1) norm:", l1_s1_norm(f))

###############################################################################
# On the circle, coefficients come from an FFT; Parseval holds on the grid

g = TrigFn.from_coefficients({-1: x1, 2: x0}, 8)
print(fourier_coeff(g, 2).real)
print("||g||^2 =", l2_s2_inner(g, g).real, "=", np.sum(x0 ** 2) + np.sum(x1 ** 2))
