"""
The splitting norm of an operator sequence
==========================================

Split c = a + b and pay the column norm of a plus the row norm of b.
The solver minimizes over all splittings and returns a dual lower bound
alongside, so every answer comes bracketed.
"""

import numpy as np
from ncx.seqnorm import OpSequence, column_norm, row_norm, scalar_oracle, triple_norm_solve

# scalars: the answer is the l2 norm of the sequence
c = OpSequence([3.0, 4.0])
print(triple_norm_solve(c).value, scalar_oracle(c))

###############################################################################
# matrices: the value sits between the certificate and either pure choice

rng = np.random.default_rng(1)
c = OpSequence(rng.standard_normal((3, 2, 2)))
cert = triple_norm_solve(c)
print(f"dual lower  {cert.dual_lower:.8f}")
print(f"solver      {cert.value:.8f}")
print(f"column only {column_norm(c):.8f}")
print(f"row only    {row_norm(c):.8f}")
print("a + b == c:", np.allclose(cert.a.items + cert.b.items, c.items))

###############################################################################
# E11 and E12: the column norm is 2, the row norm is sqrt 2, and no
# splitting does better than putting everything in b

e11 = np.array([[1.0, 0], [0, 0]])
e12 = np.array([[0, 1.0], [0, 0]])
c = OpSequence([e11, e12])
print(column_norm(c), row_norm(c), triple_norm_solve(c).value)
