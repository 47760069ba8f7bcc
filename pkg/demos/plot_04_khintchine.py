"""
Rademacher series: splitting at most twice the L1 norm
======================================================

Factor f = h* g pointwise, then cut g along a chain of module-closed
subspaces built from h.  The pieces give a splitting whose cost is
bounded by 2 ||f||_1.
"""

import numpy as np
from ncx.construct import khintchine_split
from ncx.harness import InstanceSpec, gen_instance
from ncx.opfunc import DyadicFn
from ncx.seqnorm import triple_norm_solve

# scalar touchstone: r_0 + r_1
f = DyadicFn.from_walsh({1: [[1.0]], 2: [[1.0]]}, 3)
sp = khintchine_split(f, 1)
print("construction / ||f||_1 =", sp.value / sp.diagnostics["l1_norm"])
print("optimal / ||f||_1      =", triple_norm_solve(sp.target).value / sp.diagnostics["l1_norm"])

###############################################################################
# random matrix coefficients

for seed in range(5):
    f, meta = gen_instance(InstanceSpec("khintchine", dim=3, terms=4, seed=seed))
    sp = khintchine_split(f, meta["J"])
    dg = sp.diagnostics
    print(f"seed {seed}: ratio {sp.value / dg['l1_norm']:.4f}, "
          f"col(a) {dg['column_norm_a']:.4f}, row(b) {dg['row_norm_b']:.4f}, "
          f"bound {dg['factor_bound']:.4f}, violations {sp.check()}")
