"""
Lacunary Fourier coefficients on the circle
===========================================

Two settings.  An analytic f (spectrum in n >= 0), or an f whose positive
spectrum lives inside a lacunary set K.  Both give a splitting of the
coefficients along K within a constant multiple of ||f||_1.
"""

from ncx.construct import paley_case1_split, paley_case2_split
from ncx.errors import HypothesisError
from ncx.harness import InstanceSpec, gen_instance
from ncx.opfunc import LacunarySet, TrigFn

for kind, split in (("paley1", paley_case1_split), ("paley2", paley_case2_split)):
    f, meta = gen_instance(InstanceSpec(kind, dim=2, terms=3, seed=4))
    K = LacunarySet(tuple(meta["K"]))
    sp = split(f, K)
    print(f"{kind}: K = {list(K)}, ratio {sp.value / sp.diagnostics['l1_norm']:.4f}, "
          f"violations {sp.check()}")

###############################################################################
# K must grow at least geometrically

try:
    LacunarySet((1, 2, 5))
except ValueError as exc:
    print("rejected:", exc)

###############################################################################
# and the hypothesis is checked before anything is built

bad = TrigFn.from_coefficients({-1: [[1.0]], 1: [[1.0]]}, 16)
try:
    paley_case1_split(bad, LacunarySet((1, 3)))
except HypothesisError as exc:
    print("not analytic:", exc.offending)
