"""Generic factorization ``f = h^* g`` with balanced L^2(S_2) factors."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrix_core import adjoint
from .opfunc import Fn, like


@dataclass(frozen=True)
class FactorPair:
    g: Fn
    h: Fn


def generic_factor(f: Fn) -> FactorPair:
    """Pointwise SVD factorization.

    From ``f(t) = U diag(s) V^*`` take ``g(t) = diag(sqrt s) V^*`` and
    ``h(t) = diag(sqrt s) U^*``, so that ``h(t)^* g(t) = f(t)`` and
    ``||g(t)||_2^2 = ||h(t)||_2^2 = ||f(t)||_1`` at every point.  Consequently
    ``||g||^2 = ||h||^2 = ||f||_{L^1(S_1)}``.
    """
    u, s, vh = np.linalg.svd(f.values)
    root = np.sqrt(s)[..., :, None]
    return FactorPair(g=like(f, root * vh), h=like(f, root * adjoint(u)))
