"""Quick randomized invariant checks, runnable without pytest."""
from __future__ import annotations

import numpy as np

from . import harness
from .construct import build_module_span, partial_adjointness_gap
from .factorize import generic_factor
from .matrix_core import hoelder_gap, random_matrix, schatten_norm
from .opfunc import (DyadicFn, TrigFn, l2_s2_inner, partial_inner, walsh_coeff, walsh_row)
from .seqnorm import OpSequence, scalar_oracle, triple_norm_solve


def _checks(rng):
    d = 3
    a, b = random_matrix(d, rng), random_matrix(d, rng)
    yield "hoelder", hoelder_gap(a, b, 2, 2) >= -1e-10

    N = 4
    rows = np.stack([walsh_row(n, N) for n in range(2 ** N)])
    yield "walsh orthonormality", np.array_equal(rows @ rows.T / 2 ** N, np.eye(2 ** N))

    f = DyadicFn.from_walsh({1: random_matrix(2, rng), 4: random_matrix(2, rng)}, 4)
    fp = generic_factor(f)
    ok = all(np.allclose(walsh_coeff(f, n),
                         partial_inner(fp.g, DyadicFn(walsh_row(n, 4)[:, None, None] * fp.h.values)),
                         atol=1e-12) for n in range(16))
    yield "walsh coefficient identity", ok

    u = TrigFn(rng.standard_normal((16, 2, 2)) + 1j * rng.standard_normal((16, 2, 2)))
    v = TrigFn(rng.standard_normal((16, 2, 2)) + 1j * rng.standard_normal((16, 2, 2)))
    yield "trace of partial inner", abs(np.trace(partial_inner(u, v)) - l2_s2_inner(u, v)) < 1e-12

    span = build_module_span(v, [0, 1, -2])
    yield "partial adjointness", partial_adjointness_gap(span, u, v) < 1e-8

    c = OpSequence(rng.standard_normal(5))
    yield "scalar splitting norm", abs(triple_norm_solve(c).value - scalar_oracle(c)) < 1e-4

    yield "trace norm of identity", abs(schatten_norm(np.eye(3), 1) - 3) < 1e-12

    for kind in harness.KINDS:
        row = harness.run_one(harness.InstanceSpec(kind=kind, dim=2, terms=3, seed=11, kmax=31))
        yield f"{kind} instance", row.status == "ok"


def run_selftest(seed: int = 0, verbose: bool = False) -> bool:
    rng = np.random.default_rng(seed)
    ok = True
    for name, passed in _checks(rng):
        ok &= bool(passed)
        if verbose:
            print(f"{'PASS' if passed else 'FAIL'}  {name}")
    return ok
