"""Exit criteria for the package, one test per criterion.

Each test prints a single PASS/FAIL line.  Run with
``pytest tests/test_acceptance.py -s`` to see them, or directly with
``python tests/test_acceptance.py``.
"""
import subprocess
import sys
import time

import numpy as np
import pytest

from ncx import harness
from ncx.construct import build_module_span, build_plain_span, partial_adjointness_gap
from ncx.matrix_core import hoelder_gap, schatten_norm
from ncx.opfunc import (DyadicFn, TrigFn, fourier_coeff, l2_s2_inner, l2_s2_norm, like,
                        walsh_row)
from ncx.seqnorm import (OpSequence, column_norm, row_norm, scalar_oracle, triple_norm_solve)

REL = 1e-6


def report(number, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    sys.__stdout__.write(line + "\n")
    sys.__stdout__.flush()
    return ok


def _check_split(sp):
    dg = sp.diagnostics
    bound = dg["factor_bound"] * (1 + REL)
    return (dg["reconstruction_residual"] <= 1e-8 * dg["scale"]
            and dg["column_norm_a"] <= bound
            and dg["row_norm_b"] <= bound
            and dg["splitting_value"] <= 2 * dg["l1_norm"] * (1 + REL))


def _run_family(specs):
    worst, failures = 0.0, []
    for spec in specs:
        f, meta = harness.gen_instance(spec)
        sp = harness.split_instance(f, meta)
        worst = max(worst, sp.diagnostics["splitting_value"] / sp.diagnostics["l1_norm"])
        if not _check_split(sp):
            failures.append((spec, sp.diagnostics))
    return worst, failures


def test_criterion_1_khintchine():
    rng = np.random.default_rng(1)
    specs = [harness.InstanceSpec("khintchine", dim=int(rng.integers(1, 5)),
                                  terms=int(rng.integers(1, 6)) + 1, seed=i)
             for i in range(100)]
    t0 = time.perf_counter()
    worst, failures = _run_family(specs)
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed <= 60
    report(1, ok, f"Khintchine 100 instances, max ratio {worst:.4f} <= 2, {elapsed:.1f}s <= 60s")
    assert ok, failures[:3]


def _paley_specs(kind, rng, count):
    specs = []
    for i in range(count):
        specs.append(harness.InstanceSpec(kind, dim=int(rng.integers(1, 4)),
                                          terms=int(rng.integers(1, 5)),
                                          k0=int(rng.integers(1, 4)), kmax=63, seed=i))
    return specs


def test_criterion_2_paley_cases():
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    w1, f1 = _run_family(_paley_specs("paley1", rng, 50))
    w2, f2 = _run_family(_paley_specs("paley2", rng, 50))
    elapsed = time.perf_counter() - t0
    ok = not f1 and not f2 and elapsed <= 120
    report(2, ok, f"Paley case 1 max ratio {w1:.4f}, case 2 max ratio {w2:.4f} (50 each), "
                  f"{elapsed:.1f}s <= 120s")
    assert ok, (f1[:2], f2[:2])


def test_criterion_3_lacunary_support():
    rng = np.random.default_rng(3)
    worst, failures = _run_family(_paley_specs("steinhaus", rng, 50))
    ok = not failures
    report(3, ok, f"K-supported instances through the case-2 construction, max ratio {worst:.4f}")
    assert ok


def test_criterion_4_scalar_touchstone():
    f = DyadicFn.from_walsh({1: [[1.0]], 2: [[1.0]]}, 3)
    sp = harness.split_instance(f, {"kind": "khintchine", "J": 1})
    l1 = sp.diagnostics["l1_norm"]
    solved = triple_norm_solve(sp.target).value / l1
    oracle = scalar_oracle(sp.target) / l1
    ok = abs(solved - np.sqrt(2)) <= 1e-6 and abs(oracle - np.sqrt(2)) <= 1e-12
    report(4, ok, f"r_0 + r_1: solver ratio {solved:.9f}, oracle {oracle:.9f}, sqrt2 = {np.sqrt(2):.9f}")
    assert ok


def test_criterion_5_solver_validity():
    rng = np.random.default_rng(5)
    worst_scalar = 0.0
    for _ in range(50):
        L = int(rng.integers(1, 9))
        c = OpSequence(rng.standard_normal(L) + 1j * rng.standard_normal(L))
        oracle = scalar_oracle(c)
        worst_scalar = max(worst_scalar, abs(triple_norm_solve(c).value - oracle) / (1 + oracle))
    sandwich_ok, worst_gap = True, 0.0
    for _ in range(50):
        d, L = int(rng.integers(1, 4)), int(rng.integers(1, 5))
        c = OpSequence(rng.standard_normal((L, d, d)) + 1j * rng.standard_normal((L, d, d)))
        cert = triple_norm_solve(c)
        sandwich_ok &= cert.dual_lower <= cert.value <= min(column_norm(c), row_norm(c)) + 1e-9
        worst_gap = max(worst_gap, (cert.value - cert.dual_lower) / cert.value)
    ok = worst_scalar <= 1e-4 and sandwich_ok and worst_gap <= 1e-2
    report(5, ok, f"scalar rel err {worst_scalar:.2e} <= 1e-4, sandwich {sandwich_ok}, "
                  f"rel duality gap {worst_gap:.2e} <= 1e-2")
    assert ok


def _unit(f):
    return like(f, f.values / l2_s2_norm(f))


def test_criterion_6_structural_checks():
    rng = np.random.default_rng(6)

    def cg(*shape):
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

    # partial adjointness for right-multiplication-closed spans
    worst_closed = 0.0
    for i in range(100):
        d = int(rng.integers(1, 4))
        if i % 2:
            mk = lambda: DyadicFn(cg(16, d, d))
            chars = rng.choice(16, size=int(rng.integers(1, 8)), replace=False)
        else:
            mk = lambda: TrigFn(cg(17, d, d))
            chars = rng.choice(np.arange(-8, 9), size=int(rng.integers(1, 8)), replace=False)
        span = build_module_span(mk(), chars)
        worst_closed = max(worst_closed, partial_adjointness_gap(span, _unit(mk()), _unit(mk())))
    # and its failure without closure
    M, d = 16, 2
    h = TrigFn(np.stack([np.diag(cg(d)) for _ in range(M)]))
    plain = build_plain_span([h])
    worst_open = max(partial_adjointness_gap(plain, _unit(TrigFn(cg(M, d, d))),
                                             _unit(TrigFn(cg(M, d, d)))) for _ in range(20))
    # Hoelder
    worst_hoelder = np.inf
    for i in range(1000):
        p, q = [(2, 2), (2, 1), (4, 4 / 3)][i % 3]
        dd = int(rng.integers(1, 5))
        a, b = cg(dd, dd), cg(dd, dd)
        scale = 1 + schatten_norm(a, p) * schatten_norm(b, q)
        worst_hoelder = min(worst_hoelder, hoelder_gap(a, b, p, q) / scale)
    # Parseval
    worst_parseval = 0.0
    for _ in range(20):
        B = int(rng.integers(1, 6))
        u = TrigFn.from_coefficients({n: cg(2, 2) for n in range(-B, B + 1)}, 2 * B + 5)
        v = TrigFn.from_coefficients({n: cg(2, 2) for n in range(-B, B + 1)}, 2 * B + 5)
        rhs = sum(np.trace(fourier_coeff(v, n).conj().T @ fourier_coeff(u, n))
                  for n in range(-B, B + 1))
        worst_parseval = max(worst_parseval, abs(l2_s2_inner(u, v) - rhs))
    # Walsh orthonormality, exact
    walsh_exact = all(
        np.array_equal(np.stack([walsh_row(n, N) for n in range(2 ** N)]) @
                       np.stack([walsh_row(n, N) for n in range(2 ** N)]).T / 2 ** N,
                       np.eye(2 ** N))
        for N in range(1, 7))
    ok = (worst_closed <= 1e-8 and worst_open > 1e-3 and worst_hoelder >= -1e-10
          and worst_parseval <= 1e-8 and walsh_exact)
    report(6, ok, f"closed gap {worst_closed:.1e} <= 1e-8, open gap {worst_open:.2f} > 1e-3, "
                  f"Hoelder min {worst_hoelder:.1e}, Parseval {worst_parseval:.1e}, "
                  f"Walsh exact {walsh_exact}")
    assert ok


def test_criterion_7_determinism(tmp_path):
    outs = []
    for name in ("first.json", "second.json"):
        path = tmp_path / name
        cmd = [sys.executable, "-m", "ncx", "verify", "paley2", "--dim", "2", "--terms", "3",
               "--count", "5", "--seed", "17", "--out", str(path)]
        proc = subprocess.run(cmd, capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        outs.append(path.read_bytes())
    ok = outs[0] == outs[1]
    report(7, ok, "two `verify` runs with the same seed write identical files")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
