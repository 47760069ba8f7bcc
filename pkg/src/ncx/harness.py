"""Random instances, batch verification runs and report rows."""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .construct import khintchine_split, paley_case1_split, paley_case2_split
from .errors import DomainError, HypothesisError, NcxError
from .matrix_core import random_matrix
from .opfunc import DyadicFn, LacunarySet, TrigFn
from .seqnorm import triple_norm_solve

log = logging.getLogger(__name__)

KINDS = ("khintchine", "paley1", "paley2", "steinhaus")

CSV_COLUMNS = (
    "id", "kind", "status", "dim", "terms", "l1_norm", "construction_value",
    "solver_value", "dual_lower", "ratio_construction", "ratio_solver",
    "reconstruction_residual", "error",
)

REL = 1e-6


@dataclass
class InstanceSpec:
    kind: str
    dim: int = 2
    terms: int = 3
    seed: int = 0
    k0: int = 1
    kmax: int = 63
    kset: Optional[tuple] = None
    resolution: Optional[int] = None
    gridsize: Optional[int] = None
    n_max: Optional[int] = None
    n_neg: Optional[int] = None

    def validate(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if not 1 <= self.dim <= 16:
            raise DomainError(f"dim must be in 1..16, got {self.dim}")
        if self.terms < 1:
            raise DomainError("need at least one term")
        if self.kind == "khintchine":
            n = self.resolution or self.terms + 1
            if n < self.terms + 1:
                raise DomainError(f"resolution {n} too coarse for {self.terms} terms")
            if 2 ** n * self.dim ** 2 > 2 ** 16:
                raise DomainError("2^N d^2 exceeds 2^16")
        elif self.k0 < 1:
            raise DomainError("k0 must be at least 1")


def gen_lacunary(seed, J: int, k0: int = 1, kmax: Optional[int] = None,
                 jitter: bool = True) -> LacunarySet:
    """``k_0 = k0`` and ``k_{j+1} = 2 k_j + 1 + u_j`` with ``u_j`` uniform on ``[0, k_j]``.

    With ``jitter=False`` the growth is the minimal ``2k + 1``.  When ``kmax``
    is given the jitter is capped so that all ``J + 1`` elements fit.
    """
    if k0 < 1:
        raise DomainError(f"k0 must be at least 1, got {k0}")
    rng = np.random.default_rng(seed)
    ks = [int(k0)]
    for j in range(J):
        k = ks[-1]
        hi = k
        if kmax is not None:
            remaining = J - j - 1
            cap = (kmax + 1) // 2 ** remaining - 1 - (2 * k + 1)
            if cap < 0:
                raise DomainError(f"cannot fit {J + 1} lacunary elements from {k0} below {kmax}")
            hi = min(hi, cap)
        u = int(rng.integers(0, hi + 1)) if jitter else 0
        ks.append(2 * k + 1 + u)
    return LacunarySet(tuple(ks))


def _derived_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([int(seed), int(index)]).generate_state(1)[0])


def gen_instance(spec: InstanceSpec):
    """Random function satisfying the hypothesis that matches ``spec.kind``."""
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    d = spec.dim
    meta = {"kind": spec.kind, "dim": d, "seed": spec.seed, "terms": spec.terms}
    if spec.kind == "khintchine":
        N = spec.resolution or spec.terms + 1
        coeffs = {2 ** j: random_matrix(d, rng) for j in range(spec.terms)}
        meta.update(J=spec.terms - 1, resolution=N)
        return DyadicFn.from_walsh(coeffs, N), meta

    if spec.kset is not None:
        K = LacunarySet(tuple(spec.kset))
    else:
        k_seed = int(rng.integers(2 ** 32))
        K = gen_lacunary(k_seed, spec.terms - 1, spec.k0, spec.kmax)
    ks = list(K)
    if spec.kind == "paley1":
        top = spec.n_max if spec.n_max is not None else ks[-1]
        support = list(range(0, top + 1))
    elif spec.kind == "paley2":
        neg = spec.n_neg if spec.n_neg is not None else ks[0] + 2
        support = list(range(-neg, 0)) + ks
    else:
        support = ks
    bound = max(abs(n) for n in support)
    M = spec.gridsize or 4 * (ks[-1] + bound + 1)
    if M * d * d > 2 ** 18:
        raise DomainError("M d^2 exceeds 2^18")
    coeffs = {n: random_matrix(d, rng) for n in support}
    meta.update(K=ks, gridsize=M, spectrum_bound=bound)
    return TrigFn.from_coefficients(coeffs, M), meta


def split_instance(f, meta: dict):
    kind = meta["kind"]
    if kind == "khintchine":
        return khintchine_split(f, meta["J"])
    K = LacunarySet(tuple(meta["K"]))
    if kind == "paley1":
        return paley_case1_split(f, K)
    return paley_case2_split(f, K)


@dataclass
class ReportRow:
    id: str
    kind: str
    dim: int
    terms: int
    status: str = "ok"
    l1_norm: float = float("nan")
    construction_value: float = float("nan")
    solver_value: float = float("nan")
    dual_lower: float = float("nan")
    ratio_construction: float = float("nan")
    ratio_solver: float = float("nan")
    residuals: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    error: str = ""

    def to_dict(self) -> dict:
        return asdict(self)

    def csv_record(self) -> list:
        rec = self.to_dict()
        rec["reconstruction_residual"] = self.residuals.get("reconstruction_residual", "")
        return [rec[c] for c in CSV_COLUMNS]


def row_violations(row: ReportRow, splitting=None) -> list:
    bad = list(splitting.check(REL)) if splitting is not None else []
    if not row.dual_lower <= row.solver_value + 1e-9 * (1 + row.solver_value):
        bad.append("dual_lower<=solver_value")
    if not row.solver_value <= row.construction_value + 1e-6:
        bad.append("solver_value<=construction_value")
    if not row.ratio_construction <= 2 * (1 + REL):
        bad.append("ratio_construction<=2")
    return bad


def run_one(spec: InstanceSpec, index: int = 0, solver_opts: Optional[dict] = None) -> ReportRow:
    row = ReportRow(id=f"{spec.kind}-{spec.seed}-{index}", kind=spec.kind,
                    dim=spec.dim, terms=spec.terms)
    try:
        f, meta = gen_instance(spec)
        sp = split_instance(f, meta)
    except HypothesisError as exc:
        row.status, row.error = "failed", str(exc)
        return row
    except NcxError as exc:
        row.status, row.error = "error", str(exc)
        return row
    dg = sp.diagnostics
    cert = triple_norm_solve(sp.target, starts=[sp.a], **(solver_opts or {}))
    l1 = dg["l1_norm"]
    row.l1_norm = l1
    row.construction_value = dg["splitting_value"]
    row.solver_value = cert.value
    row.dual_lower = cert.dual_lower
    row.ratio_construction = row.construction_value / l1 if l1 > 0 else 0.0
    row.ratio_solver = cert.value / l1 if l1 > 0 else 0.0
    row.residuals = {
        "reconstruction_residual": dg["reconstruction_residual"],
        "membership_residual": dg["membership_residual"],
        "nesting_residual": dg["nesting_residual"],
        "gap_orthogonality": dg["gap_orthogonality"],
        "alt_a_residual": dg.get("alt_a_residual", 0.0),
        "column_norm_a": dg["column_norm_a"],
        "row_norm_b": dg["row_norm_b"],
        "factor_bound": dg["factor_bound"],
    }
    row.violations = row_violations(row, sp)
    if row.violations:
        row.status = "violated"
    return row


def _run_star(args):
    return run_one(*args)


def run_experiment(specs, solver_opts: Optional[dict] = None, workers: int = 1) -> list:
    """One ReportRow per spec, in spec order."""
    jobs = [(s, i, solver_opts) for i, s in enumerate(specs)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            return list(ex.map(_run_star, jobs))
    return [_run_star(j) for j in jobs]


def summarize(rows) -> dict:
    """Max ratios and status counts per kind."""
    out: dict = {}
    for r in rows:
        s = out.setdefault(r.kind, {"rows": 0, "ok": 0, "failed": 0, "violated": 0, "error": 0,
                                    "max_ratio_construction": 0.0, "max_ratio_solver": 0.0})
        s["rows"] += 1
        s[r.status] += 1
        if r.status in ("ok", "violated"):
            s["max_ratio_construction"] = max(s["max_ratio_construction"], r.ratio_construction)
            s["max_ratio_solver"] = max(s["max_ratio_solver"], r.ratio_solver)
    return out


def batch_specs(kind: str, count: int, seed: int, **kw) -> list:
    return [InstanceSpec(kind=kind, seed=_derived_seed(seed, i), **kw) for i in range(count)]
