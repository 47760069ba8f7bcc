"""Splitting coefficient sequences by nested projections.

Given ``f = h^* g``, each target coefficient is a partial inner product
``<g, A_j h>_p`` where ``A_j`` multiplies by a character (``w_{2^j}`` or
``z^{k_j}``).  A chain of subspaces ``span{chi h b}`` that are closed under
right multiplication by matrices, with orthogonal projections
``Q_0 <= Q_1 <= ...``, splits it as

    <g, A_j h>_p = <Q_j g, A_j h>_p + <(Q_{j+1} - Q_j) g, A_j h>_p = a_j + b_j

and both halves are controlled by ``||g|| ||h|| = ||f||_{L^1(S_1)}``.

Subspaces of the form ``span{chi_n h b : n in S, b in M_d}`` are stored by a
*frame*: an orthonormal family of C^d-valued functions ``F_k`` whose
span contains every column of every ``chi_n h``.  The matrix-valued subspace
is then ``{sum_k F_k c_k^T}``, so the projection of a matrix function acts
column by column and closure under right multiplication holds exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AliasError, DomainError, HypothesisError, TruncationError
from .factorize import generic_factor
from .matrix_core import adjoint
from .opfunc import (DyadicFn, Fn, LacunarySet, TrigFn, character, fourier_coefficients,
                     l1_s1_norm, l2_s2_norm, like, modulate, partial_inner,
                     signed_frequencies, walsh_coefficients)
from .seqnorm import OpSequence, column_norm, row_norm

RANK_TOL = 1e-10
HYP_TOL = 1e-10


# -- spans ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ModuleSpan:
    """Right-multiplication-closed subspace ``span{chi_n h b}``.

    ``frame`` has shape ``(npoints, d, r)`` and satisfies
    ``mean_t frame(t)^* frame(t) = I_r``.
    """

    ambient: Fn
    frame: np.ndarray
    generators: tuple = ()

    @property
    def rank(self) -> int:
        """Complex dimension of the matrix-valued subspace."""
        return self.frame.shape[2] * self.ambient.dim

    @property
    def basis(self) -> list:
        """Orthonormal basis of matrix functions: column q of vector k is F_k."""
        n, d, r = self.frame.shape
        out = []
        for k in range(r):
            for q in range(d):
                vals = np.zeros((n, d, d), dtype=complex)
                vals[:, :, q] = self.frame[:, :, k]
                out.append(like(self.ambient, vals))
        return out


@dataclass(frozen=True, eq=False)
class PlainSpan:
    """Span of arbitrary matrix functions, with no closure guarantee.

    Only used to exhibit what goes wrong without right-multiplication closure.
    """

    ambient: Fn
    vectors: np.ndarray  # (r, npoints, d, d), orthonormal in L^2(S_2)

    @property
    def rank(self) -> int:
        return self.vectors.shape[0]

    @property
    def basis(self) -> list:
        return [like(self.ambient, v) for v in self.vectors]


def _orthonormal_columns(gen: np.ndarray, existing: np.ndarray, ref: float) -> np.ndarray:
    """Orthonormal basis for the part of span(gen) orthogonal to ``existing``."""
    if gen.shape[1] == 0 or ref == 0.0:
        return gen[:, :0]
    for _ in range(2):
        if existing.shape[1]:
            gen = gen - existing @ (adjoint(existing) @ gen)
    u, s, _ = np.linalg.svd(gen, full_matrices=False)
    return u[:, s > RANK_TOL * ref]


def empty_span(ambient: Fn) -> ModuleSpan:
    n, d = ambient.npoints, ambient.dim
    return ModuleSpan(like(ambient, np.zeros((n, d, d))), np.zeros((n, d, 0), dtype=complex))


def extend_span(span: ModuleSpan, h: Fn, characters) -> ModuleSpan:
    """Enlarge ``span`` by the generators ``chi_n h E_pq`` for n in ``characters``."""
    characters = [int(k) for k in characters]
    n, d = h.npoints, h.dim
    if characters:
        chis = np.stack([character(h, k) for k in characters])  # (c, n)
        gen = chis[:, :, None, None] * h.values[None]  # (c, n, d, d): columns are generators
        gen = np.moveaxis(gen, 0, -1).reshape(n * d, d * len(characters)) / np.sqrt(n)
        ref = float(np.sqrt(np.max(np.sum(np.abs(gen) ** 2, axis=0), initial=0.0)))
    else:
        gen = np.zeros((n * d, 0), dtype=complex)
        ref = 0.0
    old = span.frame.reshape(n * d, -1) / np.sqrt(n)
    new = _orthonormal_columns(gen, old, ref)
    frame = np.concatenate([old, new], axis=1).reshape(n, d, -1) * np.sqrt(n)
    return ModuleSpan(span.ambient, frame, span.generators + tuple(characters))


def build_module_span(h: Fn, characters, d: int | None = None) -> ModuleSpan:
    """Orthonormal frame for ``span{chi_n h b : n in characters, b in M_d}``."""
    if d is not None and d != h.dim:
        raise DomainError(f"dim {d} does not match h of dim {h.dim}")
    _check_characters(h, characters)
    return extend_span(empty_span(h), h, characters)


def build_plain_span(vectors) -> PlainSpan:
    """Orthonormalize an arbitrary list of matrix functions (no closure)."""
    vectors = list(vectors)
    if not vectors:
        raise DomainError("need at least one vector")
    amb = vectors[0]
    n = amb.npoints
    mat = np.stack([v.values.ravel() for v in vectors], axis=1) / np.sqrt(n)
    ref = float(np.linalg.norm(mat, axis=0).max())
    q = _orthonormal_columns(mat, mat[:, :0], ref)
    vecs = (q.T * np.sqrt(n)).reshape(-1, *amb.values.shape)
    return PlainSpan(like(amb, np.zeros_like(amb.values)), vecs)


def _check_characters(h: Fn, characters):
    for k in characters:
        if h.kind == "dyadic":
            if not 0 <= k < h.npoints:
                raise DomainError(f"Walsh index {k} not resolved at level {h.resolution}")
        elif abs(k) >= h.npoints:
            raise DomainError(f"frequency {k} wraps around a grid of size {h.npoints}")


def _coefficients(span: ModuleSpan, v: Fn) -> np.ndarray:
    return np.einsum("tkr,tkq->rq", np.conj(span.frame), v.values) / v.npoints


def project(span, v: Fn) -> Fn:
    """Orthogonal projection of v onto the span."""
    if v.values.shape != span.ambient.values.shape or v.kind != span.ambient.kind:
        raise DomainError("ambient mismatch between span and vector")
    if isinstance(span, PlainSpan):
        vv = span.vectors.reshape(span.rank, -1)
        coeff = np.conj(vv) @ v.values.ravel()
        return like(v, (coeff @ vv).reshape(v.values.shape))
    coeff = _coefficients(span, v)
    return like(v, np.einsum("tkr,rq->tkq", span.frame, coeff))


def residual_norm(span, v: Fn) -> float:
    """L^2(S_2) norm of v minus its projection."""
    return l2_s2_norm(like(v, v.values - project(span, v).values))


def closure_residual(span) -> float:
    """Largest residual of ``u E_pq`` off the span, over basis vectors u."""
    d = span.ambient.dim
    worst = 0.0
    for u in span.basis:
        for p in range(d):
            for q in range(d):
                vals = np.zeros_like(u.values)
                vals[:, :, q] = u.values[:, :, p]
                worst = max(worst, residual_norm(span, like(u, vals)))
    return worst


def partial_adjointness_gap(span, F: Fn, G: Fn) -> float:
    """max |<F, QG>_p - <QF, G>_p| entrywise."""
    lhs = partial_inner(F, project(span, G))
    rhs = partial_inner(project(span, F), G)
    return float(np.abs(lhs - rhs).max())


def nesting_residual(inner: ModuleSpan, outer: ModuleSpan) -> float:
    """Largest residual of a frame vector of ``inner`` off ``outer``."""
    n, d, _ = inner.frame.shape
    a = inner.frame.reshape(n * d, -1) / np.sqrt(n)
    b = outer.frame.reshape(n * d, -1) / np.sqrt(n)
    if a.shape[1] == 0:
        return 0.0
    res = a - b @ (adjoint(b) @ a)
    return float(np.linalg.norm(res, axis=0).max())


@dataclass
class ProjectionChain:
    spans: list

    def nesting_residual(self) -> float:
        return max((nesting_residual(s, t) for s, t in zip(self.spans, self.spans[1:])),
                   default=0.0)


def build_chain(h: Fn, character_sets) -> ProjectionChain:
    """Spans for nested character sets, each built by extending the previous one.

    Extension keeps the frames exactly nested regardless of near-dependence
    among generators.
    """
    spans = []
    cur = empty_span(h)
    seen: list = []
    for chars in character_sets:
        chars = list(chars)
        if not set(seen) <= set(chars):
            raise DomainError("character sets of a chain must be nested")
        _check_characters(h, chars)
        new = [k for k in chars if k not in set(seen)]
        cur = extend_span(cur, h, new)
        spans.append(cur)
        seen = chars
    return ProjectionChain(spans)


# -- splittings -------------------------------------------------------------------

@dataclass
class Splitting:
    a: OpSequence
    b: OpSequence
    target: OpSequence
    diagnostics: dict = field(default_factory=dict)
    g: Fn | None = field(default=None, repr=False)
    h: Fn | None = field(default=None, repr=False)
    chain: ProjectionChain | None = field(default=None, repr=False)

    @property
    def value(self) -> float:
        return self.diagnostics["column_norm_a"] + self.diagnostics["row_norm_b"]

    def check(self, rel: float = 1e-6) -> list:
        """Names of violated invariants (empty when all hold)."""
        dg = self.diagnostics
        bound = dg["factor_bound"] * (1 + rel)
        bad = []
        if dg["reconstruction_residual"] > 1e-8 * dg["scale"]:
            bad.append("reconstruction")
        if dg["column_norm_a"] > bound + 1e-12:
            bad.append("column_norm_a")
        if dg["row_norm_b"] > bound + 1e-12:
            bad.append("row_norm_b")
        return bad

    def to_dict(self) -> dict:
        from .serialize import sequence_to_dict

        return {
            "a": sequence_to_dict(self.a),
            "b": sequence_to_dict(self.b),
            "target": sequence_to_dict(self.target),
            "diagnostics": {k: v for k, v in self.diagnostics.items()},
            "energies": list(self.diagnostics["g_increment_energies"]),
        }


def _split(f: Fn, g: Fn, h: Fn, shifts, chain: ProjectionChain, target: np.ndarray,
           gap_spans=(), p_chain=None, p_sign=1) -> Splitting:
    """Common a_j + b_j split; ``chain.spans`` holds Q_0 .. Q_{J+1}."""
    J1 = len(shifts)
    d = f.dim
    qg = [project(s, g) for s in chain.spans]
    a = np.zeros((J1, d, d), dtype=complex)
    b = np.zeros((J1, d, d), dtype=complex)
    g_inc = []
    membership = 0.0
    for j, k in enumerate(shifts):
        ah = modulate(h, k)
        a[j] = partial_inner(qg[j], ah)
        inc = like(g, qg[j + 1].values - qg[j].values)
        g_inc.append(inc)
        b[j] = partial_inner(inc, ah)
        membership = max(membership, residual_norm(chain.spans[j + 1], ah))

    norm_g, norm_h = l2_s2_norm(g), l2_s2_norm(h)
    l1 = l1_s1_norm(f)
    seq_a, seq_b, seq_t = OpSequence(a), OpSequence(b), OpSequence(target)
    dg = {
        "l1_norm": l1,
        "norm_g": norm_g,
        "norm_h": norm_h,
        "factor_bound": norm_g * norm_h,
        "scale": 1.0 + l1,
        "column_norm_a": column_norm(seq_a),
        "row_norm_b": row_norm(seq_b),
        "reconstruction_residual": float(np.abs(a + b - target).max(initial=0.0)),
        "g_increment_energies": [l2_s2_norm(x) ** 2 for x in g_inc],
        "membership_residual": membership,
        "nesting_residual": chain.nesting_residual(),
        "gap_orthogonality": max(
            (float(np.abs(_coefficients(s, g)).max(initial=0.0)) for s in gap_spans),
            default=0.0),
    }
    dg["splitting_value"] = dg["column_norm_a"] + dg["row_norm_b"]
    dg["b_chain"] = _b_chain(g_inc, h, dg)

    if p_chain is not None:
        # a_j = <g, A_j (P_j - P_{j-1}) h>_p, with the sign flipped when the
        # P-chain decreases (Case 1)
        ph = [np.zeros_like(h.values)] + [project(s, h).values for s in p_chain]
        alt = np.zeros_like(a)
        h_energy = []
        for j, k in enumerate(shifts):
            piece = p_sign * (ph[j + 1] - ph[j])
            chi = character(h, k)[:, None, None]
            alt[j] = partial_inner(g, like(h, chi * piece))
            h_energy.append(float(np.vdot(piece, piece).real / h.npoints))
        dg["alt_a_residual"] = float(np.abs(alt - a).max(initial=0.0))
        dg["h_increment_energies"] = h_energy
    return Splitting(seq_a, seq_b, seq_t, dg, g=g, h=h, chain=chain)


def _b_chain(g_inc, h: Fn, dg: dict) -> list:
    """The estimate cascade for row_norm(b), from the measured value up to ||g|| ||h||."""
    if g_inc:
        gv = np.stack([x.values for x in g_inc])
        big_g = np.einsum("jtik,jtlk->til", gv, np.conj(gv))  # G(t) = sum_j g_j g_j^*
    else:
        big_g = np.zeros_like(h.values)
    hv = h.values
    inner = adjoint(hv) @ big_g @ hv
    w = np.linalg.eigvalsh(0.5 * (inner + adjoint(inner)))
    level1 = float(np.sqrt(np.clip(w, 0, None)).sum(axis=-1).mean())
    g_s1 = np.linalg.svd(big_g, compute_uv=False).sum(axis=-1)
    h_s2 = np.sqrt(np.sum(np.abs(hv) ** 2, axis=(1, 2)))
    level2 = float(np.mean(h_s2 * np.sqrt(g_s1)))
    level3 = dg["norm_h"] * float(np.sqrt(g_s1.mean()))
    return [dg["row_norm_b"], level1, level2, level3, dg["factor_bound"]]


# -- hypothesis validators ------------------------------------------------------------

def _offending(coeffs: np.ndarray, idx, labels, l1: float) -> list:
    tol = HYP_TOL * l1
    mags = np.abs(coeffs[idx]).reshape(len(idx), -1).max(axis=1) if len(idx) else []
    return [int(lab) for lab, m in zip(labels, mags) if m > tol]


def check_rademacher(f: DyadicFn) -> list:
    """Walsh indices, other than powers of 2, with nonzero coefficients."""
    coeffs = walsh_coefficients(f)
    idx = [n for n in range(f.npoints) if n & (n - 1) or n == 0]
    return _offending(coeffs, idx, idx, l1_s1_norm(f))


def check_gap_complement(f: TrigFn, K: LacunarySet) -> list:
    """Positive frequencies outside K (within the alias-free window) with nonzero coefficients."""
    m = f.gridsize
    freqs = signed_frequencies(m)
    idx = [i for i, n in enumerate(freqs) if 0 < n and 2 * n < m and n not in K]
    return _offending(fourier_coefficients(f), idx, freqs[idx], l1_s1_norm(f))


def check_analytic(f: TrigFn) -> list:
    """Negative frequencies (within the alias-free window) with nonzero coefficients."""
    m = f.gridsize
    freqs = signed_frequencies(m)
    idx = [i for i, n in enumerate(freqs) if n < 0 and 2 * -n < m]
    return _offending(fourier_coefficients(f), idx, freqs[idx], l1_s1_norm(f))


# -- the three constructions --------------------------------------------------------

def khintchine_split(f: DyadicFn, J: int | None = None) -> Splitting:
    """Split the Rademacher coefficients ``d_j = f^(w_{2^j})``, j = 0..J.

    Q_j projects onto ``span{w_m h b : 0 <= m < 2^{j+1}, m != 2^j}``, the image
    under multiplication by r_j of ``M_j = span{w_n h b : 0 < n < 2^{j+1}}``.
    """
    N = f.resolution
    if J is None:
        J = N - 2
    if J < 0 or N < J + 2:
        raise DomainError(f"resolution {N} is too coarse for J = {J} (need N >= J + 2)")
    bad = check_rademacher(f)
    if bad:
        raise HypothesisError(
            f"Walsh coefficients not at powers of 2 are nonzero at {bad}", bad)

    fp = generic_factor(f)
    g, h = fp.g, fp.h
    shifts = [2 ** j for j in range(J + 1)]
    q_sets = [[m for m in range(2 ** (j + 1)) if m != 2 ** j] for j in range(J + 2)]
    chain = build_chain(h, q_sets)
    # A_{j+1} M_j = span{w_n h b : 2^{j+1} < n < 2^{j+2}}
    gap_spans = [build_module_span(h, range(2 ** (j + 1) + 1, 2 ** (j + 2))) for j in range(J)]
    p_chain = build_chain(h, [range(1, 2 ** (j + 1)) for j in range(J + 1)]).spans
    target = np.stack([walsh_coefficients(f)[k] for k in shifts])
    sp = _split(f, g, h, shifts, chain, target, gap_spans, p_chain)
    sp.diagnostics["kind"] = "khintchine"
    return sp


def _check_grid(f: TrigFn, top: int):
    if not f.gridsize > 2 * top:
        raise AliasError(
            f"gridsize {f.gridsize} too small: frequencies up to {top} must stay alias-free")


def paley_case2_split(f: TrigFn, K: LacunarySet) -> Splitting:
    """Split ``f^(k_j)`` when f^ vanishes at positive integers outside K.

    Q_j projects onto ``A_j M_j = span{z^m h b : 0 <= m < k_j}``.  The chain is
    closed off with the minimal lacunary continuation ``k_{J+1} = 2 k_J + 1``.
    """
    K = K if isinstance(K, LacunarySet) else LacunarySet(tuple(K))
    ks = list(K)
    _check_grid(f, ks[-1])
    bad = check_gap_complement(f, K)
    if bad:
        raise HypothesisError(f"coefficients at positive frequencies outside K are nonzero at {bad}", bad)

    fp = generic_factor(f)
    g, h = fp.g, fp.h
    ext = ks + [2 * ks[-1] + 1]
    if ext[-1] > f.gridsize:
        raise AliasError(f"gridsize {f.gridsize} cannot hold the frequencies below {ext[-1]}")
    chain = build_chain(h, [range(0, k) for k in ext])
    gap_spans = [build_module_span(h, range(ks[j + 1] - ks[j], ks[j + 1])) for j in range(len(ks) - 1)]
    p_chain = build_chain(h, [range(-k, 0) for k in ks]).spans
    target = np.stack([_fc(f, k) for k in ks])
    sp = _split(f, g, h, ks, chain, target, gap_spans, p_chain)
    sp.diagnostics["kind"] = "paley2"
    return sp


def paley_case1_split(f: TrigFn, K: LacunarySet, tail_depth: int | None = None) -> Splitting:
    """Split ``f^(k_j)`` for f with vanishing negative coefficients.

    ``Q_0 = 0`` and ``Q_{j+1}`` projects onto
    ``S_j = span{z^m h b : -T <= m < k_{j+1} - k_j}``, a truncation at depth
    ``T = tail_depth`` of ``A_{j+1} L_j``.  The chain is closed off with
    ``k_{J+1} = 2 k_J + 1``.
    """
    K = K if isinstance(K, LacunarySet) else LacunarySet(tuple(K))
    ks = list(K)
    _check_grid(f, ks[-1])
    bad = check_analytic(f)
    if bad:
        raise HypothesisError(f"negative-frequency coefficients are nonzero at {bad}", bad)

    ext = ks + [2 * ks[-1] + 1]
    gaps = [ext[j + 1] - ext[j] for j in range(len(ks))]
    if tail_depth is None:
        bound = f.spectrum_bound if f.spectrum_bound is not None else f.gridsize // 2 - 1
        tail_depth = bound + max(gaps)
    T = int(tail_depth)
    if T < max(gaps):
        raise TruncationError(f"tail depth {T} is below the largest gap {max(gaps)}")
    if T + gaps[-1] > f.gridsize:
        raise AliasError(f"gridsize {f.gridsize} cannot hold {T + gaps[-1]} distinct frequencies")

    fp = generic_factor(f)
    g, h = fp.g, fp.h
    q_sets = [[]] + [range(-T, gap) for gap in gaps]
    chain = build_chain(h, q_sets)
    gap_spans = [build_module_span(h, range(-T, 0))]
    # P_{j-1}: A_j^{-1} S_{j-1}; P_j: A_j^{-1} span{-T <= m < 0}.  Interleave so
    # a_j = <g, A_j (P_{j-1} - P_j) h>_p reads off consecutive differences.
    p_spans = []
    for j, k in enumerate(ks):
        lower = build_module_span(h, range(-T - k, -k))
        upper = build_module_span(h, range(-T - k, gaps[j - 1] - k)) if j else lower
        p_spans.append((upper, lower))
    target = np.stack([_fc(f, k) for k in ks])
    sp = _split(f, g, h, ks, chain, target, gap_spans)
    _case1_alt(sp, g, h, ks, p_spans)
    sp.diagnostics["kind"] = "paley1"
    sp.diagnostics["tail_depth"] = T
    return sp


def _case1_alt(sp: Splitting, g: Fn, h: Fn, ks, p_spans):
    a = sp.a.items
    alt = np.zeros_like(a)
    energy = []
    for j, (k, (upper, lower)) in enumerate(zip(ks, p_spans)):
        piece = project(upper, h).values - project(lower, h).values
        chi = character(h, k)[:, None, None]
        alt[j] = partial_inner(g, like(h, chi * piece))
        energy.append(float(np.vdot(piece, piece).real / h.npoints))
    sp.diagnostics["alt_a_residual"] = float(np.abs(alt - a).max(initial=0.0))
    sp.diagnostics["h_increment_energies"] = energy


def _fc(f: TrigFn, k: int) -> np.ndarray:
    return fourier_coefficients(f)[k % f.gridsize]
