"""Dense complex matrices as stand-ins for compact operators on C^d.

Matrices are plain ``numpy`` arrays of shape ``(d, d)`` and complex dtype.
All functions are pure; inputs are never modified.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DomainError, NumericalFailure

#: singular values below RANK_RTOL * sigma_max are treated as zero
RANK_RTOL = 1e-12
PSD_TOL = 1e-10


class SvdTriple(NamedTuple):
    left: np.ndarray
    singulars: np.ndarray
    right: np.ndarray


def as_matrix(a) -> np.ndarray:
    """Coerce to a finite square complex matrix."""
    m = np.asarray(a, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix has non-finite entries")
    return m


def adjoint(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def svd(a) -> SvdTriple:
    """Full SVD ``a = left @ diag(singulars) @ adjoint(right)``."""
    m = as_matrix(a)
    try:
        u, s, vh = np.linalg.svd(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(
            f"SVD did not converge (Frobenius norm {np.linalg.norm(m):.3e})"
        ) from exc
    return SvdTriple(u, s, adjoint(vh))


def singular_values(a) -> np.ndarray:
    return np.linalg.svd(as_matrix(a), compute_uv=False)


def schatten_norm(a, p: float) -> float:
    """(sum_i sigma_i^p)^(1/p); a quasi-norm when p < 1, operator norm at p=inf."""
    if not p > 0:
        raise DomainError(f"Schatten index must be positive, got {p}")
    s = singular_values(a)
    if np.isinf(p):
        return float(s[0]) if s.size else 0.0
    if p == 1:
        return float(s.sum())
    if p == 2:
        return float(np.sqrt(np.sum(s * s)))
    return float(np.sum(s ** p) ** (1.0 / p))


def trace(a) -> complex:
    return complex(np.trace(as_matrix(a)))


def sqrt_psd(a) -> np.ndarray:
    """Principal square root of a positive semidefinite matrix.

    Eigenvalues in ``[-1e-10 * ||a||, 0)`` are clamped to zero; anything more
    negative, or a non-Hermitian input, raises :class:`DomainError`.
    """
    m = as_matrix(a)
    scale = max(np.abs(m).max(initial=0.0), 1.0)
    if np.abs(m - adjoint(m)).max(initial=0.0) > PSD_TOL * scale:
        raise DomainError("sqrt_psd: matrix is not Hermitian")
    h = 0.5 * (m + adjoint(m))
    w, v = np.linalg.eigh(h)
    norm = np.abs(w).max(initial=0.0)
    if w.size and w[0] < -PSD_TOL * max(norm, 1.0):
        raise DomainError(f"sqrt_psd: negative eigenvalue {w[0]:.3e}")
    w = np.sqrt(np.clip(w, 0.0, None))
    return (v * w) @ adjoint(v)


def factor_unit_ball(a) -> tuple[np.ndarray, np.ndarray]:
    """Split ``a = adjoint(B) @ C`` with ||B||_2^2 = ||C||_2^2 = ||a||_1.

    From ``a = U diag(s) V^*`` take ``B = diag(sqrt s) U^*`` and
    ``C = diag(sqrt s) V^*``.
    """
    u, s, v = svd(a)
    root = np.sqrt(s)[:, None]
    return root * adjoint(u), root * adjoint(v)


def hoelder_gap(a, b, p: float, q: float) -> float:
    """||a||_p ||b||_q - ||ab||_r with 1/r = 1/p + 1/q; nonnegative up to rounding."""
    if not (p > 0 and q > 0):
        raise DomainError(f"Hoelder indices must be positive, got p={p}, q={q}")
    r = 1.0 / (1.0 / p + 1.0 / q)
    a, b = as_matrix(a), as_matrix(b)
    return schatten_norm(a, p) * schatten_norm(b, q) - schatten_norm(a @ b, r)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_matrix(d: int, rng: np.random.Generator) -> np.ndarray:
    """Standard complex Gaussian entries, scaled so that ||.||_1 is of order one."""
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return z / (np.sqrt(2) * d ** 1.5)
