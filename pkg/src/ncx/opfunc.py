"""Operator-valued functions on the dyadic grid of [0, 1) and on the discrete circle.

A :class:`DyadicFn` is constant on the ``2**N`` half-open cells
``[k/2**N, (k+1)/2**N)``; a :class:`TrigFn` is sampled at the ``M`` points
``t_m = 2*pi*m/M - pi``.  In both cases the measure is the uniform
probability on the grid, so integrals are plain means and every identity
between coefficients and inner products holds exactly.

Values are stored as one ``(npoints, d, d)`` complex array.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import AliasError, DomainError, LacunarityError, ResolutionError
from .matrix_core import adjoint

COEFF_TOL = 1e-10


def _freeze(values) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise DomainError(f"values must have shape (npoints, d, d), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("function values are not finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DyadicFn:
    values: np.ndarray

    kind = "dyadic"

    def __post_init__(self):
        vals = _freeze(self.values)
        n = vals.shape[0]
        if n & (n - 1):
            raise DomainError(f"number of dyadic cells must be a power of 2, got {n}")
        object.__setattr__(self, "values", vals)

    @property
    def resolution(self) -> int:
        return self.npoints.bit_length() - 1

    @property
    def npoints(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def with_values(self, values) -> "DyadicFn":
        return DyadicFn(values)

    @classmethod
    def zeros(cls, resolution: int, dim: int) -> "DyadicFn":
        return cls(np.zeros((2 ** resolution, dim, dim), dtype=complex))

    @classmethod
    def from_walsh(cls, coeffs: dict, resolution: int) -> "DyadicFn":
        """Sum of ``w_n * coeffs[n]`` over the given Walsh indices."""
        dim = _coeff_dim(coeffs)
        vals = np.zeros((2 ** resolution, dim, dim), dtype=complex)
        for n, c in coeffs.items():
            vals += walsh_row(n, resolution)[:, None, None] * np.asarray(c, dtype=complex)
        return cls(vals)


@dataclass(frozen=True, eq=False)
class TrigFn:
    """Sampled trigonometric polynomial.

    ``spectrum_bound`` is the largest ``|n|`` with a possibly nonzero
    coefficient, or ``None`` for an arbitrary grid function (for instance a
    factor produced by pointwise SVD).
    """

    values: np.ndarray
    spectrum_bound: Union[int, None] = None

    kind = "trig"

    def __post_init__(self):
        vals = _freeze(self.values)
        object.__setattr__(self, "values", vals)
        bound = self.spectrum_bound
        if bound is None:
            return
        m = vals.shape[0]
        if not m > 2 * bound:
            raise AliasError(f"gridsize {m} must exceed twice the spectrum bound {bound}")
        coeffs = fourier_coefficients(self)
        freqs = signed_frequencies(m)
        outside = np.abs(freqs) > bound
        if outside.any():
            tol = COEFF_TOL * (1.0 + np.abs(vals).max(initial=0.0))
            if np.abs(coeffs[outside]).max() > tol:
                raise DomainError(f"coefficients beyond spectrum bound {bound} do not vanish")

    @property
    def gridsize(self) -> int:
        return self.values.shape[0]

    @property
    def npoints(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def with_values(self, values, spectrum_bound=None) -> "TrigFn":
        return TrigFn(values, spectrum_bound)

    @classmethod
    def zeros(cls, gridsize: int, dim: int) -> "TrigFn":
        return cls(np.zeros((gridsize, dim, dim), dtype=complex), 0)

    @classmethod
    def from_coefficients(cls, coeffs: dict, gridsize: int) -> "TrigFn":
        """Sample ``sum_n coeffs[n] e^{int}`` on the grid."""
        dim = _coeff_dim(coeffs)
        bound = max((abs(int(n)) for n in coeffs), default=0)
        if not gridsize > 2 * bound:
            raise AliasError(f"gridsize {gridsize} too small for frequency {bound}")
        t = grid_points(gridsize)
        vals = np.zeros((gridsize, dim, dim), dtype=complex)
        for n, c in coeffs.items():
            vals += np.exp(1j * n * t)[:, None, None] * np.asarray(c, dtype=complex)
        return cls(vals, bound)


Fn = Union[DyadicFn, TrigFn]


def _coeff_dim(coeffs: dict) -> int:
    if not coeffs:
        raise DomainError("at least one coefficient is needed to fix the dimension")
    return np.atleast_2d(np.asarray(next(iter(coeffs.values())))).shape[0]


@dataclass(frozen=True)
class LacunarySet:
    """Strictly increasing integers with ``k_{j+1} > 2 k_j`` and ``k_0 >= 1``."""

    elements: tuple

    def __post_init__(self):
        ks = tuple(int(k) for k in self.elements)
        if not ks:
            raise LacunarityError("a lacunary set needs at least one element")
        if ks[0] < 1:
            raise LacunarityError(f"k_0 must be at least 1, got {ks[0]}")
        bad = [j for j in range(len(ks) - 1) if not ks[j + 1] > 2 * ks[j]]
        if bad:
            j = bad[0]
            raise LacunarityError(f"k_{j + 1} = {ks[j + 1]} is not greater than 2*k_{j} = {2 * ks[j]}")
        object.__setattr__(self, "elements", ks)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, j):
        return self.elements[j]

    def __contains__(self, n):
        return n in self.elements

    @property
    def kmax(self) -> int:
        return self.elements[-1]


# -- Walsh side ---------------------------------------------------------------

def rademacher_value(j: int, cell: int, N: int) -> int:
    """Value of r_j on cell ``cell`` of the level-N dyadic grid."""
    if not 0 <= j < N:
        raise ResolutionError(f"r_{j} is not constant on cells of level {N}")
    if not 0 <= cell < 2 ** N:
        raise ResolutionError(f"cell {cell} out of range for level {N}")
    return -1 if (cell >> (N - 1 - j)) & 1 else 1


def _walsh_mask(n: int, N: int) -> int:
    if not 0 <= n < 2 ** N:
        raise ResolutionError(f"w_{n} is not resolved at level {N}")
    mask = 0
    j = 0
    while n:
        if n & 1:
            mask |= 1 << (N - 1 - j)
        n >>= 1
        j += 1
    return mask


def walsh_value(n: int, cell: int, N: int) -> int:
    """Value of the Paley-ordered Walsh function w_n on a level-N cell."""
    mask = _walsh_mask(n, N)
    if not 0 <= cell < 2 ** N:
        raise ResolutionError(f"cell {cell} out of range for level {N}")
    return -1 if bin(cell & mask).count("1") & 1 else 1


def walsh_row(n: int, N: int) -> np.ndarray:
    """w_n on all ``2**N`` cells, as a float array of +-1."""
    mask = _walsh_mask(n, N)
    cells = np.arange(2 ** N)
    parity = np.zeros(2 ** N, dtype=np.int64)
    m = cells & mask
    while m.any():
        parity ^= m & 1
        m = m >> 1
    return 1.0 - 2.0 * parity


def walsh_index_product(m: int, n: int) -> int:
    """Index of w_m * w_n in the Paley enumeration."""
    return m ^ n


def walsh_coeff(f: DyadicFn, n: int) -> np.ndarray:
    return np.tensordot(walsh_row(n, f.resolution), f.values, axes=(0, 0)) / f.npoints


def walsh_coefficients(f: DyadicFn) -> np.ndarray:
    """All Walsh coefficients, shape ``(2**N, d, d)``, by a fast Walsh-Hadamard transform."""
    N = f.resolution
    out = f.values.copy()
    # natural (Hadamard) order: index bit b <-> cell bit b
    h = 1
    while h < f.npoints:
        out = out.reshape(-1, 2, h, f.dim, f.dim)
        a, b = out[:, 0].copy(), out[:, 1].copy()
        out[:, 0], out[:, 1] = a + b, a - b
        out = out.reshape(f.npoints, f.dim, f.dim)
        h *= 2
    out /= f.npoints
    # Paley index n has bit j where the Hadamard index has bit N-1-j
    idx = np.array([_walsh_mask(n, N) for n in range(f.npoints)], dtype=np.int64)
    return out[idx]


# -- circle side --------------------------------------------------------------

def grid_points(gridsize: int) -> np.ndarray:
    return 2 * np.pi * np.arange(gridsize) / gridsize - np.pi


def signed_frequencies(gridsize: int) -> np.ndarray:
    """Representative n in ``(-M/2, M/2]`` of each residue class mod M."""
    n = np.arange(gridsize)
    return np.where(n > gridsize // 2, n - gridsize, n)


def fourier_coefficients(f: TrigFn) -> np.ndarray:
    """Coefficient array indexed by ``n mod M``."""
    m = f.gridsize
    sign = np.where(np.arange(m) % 2, -1.0, 1.0)
    if m % 2:
        # (-1)^n must follow the signed representative, not the residue
        sign = np.where(signed_frequencies(m) % 2, -1.0, 1.0)
    return np.fft.fft(f.values, axis=0) * sign[:, None, None] / m


def fourier_coeff(f: TrigFn, n: int) -> np.ndarray:
    if not 2 * abs(n) < f.gridsize:
        raise AliasError(f"frequency {n} is aliased on a grid of size {f.gridsize}")
    t = grid_points(f.gridsize)
    return np.tensordot(np.exp(-1j * n * t), f.values, axes=(0, 0)) / f.gridsize


# -- norms, inner products, products -------------------------------------------

def _check_pair(u: Fn, v: Fn):
    if u.kind != v.kind or u.values.shape != v.values.shape:
        raise DomainError(
            f"shape mismatch: {u.kind}{u.values.shape} vs {v.kind}{v.values.shape}"
        )


def l1_s1_norm(f: Fn) -> float:
    """Mean over the grid of the trace norm of f(t)."""
    return float(np.linalg.svd(f.values, compute_uv=False).sum(axis=-1).mean())


def l2_s2_inner(u: Fn, v: Fn) -> complex:
    _check_pair(u, v)
    return complex(np.vdot(v.values, u.values) / u.npoints)


def l2_s2_norm(f: Fn) -> float:
    return float(np.sqrt(np.vdot(f.values, f.values).real / f.npoints))


def partial_inner(u: Fn, v: Fn) -> np.ndarray:
    """Operator-valued mean of ``adjoint(v(t)) @ u(t)``."""
    _check_pair(u, v)
    return np.einsum("tki,tkj->ij", np.conj(v.values), u.values) / u.npoints


def character(f: Fn, k: int) -> np.ndarray:
    """Grid values of the scalar character w_k (dyadic) or z^k (trig)."""
    if f.kind == "dyadic":
        return walsh_row(k, f.resolution)
    return np.exp(1j * k * grid_points(f.gridsize))


def modulate(f: Fn, k: int) -> Fn:
    """Multiply f pointwise by w_k (dyadic) or z^k (trig)."""
    chi = character(f, k)[:, None, None]
    if f.kind == "dyadic":
        return DyadicFn(chi * f.values)
    bound = None
    if f.spectrum_bound is not None:
        bound = f.spectrum_bound + abs(k)
        if not f.gridsize > 2 * bound:
            raise AliasError(
                f"modulating by z^{k} pushes the spectrum past the grid of size {f.gridsize}"
            )
    return TrigFn(chi * f.values, bound)


def pointwise_product(u: Fn, v: Fn, mode: str = "adjoint-left") -> Fn:
    """Pointwise ``u(t)^* v(t)`` (``adjoint-left``) or ``u(t) v(t)`` (``plain``)."""
    _check_pair(u, v)
    if mode == "adjoint-left":
        vals = adjoint(u.values) @ v.values
    elif mode == "plain":
        vals = u.values @ v.values
    else:
        raise DomainError(f"unknown product mode {mode!r}")
    if u.kind == "dyadic":
        return DyadicFn(vals)
    bound = None
    if u.spectrum_bound is not None and v.spectrum_bound is not None:
        bound = u.spectrum_bound + v.spectrum_bound
        if not u.gridsize > 2 * bound:
            bound = None
    return TrigFn(vals, bound)


def right_multiply(f: Fn, b) -> Fn:
    """Pointwise ``f(t) @ b`` for a constant matrix b."""
    vals = f.values @ np.asarray(b, dtype=complex)
    if f.kind == "dyadic":
        return DyadicFn(vals)
    return TrigFn(vals, f.spectrum_bound)


def add(u: Fn, v: Fn, alpha: complex = 1.0) -> Fn:
    """``u + alpha * v``."""
    _check_pair(u, v)
    vals = u.values + alpha * v.values
    if u.kind == "dyadic":
        return DyadicFn(vals)
    bound = None
    if u.spectrum_bound is not None and v.spectrum_bound is not None:
        bound = max(u.spectrum_bound, v.spectrum_bound)
    return TrigFn(vals, bound)


def like(f: Fn, values) -> Fn:
    """A function on the same grid as f with new (unconstrained) values."""
    if f.kind == "dyadic":
        return DyadicFn(values)
    return TrigFn(values, None)
