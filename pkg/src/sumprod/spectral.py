"""Fourier analysis on (F_q, +) with forward normalization 1/q.

    fhat(m) = q^-1 * sum_x chi(-x m) f(x)

so that sum_m |fhat(m)|^2 = q^-1 * sum_x |f(x)|^2 and
f(x) = sum_m chi(x m) fhat(m).
"""

from __future__ import annotations

import numpy as np

from .errors import LengthMismatch
from .field import FieldSpec

_CHUNK = 1 << 22  # matrix entries per block in the naive transform


def _as_density(F: FieldSpec, f) -> np.ndarray:
    f = np.asarray(f, dtype=np.complex128)
    if f.ndim != 1 or f.shape[0] != F.q:
        raise LengthMismatch(f"expected a length-{F.q} vector, got shape {f.shape}")
    return f


def _pairing_rows(F: FieldSpec, m: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Tr(x*m) for a block of frequencies m (rows) against all x (columns)."""
    return np.asarray(F.trace(F.mul(m[:, None], x[None, :])))


def fourier_forward(F: FieldSpec, f) -> np.ndarray:
    """Naive O(q^2) transform; the reference the fast path is checked against."""
    f = _as_density(F, f)
    q = F.q
    x = F.elements()
    conj_roots = np.conj(F._roots)
    out = np.empty(q, dtype=np.complex128)
    step = max(1, _CHUNK // q)
    for start in range(0, q, step):
        m = x[start:start + step]
        out[start:start + step] = conj_roots[_pairing_rows(F, m, x)] @ f
    return out / q


def fourier_inverse(F: FieldSpec, fhat) -> np.ndarray:
    """f(x) = sum_m chi(x m) fhat(m), naive."""
    fhat = _as_density(F, fhat)
    q = F.q
    x = F.elements()
    out = np.empty(q, dtype=np.complex128)
    step = max(1, _CHUNK // q)
    for start in range(0, q, step):
        rows = x[start:start + step]
        out[start:start + step] = F._roots[_pairing_rows(F, rows, x)] @ fhat
    return out


def gram_matrix(F: FieldSpec) -> np.ndarray:
    """G[i, j] = Tr(t^i t^j), the trace form in the coefficient basis."""
    basis = np.array([F.p**i for i in range(F.l)], dtype=np.int64)
    return np.asarray(F.trace(F.mul(basis[:, None], basis[None, :])))


def frequency_permutation(F: FieldSpec) -> np.ndarray:
    """Index of G*m for every frequency m, so Tr(x m) = <x, G m> over F_p."""
    G = gram_matrix(F)
    return F.from_digits(F.digits(F.elements()) @ G.T % F.p)


def fourier_fast(F: FieldSpec, f) -> np.ndarray:
    """Same output as :func:`fourier_forward` via an l-dimensional length-p FFT."""
    f = _as_density(F, f)
    p, l = F.p, F.l
    # index = sum c_i p^i, so in C order axis 0 carries the top digit c_{l-1}
    grid = np.fft.fftn(f.reshape((p,) * l))
    flat = grid.reshape(-1)
    return flat[frequency_permutation(F)] / F.q


def orthogonality_sum(F: FieldSpec, s: int) -> complex:
    """sum_x chi(x s); equals q when s = 0 and vanishes otherwise."""
    return complex(np.sum(F.character(F.mul(F.elements(), s))))


def plancherel_defect(F: FieldSpec, f, transform=fourier_forward) -> float:
    f = _as_density(F, f)
    fhat = transform(F, f)
    spectral_side = float(np.sum(np.abs(fhat) ** 2))
    physical_side = float(np.sum(np.abs(f) ** 2)) / F.q
    return abs(spectral_side - physical_side)


def indicator(F: FieldSpec, elements) -> np.ndarray:
    out = np.zeros(F.q, dtype=np.float64)
    out[np.asarray(list(elements), dtype=np.int64)] = 1.0
    return out
