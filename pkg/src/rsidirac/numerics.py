"""Radix-2 discrete Fourier transform and closed-form 2x2 unitary exponentials.

Transform convention
--------------------
``dft_forward`` computes ``X[n] = sum_j x[j] exp(-2*pi*i*j*n/N)`` (no
normalisation) along the last axis, and ``dft_inverse`` carries the ``1/N``.
Coefficients are stored in natural FFT order: index ``n`` holds the mode with
wavenumber ``2*pi*n/L`` for ``n < N/2`` and ``2*pi*(n-N)/L`` otherwise, see
:func:`wavenumbers`.  Plane waves ``exp(i*k*x)`` therefore land on the mode
with wavenumber ``+k``.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import ConfigurationError, DomainError

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

MIN_DFT_SIZE = 8


def is_power_of_two(n: int) -> bool:
    return isinstance(n, (int, np.integer)) and n > 0 and (n & (n - 1)) == 0


def check_dft_size(n: int) -> None:
    if not is_power_of_two(n) or n < MIN_DFT_SIZE:
        raise ConfigurationError(
            f"DFT size must be a power of two >= {MIN_DFT_SIZE}, got {n}")


@lru_cache(maxsize=32)
def _plan(n: int):
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.intp)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    twiddles = []
    half = 1
    while half < n:
        # exp(-i*pi*j/half) evaluated directly per stage; no recurrence drift
        twiddles.append(np.exp(-1j * np.pi * np.arange(half) / half))
        half *= 2
    return rev, tuple(twiddles)


def _radix2(values: np.ndarray) -> np.ndarray:
    n = values.shape[-1]
    rev, twiddles = _plan(n)
    lead = values.shape[:-1]
    x = values[..., rev]
    half = 1
    for w in twiddles:
        x = x.reshape(lead + (n // (2 * half), 2, half))
        even = x[..., 0, :]
        odd = x[..., 1, :] * w
        x = np.concatenate((even + odd, even - odd), axis=-1)
        half *= 2
    return x.reshape(lead + (n,))


def dft_forward(values, n: int | None = None) -> np.ndarray:
    """Unnormalised forward DFT along the last axis (batched over leading axes)."""
    a = np.asarray(values, dtype=complex)
    size = a.shape[-1]
    if n is not None and n != size:
        raise ConfigurationError(f"declared size {n} does not match data length {size}")
    check_dft_size(size)
    return _radix2(a)


def dft_inverse(spectrum) -> np.ndarray:
    """Inverse of :func:`dft_forward`; carries the 1/N factor."""
    s = np.asarray(spectrum, dtype=complex)
    size = s.shape[-1]
    check_dft_size(size)
    return np.conj(_radix2(np.conj(s))) / size


def mode_indices(n: int) -> np.ndarray:
    """Signed mode number for each storage index (natural FFT order)."""
    check_dft_size(n)
    idx = np.arange(n)
    return np.where(idx < n // 2, idx, idx - n)


def wavenumbers(n: int, length: float) -> np.ndarray:
    """Wavenumber table ``k = 2*pi*m/L`` in storage order."""
    if not length > 0:
        raise ConfigurationError(f"domain length must be positive, got {length}")
    return 2.0 * np.pi * mode_indices(n) / length


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def mat2_exp_unitary(hermitian, theta_scale, tol: float = 1e-12) -> np.ndarray:
    """Return ``exp(-i * H * theta_scale)`` for traceless Hermitian 2x2 ``H``.

    Uses ``H**2 = |H|**2 * I`` so the result is
    ``cos(|H| s) I - i sin(|H| s) H/|H|``.  Works on stacks of matrices with
    shape ``(..., 2, 2)``; ``theta_scale`` broadcasts against the stack.
    """
    h = np.asarray(hermitian, dtype=complex)
    if h.shape[-2:] != (2, 2):
        raise DomainError(f"expected (..., 2, 2) matrices, got shape {h.shape}")
    scale = np.maximum(1.0, np.max(np.abs(h), axis=(-2, -1)))
    if np.any(np.max(np.abs(h - dagger(h)), axis=(-2, -1)) > tol * scale):
        raise DomainError("matrix is not Hermitian")
    if np.any(np.abs(h[..., 0, 0] + h[..., 1, 1]) > tol * scale):
        raise DomainError("matrix is not traceless")

    # |H|^2 = h00^2 + |h01|^2 for a traceless Hermitian matrix
    norm = np.sqrt(h[..., 0, 0].real ** 2 + np.abs(h[..., 0, 1]) ** 2)
    s = np.asarray(theta_scale, dtype=float)
    theta = norm * s
    # sin(theta) and cos(theta) must see the same argument or unitarity degrades
    # at large theta; |H| = 0 takes the limit value s
    safe = np.where(norm > 0, norm, 1.0)
    sin_over = np.where(norm > 0, np.sin(theta) / safe, s)
    out = -1j * sin_over[..., None, None] * h
    out = out + np.cos(theta)[..., None, None] * SIGMA_0
    return out
