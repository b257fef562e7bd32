"""Discrete Fourier transforms.

Two conventions are exposed:

* :func:`dft` is unnormalised, ``out[m] = sum_k v[k] * exp(sign * 2j*pi*m*k/n)``.
  With ``sign=-1`` this is the eigenvalue formula of a circulant matrix.
* :func:`unitary_dft` / :func:`unitary_idft` apply the Fourier matrix
  ``F[j, k] = exp(-2j*pi*j*k/n) / sqrt(n)`` and its adjoint.

Powers of two go through an iterative radix-2 Cooley-Tukey kernel.  Any other
length is mapped onto a power-of-two circular convolution with Bluestein's
chirp-z identity.  Plans (bit-reversal permutation, twiddles, chirps) are built
once per ``(n, sign)`` and cached read-only, so all functions here are safe to
call from several threads.
"""
from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple

import numpy as np

__all__ = [
    "dft",
    "unitary_dft",
    "unitary_idft",
    "is_power_of_two",
    "next_power_of_two",
    "as_complex_vector",
]


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def next_power_of_two(n: int) -> int:
    return 1 if n <= 1 else 1 << (n - 1).bit_length()


def as_complex_vector(v, name: str = "v") -> np.ndarray:
    """Validate ``v`` as a finite, non-empty 1-D vector and return a complex copy."""
    arr = np.array(v, dtype=complex)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class _Radix2Plan(NamedTuple):
    perm: np.ndarray
    twiddles: np.ndarray  # exp(sign*2j*pi*k/n), k < n/2


class _BluesteinPlan(NamedTuple):
    m: int
    chirp: np.ndarray  # exp(sign*1j*pi*k^2/n), k < n
    kernel_hat: np.ndarray  # forward transform of the conjugate chirp, length m


@lru_cache(maxsize=64)
def _radix2_plan(n: int, sign: int) -> _Radix2Plan:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    perm = np.zeros(n, dtype=np.intp)
    for b in range(bits):
        perm |= ((idx >> b) & 1) << (bits - 1 - b)
    # exact angles for every twiddle; no recurrences
    k = np.arange(n // 2)
    angle = sign * 2.0 * np.pi * k / n
    tw = np.cos(angle) + 1j * np.sin(angle)
    return _Radix2Plan(_readonly(perm), _readonly(tw))


def _radix2(x: np.ndarray, sign: int) -> np.ndarray:
    n = x.shape[-1]
    if n == 1:
        return x.copy()
    plan = _radix2_plan(n, sign)
    y = x[..., plan.perm]
    lead = y.shape[:-1]
    size = 2
    while size <= n:
        half = size // 2
        w = plan.twiddles[:: n // size]
        blocks = y.reshape(*lead, n // size, size)
        even = blocks[..., :half]
        odd = blocks[..., half:] * w
        y = np.concatenate((even + odd, even - odd), axis=-1).reshape(*lead, n)
        size *= 2
    return y


@lru_cache(maxsize=64)
def _bluestein_plan(n: int, sign: int) -> _BluesteinPlan:
    m = next_power_of_two(2 * n - 1)
    k = np.arange(n, dtype=np.int64)
    # k^2 mod 2n keeps the chirp angle small and exact for large n
    angle = sign * np.pi * ((k * k) % (2 * n)) / n
    chirp = np.cos(angle) + 1j * np.sin(angle)
    kernel = np.zeros(m, dtype=complex)
    kernel[:n] = np.conj(chirp)
    kernel[m - n + 1:] = np.conj(chirp[1:][::-1])
    return _BluesteinPlan(m, _readonly(chirp), _readonly(_radix2(kernel, -1)))


def _bluestein(x: np.ndarray, sign: int) -> np.ndarray:
    n = x.shape[-1]
    plan = _bluestein_plan(n, sign)
    a = np.zeros(x.shape[:-1] + (plan.m,), dtype=complex)
    a[..., :n] = x * plan.chirp
    conv = _radix2(_radix2(a, -1) * plan.kernel_hat, +1) / plan.m
    return conv[..., :n] * plan.chirp


def _transform(x: np.ndarray, sign: int) -> np.ndarray:
    if is_power_of_two(x.shape[-1]):
        return _radix2(x, sign)
    return _bluestein(x, sign)


def dft(v, sign: int = -1) -> np.ndarray:
    """Unnormalised DFT along the last axis.

    Parameters
    ----------
    v : array_like
        Input vector (or stack of vectors along leading axes).
    sign : {-1, +1}
        Sign of the exponent.

    Returns
    -------
    ndarray of complex
        ``out[m] = sum_k v[k] exp(sign * 2 pi i m k / n)``.
    """
    if sign not in (-1, 1):
        raise ValueError("sign must be +1 or -1")
    x = np.asarray(v, dtype=complex)
    if x.ndim == 0 or x.shape[-1] == 0:
        raise ValueError("dft needs a non-empty vector")
    if not np.all(np.isfinite(x)):
        raise ValueError("dft input has non-finite entries")
    return _transform(x, sign)


def unitary_dft(v) -> np.ndarray:
    """Apply the unitary Fourier matrix: ``F v`` with the ``1/sqrt(n)`` factor."""
    x = as_complex_vector(v)
    return _transform(x, -1) / np.sqrt(x.size)


def unitary_idft(v) -> np.ndarray:
    """Apply the adjoint Fourier matrix ``F^dagger v``."""
    x = as_complex_vector(v)
    return _transform(x, +1) / np.sqrt(x.size)
