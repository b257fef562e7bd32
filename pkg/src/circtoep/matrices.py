"""Toeplitz and circulant matrices held in structured form.

Conventions
-----------
* A :class:`ToeplitzMatrix` of order n stores its diagonals
  ``t_{-(n-1)}, ..., t_{n-1}``; element ``(k, j)`` is ``t_{k-j}``.
* A :class:`CirculantMatrix` stores its top row ``c_0, ..., c_{n-1}``; row i
  is the right cyclic shift of row i-1, so element ``(k, j)`` is
  ``c_{(j-k) mod n}``.  Its eigenvalues are
  ``psi_m = sum_k c_k exp(-2 pi i m k / n)``.

With that layout ``C F = F diag(psi)`` for the unitary Fourier matrix F, so
``C^{-1} = F diag(1/psi) F^dagger``.  For an even top row (every real
symmetric symbol) ``psi`` is even as well and the factorisation coincides with
``F^dagger diag(psi) F``.
"""
from __future__ import annotations

import warnings
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .dft import as_complex_vector, dft, next_power_of_two
from .errors import (
    CapExceededError,
    ConvergenceError,
    DimensionMismatchError,
    DomainError,
    SingularMatrixError,
)
from .symbols import GeneratingFunction, sample_grid

__all__ = [
    "ToeplitzMatrix",
    "CirculantMatrix",
    "toeplitz_from_symbol",
    "associated_circulant",
    "circulant_from_sequence",
    "circulant_solve",
    "circulant_multiply",
    "circulant_add",
    "toeplitz_matvec",
    "toeplitz_solve_dense",
    "frobenius_distance",
    "FrobeniusDistance",
    "condition_number",
    "ConditionNumber",
    "DENSE_CAP",
    "DENSE_EIG_CAP",
]

DENSE_CAP = 4096
DENSE_EIG_CAP = 1024
SINGULAR_RTOL = 1e-14


class ToeplitzMatrix:
    """Hermitian Toeplitz matrix given by its diagonal sequence.

    Parameters
    ----------
    diagonals : array_like, length 2n-1
        ``t_{-(n-1)}, ..., t_0, ..., t_{n-1}``.
    symbol : GeneratingFunction, optional
        Back-reference to the symbol the matrix was generated from.
    """

    def __init__(self, diagonals, symbol: GeneratingFunction | None = None):
        d = as_complex_vector(diagonals, "diagonals")
        if d.size % 2 != 1:
            raise DimensionMismatchError("diagonal sequence must have odd length 2n-1")
        n = d.size // 2 + 1
        col = d[n - 1:]
        row = d[n - 1::-1]
        scale = max(float(np.max(np.abs(d))), 1.0)
        if np.max(np.abs(row - np.conj(col))) > 1e-12 * scale:
            raise DomainError("Toeplitz matrix must be Hermitian: t_-k = conj(t_k)")
        if abs(col[0].imag) > 1e-12 * scale:
            raise DomainError("main diagonal of a Hermitian matrix must be real")
        self.n = n
        self.symbol = symbol
        self._col = col
        self._col.setflags(write=False)

    @classmethod
    def from_column(cls, column, symbol=None):
        """Hermitian Toeplitz from its first column ``t_0, ..., t_{n-1}``."""
        col = as_complex_vector(column, "column")
        return cls(np.concatenate([np.conj(col[:0:-1]), col]), symbol=symbol)

    @property
    def column(self) -> np.ndarray:
        """``t_0, t_1, ..., t_{n-1}``."""
        return self._col

    @property
    def diagonals(self) -> np.ndarray:
        return np.concatenate([np.conj(self._col[:0:-1]), self._col])

    @property
    def is_real(self) -> bool:
        return not np.any(self._col.imag)

    def t(self, k: int) -> complex:
        return self._col[k] if k >= 0 else np.conj(self._col[-k])

    def dense(self) -> np.ndarray:
        col = self._col.real if self.is_real else self._col
        return scipy.linalg.toeplitz(col, np.conj(col))

    @property
    def frobenius_norm(self) -> float:
        n = self.n
        w = n - np.arange(n)
        a2 = np.abs(self._col) ** 2
        return float(np.sqrt(a2[0] * n + 2.0 * np.sum(w[1:] * a2[1:])))

    def __repr__(self):
        return f"ToeplitzMatrix(n={self.n}, symbol={getattr(self.symbol, 'spec', None)})"


class CirculantMatrix:
    """Circulant matrix given by its top row; eigenvalues are cached on construction."""

    def __init__(self, top_row):
        c = as_complex_vector(top_row, "top_row")
        c.setflags(write=False)
        self.top_row = c
        self.n = c.size
        ev = dft(c, -1)
        ev.setflags(write=False)
        self.eigenvalues = ev

    @classmethod
    def from_eigenvalues(cls, eigenvalues):
        psi = as_complex_vector(eigenvalues, "eigenvalues")
        return cls(dft(psi, +1) / psi.size)

    def dense(self) -> np.ndarray:
        idx = (np.arange(self.n)[None, :] - np.arange(self.n)[:, None]) % self.n
        return self.top_row[idx]

    def matvec(self, v) -> np.ndarray:
        v = as_complex_vector(v)
        if v.size != self.n:
            raise DimensionMismatchError(f"vector length {v.size} != {self.n}")
        return dft(self.eigenvalues * dft(v, +1), -1) / self.n

    def __repr__(self):
        return f"CirculantMatrix(n={self.n})"


def toeplitz_from_symbol(f: GeneratingFunction, n: int) -> ToeplitzMatrix:
    """T_n(f) with diagonal k equal to the Fourier coefficient t_k of f."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return ToeplitzMatrix.from_column(f.coefficients(n), symbol=f)


def _require_positive(values, what):
    if np.min(values) <= 0.0:
        raise SingularMatrixError(
            f"{what} has a non-positive sample ({np.min(values):.6g}); "
            "the circulant would be singular or indefinite"
        )


def associated_circulant(f: GeneratingFunction, n: int) -> CirculantMatrix:
    """C_n(f): top row is the inverse DFT of the grid samples f(2 pi j / n)."""
    if n < 1:
        raise DomainError("n must be >= 1")
    samples = sample_grid(f, n)
    _require_positive(samples, "symbol")
    return CirculantMatrix(dft(samples, +1) / n)


def circulant_from_sequence(t, require_positive: bool = True) -> CirculantMatrix:
    """C_n(f_hat_n) for the truncated symbol of ``t_{-(n-1)}, ..., t_{n-1}``.

    The top row is ``c_0 = t_0`` and ``c_k = t_{-k} + t_{n-k}`` (the wrapped
    coefficients), which is what sampling the trigonometric polynomial
    f_hat_n on the n-point grid and transforming back produces.
    """
    t = as_complex_vector(t, "t")
    if t.size % 2 != 1:
        raise DimensionMismatchError("coefficient list must have length 2n-1")
    n = t.size // 2 + 1
    pos = t[n - 1:]  # t_0 .. t_{n-1}
    neg = t[n - 1::-1]  # t_0, t_-1, .., t_-(n-1)
    top = np.empty(n, dtype=complex)
    top[0] = pos[0]
    top[1:] = neg[1:] + pos[:0:-1]
    C = CirculantMatrix(top)
    if require_positive:
        _require_positive(C.eigenvalues.real, "truncated symbol")
    return C


def _check_singular(psi):
    mag = np.abs(psi)
    if mag.min() < SINGULAR_RTOL * mag.max():
        raise SingularMatrixError(
            f"circulant is singular: min|psi| = {mag.min():.3g}, max|psi| = {mag.max():.3g}"
        )


def circulant_solve(C: CirculantMatrix, b) -> np.ndarray:
    """Solve C x = b in O(n log n) via ``x = F diag(1/psi) F^dagger b``."""
    b = as_complex_vector(b, "b")
    if b.size != C.n:
        raise DimensionMismatchError(f"rhs length {b.size} != {C.n}")
    _check_singular(C.eigenvalues)
    return dft(dft(b, +1) / C.eigenvalues, -1) / C.n


def _same_order(A, B):
    if A.n != B.n:
        raise DimensionMismatchError(f"orders differ: {A.n} vs {B.n}")


def circulant_multiply(A: CirculantMatrix, B: CirculantMatrix) -> CirculantMatrix:
    """Product of two circulants; eigenvalues multiply pointwise."""
    _same_order(A, B)
    return CirculantMatrix.from_eigenvalues(A.eigenvalues * B.eigenvalues)


def circulant_add(A: CirculantMatrix, B: CirculantMatrix) -> CirculantMatrix:
    _same_order(A, B)
    return CirculantMatrix(A.top_row + B.top_row)


def _embedding_spectrum(T: ToeplitzMatrix):
    n = T.n
    m = next_power_of_two(2 * n - 1)
    col = np.zeros(m, dtype=complex)
    col[:n] = T.column
    if n > 1:
        col[m - n + 1:] = np.conj(T.column[1:][::-1])
    return m, dft(col, -1)


def toeplitz_matvec(T: ToeplitzMatrix, v) -> np.ndarray:
    """T v in O(n log n) by embedding T in a power-of-two circulant of order >= 2n-1."""
    v = as_complex_vector(v)
    if v.size != T.n:
        raise DimensionMismatchError(f"vector length {v.size} != {T.n}")
    m, spec = _embedding_spectrum(T)
    pad = np.zeros(m, dtype=complex)
    pad[: T.n] = v
    return dft(spec * dft(pad, -1), +1)[: T.n] / m


def toeplitz_solve_dense(T: ToeplitzMatrix, b, cap: int = DENSE_CAP) -> np.ndarray:
    """Reference solve of T x = b by pivoted LU on the materialised matrix."""
    if T.n > cap:
        raise CapExceededError(f"n = {T.n} exceeds the dense cap {cap}")
    b = as_complex_vector(b, "b")
    if b.size != T.n:
        raise DimensionMismatchError(f"rhs length {b.size} != {T.n}")
    A = T.dense()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    if np.min(np.abs(np.diag(lu))) < SINGULAR_RTOL * T.frobenius_norm:
        raise SingularMatrixError("Toeplitz matrix is numerically singular")
    if np.isrealobj(A) and not np.any(b.imag):
        return scipy.linalg.lu_solve((lu, piv), b.real).astype(complex)
    return scipy.linalg.lu_solve((lu, piv), b)


class FrobeniusDistance(NamedTuple):
    abs: float
    rel: float


def frobenius_distance(T: ToeplitzMatrix, C: CirculantMatrix) -> FrobeniusDistance:
    """||T - C||_F and its ratio to ||T||_F without forming either matrix.

    Along diagonal d = k - j the difference is the constant
    ``c_{(-d) mod n} - t_d`` repeated ``n - |d|`` times.
    """
    _same_order(T, C)
    n = T.n
    d = np.arange(-(n - 1), n)
    t = np.concatenate([np.conj(T.column[:0:-1]), T.column])
    c = C.top_row[(-d) % n]
    diff2 = (n - np.abs(d)) * np.abs(c - t) ** 2
    a = float(np.sqrt(np.sum(diff2)))
    norm = T.frobenius_norm
    return FrobeniusDistance(a, a / norm if norm > 0 else float("inf"))


class ConditionNumber(NamedTuple):
    kappa: float
    method: str
    lambda_min: float
    lambda_max: float
    symbol_kappa: float | None


def _lanczos_extremes(T: ToeplitzMatrix, rtol: float, cap: int, check: int = 10):
    """Extreme Ritz values of T from a fully reorthogonalised Lanczos run.

    Ritz values always lie inside [lambda_min, lambda_max], so the estimate
    brackets from the inside and the ratio can only under-report kappa.
    """
    n = T.n
    real = T.is_real
    dtype = float if real else complex
    rng = np.random.default_rng(0x5EED)
    q = rng.standard_normal(n).astype(dtype)
    Q = np.zeros((min(n, cap) + 1, n), dtype=dtype)
    Q[0] = q / np.linalg.norm(q)
    alpha, beta = [], []
    prev = None
    for k in range(min(n, cap)):
        w = toeplitz_matvec(T, Q[k])
        w = w.real if real else w
        alpha.append(float(np.vdot(Q[k], w).real))
        basis = Q[: k + 1]
        for _ in range(2):
            w = w - basis.T @ (basis.conj() @ w)
        b = float(np.linalg.norm(w))
        done = b <= 1e-14 * max(abs(alpha[0]), 1.0) or k + 1 == n
        if done or (k + 1) % check == 0:
            ritz = scipy.linalg.eigvalsh_tridiagonal(np.array(alpha), np.array(beta)) if beta else np.array(alpha)
            lo, hi = float(ritz[0]), float(ritz[-1])
            if done:
                return lo, hi
            if prev is not None and lo > 0 and prev[0] > 0:
                if abs((hi / lo) / (prev[1] / prev[0]) - 1.0) <= rtol:
                    return lo, hi
            prev = (lo, hi)
        beta.append(b)
        Q[k + 1] = w / b
    raise ConvergenceError(f"Lanczos did not settle within {cap} matvecs", prev)


def condition_number(T: ToeplitzMatrix, dense_cap: int = DENSE_EIG_CAP, rtol: float = 1e-6,
                     max_matvecs: int | None = None) -> ConditionNumber:
    """Spectral condition number of a Hermitian positive definite Toeplitz matrix.

    Orders up to ``dense_cap`` use a dense Hermitian eigensolve.  Larger orders
    run Lanczos on ``v -> T v`` (embedded-circulant products, O(n log n) each)
    and stop once the Ritz ratio changes by less than ``rtol`` over ten
    steps.  The iterative value is an inner estimate: it never exceeds the
    true kappa.  More than ``max_matvecs`` products (default 10 n) raises
    :class:`ConvergenceError` carrying the last bracket.
    """
    n = T.n
    symbol_kappa = T.symbol.mu if T.symbol is not None else None
    if n <= dense_cap:
        ev = np.linalg.eigvalsh(T.dense())
        lo, hi = float(ev[0]), float(ev[-1])
        method = "dense"
    else:
        cap = 10 * n if max_matvecs is None else max_matvecs
        lo, hi = _lanczos_extremes(T, rtol, cap)
        method = "iterative"
    if lo <= 0:
        raise SingularMatrixError("Toeplitz matrix is not positive definite")
    return ConditionNumber(hi / lo, method, lo, hi, symbol_kappa)
