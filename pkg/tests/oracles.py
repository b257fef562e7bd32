"""Independent reference implementations used only by the tests.

Nothing here calls into the package's transforms or structured solvers.
Values marked ``exact`` were derived by hand or with ``fractions.Fraction``
and are frozen as literals.
"""
from fractions import Fraction

import numpy as np
import scipy.linalg


def naive_dft(v, sign=-1):
    v = np.asarray(v, dtype=complex)
    n = v.size
    k = np.arange(n)
    W = np.exp(sign * 2j * np.pi * np.outer(k, k) / n)
    return W @ v


def fourier_matrix(n):
    """Unitary F with F[j, k] = exp(-2 pi i j k / n) / sqrt(n)."""
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n) / np.sqrt(n)


def dense_circulant(top_row):
    """Row i is the right cyclic shift of row i-1."""
    c = np.asarray(top_row)
    n = c.size
    rows = [np.roll(c, i) for i in range(n)]
    return np.array(rows)


def dense_toeplitz(column):
    col = np.asarray(column)
    return scipy.linalg.toeplitz(col, np.conj(col))


def frobenius_rel(A, B):
    return np.linalg.norm(A - B) / np.linalg.norm(A)


def fraction_solve(A, b):
    """Gaussian elimination over the rationals."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(A)]
    for i in range(n):
        p = next(r for r in range(i, n) if M[r][i] != 0)
        M[i], M[p] = M[p], M[i]
        for j in range(i + 1, n):
            r = M[j][i] / M[i][i]
            M[j] = [a - r * c for a, c in zip(M[j], M[i])]
    x = [Fraction(0)] * n
    for i in reversed(range(n)):
        x[i] = (M[i][n] - sum(M[i][k] * x[k] for k in range(i + 1, n))) / M[i][i]
    return x


# tridiag(0.5, 2, 0.5), n = 4: the Toeplitz matrix of 2 + cos(lam)
TRIDIAG4 = [[2, Fraction(1, 2), 0, 0],
            [Fraction(1, 2), 2, Fraction(1, 2), 0],
            [0, Fraction(1, 2), 2, Fraction(1, 2)],
            [0, 0, Fraction(1, 2), 2]]
# exact: T x = e_0
TRIDIAG4_X = [Fraction(112, 209), Fraction(-30, 209), Fraction(8, 209), Fraction(-2, 209)]
# exact: C x* = e_0 for the circulant with top row (2, 1/2, 0, 1/2)
CIRC4_XSTAR = [Fraction(7, 12), Fraction(-1, 6), Fraction(1, 12), Fraction(-1, 6)]
# eigenvalues 2 + cos(k pi / 5): kappa = (2 + cos(pi/5)) / (2 - cos(pi/5))
TRIDIAG4_KAPPA = 2.3585701736362874
# ||T - C||_F / ||T||_F = sqrt(0.5 / 17.5)
TRIDIAG4_FROB_REL = 0.1690308509457033
# step-3 success probability for b = e_0, m = 1, oracle values (3, 2, 1, 2)
CIRC4_SUCCESS = Fraction(29, 72)
