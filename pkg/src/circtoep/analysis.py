"""Convergence experiments for the circulant approximation of Toeplitz systems.

Everything here compares T_n(f) with C_n(f) on finite n: Frobenius
distance, solution error against a dense oracle, the sampling/wrap-around
split of the Frobenius error, rate checks on normalised errors and the
eigenvalue gap between the two spectra.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import jsonio
from .dft import as_complex_vector, unitary_idft
from .errors import CapExceededError, DimensionMismatchError, DomainError, ToeplitzError
from .matrices import (
    DENSE_CAP,
    CirculantMatrix,
    ToeplitzMatrix,
    associated_circulant,
    circulant_from_sequence,
    circulant_solve,
    condition_number,
    frobenius_distance,
    toeplitz_from_symbol,
    toeplitz_solve_dense,
)
from .rhs import rhs_from_spec
from .symbols import GeneratingFunction, PSeries, sample_grid, scaled

__all__ = [
    "ConvergenceRecord",
    "solution_errors",
    "Decomposition",
    "decompose_frobenius_error",
    "convergence_sweep",
    "records_to_csv",
    "CSV_COLUMNS",
    "RateFit",
    "fit_rate",
    "rate_check_pseries",
    "rate_check_banded_rhs",
    "rate_check_eigenvalues",
    "eigenvalue_matching",
    "quadrupling_ratios",
    "success_probability",
    "MODELS",
    "TOLERANCE_FACTOR",
]

TOLERANCE_FACTOR = 2.0
# solution_errors already materialises T; below this order kappa is computed densely too
KAPPA_DENSE_CAP = 2048

CSV_COLUMNS = (
    "n", "epsilon", "kappa", "vec_err", "state_err",
    "bound_vec", "bound_state", "success_probability", "rhs_kind", "seed",
)

MODELS = {
    "lnn_logn_over_n": lambda n: math.log(n) * math.log2(n) / n,
    "inv_sqrt_n": lambda n: 1.0 / math.sqrt(n),
    "inv_n": lambda n: 1.0 / n,
}


@dataclass
class ConvergenceRecord:
    n: int
    epsilon: float
    kappa: float
    vec_err: float
    state_err: float
    bound_vec: float
    bound_state: float
    success_probability: float
    rhs_kind: str = ""
    seed: int | None = None
    error: str | None = None

    @property
    def bound_applies(self) -> bool:
        return self.error is None and self.epsilon * self.kappa < 1.0

    def violations(self, atol: float = 1e-12) -> list[str]:
        """Names of the error bounds this record breaks (empty when sound or vacuous)."""
        out = []
        if self.error is not None:
            return out
        if self.state_err > 2.0 * self.vec_err + atol:
            out.append("state_err > 2 vec_err")
        if self.bound_applies:
            if self.vec_err > self.bound_vec + atol:
                out.append("vec_err > bound_vec")
            if self.state_err > self.bound_state + atol:
                out.append("state_err > bound_state")
        return out

    @classmethod
    def failed(cls, n, rhs_kind, seed, exc):
        nan = math.nan
        return cls(n, nan, nan, nan, nan, nan, nan, nan, rhs_kind, seed,
                   error=f"{getattr(exc, 'code', 'error')}: {exc}")


def success_probability(b, values, m: float) -> float:
    """``sum_j m^2 |b'_j|^2 / f_j^2`` with ``b' = QFT b / ||b||``."""
    b = as_complex_vector(b, "b")
    bp = unitary_idft(b / np.linalg.norm(b))
    return float(np.sum(m * m * np.abs(bp) ** 2 / np.asarray(values) ** 2))


@lru_cache(maxsize=64)
def _kappa(f: GeneratingFunction, n: int) -> float:
    # independent of the rhs, and the dense eigensolve dominates a sweep row
    return condition_number(toeplitz_from_symbol(f, n), dense_cap=KAPPA_DENSE_CAP).kappa


def _unit(v):
    return v / np.linalg.norm(v)


def solution_errors(f: GeneratingFunction, n: int, b, rhs_kind: str = "", seed: int | None = None) -> ConvergenceRecord:
    """Compare the circulant solution x* with the exact Toeplitz solution x."""
    b = as_complex_vector(b, "b")
    if b.size != n:
        raise DimensionMismatchError(f"rhs length {b.size} != {n}")
    if not np.any(b):
        raise DomainError("rhs must be nonzero")
    if n > DENSE_CAP:
        raise CapExceededError(f"n = {n} exceeds the dense cap {DENSE_CAP}")
    T = toeplitz_from_symbol(f, n)
    C = associated_circulant(f, n)
    x = toeplitz_solve_dense(T, b)
    xs = circulant_solve(C, b)
    eps = frobenius_distance(T, C).rel
    kappa = _kappa(f, n)
    vec_err = float(np.linalg.norm(xs - x) / np.linalg.norm(x))
    state_err = float(np.linalg.norm(_unit(xs) - _unit(x)))
    ek = eps * kappa
    if ek < 1.0:
        bound_vec = ek / (1.0 - ek)
        bound_state = 2.0 * bound_vec
    else:
        bound_vec = bound_state = math.inf
    p = success_probability(b, sample_grid(f, n), f.f_min)
    return ConvergenceRecord(n, eps, kappa, vec_err, state_err, bound_vec, bound_state, p, rhs_kind, seed)


@dataclass(frozen=True)
class Decomposition:
    sampling_term: float
    wrap_term: float
    total_rel: float
    theorem_bound: float
    wrap_closed_form: float


def decompose_frobenius_error(f: GeneratingFunction, n: int) -> Decomposition:
    """Split ||C_n(f) - T_n(f)||_F / ||T_n||_F through the truncated symbol f_hat_n.

    ``sampling_term`` is the distance between C_n(f) and C_n(f_hat_n) (two
    circulants, so it is the l2 distance of their spectra).  ``wrap_term`` is
    the distance between C_n(f_hat_n) and T_n(f), which lives in the two
    corner triangles and equals ``sqrt(2 sum_{k=1}^{n-1} k t_k^2)`` in
    absolute terms.  ``theorem_bound`` is sqrt(N / (n - N)) for the effective
    coefficient radius N of f (infinite when N >= n).
    """
    if n < 2:
        raise DomainError("decomposition needs n >= 2")
    T = toeplitz_from_symbol(f, n)
    norm = T.frobenius_norm
    C = associated_circulant(f, n)
    Chat = circulant_from_sequence(T.diagonals, require_positive=False)
    sampling = float(np.linalg.norm(C.eigenvalues - Chat.eigenvalues)) / norm
    wrap = frobenius_distance(T, Chat).rel
    total = frobenius_distance(T, C).rel
    t = T.column.real
    k = np.arange(n)
    wrap_cf = math.sqrt(2.0 * float(np.sum(k[1:] * t[1:] ** 2))) / norm
    N = f.effective_radius()
    bound = math.sqrt(N / (n - N)) if N < n else math.inf
    return Decomposition(sampling, wrap, total, bound, wrap_cf)


def _seed_of(rhs_spec):
    kind, _, arg = rhs_spec.partition(":")
    return int(arg) if kind == "random" else None


def convergence_sweep(f: GeneratingFunction, n_list: Iterable[int], rhs: str = "random:7",
                      solve: bool = True) -> list[ConvergenceRecord]:
    """One :class:`ConvergenceRecord` per n, in ascending order.

    ``rhs`` follows the rhs grammar (``basis:i``, ``random:seed``,
    ``banded:L``, ``file:path``).  With ``solve=False`` only epsilon is
    computed, which is O(n log n) and has no size cap.  Failures at one n
    are stored on that row instead of aborting the sweep.
    """
    ns = list(n_list)
    if ns != sorted(ns):
        raise DomainError("n_list must be ascending")
    seed = _seed_of(rhs)
    out = []
    for n in ns:
        try:
            if solve:
                rec = solution_errors(f, n, rhs_from_spec(rhs, n), rhs, seed)
            else:
                T = toeplitz_from_symbol(f, n)
                eps = frobenius_distance(T, associated_circulant(f, n)).rel
                nan = math.nan
                rec = ConvergenceRecord(n, eps, nan, nan, nan, nan, nan, nan, rhs, seed)
        except ToeplitzError as exc:
            rec = ConvergenceRecord.failed(n, rhs, seed, exc)
        out.append(rec)
    return out


def _csv_float(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def records_to_csv(records: Sequence[ConvergenceRecord], stream=None) -> str:
    """Write records in the fixed column order; returns the text as well."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow([
            r.n,
            *(_csv_float(getattr(r, c)) for c in CSV_COLUMNS[1:8]),
            r.rhs_kind,
            "" if r.seed is None else r.seed,
        ])
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text


@dataclass
class RateFit:
    """Errors divided by a model rate; bounded if the tail stays near the median."""

    model: str
    n_values: list
    errors: list
    normalized_constants: list
    verdict: str
    tolerance_factor: float = TOLERANCE_FACTOR

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "n": list(self.n_values),
            "error": list(self.errors),
            "normalized_constant": list(self.normalized_constants),
            "verdict": self.verdict,
            "tolerance_factor": self.tolerance_factor,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return jsonio.dumps(self.to_dict(), indent=indent)


def fit_rate(n_values, errors, model: str, tolerance_factor: float = TOLERANCE_FACTOR) -> RateFit:
    if model not in MODELS:
        raise DomainError(f"unknown rate model {model!r}")
    if len(n_values) != len(errors) or not n_values:
        raise DimensionMismatchError("need matching, non-empty n and error lists")
    rate = MODELS[model]
    norm = [float(e) / rate(n) for n, e in zip(n_values, errors)]
    med = float(np.median(norm))
    tail = norm[len(norm) // 2:]
    ok = all(math.isfinite(v) for v in norm) and max(tail) <= tolerance_factor * med
    return RateFit(model, list(n_values), [float(e) for e in errors], norm,
                   "bounded" if ok else "violated", tolerance_factor)


def quadrupling_ratios(fit: RateFit) -> list[tuple[int, float]]:
    """``(n, error(4n)/error(n))`` for every n whose quadruple is also in the fit."""
    lookup = dict(zip(fit.n_values, fit.errors))
    return [(n, lookup[4 * n] / lookup[n]) for n in fit.n_values if 4 * n in lookup]


def rate_check_pseries(p: float, t0: float, n_list, seed: int = 7) -> RateFit:
    """state_err for t_k = |k|^-p against ln n log2 n / n, fixed-seed random rhs."""
    f = PSeries(p, t0)
    rhs = f"random:{seed}"
    errs = [solution_errors(f, n, rhs_from_spec(rhs, n), rhs, seed).state_err for n in n_list]
    return fit_rate(list(n_list), errs, "lnn_logn_over_n")


def rate_check_banded_rhs(f: GeneratingFunction, L: int, n_list) -> RateFit:
    """vec_err for a centred window rhs of width 2L+1 against 1/sqrt(n).

    The symbol is rescaled by 1/f_max first so that ||T_n|| <= 1.
    """
    g = scaled(f, 1.0 / f.f_max)
    rhs = f"banded:{L}"
    errs = [solution_errors(g, n, rhs_from_spec(rhs, n), rhs).vec_err for n in n_list]
    return fit_rate(list(n_list), errs, "inv_sqrt_n")


def eigenvalue_matching(T: ToeplitzMatrix, C: CirculantMatrix, cap: int = DENSE_CAP) -> float:
    """Largest gap between the descending-sorted spectra of T and C."""
    if T.n != C.n:
        raise DimensionMismatchError(f"orders differ: {T.n} vs {C.n}")
    if T.n > cap:
        raise CapExceededError(f"n = {T.n} exceeds the dense cap {cap}")
    lt = np.sort(np.linalg.eigvalsh(T.dense()))[::-1]
    lc = np.sort(C.eigenvalues.real)[::-1]
    return float(np.max(np.abs(lt - lc)))


def rate_check_eigenvalues(f: GeneratingFunction, n_list) -> RateFit:
    """max eigenvalue gap against 1/n."""
    gaps = [eigenvalue_matching(toeplitz_from_symbol(f, n), associated_circulant(f, n)) for n in n_list]
    return fit_rate(list(n_list), gaps, "inv_n")
