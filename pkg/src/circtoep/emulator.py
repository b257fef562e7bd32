"""Statevector emulation of the five-step circulant linear-system algorithm.

Steps, for ``|b>`` of length ``n = 2**q``:

1. ``|b'> = QFT |b>``, with ``QFT = F^dagger`` in the notation of :mod:`.dft`.
2. Load the oracle values ``f_j`` into a value register.
3. Rotate an ancilla by ``m / f_j``, giving amplitude ``m b'_j / f_j`` on
   the success branch.
4. Uncompute the value register and post-select (or amplify) the success
   branch.
5. Inverse QFT.

Registers are never materialised.  Steps 2-4 act as a diagonal map on the
n-dimensional state, and the success branch is handled by projection and
renormalisation.  Grover mode keeps the 2n-dimensional state (system times
ancilla) so that reflections can be applied literally.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from . import jsonio
from .dft import as_complex_vector, is_power_of_two, unitary_dft, unitary_idft
from .errors import DomainError, RotationConstantError, SingularMatrixError
from .matrices import associated_circulant, circulant_from_sequence, circulant_solve
from .symbols import BandSymbol, GeneratingFunction, sample_grid

__all__ = [
    "StateVector",
    "Grover",
    "EmulationConfig",
    "EmulationReport",
    "prepare_state",
    "oracle_values",
    "run_pipeline",
    "gate_count_model",
    "infidelity",
]

NORM_TOL = 1e-12
# largest n whose amplitudes are written into JSON reports
STATE_JSON_CAP = 4096
# relative slack when checking m <= min f_j, absorbs rounding in grid samples
M_SLACK = 1e-12


@dataclass(frozen=True)
class StateVector:
    amplitudes: np.ndarray

    def __post_init__(self):
        a = as_complex_vector(self.amplitudes, "amplitudes")
        if not is_power_of_two(a.size):
            raise DomainError(f"state length {a.size} is not a power of two")
        if abs(np.linalg.norm(a) - 1.0) > NORM_TOL:
            raise DomainError(f"state norm {np.linalg.norm(a)!r} is not 1")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def n(self) -> int:
        return self.amplitudes.size

    @property
    def q(self) -> int:
        return self.n.bit_length() - 1

    def fidelity(self, other: "StateVector") -> float:
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)))


def infidelity(a: np.ndarray, b: np.ndarray) -> float:
    """``1 - |<a|b>|`` for unit vectors, accurate when the states nearly coincide.

    Uses ``1 - |<a|b>| = ||a - e^{i phi} b||^2 / 2`` with ``phi = arg <b|a>``,
    which avoids the cancellation in the direct difference.
    """
    ov = np.vdot(b, a)
    phase = ov / abs(ov) if abs(ov) > 0 else 1.0
    return float(0.5 * np.linalg.norm(a - phase * b) ** 2)


def prepare_state(b) -> StateVector:
    """Amplitude-encode ``b`` as ``b / ||b||``."""
    b = as_complex_vector(b, "b")
    if not is_power_of_two(b.size):
        raise DomainError(f"length {b.size} is not a power of two")
    nrm = np.linalg.norm(b)
    if nrm == 0:
        raise DomainError("cannot prepare the zero vector")
    return StateVector(b / nrm)


@dataclass(frozen=True)
class Grover:
    """Apply ``k`` exact amplitude-amplification rounds."""

    k: int

    def __post_init__(self):
        if self.k < 0:
            raise DomainError("Grover iteration count must be >= 0")


@dataclass(frozen=True)
class EmulationConfig:
    """
    Parameters
    ----------
    m : float, optional
        Rotation constant.  ``None`` picks the default: the exact f_min for
        catalog symbols, 0.99 of the estimated f_min otherwise, and the
        smallest rescaled value in Wiener mode.  The default is clamped to the
        smallest oracle value after quantisation.
    value_register_bits : int
        Fractional bits of the value register, in units of ``f_max * 2**-bits``.
        0 means exact values.
    amplification : "analytic" or Grover
    mode : "symbol" or "wiener"
    """

    m: float | None = None
    value_register_bits: int = 0
    amplification: Literal["analytic"] | Grover = "analytic"
    mode: Literal["symbol", "wiener"] = "symbol"

    def __post_init__(self):
        if self.m is not None and not (math.isfinite(self.m) and self.m > 0):
            raise DomainError("m must be a positive finite number")
        if self.value_register_bits < 0:
            raise DomainError("value_register_bits must be >= 0")
        if self.mode not in ("symbol", "wiener"):
            raise DomainError(f"unknown mode {self.mode!r}")
        if not (self.amplification == "analytic" or isinstance(self.amplification, Grover)):
            raise DomainError(f"unknown amplification {self.amplification!r}")


@dataclass
class EmulationReport:
    n: int
    mode: str
    m: float
    bits: int
    output_state: StateVector
    success_probability: float
    expected_repeats: float
    grover_iterations: int | None
    amplified_probability: float | None
    gate_count: int
    fidelity_vs_classical: float
    infidelity: float
    oracle: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return self.output_state.q

    def to_dict(self) -> dict:
        d = {
            "n": self.n,
            "q": self.q,
            "mode": self.mode,
            "m": self.m,
            "bits": self.bits,
            "success_probability": self.success_probability,
            "expected_repeats": self.expected_repeats,
            "grover_iterations": self.grover_iterations,
            "amplified_probability": self.amplified_probability,
            "gate_count": self.gate_count,
            "fidelity_vs_classical": self.fidelity_vs_classical,
            "infidelity": self.infidelity,
        }
        if self.n <= STATE_JSON_CAP:
            amps = self.output_state.amplitudes
            d["output_state"] = [[float(z.real), float(z.imag)] for z in amps]
        return d

    def to_json(self, indent: int | None = 2) -> str:
        return jsonio.dumps(self.to_dict(), indent=indent)


def gate_count_model(q: int) -> int:
    """Gates in two QFTs plus three opaque calls (oracle, rotation, uncompute).

    One QFT on q qubits uses q(q+1)/2 Hadamard and controlled-phase gates and
    floor(q/2) swaps.
    """
    if q < 1:
        raise DomainError("q must be >= 1")
    return 2 * (q * (q + 1) // 2 + q // 2) + 3


def _central_band(t, n):
    """Symmetric band t_-r..t_r clipped to |k| <= n-1."""
    t = np.asarray(t)
    if t.ndim != 1 or t.size % 2 != 1:
        raise DomainError("coefficient list must have odd length 2r+1")
    r = t.size // 2
    keep = min(r, n - 1)
    return t[r - keep: r + keep + 1]


def _quantize(values, unit):
    out = np.round(values / unit) * unit  # numpy rounds half to even
    if np.min(out) <= 0:
        raise SingularMatrixError(
            f"oracle value rounds to {np.min(out):.6g} <= 0 with unit {unit:.6g}"
        )
    return out


def _symbol_values(f: GeneratingFunction, n: int):
    vals = np.array(sample_grid(f, n), dtype=float)
    if np.min(vals) <= 0:
        raise SingularMatrixError("symbol has a non-positive grid sample")
    return vals, f.f_max


def _wiener_values(t, n: int):
    band = _central_band(t, n)
    try:
        fhat = BandSymbol.from_coefficients(band)
    except DomainError as exc:
        raise SingularMatrixError(f"truncated symbol is not positive: {exc}") from exc
    grid = np.array(sample_grid(fhat, n), dtype=float)
    if np.min(grid) <= 0:
        raise SingularMatrixError("truncated symbol has a non-positive grid sample")
    top = max(fhat.f_max, float(np.max(grid)))
    return grid / top, 1.0, fhat


def oracle_values(f_or_t, n: int, bits: int = 0) -> np.ndarray:
    """Values held in the oracle's value register.

    A :class:`GeneratingFunction` gives grid samples ``f(2 pi j / n)``.  A
    coefficient list ``t_-r..t_r`` (Wiener mode) gives the grid of the
    truncated symbol divided by its maximum, so the values lie in
    ``[1/mu, 1]``.  With ``bits > 0`` each value is rounded to the nearest
    multiple of ``f_max * 2**-bits`` (ties to even).
    """
    if bits < 0:
        raise DomainError("bits must be >= 0")
    if isinstance(f_or_t, GeneratingFunction):
        vals, fmax = _symbol_values(f_or_t, n)
    else:
        vals, fmax, _ = _wiener_values(f_or_t, n)
    if bits:
        vals = _quantize(vals, fmax * 2.0 ** -bits)
    return vals


def _default_m(f_or_t, mode, n):
    if mode == "wiener":
        return float(np.min(oracle_values(f_or_t, n, 0)))
    if f_or_t.catalog:
        return float(f_or_t.f_min)
    return 0.99 * float(f_or_t.f_min)


def _check_norm(v, stage):
    err = abs(np.linalg.norm(v) - 1.0)
    if err > NORM_TOL:
        raise AssertionError(f"norm drift {err:.3g} after {stage}")


def _amplify(good: np.ndarray, bad: np.ndarray, k: int) -> float:
    """k rounds of (reflect about |psi>) * (flip success branch) on the joint state."""
    psi = np.concatenate([good, bad])
    state = psi.copy()
    ng = good.size
    for _ in range(k):
        state[:ng] *= -1.0
        state = 2.0 * np.vdot(psi, state) * psi - state
    return float(np.linalg.norm(state[:ng]) ** 2)


def run_pipeline(b, f_or_t, config: EmulationConfig = EmulationConfig()) -> EmulationReport:
    """Emulate the algorithm on ``b`` and compare with the classical circulant solve."""
    is_symbol = isinstance(f_or_t, GeneratingFunction)
    if is_symbol != (config.mode == "symbol"):
        raise DomainError(
            "symbol mode needs a GeneratingFunction and wiener mode a coefficient list"
        )
    state = prepare_state(b)
    n = state.n
    bits = config.value_register_bits
    vals = oracle_values(f_or_t, n, bits)
    vmin = float(np.min(vals))
    if config.m is None:
        m = min(_default_m(f_or_t, config.mode, n), vmin)
    else:
        m = float(config.m)
        if m > vmin * (1.0 + M_SLACK):
            raise RotationConstantError(f"m = {m!r} exceeds min oracle value {vmin!r}")

    # step 1
    bp = unitary_idft(state.amplitudes)
    _check_norm(bp, "QFT")
    # steps 2-3: success-branch amplitudes; the failure branch keeps the rest
    ratio = np.minimum(m / vals, 1.0)
    good = bp * ratio
    bad = bp * np.sqrt(1.0 - ratio ** 2)
    _check_norm(np.concatenate([good, bad]), "controlled rotation")
    p = float(np.sum(np.abs(good) ** 2))
    # step 4: post-select
    post = good / math.sqrt(p)
    _check_norm(post, "post-selection")
    # step 5
    x = unitary_dft(post)
    _check_norm(x, "inverse QFT")

    theta = math.asin(min(math.sqrt(p), 1.0))
    if isinstance(config.amplification, Grover):
        k = config.amplification.k
        amp = _amplify(good, bad, k)
        repeats = 1.0 / amp if amp > 0 else math.inf
        grover_k = k
    else:
        amp = None
        repeats = float(math.ceil(math.pi / (4.0 * theta)))
        grover_k = None

    if is_symbol:
        C = associated_circulant(f_or_t, n)
    else:
        band = np.asarray(_central_band(f_or_t, n), dtype=complex)
        full = np.zeros(2 * n - 1, dtype=complex)
        r = band.size // 2
        full[n - 1 - r: n + r] = band
        C = circulant_from_sequence(full)
    xc = circulant_solve(C, state.amplitudes)
    xc /= np.linalg.norm(xc)

    out = StateVector(x)
    return EmulationReport(
        n=n,
        mode=config.mode,
        m=m,
        bits=bits,
        output_state=out,
        success_probability=p,
        expected_repeats=repeats,
        grover_iterations=grover_k,
        amplified_probability=amp,
        gate_count=gate_count_model(state.q) if n > 1 else 3,
        fidelity_vs_classical=min(float(abs(np.vdot(x, xc))), 1.0),
        infidelity=infidelity(x, xc),
        oracle=vals,
    )
