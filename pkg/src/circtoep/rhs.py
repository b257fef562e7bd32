"""Right-hand sides: a reproducible PRNG and the ``rhs`` mini-language.

The random generator is SplitMix64 (Steele, Lea and Flood's mixer) so that a
``random:<seed>`` vector is the same in every implementation that follows the
recipe below:

* ``state += 0x9E3779B97F4A7C15``; scramble with the usual two xor-shift
  multiplies; the output word is 64 bits.
* A uniform double in (0, 1) is ``((word >> 11) + 0.5) * 2**-53``.
* Complex normals come from Box-Muller on two consecutive uniforms
  ``u1, u2``: ``r = sqrt(-2 ln u1)``, ``z = r cos(2 pi u2) + i r sin(2 pi u2)``.
"""
from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .errors import DimensionMismatchError, DomainError

__all__ = ["SplitMix64", "complex_normal", "rhs_from_spec", "RHS_GRAMMAR"]

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

RHS_GRAMMAR = """\
rhs grammar:
  basis:<i>       unit vector e_i, 0 <= i < n
  random:<seed>   complex normal entries from SplitMix64(seed), normalised
  banded:<L>      2L+1 entries equal to 1/sqrt(2L+1) centred on index n//2
  file:<path>     one complex per line as 're im'; '#' starts a comment"""


class SplitMix64:
    """64-bit SplitMix generator.  Pure Python; vectors here are at most a few thousand long."""

    def __init__(self, seed: int):
        self.state = int(seed) & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform double strictly inside (0, 1)."""
        return ((self.next_u64() >> 11) + 0.5) * 2.0 ** -53


def complex_normal(seed: int, n: int) -> np.ndarray:
    gen = SplitMix64(seed)
    out = np.empty(n, dtype=complex)
    for j in range(n):
        u1, u2 = gen.uniform(), gen.uniform()
        r = math.sqrt(-2.0 * math.log(u1))
        out[j] = complex(r * math.cos(2 * math.pi * u2), r * math.sin(2 * math.pi * u2))
    return out


def _read_file(path, n):
    rows = []
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read rhs file {path!r}: {exc.strerror}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if len(parts) == 1:
                rows.append(complex(float(parts[0]), 0.0))
            elif len(parts) == 2:
                rows.append(complex(float(parts[0]), float(parts[1])))
            else:
                raise ValueError
        except ValueError:
            raise DomainError(f"{path}:{lineno}: expected 're im', got {line!r}") from None
    if len(rows) != n:
        raise DimensionMismatchError(f"rhs file has {len(rows)} entries, expected {n}")
    return np.array(rows, dtype=complex)


def rhs_from_spec(spec: str, n: int) -> np.ndarray:
    """Build a right-hand side of length ``n`` from its textual description.

    >>> rhs_from_spec("banded:1", 8).nonzero()[0].tolist()
    [3, 4, 5]
    """
    kind, sep, arg = spec.partition(":")
    if not sep:
        raise DomainError(f"malformed rhs spec {spec!r}\n{RHS_GRAMMAR}")
    if kind == "file":
        return _read_file(arg, n)
    try:
        val = int(arg)
    except ValueError:
        raise DomainError(f"rhs argument must be an integer in {spec!r}") from None
    if kind == "basis":
        if not 0 <= val < n:
            raise DimensionMismatchError(f"basis index {val} outside 0..{n - 1}")
        b = np.zeros(n, dtype=complex)
        b[val] = 1.0
        return b
    if kind == "random":
        if val < 0:
            raise DomainError("seed must be non-negative")
        b = complex_normal(val, n)
        return b / np.linalg.norm(b)
    if kind == "banded":
        if val < 0 or 2 * val + 1 > n:
            raise DimensionMismatchError(f"banded window 2L+1 = {2 * val + 1} does not fit n = {n}")
        b = np.zeros(n, dtype=complex)
        c = n // 2
        b[c - val: c + val + 1] = 1.0 / math.sqrt(2 * val + 1)
        return b
    raise DomainError(f"unknown rhs kind {kind!r}\n{RHS_GRAMMAR}")
