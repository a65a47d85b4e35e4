"""Periodic scalar fields on a uniform grid over [0, 2pi).

Everything downstream differentiates with the same fourth-order central
stencil, so its properties (exact on constants, annihilates the alternating
Nyquist mode) are load-bearing and documented here once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import GridMismatch

TWO_PI = 2.0 * np.pi


def _validate_grid_n(n: int) -> None:
    if n < 8 or n % 2 != 0:
        raise ValueError(f"grid size must be even and >= 8, got {n}")


def theta_grid(n: int) -> np.ndarray:
    """Nodes theta_k = 2*pi*k/n for k = 0..n-1."""
    _validate_grid_n(n)
    return np.arange(n) * (TWO_PI / n)


def diff4(values: np.ndarray) -> np.ndarray:
    """Fourth-order central difference along axis 0 of periodic samples.

    Exact (bitwise zero) on constant data because the forward and backward
    shifts cancel before any division happens.
    """
    a = np.asarray(values, dtype=float)
    h = TWO_PI / a.shape[0]
    return (
        8.0 * (np.roll(a, -1, axis=0) - np.roll(a, 1, axis=0))
        - (np.roll(a, -2, axis=0) - np.roll(a, 2, axis=0))
    ) / (12.0 * h)


def diff4_symbol(n: int) -> np.ndarray:
    """Per-mode derivative factors of the stencil, in rfft bin order.

    Applying diff4 to exp(i*m*theta) multiplies it by 1j*lam[m] with
    lam[m] = (8 sin(m h) - sin(2 m h)) / (6 h).  lam vanishes for m = 0 and
    for the Nyquist bin m = n/2.
    """
    h = TWO_PI / n
    m = np.arange(n // 2 + 1)
    return (8.0 * np.sin(m * h) - np.sin(2.0 * m * h)) / (6.0 * h)


def periodic_primitive(values: np.ndarray) -> np.ndarray:
    """Solve diff4(p) = values exactly on the modes the stencil can see.

    The stencil has a two-dimensional kernel (constants and the alternating
    Nyquist mode), so those components of the input are unreachable and are
    dropped; the returned primitive has zero grid mean.
    """
    w = np.asarray(values, dtype=float)
    n = w.shape[0]
    _validate_grid_n(n)
    spec = np.fft.rfft(w)
    lam = diff4_symbol(n)
    out = np.zeros_like(spec)
    out[1:-1] = spec[1:-1] / (1j * lam[1:-1])
    return np.fft.irfft(out, n)


@dataclass(frozen=True, eq=False)
class PeriodicScalarField:
    """Real samples of a periodic function at the nodes theta_grid(n)."""

    samples: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=float).copy()
        if arr.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        _validate_grid_n(arr.shape[0])
        if not np.all(np.isfinite(arr)):
            raise ValueError("samples must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)

    @property
    def grid_n(self) -> int:
        return self.samples.shape[0]

    @classmethod
    def from_function(cls, fn: Callable[[np.ndarray], np.ndarray], n: int) -> "PeriodicScalarField":
        return cls(np.broadcast_to(np.asarray(fn(theta_grid(n)), dtype=float), (n,)))

    @classmethod
    def constant(cls, value: float, n: int) -> "PeriodicScalarField":
        return cls(np.full(n, float(value)))

    def _coerce(self, other):
        if isinstance(other, PeriodicScalarField):
            if other.grid_n != self.grid_n:
                raise GridMismatch(
                    f"fields sampled on different grids: {self.grid_n} vs {other.grid_n}"
                )
            return other.samples
        return float(other)

    def __add__(self, other):
        return PeriodicScalarField(self.samples + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return PeriodicScalarField(self.samples - self._coerce(other))

    def __rsub__(self, other):
        return PeriodicScalarField(self._coerce(other) - self.samples)

    def __mul__(self, other):
        return PeriodicScalarField(self.samples * self._coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return PeriodicScalarField(self.samples / self._coerce(other))

    def __neg__(self):
        return PeriodicScalarField(-self.samples)

    def min(self) -> float:
        return float(self.samples.min())

    def max(self) -> float:
        return float(self.samples.max())

    def max_abs(self) -> float:
        return float(np.abs(self.samples).max())

    def mean(self) -> float:
        return float(self.samples.mean())


def deriv_theta(u: PeriodicScalarField) -> PeriodicScalarField:
    """Fourth-order finite-difference derivative d/dtheta."""
    return PeriodicScalarField(diff4(u.samples))


def trig_basis(n: int, max_mode: int) -> list[PeriodicScalarField]:
    """The functions 1, cos(k theta), sin(k theta) for k = 1..max_mode.

    Note that on n nodes the sine at the Nyquist mode n/2 samples to zero;
    callers that count ranks have to account for that.
    """
    theta = theta_grid(n)
    basis = [PeriodicScalarField.constant(1.0, n)]
    for k in range(1, max_mode + 1):
        basis.append(PeriodicScalarField(np.cos(k * theta)))
        basis.append(PeriodicScalarField(np.sin(k * theta)))
    return basis
