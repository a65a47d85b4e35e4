"""Decomposing one-forms on the circle into sums of a*db terms.

A one-form alpha is stored through its values alpha(d_theta) on the grid.
The basic building block is the antisymmetric combination
a*db - b*da; the decomposition routines express any sampled one-form as a
short sum of such terms using a fixed four-chart atlas with sin/cos
coordinates and a smooth partition of unity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import GridMismatch, NotPositive, SupportViolation
from .fields import (
    PeriodicScalarField,
    TWO_PI,
    _validate_grid_n,
    deriv_theta,
    theta_grid,
)


@dataclass(frozen=True, eq=False)
class OneFormSamples:
    """Values alpha(d_theta) at the grid nodes."""

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


@dataclass(frozen=True, eq=False)
class ABDecomposition:
    """A sum of terms coeff * (a db - b da), each factor a scalar field."""

    terms: tuple

    def __post_init__(self):
        terms = tuple(self.terms)
        grids = {a.grid_n for _, a, _ in terms} | {b.grid_n for _, _, b in terms}
        if len(grids) > 1:
            raise GridMismatch(f"terms live on different grids: {sorted(grids)}")
        object.__setattr__(self, "terms", terms)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def grid_n(self) -> int | None:
        return self.terms[0][1].grid_n if self.terms else None

    def to_json_obj(self) -> list[dict]:
        return [
            {"coeff": float(coeff), "a": a.samples.tolist(), "b": b.samples.tolist()}
            for coeff, a, b in self.terms
        ]

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


def ab_form(a: PeriodicScalarField, b: PeriodicScalarField) -> OneFormSamples:
    """The one-form a db - b da evaluated on d_theta."""
    if a.grid_n != b.grid_n:
        raise GridMismatch("a and b use different grids")
    return OneFormSamples(
        a.samples * deriv_theta(b).samples - b.samples * deriv_theta(a).samples
    )


def reconstruct(dec: ABDecomposition, n: int | None = None) -> OneFormSamples:
    """Sum coeff * (a db - b da) over the terms of a decomposition."""
    if not dec.terms:
        if n is None:
            raise ValueError("empty decomposition needs an explicit grid size")
        return OneFormSamples(np.zeros(n))
    total = np.zeros(dec.grid_n)
    for coeff, a, b in dec.terms:
        total += coeff * ab_form(a, b).samples
    return OneFormSamples(total)


def span_positive(f: PeriodicScalarField, g: PeriodicScalarField) -> ABDecomposition:
    """Write f dg with strictly positive f as a single a db - b da term.

    Uses a = sqrt(f exp(-g)), b = sqrt(f exp(g)); then a db - b da = f dg
    identically, so the only reconstruction error is the differentiation
    error on the two square-root composites.
    """
    if f.grid_n != g.grid_n:
        raise GridMismatch("f and g use different grids")
    if f.min() <= 0.0:
        raise NotPositive(f"min f = {f.min():.3e}, need strictly positive f")
    a = PeriodicScalarField(np.sqrt(f.samples * np.exp(-g.samples)))
    b = PeriodicScalarField(np.sqrt(f.samples * np.exp(g.samples)))
    return ABDecomposition(((1.0, a, b),))


def span_fdg(f: PeriodicScalarField, g: PeriodicScalarField) -> ABDecomposition:
    """Write f dg for arbitrary f as at most two a db - b da terms.

    Shifts f up by C + 1 with C = max(0, -min f) so the positive-coefficient
    construction applies, then subtracts the constant shift using the exact
    term (C + 1) * (1 dg): with a = 1, da vanishes identically under the
    stencil, so that correction term introduces no extra error.
    """
    if f.grid_n != g.grid_n:
        raise GridMismatch("f and g use different grids")
    shift = max(0.0, -f.min()) + 1.0
    lifted = span_positive(f + shift, g)
    one = PeriodicScalarField.constant(1.0, g.grid_n)
    return ABDecomposition(lifted.terms + ((-shift, one, g),))


_BUMP_HALF_WIDTH = 3.0 * np.pi / 8.0
_CHART_CENTERS = (0.0, np.pi / 2.0, np.pi, 3.0 * np.pi / 2.0)


def _bump(t: np.ndarray) -> np.ndarray:
    """Standard smooth bump exp(-1/(1-t^2)) on (-1, 1), exactly 0 outside."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    ti = t[inside]
    out[inside] = np.exp(-1.0 / (1.0 - ti * ti))
    return out


def _circular_distance(theta: np.ndarray, center: float) -> np.ndarray:
    d = np.abs((theta - center) % TWO_PI)
    return np.minimum(d, TWO_PI - d)


@dataclass(frozen=True, eq=False)
class ChartAtlas:
    """Four overlapping arcs with sin/cos coordinates and a partition of unity.

    Arcs are centered at 0, pi/2, pi, 3pi/2 with half-width 3pi/8.  The
    coordinate is sin(theta) on the arcs around 0 and pi and cos(theta) on
    the arcs around pi/2 and 3pi/2, so its derivative stays bounded away
    from zero (by cos(3pi/8)) on each support.
    """

    grid_n: int
    partitions: tuple
    coords: tuple
    centers: tuple = _CHART_CENTERS
    half_width: float = _BUMP_HALF_WIDTH

    @property
    def num_charts(self) -> int:
        return len(self.partitions)


def build_atlas(n: int) -> ChartAtlas:
    """The standard four-chart atlas on an n-point grid."""
    theta = theta_grid(n)
    raw = np.stack(
        [_bump(_circular_distance(theta, c) / _BUMP_HALF_WIDTH) for c in _CHART_CENTERS]
    )
    total = raw.sum(axis=0)
    partitions = tuple(PeriodicScalarField(row / total) for row in raw)
    coords = (
        PeriodicScalarField(np.sin(theta)),
        PeriodicScalarField(np.cos(theta)),
        PeriodicScalarField(np.sin(theta)),
        PeriodicScalarField(np.cos(theta)),
    )
    return ChartAtlas(grid_n=n, partitions=partitions, coords=coords)


def decompose_oneform(
    alpha: OneFormSamples, atlas: ChartAtlas | None = None
) -> ABDecomposition:
    """Express alpha as a short sum of a db - b da terms (at most eight).

    Per chart, f_i = (phi_i * alpha) / (d coord_i) on the support of phi_i
    (extended by exact zeros outside) satisfies sum_i f_i d(coord_i) = alpha
    exactly at the sample level, and each f_i d(coord_i) is handled by
    span_fdg.  Charts where phi_i * alpha vanishes identically are skipped,
    so the zero form yields an empty decomposition.
    """
    if atlas is None:
        atlas = build_atlas(alpha.grid_n)
    if atlas.grid_n != alpha.grid_n:
        raise GridMismatch("atlas and one-form use different grids")
    terms = []
    for phi, coord in zip(atlas.partitions, atlas.coords):
        masked = phi.samples * alpha.samples
        if not masked.any():
            continue
        support = phi.samples > 0.0
        f = np.zeros(alpha.grid_n)
        f[support] = masked[support] / deriv_theta(coord).samples[support]
        terms.extend(span_fdg(PeriodicScalarField(f), coord).terms)
    return ABDecomposition(tuple(terms))


def _smoothstep(x: np.ndarray) -> np.ndarray:
    """C-infinity ramp: exactly 0 for x <= 0, exactly 1 for x >= 1."""
    x = np.asarray(x, dtype=float)
    lo = np.exp(-1.0 / np.maximum(x, 1e-300)) * (x > 0.0)
    hi = np.exp(-1.0 / np.maximum(1.0 - x, 1e-300)) * (x < 1.0)
    out = np.where(x <= 0.0, 0.0, np.where(x >= 1.0, 1.0, lo / (lo + hi)))
    return out


def _window_offsets(theta: np.ndarray, lo: float, hi: float) -> tuple[np.ndarray, float]:
    """Offsets of each node from the window start, and the window length."""
    length = (hi - lo) % TWO_PI
    if length == 0.0:
        length = TWO_PI
    return (theta - lo) % TWO_PI, length


def decompose_supported(
    alpha: OneFormSamples, window: tuple[float, float]
) -> ABDecomposition:
    """Decompose alpha keeping every term supported inside the window.

    The window is the open arc from window[0] to window[1] (going
    counterclockwise, wrapping if needed).  alpha must vanish (below 1e-12)
    at every node outside it.  Every a and b of the plain decomposition is
    multiplied by a smooth plateau that equals 1 where alpha is nonzero and
    is exactly 0 outside the window, which squares to 1 on the support of
    alpha and so preserves the reconstruction there.
    """
    n = alpha.grid_n
    theta = theta_grid(n)
    lo, hi = float(window[0]), float(window[1])
    offsets, length = _window_offsets(theta, lo, hi)
    inside = (offsets > 0.0) & (offsets < length)

    live = np.abs(alpha.samples) > 1e-12
    if np.any(live & ~inside):
        worst = np.abs(alpha.samples[live & ~inside]).max()
        raise SupportViolation(
            f"one-form reaches {worst:.3e} outside the window ({lo:.6g}, {hi:.6g})"
        )

    base = decompose_oneform(alpha)
    if not live.any() or not base.terms:
        return ABDecomposition(())

    # plateau: ramp up across the gap between the window edge and the first
    # live node, hold 1 over the live arc, ramp back down on the far side
    live_offsets = offsets[live]
    start, end = live_offsets.min(), live_offsets.max()
    rise = _smoothstep(offsets / start) if start > 0.0 else (offsets >= 0.0).astype(float)
    fall = (
        _smoothstep((length - offsets) / (length - end))
        if end < length
        else (offsets <= length).astype(float)
    )
    plateau = np.where(inside, rise * fall, 0.0)
    chi = PeriodicScalarField(plateau)

    terms = tuple((coeff, a * chi, b * chi) for coeff, a, b in base.terms)
    return ABDecomposition(terms)
