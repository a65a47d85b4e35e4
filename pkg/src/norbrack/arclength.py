"""Deformations that stretch a curve uniformly, and flows along them.

A deformation h is arclength-uniform when u = <D_s h, v> (the logarithmic
stretch rate of the speed) is constant along the curve.  Flowing a curve
only through such deformations multiplies its speed profile by a scalar
function of time, so curves of proportional speed stay proportional; the
leaf_invariant measures how well a flow preserved that.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .calculus import CurveField, bracket_of_fields
from .curves import (
    PLANE,
    DiscreteImmersion,
    ImmersionTangent,
    _check_attached,
    frame,
    save_curve_csv,
    speed,
)
from .errors import GridMismatch
from .fields import PeriodicScalarField, diff4, periodic_primitive


@dataclass(frozen=True, eq=False)
class ArcDefect:
    """Stretch rate u = <D_s h, v>, its arclength derivative, and its size."""

    u: PeriodicScalarField
    defect: PeriodicScalarField
    defect_norm: float


def arc_defect(c: DiscreteImmersion, h: ImmersionTangent) -> ArcDefect:
    """How far h is from stretching the curve uniformly (D_s u = 0)."""
    _check_attached(c, h)
    s = speed(c).samples
    v, _ = frame(c)
    u = np.sum((diff4(h.vectors) / s[:, None]) * v.vectors, axis=1)
    defect = diff4(u) / s
    return ArcDefect(
        u=PeriodicScalarField(u),
        defect=PeriodicScalarField(defect),
        defect_norm=float(np.abs(defect).max()),
    )


def _arclength_mean(values: np.ndarray, s: np.ndarray) -> float:
    # uniform-grid trapezoid of a periodic integrand reduces to plain sums
    return float(np.sum(values * s) / np.sum(s))


def project_to_arc(
    c: DiscreteImmersion, h: ImmersionTangent, passes: int = 3
) -> ImmersionTangent:
    """Add the tangential correction psi * v that equalizes u to its mean.

    psi solves D_s psi = mean(u) - u: its periodic primitive is obtained by
    inverting the difference stencil itself (not by quadrature), so the
    corrected stretch rate is constant to the same accuracy the defect is
    measured with.  A few fixed passes absorb the stencil's product-rule
    residue, making the map idempotent to rounding while staying linear in
    h (no data-dependent branching).
    """
    _check_attached(c, h)
    s = speed(c).samples
    v, _ = frame(c)
    vectors = np.array(h.vectors)
    for _ in range(passes):
        u = np.sum((diff4(vectors) / s[:, None]) * v.vectors, axis=1)
        w = (_arclength_mean(u, s) - u) * s
        psi = periodic_primitive(w)
        psi -= _arclength_mean(psi, s)
        vectors += psi[:, None] * v.vectors
    return ImmersionTangent(vectors, c)


def _rk4(
    c0: DiscreteImmersion, velocity, t: float, steps: int
) -> DiscreteImmersion:
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if t == 0.0:
        return c0
    dt = t / steps
    pts = np.array(c0.points)
    for _ in range(steps):
        k1 = velocity(pts)
        k2 = velocity(pts + (0.5 * dt) * k1)
        k3 = velocity(pts + (0.5 * dt) * k2)
        k4 = velocity(pts + dt * k3)
        pts = pts + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return DiscreteImmersion(pts, c0.ambient)


def flow_arc(
    c0: DiscreteImmersion, field: CurveField, t: float, steps: int = 100
) -> DiscreteImmersion:
    """RK4 flow of the projected field: dc/dt = project_to_arc(c, F(c)).

    Every stage evaluation rebuilds the curve and recomputes its speed, so
    a flow that pinches the curve raises ImmersionDegenerate mid-way.
    """
    if c0.ambient != PLANE:
        raise ValueError("arc flows are defined for plane curves only")

    def velocity(pts: np.ndarray) -> np.ndarray:
        c = DiscreteImmersion(pts, c0.ambient)
        return project_to_arc(c, field(c)).vectors

    return _rk4(c0, velocity, t, steps)


def flow_field(
    c0: DiscreteImmersion, field: CurveField, t: float, steps: int = 100
) -> DiscreteImmersion:
    """RK4 flow of a field as given, with no projection (control runs)."""
    if c0.ambient != PLANE:
        raise ValueError("arc flows are defined for plane curves only")

    def velocity(pts: np.ndarray) -> np.ndarray:
        c = DiscreteImmersion(pts, c0.ambient)
        return field(c).vectors

    return _rk4(c0, velocity, t, steps)


def flow_trajectory(
    c0: DiscreteImmersion,
    field: CurveField,
    t: float,
    steps: int = 100,
    sample_every: int = 1,
) -> list[DiscreteImmersion]:
    """Projected flow like flow_arc, returning intermediate curves too."""
    if sample_every < 1:
        raise ValueError("sample_every must be >= 1")
    frames = [c0]
    current = c0
    done = 0
    while done < steps:
        chunk = min(sample_every, steps - done)
        current = flow_arc(current, field, t * chunk / steps, steps=chunk)
        frames.append(current)
        done += chunk
    return frames


def write_flow_frames(frames, directory, stem: str = "frame") -> list[str]:
    """Save each curve of a trajectory as <stem>_<index>.csv in a directory."""
    os.makedirs(directory, exist_ok=True)
    paths = []
    for idx, frame_curve in enumerate(frames):
        path = os.path.join(directory, f"{stem}_{idx:04d}.csv")
        save_curve_csv(frame_curve, path)
        paths.append(path)
    return paths


def leaf_invariant(c0: DiscreteImmersion, c1: DiscreteImmersion) -> float:
    """Relative spread of the speed ratio between two curves.

    Zero means c1's speed profile is a scalar multiple of c0's, i.e. both
    curves lie on the same leaf of proportional-speed curves.
    """
    if c0.grid_n != c1.grid_n:
        raise GridMismatch("curves use different grids")
    r = speed(c1).samples / speed(c0).samples
    mean = r.mean()
    return float(np.abs(r - mean).max() / mean)


def frobenius_defect(
    c: DiscreteImmersion, f1: CurveField, f2: CurveField, eps: float
) -> float:
    """Defect of the bracket of two projected fields.

    Projects both fields, brackets them numerically, and measures how far
    the bracket itself is from stretching uniformly.  Small values mean the
    projected fields' flows stay on the leaves they started on.
    """

    def projected(field: CurveField) -> CurveField:
        return CurveField(lambda cc: project_to_arc(cc, field(cc)), f"P[{field.name}]")

    bracket = bracket_of_fields(projected(f1), projected(f2), c, eps)
    return arc_defect(c, bracket).defect_norm
