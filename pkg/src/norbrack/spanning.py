"""Rank checks for normal deformation fields and their brackets.

The generating set is the trigonometric family a_j * n together with the
closed-form brackets of all pairs.  Stacking everything as columns over the
plane coordinates and ranking by SVD tests whether normal motions plus their
first brackets already move a discrete curve in every direction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .curves import PLANE, DiscreteImmersion, ImmersionTangent, frame, speed
from .errors import BasisTooLarge, GridMismatch
from .fields import PeriodicScalarField, trig_basis
from .calculus import bracket_closed_form
from .oneforms import ABDecomposition, OneFormSamples, decompose_oneform

DEFAULT_RANK_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class SpanReport:
    """Outcome of a spanning check: spectrum, rank and the pass verdict."""

    grid_n: int
    modes: int
    num_generators: int
    singular_values: np.ndarray
    rank: int
    full: bool
    rank_tol: float

    @property
    def sigma_min(self) -> float:
        return float(self.singular_values[-1])

    @property
    def sigma_max(self) -> float:
        return float(self.singular_values[0])

    def to_json_obj(self) -> dict:
        return {
            "n": self.grid_n,
            "K": self.modes,
            "m": self.num_generators,
            "rank": self.rank,
            "full": self.full,
            "sigma_min": self.sigma_min,
            "sigma_max": self.sigma_max,
            "rank_tol": self.rank_tol,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


def _check_modes(n: int, max_mode: int) -> None:
    # the basis saturates the n-dimensional sample space at max_mode = n/2
    # (where the sine Nyquist entry samples to zero); beyond that every new
    # function aliases an existing one
    if 2 * max_mode + 1 > n + 1:
        raise BasisTooLarge(
            f"{2 * max_mode + 1} trig functions on {n} nodes (max is n/2 modes)"
        )


def normal_generators(c: DiscreteImmersion, max_mode: int) -> list[ImmersionTangent]:
    """The fields a_j * n for the trig basis up to max_mode (2K+1 fields)."""
    _check_modes(c.grid_n, max_mode)
    _, n = frame(c)
    return [n * a for a in trig_basis(c.grid_n, max_mode)]


def bracket_generators(c: DiscreteImmersion, max_mode: int) -> list[ImmersionTangent]:
    """Closed-form brackets of all distinct pairs from the trig basis."""
    _check_modes(c.grid_n, max_mode)
    basis = trig_basis(c.grid_n, max_mode)
    out = []
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            out.append(bracket_closed_form(c, basis[i], basis[j]))
    return out


def verify_spanning(
    c: DiscreteImmersion, max_mode: int, rank_tol: float = DEFAULT_RANK_TOL
) -> SpanReport:
    """SVD rank of the normal + bracket generators, stacked as 2N columns.

    Columns are normalized to unit length (zero columns are left alone, they
    cannot change the rank); rank counts singular values at or above
    rank_tol times the largest one, and full means rank == 2 * grid_n.
    """
    if c.ambient != PLANE:
        raise ValueError("spanning verification is defined for plane curves only")
    generators = normal_generators(c, max_mode) + bracket_generators(c, max_mode)
    matrix = np.column_stack([g.vectors.reshape(-1) for g in generators])
    norms = np.linalg.norm(matrix, axis=0)
    keep = norms > 0.0
    matrix[:, keep] /= norms[keep]
    sigma = np.linalg.svd(matrix, compute_uv=False)
    rank = int(np.sum(sigma >= rank_tol * sigma[0]))
    return SpanReport(
        grid_n=c.grid_n,
        modes=max_mode,
        num_generators=len(generators),
        singular_values=sigma,
        rank=rank,
        full=rank == 2 * c.grid_n,
        rank_tol=rank_tol,
    )


def synthesize_tangential(c: DiscreteImmersion, m: PeriodicScalarField) -> ABDecomposition:
    """Coefficients writing the reparametrization field m * d_theta(c) as a
    combination of closed-form brackets.

    Since [a n, b n] = (1/speed) * (a db - b da)(d_theta) * v, decomposing
    the one-form with values m * speed^2 produces pairs whose brackets sum
    to m * speed * v = m * d_theta(c).
    """
    if m.grid_n != c.grid_n:
        raise GridMismatch("coefficient field and curve use different grids")
    s = speed(c)
    alpha = OneFormSamples((m * s * s).samples)
    return decompose_oneform(alpha)
