"""Shared helpers for the test suite."""

import numpy as np

from norbrack.curves import DiscreteImmersion, SPHERE
from norbrack.fields import theta_grid


def rel_l2(got: np.ndarray, want: np.ndarray) -> float:
    return float(np.linalg.norm(got - want) / max(np.linalg.norm(want), 1.0))


def band_limited(n: int, max_mode: int, rng) -> np.ndarray:
    """Random trigonometric polynomial samples with flat N(0,1) coefficients."""
    theta = theta_grid(n)
    out = np.full(n, rng.standard_normal())
    for k in range(1, max_mode + 1):
        ck, sk = rng.standard_normal(2)
        out = out + ck * np.cos(k * theta) + sk * np.sin(k * theta)
    return out


def wobbly_sphere_curve(n: int, seed: int = 11) -> DiscreteImmersion:
    """A non-circular spherical curve: perturbed latitude, renormalized."""
    rng = np.random.default_rng(seed)
    theta = theta_grid(n)
    r = 0.8
    pts = np.column_stack(
        [r * np.cos(theta), r * np.sin(theta), np.full(n, np.sqrt(1 - r * r))]
    )
    pts[:, 2] += 0.1 * rng.standard_normal() * np.cos(theta) + 0.05 * np.sin(2 * theta)
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    return DiscreteImmersion(pts, SPHERE)
