"""Derivatives in the curve variable, torsion, and normal-field brackets."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from norbrack.calculus import (
    bracket_closed_form,
    bracket_numeric,
    constant_field,
    directional_derivative,
    flow_commutator,
    normal_field,
    tangent_field,
    torsion_defect,
    variation_of_normal,
)
from norbrack.curves import (
    PLANE,
    SPHERE,
    DiscreteImmersion,
    ImmersionTangent,
    ellipse,
    frame,
    great_circle,
    pointwise_inner,
    unit_circle,
)
from norbrack.errors import GridMismatch, StepTooLarge
from norbrack.fields import PeriodicScalarField, theta_grid

from conftest import wobbly_sphere_curve


def trig(fn, k, n):
    return PeriodicScalarField(fn(k * theta_grid(n)))


def test_directional_derivative_of_constant_field_is_exact_zero():
    c = unit_circle(64)
    v, _ = frame(c)
    out = directional_derivative(constant_field((0.3, -1.1)), c, v, 1e-5)
    assert np.array_equal(out.vectors, np.zeros((64, 2)))


def test_directional_derivative_rotation_examples():
    # moving the unit circle along v rotates it, so n turns into -v;
    # moving along n rescales it, which leaves the unit normal alone
    c = unit_circle(256)
    v, nn = frame(c)
    d_along_v = directional_derivative(normal_field(), c, v, 1e-5)
    assert (d_along_v + v).max_norm() <= 1e-8
    d_along_n = directional_derivative(normal_field(), c, nn, 1e-5)
    assert d_along_n.max_norm() <= 1e-8


def test_directional_derivative_step_validation():
    c = unit_circle(64)
    v, _ = frame(c)
    with pytest.raises(ValueError):
        directional_derivative(normal_field(), c, v, 0.0)
    with pytest.raises(StepTooLarge):
        directional_derivative(normal_field(), c, v, 0.2)


def test_flow_commutator_rejects_nonpositive_eps():
    c = unit_circle(64)
    with pytest.raises(ValueError):
        flow_commutator(c, normal_field(), tangent_field(), -1e-4)


def test_torsion_defect_constants_plane():
    c = ellipse(128, 2.0, 1.0)
    x = constant_field((1.0, 0.0))
    y = constant_field((0.0, 1.0))
    assert torsion_defect(c, x, y, 1e-4) <= 1e-10


def test_torsion_defect_normal_pair_circle():
    n = 256
    a = trig(np.cos, 1, n)
    b = trig(np.sin, 1, n)
    defect = torsion_defect(unit_circle(n), normal_field(a), normal_field(b), 1e-4)
    assert defect <= 1e-3
    assert defect <= 1e-6  # regression pin, measured 6.6e-8


def test_torsion_defect_normal_pair_sphere():
    n = 256
    a = trig(np.cos, 1, n)
    b = trig(np.sin, 1, n)
    defect = torsion_defect(great_circle(n), normal_field(a), normal_field(b), 1e-4)
    assert defect <= 1e-2
    assert defect <= 1e-6


def test_variation_of_normal_examples():
    n = 256
    th = theta_grid(n)
    c = unit_circle(n)
    v, nn = frame(c)

    assert variation_of_normal(c, nn).max_norm() <= 1e-12

    h = nn * PeriodicScalarField(np.cos(th))
    want = v * PeriodicScalarField(np.sin(th))
    assert (variation_of_normal(c, h) - want).max_norm() <= 1e-12

    assert (variation_of_normal(c, v) + v).max_norm() <= 1e-12


def test_variation_matches_numeric_derivative_of_normal():
    n = 256
    c = ellipse(n, 2.0, 1.0)
    v, nn = frame(c)
    h = nn * trig(np.cos, 2, n)
    numeric = directional_derivative(normal_field(), c, h, 1e-4)
    assert (variation_of_normal(c, h) - numeric).max_norm() <= 1e-3


def test_bracket_closed_form_degenerate_inputs_vanish():
    n = 128
    c = unit_circle(n)
    a = trig(np.cos, 3, n)
    assert bracket_closed_form(c, a, a).max_norm() == 0.0
    one = PeriodicScalarField.constant(1.0, n)
    two = PeriodicScalarField.constant(2.0, n)
    assert bracket_closed_form(c, one, two).max_norm() == 0.0


def test_bracket_closed_form_cos_sin_is_unit_tangent():
    n = 256
    c = unit_circle(n)
    v, _ = frame(c)
    out = bracket_closed_form(c, trig(np.cos, 1, n), trig(np.sin, 1, n))
    assert (out - v).max_norm() <= 1e-12


def test_bracket_closed_form_grid_mismatch():
    with pytest.raises(GridMismatch):
        bracket_closed_form(
            unit_circle(64),
            PeriodicScalarField.constant(1.0, 32),
            PeriodicScalarField.constant(1.0, 32),
        )


@given(seed=st.integers(min_value=0, max_value=5_000))
@settings(max_examples=30, deadline=None)
def test_bracket_closed_form_antisymmetry_is_bitwise(seed):
    n = 64
    rng = np.random.default_rng(seed)
    c = unit_circle(n)
    a = PeriodicScalarField(rng.standard_normal(n))
    b = PeriodicScalarField(rng.standard_normal(n))
    assert np.array_equal(
        bracket_closed_form(c, a, b).vectors, -bracket_closed_form(c, b, a).vectors
    )


@given(
    s=st.floats(-3, 3), t=st.floats(-3, 3),
    seed=st.integers(min_value=0, max_value=1_000),
)
@settings(max_examples=25, deadline=None)
def test_bracket_closed_form_bilinearity(s, t, seed):
    n = 64
    rng = np.random.default_rng(seed)
    c = ellipse(n, 2.0, 1.0)
    a1 = PeriodicScalarField(rng.standard_normal(n))
    a2 = PeriodicScalarField(rng.standard_normal(n))
    b = PeriodicScalarField(rng.standard_normal(n))
    combo = bracket_closed_form(c, a1 * s + a2 * t, b)
    parts = bracket_closed_form(c, a1, b) * s + bracket_closed_form(c, a2, b) * t
    assert (combo - parts).max_norm() <= 1e-10


def test_bracket_numeric_equal_constant_coefficients_vanish():
    n = 128
    one = PeriodicScalarField.constant(1.0, n)
    out = bracket_numeric(unit_circle(n), one, one, eps=1e-5)
    assert out.max_norm() <= 1e-8


def test_bracket_numeric_circle_cos_sin():
    n = 256
    c = unit_circle(n)
    v, _ = frame(c)
    out = bracket_numeric(c, trig(np.cos, 1, n), trig(np.sin, 1, n), eps=1e-5)
    assert (out - v).max_norm() <= 1e-3
    assert (out - v).max_norm() <= 1e-5  # measured 1.8e-7


def test_bracket_numeric_sphere_matches_closed_form():
    n = 256
    c = great_circle(n)
    a, b = trig(np.cos, 1, n), trig(np.sin, 1, n)
    diff = bracket_numeric(c, a, b, eps=1e-5) - bracket_closed_form(c, a, b)
    assert diff.max_norm() <= 1e-2
    assert diff.max_norm() <= 1e-4


@pytest.mark.parametrize(
    "make_curve, tol",
    [
        (lambda: ellipse(256, 2.0, 1.0), 1e-3),
        (lambda: wobbly_sphere_curve(256), 1e-2),
    ],
)
def test_bracket_agreement_off_circle(make_curve, tol):
    n = 256
    c = make_curve()
    a, b = trig(np.cos, 1, n), trig(np.sin, 2, n)
    diff = bracket_numeric(c, a, b, eps=1e-5) - bracket_closed_form(c, a, b)
    assert diff.max_norm() <= tol


@pytest.mark.parametrize("make_curve", [lambda: ellipse(256, 2.0, 1.0), lambda: great_circle(256)])
def test_bracket_outputs_are_tangential(make_curve):
    n = 256
    c = make_curve()
    _, nn = frame(c)
    a, b = trig(np.cos, 2, n), trig(np.sin, 1, n)
    closed = bracket_closed_form(c, a, b)
    assert pointwise_inner(closed, nn).max_abs() <= 1e-13
    numeric = bracket_numeric(c, a, b, eps=1e-5)
    assert pointwise_inner(numeric, nn).max_abs() <= 1e-3


def test_constant_field_dimension_mismatch():
    with pytest.raises(GridMismatch):
        constant_field((1.0, 0.0))(great_circle(64))


def test_curve_field_algebra():
    c = unit_circle(64)
    v, nn = frame(c)
    combo = (2.0 * normal_field() - tangent_field())(c)
    want = nn * 2.0 - v
    assert (combo - want).max_norm() == 0.0
