import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from s3contact.ambient import (
    as_point,
    covariant_derivative,
    cross4,
    det4,
    inner,
    j_mul,
    reeb,
    tangent_project,
)

R2 = np.sqrt(2) / 2
vec4 = arrays(float, 4, elements=st.floats(-10, 10))


def random_points(rng, n):
    z = rng.normal(size=(n, 4))
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


@pytest.mark.parametrize("v, w, expected", [
    ((1, 0, 0, 0), (1, 0, 0, 0), 1.0),
    ((1, 0, 0, 0), (0, 1, 0, 0), 0.0),
    ((0.5, 0.5, 0.5, 0.5), (1, 0, 0, 0), 0.5),
])
def test_inner_examples(v, w, expected):
    assert inner(v, w) == expected


def test_j_mul_examples():
    np.testing.assert_array_equal(j_mul([1, 0, 0, 0]), [0, 1, 0, 0])
    np.testing.assert_array_equal(j_mul([0, 1, 0, 0]), [-1, 0, 0, 0])
    v = np.array([0.3, -0.1, 0.7, 0.2])
    np.testing.assert_array_equal(j_mul(j_mul(v)), -v)


@settings(max_examples=200)
@given(vec4, vec4)
def test_j_mul_is_isometry(v, w):
    assert inner(j_mul(v), j_mul(w)) == pytest.approx(inner(v, w), abs=1e-12 * (1 + np.abs(v).max() * np.abs(w).max()))


@settings(max_examples=200)
@given(vec4, vec4)
def test_inner_symmetric(v, w):
    assert inner(v, w) == inner(w, v)


def test_reeb_examples():
    np.testing.assert_array_equal(reeb([1, 0, 0, 0]), [0, 1, 0, 0])
    np.testing.assert_allclose(reeb([R2, 0, R2, 0]), [0, R2, 0, R2])


def test_reeb_unit_and_tangent(rng):
    z = random_points(rng, 1000)
    xi = reeb(z)
    assert np.max(np.abs(inner(xi, xi) - 1)) < 1e-12
    assert np.max(np.abs(inner(xi, z))) < 1e-12


def test_tangent_project_examples():
    z = np.array([1.0, 0, 0, 0])
    np.testing.assert_array_equal(tangent_project(z, z), 0)
    np.testing.assert_array_equal(tangent_project(z, [0, 0, 1, 0]), [0, 0, 1, 0])
    np.testing.assert_array_equal(tangent_project(z, [1, 1, 0, 0]), [0, 1, 0, 0])


def test_tangent_project_idempotent_and_self_adjoint(rng):
    z = random_points(rng, 200)
    v, w = rng.normal(size=(2, 200, 4))
    pv = tangent_project(z, v)
    np.testing.assert_allclose(tangent_project(z, pv), pv, atol=1e-12)
    assert np.max(np.abs(inner(pv, z))) < 1e-12
    np.testing.assert_allclose(inner(pv, w), inner(v, tangent_project(z, w)), atol=1e-12)


def test_as_point_rejects_off_sphere():
    as_point([R2, 0, R2, 0])
    with pytest.raises(ValueError):
        as_point([1, 1, 0, 0])
    with pytest.raises(ValueError):
        as_point([1, 0, 0])


def test_covariant_derivative_great_circle():
    t = 0.37
    z = np.array([np.cos(t), 0, np.sin(t), 0])
    V = np.array([-np.sin(t), 0, np.cos(t), 0])  # z'
    dV = -z  # z''
    np.testing.assert_allclose(covariant_derivative(z, V, dV, V), 0, atol=1e-15)


def test_covariant_derivative_constant_field():
    z = np.array([1.0, 0, 0, 0])
    X = np.array([0, 1.0, 0, 0])
    V = np.array([0, 0, 1.0, 0])
    np.testing.assert_array_equal(covariant_derivative(z, X, np.zeros(4), V), 0)


def test_covariant_derivative_clifford_coordinate_line():
    z = np.array([R2, 0, R2, 0])
    X = V = np.array([0, R2, 0, 0])
    dV = np.array([-R2, 0, 0, 0])
    np.testing.assert_allclose(
        covariant_derivative(z, X, dV, V), [-np.sqrt(2) / 4, 0, np.sqrt(2) / 4, 0], atol=1e-15
    )


def test_covariant_derivative_is_tangent(clifford, sphere, rng):
    for patch in (clifford, sphere):
        u0, u1, v0, v1 = patch.domain
        u, v = rng.uniform(u0, u1, 100), rng.uniform(v0, v1, 100)
        j = patch.jet(u, v)
        out = covariant_derivative(j.F, j.Fu, j.Fuv, j.Fv)  # D_{d_u} d_v
        assert np.max(np.abs(inner(out, j.F))) < 1e-10


def test_cross4_orthogonal_and_positive(rng):
    a, b, c = rng.normal(size=(3, 50, 4))
    n = cross4(a, b, c)
    for x in (a, b, c):
        assert np.max(np.abs(inner(n, x))) < 1e-10
    np.testing.assert_allclose(det4(a, b, c, n), inner(n, n), rtol=1e-10)
