import numpy as np
import pytest

from hypcone.errors import DomainError, ModelViolation, PreconditionError
from hypcone.hyperbolic import (
    dist,
    exp_point,
    inclusion,
    is_point,
    normalize_point,
    random_tangent,
    umbilic_check,
)
from hypcone.lorentz import minkowski_dot


def test_exp_at_base_point():
    p = np.array([1.0, 0, 0, 0, 0])
    v = np.array([0.0, 1, 0, 0, 0])
    np.testing.assert_allclose(exp_point(p, v), [np.cosh(1.0), np.sinh(1.0), 0, 0, 0], atol=1e-15)
    np.testing.assert_array_equal(exp_point(p, 0 * v), p)


def test_exp_dist_inversion(rng):
    y = rng.normal(size=(500, 4))
    base = np.column_stack([np.sqrt(1 + np.sum(y * y, axis=1)), y])
    v = random_tangent(base, rng, scale=5.0)
    q = exp_point(base, v)
    assert is_point(q, tol=1e-8)
    norm = np.sqrt(minkowski_dot(v, v))
    assert np.max(np.abs(dist(base, q) - norm)) < 1e-10


def test_dist_small_separation_is_accurate():
    p = np.array([1.0, 0, 0])
    q = exp_point(p, np.array([0.0, 1e-9, 0]))
    assert dist(p, q) == pytest.approx(1e-9, rel=1e-6)


def test_errors():
    p = np.array([1.0, 0, 0])
    with pytest.raises(PreconditionError):
        exp_point(p, np.array([1.0, 0, 0]))
    with pytest.raises(ModelViolation):
        dist(p, -p)
    with pytest.raises(ModelViolation):
        normalize_point(np.array([0.0, 1.0, 0.0]))


def test_equidistant_constants():
    inc = inclusion("equidistant", 4, d=np.arccosh(2.0))
    assert inc.curvature == pytest.approx(-0.25, abs=1e-15)
    assert inc.hnorm == pytest.approx(np.sqrt(3) / 2, abs=1e-15)
    assert inc.model == "hyperbolic"


@pytest.mark.parametrize(
    "kind, kwargs, c, hnorm",
    [
        ("horosphere", {}, 0.0, 1.0),
        ("totally_geodesic", {}, -1.0, 0.0),
        ("geodesic_sphere", {"rho": 1.0}, 1 / np.sinh(1.0) ** 2, 1.3130352854993315),
        ("equidistant", {"d": 0.7}, -0.6347395899824586, np.tanh(0.7)),
    ],
)
def test_inclusion_constants(kind, kwargs, c, hnorm):
    inc = inclusion(kind, 4, **kwargs)
    assert inc.curvature == pytest.approx(c, abs=1e-14)
    assert inc.hnorm == pytest.approx(hnorm, abs=1e-14)


@pytest.mark.parametrize("kind", ["equidistant", "horosphere", "geodesic_sphere", "totally_geodesic"])
@pytest.mark.parametrize("codim", [1, 2])
def test_umbilic_check_passes(kind, codim, rng):
    inc = inclusion(kind, 5, codim=codim, d=0.7, rho=1.0)
    y = rng.uniform(-0.4, 0.4, size=(inc.dim, 30))
    res = umbilic_check(inc, y)
    assert res.passed, str(res)


def test_included_points_lie_on_hyperboloid_with_orthonormal_normals(rng):
    inc = inclusion("horosphere", 5, codim=2)
    y = rng.uniform(-1, 1, size=(inc.dim, 20))
    point, normals = inc.include(inc.chart(list(y)))
    assert is_point(point)
    for a, eta in enumerate(normals):
        assert np.max(np.abs(minkowski_dot(point, eta))) < 1e-12
        for b, zeta in enumerate(normals):
            assert np.max(np.abs(minkowski_dot(eta, zeta) - (a == b))) < 1e-12


def test_inclusion_validation():
    with pytest.raises(ValueError):
        inclusion("equidistant", 4)
    with pytest.raises(ValueError):
        inclusion("paraboloid", 4)
    with pytest.raises(ValueError):
        inclusion("horosphere", 3, codim=2)
    inc = inclusion("geodesic_sphere", 4, rho=1.0)
    with pytest.raises(PreconditionError):
        inc.include(np.array([2.0, 0, 0, 0]))
    with pytest.raises(DomainError):
        umbilic_check(inc, np.array([[0.9], [0.9], [0.0]]))
