import numpy as np
import pytest

from hypcone.cone import surface_catalog
from hypcone.errors import DomainError
from hypcone.jets import Jet, ParamMap, coords, directional_derivative3, eval_jet2


def helicoid_map():
    f = surface_catalog("helicoid_h3", a=1.0, b=1.0).func
    return ParamMap(f, 2, 4, (-2.0, -3.0), (2.0, 3.0), "helicoid")


def test_affine_map():
    A = np.array([[1.0, 2.0], [0.5, -1.0], [3.0, 0.0]])

    def func(x):
        return coords(*(A[k, 0] * x[0] + A[k, 1] * x[1] + 1.0 for k in range(3)))

    pm = ParamMap(func, 2, 3, (-1, -1), (1, 1))
    for backend in ("exact-jet", "finite-difference"):
        j = eval_jet2(pm, np.array([0.2, -0.3]), backend)
        np.testing.assert_allclose(j.grad, A.T, atol=1e-9)
        assert np.max(np.abs(j.hess)) < 1e-6


def test_hyperbolic_curve_derivatives():
    pm = ParamMap(lambda x: coords(np.cosh(x[0]), np.sinh(x[0]), 0.0 * x[0]), 1, 3, (-1,), (1,))
    j = eval_jet2(pm, np.array([0.0]))
    np.testing.assert_allclose(j.grad[0], [0.0, 1.0, 0.0])
    np.testing.assert_allclose(j.hess[0, 0], [1.0, 0.0, 0.0])


def test_backends_agree_on_helicoid(rng):
    pm = helicoid_map()
    x = rng.uniform([-1.5, -2.5], [1.5, 2.5], size=(50, 2)).T
    a = eval_jet2(pm, x, "exact-jet")
    b = eval_jet2(pm, x, "finite-difference")
    assert np.max(np.abs(a.grad - b.grad)) < 1e-6
    assert np.max(np.abs(a.hess - b.hess)) < 1e-4
    # exact jets against an independent hand-differentiated gradient
    u, v = x
    du = np.stack([np.sinh(u) * np.cosh(v), np.sinh(u) * np.sinh(v), np.cosh(u) * np.cos(v), np.cosh(u) * np.sin(v)], -1)
    assert np.max(np.abs(a.grad[..., 0, :] - du)) < 1e-12


def test_hessian_symmetric_structurally():
    j = eval_jet2(helicoid_map(), np.array([0.3, 0.4]))
    np.testing.assert_array_equal(j.hess, np.swapaxes(j.hess, 0, 1))


def test_jet_ufuncs_match_hand_derivatives():
    x = Jet.variables(np.array([0.7]))[0]
    for f, f1, f2 in [
        (np.tanh(x), 1 / np.cosh(0.7) ** 2, -2 * np.tanh(0.7) / np.cosh(0.7) ** 2),
        (np.sqrt(x), 0.5 / np.sqrt(0.7), -0.25 * 0.7**-1.5),
        (1.0 / x, -1 / 0.49, 2 / 0.343),
        (x**3, 3 * 0.49, 6 * 0.7),
        (np.log(x), 1 / 0.7, -1 / 0.49),
    ]:
        assert float(f.g[0]) == pytest.approx(f1, rel=1e-12)
        assert float(f.h[0, 0]) == pytest.approx(f2, rel=1e-12)


def test_third_directional_derivative():
    cubic = ParamMap(lambda x: coords(x[0] ** 3, 0.0 * x[0]), 1, 2, (-1,), (1,))
    d3 = directional_derivative3(cubic, np.array([0.2]), np.array([1.0]))
    np.testing.assert_allclose(d3, [6.0, 0.0], atol=1e-6)
    ch = ParamMap(lambda x: coords(np.cosh(x[0]), 0.0 * x[0]), 1, 2, (-1,), (1,))
    assert abs(directional_derivative3(ch, np.array([0.0]), np.array([1.0]))[0]) < 1e-8


def test_third_derivative_step_halving(rng):
    pm = helicoid_map()
    x = np.array([0.3, 0.5])
    d = rng.normal(size=2)
    a = directional_derivative3(pm, x, d, h=1e-3)
    b = directional_derivative3(pm, x, d, h=5e-4)
    assert np.max(np.abs(a - b)) < 1e-5


def test_domain_errors():
    pm = helicoid_map()
    with pytest.raises(DomainError):
        eval_jet2(pm, np.array([5.0, 0.0]))
    with pytest.raises(DomainError):
        eval_jet2(pm, np.array([2.0, 0.0]), "finite-difference")
    with pytest.raises(ValueError):
        eval_jet2(pm, np.array([0.0, 0.0]), "symbolic")
