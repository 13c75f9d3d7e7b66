import numpy as np
import pytest

from hypcone.cone import cone, cone_map, surface_alpha_norm2, surface_catalog
from hypcone.errors import DegeneracyError, PreconditionError
from hypcone.hyperbolic import hyperboloid_chart
from hypcone.immersion import (
    evaluate,
    nullity_space,
    scalar_curvature_gauss,
    scalar_curvature_intrinsic,
    shape_operator,
)
from hypcone.jets import ParamMap

# |alpha|^2 of helicoid_h3(1, 1) in unit H^3 is 2 / cosh^2(2u); value at u = 0.3 from math.cosh
HELICOID_ALPHA2_U03 = 1.4231555251744459
# 1 / cosh^2(0.7): the equidistant H^3 at d = 0.7 is a unit H^3 scaled by cosh d
EQUIDISTANT_SCALE = 0.6347395899824586


def h3_chart_map():
    return ParamMap(lambda y: hyperboloid_chart(list(y)), 3, 4, (-1,) * 3, (1,) * 3)


def test_totally_geodesic_h3_has_constant_curvature(rng):
    pm = h3_chart_map()
    y = rng.uniform(-0.8, 0.8, size=(3, 40))
    ev = evaluate(pm, y)
    assert ev.codim == 0
    np.testing.assert_allclose(scalar_curvature_gauss(ev), -6.0, atol=1e-12)
    np.testing.assert_allclose(scalar_curvature_intrinsic(pm, y), -6.0, atol=1e-6)


def test_helicoid_alpha_norm_oracle():
    uv = np.array([0.3, 0.5])
    flat = cone("helicoid", "totally_geodesic", n=4)
    assert float(surface_alpha_norm2(flat, uv)) == pytest.approx(HELICOID_ALPHA2_U03, rel=1e-10)
    spec = cone("helicoid", "equidistant", n=4, d=0.7)
    expected = HELICOID_ALPHA2_U03 * EQUIDISTANT_SCALE
    assert float(surface_alpha_norm2(spec, uv)) == pytest.approx(expected, rel=1e-10)


def test_minimal_cone_scalar_curvature_matches_gauss(equidistant_cone, small_grid):
    _, pm, _ = equidistant_cone
    ev = evaluate(pm, small_grid)
    assert np.max(ev.mean_curvature_norm) < 1e-10
    s_gauss = scalar_curvature_gauss(ev)
    np.testing.assert_allclose(s_gauss, -6.0 - ev.alpha_norm2, atol=1e-10)
    s_int = scalar_curvature_intrinsic(pm, small_grid)
    assert np.max(np.abs(s_int - s_gauss) / np.abs(s_gauss)) < 1e-6


def test_cone_has_nullity_one_along_fiber(equidistant_cone, small_grid):
    _, pm, _ = equidistant_cone
    ev = evaluate(pm, small_grid)
    nd = nullity_space(ev)
    assert np.all(nd.index == 1)
    d = nd.basis()[..., 0]
    # D is spanned by d/dt
    np.testing.assert_allclose(np.abs(d[..., 2]) * np.sqrt(ev.metric[..., 2, 2]), 1.0, atol=1e-8)


def test_shape_operator_rejects_tangent(equidistant_cone):
    _, pm, _ = equidistant_cone
    ev = evaluate(pm, np.array([0.1, 0.2, 0.3]))
    with pytest.raises(PreconditionError):
        shape_operator(ev, ev.tangents[0])
    A = shape_operator(ev, ev.normals[0])
    assert abs(np.trace(A)) < 1e-10


def test_backends_agree(equidistant_cone, small_grid):
    _, pm, _ = equidistant_cone
    a = evaluate(pm, small_grid, "exact-jet")
    b = evaluate(pm, small_grid, "finite-difference")
    assert np.max(np.abs(a.metric - b.metric)) < 1e-6
    assert np.max(np.abs(a.alpha_norm2 - b.alpha_norm2)) < 1e-3


def test_rank_loss_raises():
    spec = cone("helicoid", "geodesic_sphere", n=4, rho=1.0, t_range=(-2.0, 2.0))
    with pytest.raises(DegeneracyError):
        evaluate(cone_map(spec), np.array([0.7, 0.3, 1.0]))


def test_nonminimal_surface_detected():
    spec = cone(surface_catalog("perturbed_nonminimal"), "equidistant", n=4, d=0.7)
    ev = evaluate(cone_map(spec), np.array([0.3, 0.2, 0.1]))
    assert ev.mean_curvature_norm > 1e-3
