import numpy as np
import pytest

from hypcone.cone import cone, cone_map, grid, random_points, surface_catalog
from hypcone.errors import PreconditionError
from hypcone.splitting import (
    J,
    check_C2_leaf,
    check_E3_leaf,
    check_c1,
    check_commutation,
    check_harmonic,
    check_span_IJ,
    check_umbilical_conullity,
    cone_frame_field,
    growth_exponent,
    nullity_frame_field,
    splitting_tensor,
    trace_leaf,
    uv_fields,
)

# frozen with math: v(t) = (tanh d - tanh t) / (1 - tanh d tanh t) at d = 0.7, t = 0.4
V_EQUIDISTANT_T04 = 0.29131261245159107


def test_cone_splitting_closed_form(equidistant_cone, small_grid):
    _, pm, ff = equidistant_cone
    sd = splitting_tensor(pm, ff, small_grid)
    t = small_grid[2]
    hn = np.tanh(0.7)
    expected = (hn - np.tanh(t)) / (1 - hn * np.tanh(t))
    assert np.max(np.abs(sd.v - expected)) < 1e-8
    assert np.max(np.abs(sd.u)) < 1e-8
    one = splitting_tensor(pm, ff, np.array([0.3, 0.2, 0.4]))
    assert float(one.v) == pytest.approx(V_EQUIDISTANT_T04, abs=1e-8)


def test_v_at_fiber_origin_is_mean_curvature_norm(equidistant_cone):
    _, pm, ff = equidistant_cone
    sd = splitting_tensor(pm, ff, np.array([0.1, -0.4, 0.0]))
    assert abs(float(sd.v)) == pytest.approx(np.tanh(0.7), abs=1e-8)


def test_horosphere_cone_has_constant_v(horosphere_cone):
    spec, pm, ff = horosphere_cone
    sd = splitting_tensor(pm, ff, grid(spec, 4, t_range=(-2, 2)))
    assert np.max(np.abs(sd.v - 1.0)) < 1e-8


def test_structure_checks_pass(equidistant_cone, small_grid):
    _, pm, ff = equidistant_cone
    for res in (
        check_span_IJ(pm, ff, small_grid),
        check_c1(pm, ff, small_grid),
        check_umbilical_conullity(pm, ff, small_grid),
        check_C2_leaf(pm, ff, small_grid),
        check_E3_leaf(pm, ff, small_grid),
        *check_commutation(pm, ff, small_grid),
    ):
        assert res.passed, str(res)


def test_harmonic_u_and_v(equidistant_cone):
    spec, pm, ff = equidistant_cone
    x = grid(spec, 4, t_range=(-2, 2))
    u_f, v_f = uv_fields(pm, ff)
    assert check_harmonic(pm, v_f, x).passed
    assert check_harmonic(pm, u_f, x).passed
    assert check_harmonic(pm, lambda y: np.ones(y.shape[1:]), x).passed


def test_nullity_frame_agrees_with_cone_frame(equidistant_cone, rng):
    spec, pm, ff = equidistant_cone
    x = random_points(spec, 20, rng, t_range=(-2, 2))
    a = splitting_tensor(pm, ff, x)
    b = splitting_tensor(pm, nullity_frame_field(pm), x)
    assert np.max(np.abs(a.v - b.v)) < 1e-6


def test_misaligned_frame_rejected(equidistant_cone):
    from hypcone.splitting import FrameField

    spec, pm, _ = equidistant_cone

    def tilted(ev):
        e = np.zeros(ev.metric.shape[:-1])
        e[..., 0] = 0.3
        e[..., 2] = 1.0
        return e

    with pytest.raises(PreconditionError):
        splitting_tensor(pm, FrameField(pm, tilted), np.array([0.2, 0.2, 0.2]))


def test_frame_field_requires_nu_one():
    with pytest.raises(PreconditionError):
        cone_frame_field(cone("helicoid", "equidistant", n=5, nu=2))


def test_traceless_symmetric_anticommutes_with_J(rng):
    for lam, mu in rng.normal(size=(20, 2)):
        A = np.array([[lam, mu], [mu, -lam]])
        assert np.max(np.abs(A @ J + J @ A)) < 1e-15


def test_nonminimal_breaks_J_commutation():
    spec = cone(surface_catalog("perturbed_nonminimal"), "equidistant", d=0.7, t_range=(-2, 2))
    pm = cone_map(spec)
    x = grid(spec, 4, t_range=(-1, 1))
    _, eq2 = check_commutation(pm, cone_frame_field(spec), x)
    assert eq2.residual > eq2.tolerance


def test_leaf_tracing_follows_fiber(equidistant_cone):
    _, _, ff = equidistant_cone
    s = np.linspace(-1.5, 1.5, 7)
    pts = trace_leaf(ff, np.array([0.3, 0.2, 0.1]), s)
    np.testing.assert_allclose(pts[2], 0.1 + s, atol=1e-10)
    np.testing.assert_allclose(pts[:2], np.array([[0.3], [0.2]]) * np.ones_like(s), atol=1e-10)


def test_horosphere_growth_exponent_is_two(horosphere_cone):
    _, pm, ff = horosphere_cone
    slope, a2 = growth_exponent(pm, ff, np.array([0.4, 0.3, 0.0]), np.linspace(-1.8, 1.8, 19))
    assert slope == pytest.approx(2.0, abs=1e-6)
    assert np.all(a2 > 0)
