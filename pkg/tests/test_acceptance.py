"""Acceptance gate: the eleven criteria at desk scale.

Default setting: cone over helicoid(1, 1) in the equidistant H^3 (d = 0.7)
of H^4, 16^3 grids with t in [-2, 2].  Run with ``pytest tests/test_acceptance.py -s``.
"""

import numpy as np
import pytest

from hypcone.cli import main
from hypcone.cone import (
    cone,
    cone_map,
    cone_metric_closed,
    grid,
    immersion_criterion,
    radius_r,
    scalar_curvature_formula,
    scan_degeneracy,
    surface_alpha_norm2,
    surface_catalog,
)
from hypcone.gaussmap import (
    check_energy,
    check_gauss_laplacian,
    check_gauss_norm,
    check_mixed_ablation,
)
from hypcone.immersion import evaluate, nullity_space, scalar_curvature_gauss, scalar_curvature_intrinsic
from hypcone.nullflow import (
    check_flow_identities,
    check_polynomial_identity,
    check_rk4_vs_closed_form,
    moebius_flow,
)
from hypcone.splitting import (
    check_C2_leaf,
    check_E3_leaf,
    check_c1,
    check_harmonic,
    check_span_IJ,
    cone_frame_field,
    growth_exponent,
    nullity_frame_field,
    uv_fields,
)
from hypcone.suites import SuiteConfig, run_suite

D = 0.7
T_RANGE = (-2.0, 2.0)


@pytest.fixture(scope="module")
def default():
    spec = cone("helicoid", "equidistant", n=4, d=D, t_range=T_RANGE)
    pm = cone_map(spec)
    x = grid(spec, 16)
    return spec, pm, x, evaluate(pm, x), cone_frame_field(spec)


def _rel(a, b):
    return np.abs(a - b) / np.maximum(np.abs(a), np.abs(b))


def test_criterion_01_minimality(default, criterion):
    _, _, _, ev, _ = default
    h = float(np.max(ev.mean_curvature_norm))
    bad = cone(surface_catalog("perturbed_nonminimal", eps=0.1), "equidistant", n=4, d=D, t_range=T_RANGE)
    hb = float(np.max(evaluate(cone_map(bad), grid(bad, 16)).mean_curvature_norm))
    criterion("criterion 1 (cone minimality)", [
        (f"max |H| = {h:.2e} < 1e-6", h < 1e-6),
        (f"perturbed max |H| = {hb:.2e} > 1e-4", hb > 1e-4),
    ])


def test_criterion_02_nullity(default, criterion):
    _, _, _, ev, _ = default
    generic = ev.alpha_norm2 > 1e-8
    nd = nullity_space(ev)
    nu_ok = bool(np.all(nd.index[generic] == 1))
    # |alpha(d_t, X)| over unit coordinate directions X; d_t is unit
    diag = np.sqrt(np.einsum("...ii->...i", ev.metric))
    fiber = np.abs(ev.h[..., :, 2, :] / diag[..., None, :])[generic]
    res = float(np.max(fiber))
    criterion("criterion 2 (nullity)", [
        (f"nu = 1 at {int(generic.sum())} non-totally-geodesic samples", nu_ok),
        (f"max |alpha(d_t, .)| = {res:.2e} < 1e-8", res < 1e-8),
    ])


def test_criterion_03_metric(default, criterion):
    spec, _, x, ev, _ = default
    gc = cone_metric_closed(spec, x)
    rel = float(np.max(np.max(np.abs(gc - ev.metric), axis=(-2, -1)) / np.max(np.abs(ev.metric), axis=(-2, -1))))
    criterion("criterion 3 (metric formula)", [(f"relative deviation {rel:.2e} < 1e-8", rel < 1e-8)])


def test_criterion_04_scalar_curvature(default, criterion):
    spec, pm, x, ev, _ = default
    sub = x[:, ::3, ::3, ::3]  # the intrinsic route differentiates Christoffels; a 6^3 subgrid suffices
    sf = scalar_curvature_formula(spec, sub)
    sg = scalar_curvature_gauss(evaluate(pm, sub))
    si = scalar_curvature_intrinsic(pm, sub)
    pair = max(float(np.max(_rel(sf, sg))), float(np.max(_rel(sg, si))), float(np.max(_rel(sf, si))))
    tg = cone("totally_geodesic_h2", "equidistant", n=4, d=D, t_range=T_RANGE)
    y = grid(tg, 6)
    routes = (scalar_curvature_formula(tg, y), scalar_curvature_gauss(evaluate(cone_map(tg), y)),
              scalar_curvature_intrinsic(cone_map(tg), y))
    flat = max(float(np.max(np.abs(s + 6.0))) for s in routes)
    criterion("criterion 4 (scalar curvature)", [
        (f"pairwise relative agreement {pair:.2e} < 1e-4", pair < 1e-4),
        (f"alpha_g = 0: max |s + 6| = {flat:.2e} < 1e-6", flat < 1e-6),
    ])


def test_criterion_05_immersion(criterion):
    conds = []
    for kind in ("equidistant", "horosphere"):
        spec = cone("helicoid", kind, n=4, d=D)
        scan = scan_degeneracy(spec, (0.5, 0.3), t_range=(-3.0, 3.0))
        ok = immersion_criterion(spec).immersion_everywhere and not scan.degenerate
        conds.append((f"{kind} nondegenerate on [-3, 3] (min eigen ratio {scan.ratio_min:.2e})", ok))
    sphere = cone("helicoid", "geodesic_sphere", n=4, rho=1.0)
    scan = scan_degeneracy(sphere, (0.5, 0.3), t_range=(-3.0, 3.0), samples=600)
    err = abs(scan.t_min - 1.0)
    conds.append((f"geodesic sphere degenerate at t = {scan.t_min:.9f} (|t - 1| = {err:.1e} < 1e-6)",
                  scan.degenerate and err < 1e-6))
    criterion("criterion 5 (immersion criterion)", conds)


def test_criterion_06_boundedness(criterion):
    eq = cone("helicoid", "equidistant", n=4, d=D, t_range=(-6.5, 6.5))
    uv = grid(eq, 8)[:2, :, :, 0]
    a2g = surface_alpha_norm2(eq, uv)
    bound = 6.0 + a2g / (1.0 - np.tanh(D) ** 2)
    excess = -np.inf
    for tk in np.linspace(-6.0, 6.0, 121):
        x = np.concatenate([uv, np.full((1,) + uv.shape[1:], tk)])
        s = scalar_curvature_gauss(evaluate(cone_map(eq), x))
        excess = max(excess, float(np.max(np.abs(s) - bound)))
    horo = cone("helicoid", "horosphere", n=4)
    t = np.linspace(-3.0, 3.0, 61)
    x = np.stack([np.full_like(t, 0.4), np.full_like(t, 0.3), t])
    s = scalar_curvature_gauss(evaluate(cone_map(horo), x))
    slope = float(np.polyfit(t, np.log(np.abs(s + 6.0)), 1)[0])
    criterion("criterion 6 (boundedness dichotomy)", [
        (f"equidistant max(|s| - bound) = {excess:.2e} <= 1e-3", excess <= 1e-3),
        (f"horosphere slope of log|s + 6| = {slope:.6f} (2.00 +- 0.05)", abs(slope - 2.0) <= 0.05),
    ])


def test_criterion_07_splitting(default, criterion):
    spec, pm, x, _, ff = default
    span = check_span_IJ(pm, ff, x)
    c1 = check_c1(pm, ff, x)
    c2 = check_C2_leaf(pm, ff, x)
    nf = check_span_IJ(pm, nullity_frame_field(pm), x[:, ::3, ::3, ::3])
    u_f, v_f = uv_fields(pm, ff)
    hx = x[:, ::3, ::3, ::3]
    lv = check_harmonic(pm, v_f, hx)
    lu = check_harmonic(pm, u_f, hx)
    criterion("criterion 7 (splitting structure)", [
        (f"span{{I,J}} residual {span.residual:.2e} < 1e-6", span.residual < 1e-6),
        (f"span{{I,J}} with numerical nullity frame {nf.residual:.2e} < 1e-6", nf.residual < 1e-6),
        (f"frame identities for v, u {c1.residual:.2e} < 1e-6", c1.residual < 1e-6),
        (f"leaf ODEs on t in [-2, 2] {c2.residual:.2e} < 1e-6", c2.residual < 1e-6),
        (f"|Lap v| {lv.residual:.2e} < 1e-5", lv.residual < 1e-5),
        (f"|Lap u| {lu.residual:.2e} < 1e-5", lu.residual < 1e-5),
    ])


def test_criterion_08_e3(default, criterion):
    _, pm, x, _, ff = default
    e3 = check_E3_leaf(pm, ff, x)
    horo = cone("helicoid", "horosphere", n=4)
    slope, _ = growth_exponent(cone_map(horo), cone_frame_field(horo), np.array([0.4, 0.3, 0.0]),
                               np.linspace(-1.8, 1.8, 19))
    criterion("criterion 8 (E3 consequence)", [
        (f"relative residual {e3.residual:.2e} < 1e-4", e3.residual < 1e-4),
        (f"horosphere growth exponent {slope:.6f} (2.00 +- 0.01)",
         abs(slope - 2.0) <= 0.01),
    ])


def test_criterion_09_gauss(default, criterion):
    spec, pm, x, _, ff = default
    norm = check_gauss_norm(pm, ff, x)
    sub = x[:, ::3, ::3, ::3]
    energy = check_energy(pm, ff, sub)
    lap = check_gauss_laplacian(pm, ff, sub)
    holo = cone("holomorphic_curve", "horosphere", n=5, t_range=(-1.0, 1.0))
    Gh = cone_map(holo)
    y = grid(holo, 4, t_range=(-1.0, 1.0))
    ab = check_mixed_ablation(Gh, cone_frame_field(holo), y)
    ratio = ab.detail["ratio"]
    criterion("criterion 9 (Gauss map)", [
        (f"max |<g,g> + 1| = {norm.residual:.2e} <= 1e-8", norm.residual <= 1e-8),
        (f"energy identity relative {energy.residual:.2e} < 1e-4", energy.residual < 1e-4),
        (f"codim-1 |Lap g + |alpha|^2 g| = {lap.residual:.2e} < 1e-3", lap.residual < 1e-3),
        (f"codim-2 ablation ratio {ratio:.3g} >= 10", ratio >= 10),
    ])


def test_criterion_10_flow(criterion):
    rk = max(check_rk4_vs_closed_form(w0, (-3.0, 3.0), 1e-3).residual for w0 in (0.0, 0.3j, 1j, 0.5 + 0.5j))
    t = np.linspace(-3.0, 3.0, 601)
    ident = max(c.residual for u0 in (0.1, 0.5, 2.0) for c in check_flow_identities(u0, t))
    poly = check_polynomial_identity(np.random.default_rng(2024), samples=1_000_000)
    lim = 0.0
    for u0 in (0.1, 0.3, 1.0):
        for sign in (1.0, -1.0):
            u, v = moebius_flow(1j * u0, sign * 10.0)
            lim = max(lim, abs(float(u)), abs(float(v) + sign))
    criterion("criterion 10 (flow)", [
        (f"rk4 vs Moebius {rk:.2e} < 1e-8", rk < 1e-8),
        (f"psi, dpsi and dtheta identities {ident:.2e} < 1e-6", ident < 1e-6),
        (f"polynomial identity relative {poly.residual:.2e} < 1e-9 over 1e6 samples", poly.residual < 1e-9),
        (f"limits at |t| = 10: {lim:.2e} < 1e-8", lim < 1e-8),
    ])


def test_criterion_11_determinism(tmp_path, criterion):
    cfg = dict(suite="all", surface="helicoid", a=1.0, b=1.0, d=D, n=4, grid=16, t_range=T_RANGE, seed=7)
    first = run_suite(SuiteConfig(**cfg)).to_jsonl()
    second = run_suite(SuiteConfig(**cfg)).to_jsonl()
    out = tmp_path / "all.jsonl"
    code = main(["verify", "all", "--surface", "helicoid", "--a", "1", "--b", "1", "--d", "0.7", "--n", "4",
                 "--grid", "16", "--t-range", "-2", "2", "--format", "json-lines", "--out", str(out)])
    records = sum(1 for line in out.read_text().splitlines() if '"type": "check"' in line)
    criterion("criterion 11 (determinism)", [
        ("identical seeds give byte-identical reports", first == second),
        (f"verify all exit code {code} == 0", code == 0),
        (f"{records} check records >= 25", records >= 25),
    ])
