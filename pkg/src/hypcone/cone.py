"""Generalized cones over surfaces in umbilical submanifolds of H^n.

The cone over g: L^2 -> Q_c^{n-nu} is the map

    G(x, t_1, ..., t_nu) = f_nu,   f_0 = i(g(x)),
    f_j = cosh(t_j) f_{j-1} + sinh(t_j) eta_j,

with eta_1 along the mean curvature of the umbilical inclusion i.  Its
tangent map on surface directions is r * g_*, where

    r = h_1 (cosh t_1 - |H| sinh t_1),   h_j = prod_{k > j} cosh t_k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DegeneracyError, PreconditionError
from .hyperbolic import UmbilicalInclusion
from .immersion import evaluate
from .jets import ParamMap, component, coords, eval_jet2
from .lorentz import gram, signature

DEGENERATE_RTOL = 1e-8


@dataclass(frozen=True)
class SurfaceSpec:
    """A parametric surface in an intrinsic model (hyperbolic, euclidean or spherical).

    ``func`` maps (u, v) to ``ncoords`` model coordinates; it is padded with
    zeros when placed in a larger model of the same kind.
    """

    name: str
    func: Callable
    model: str
    ncoords: int
    lo: tuple
    hi: tuple
    claimed_minimal: bool = True
    claimed_totally_geodesic: bool = False
    params: dict = field(default_factory=dict)

    def point(self, uv, ncoords=None):
        p = self.func(uv)
        ncoords = ncoords or self.ncoords
        if ncoords < self.ncoords:
            raise PreconditionError(f"surface {self.name} needs at least {self.ncoords} model coordinates")
        if ncoords == self.ncoords:
            return p
        comps = [component(p, i) for i in range(self.ncoords)]
        zero = 0.0 * comps[0]
        return coords(*comps, *([zero] * (ncoords - self.ncoords)))


def _helicoid_h3(a, b):
    def func(uv):
        u, v = uv[0], uv[1]
        return coords(np.cosh(u) * np.cosh(a * v), np.cosh(u) * np.sinh(a * v), np.sinh(u) * np.cos(b * v), np.sinh(u) * np.sin(b * v))

    return func


def _spherical_helicoid(a, b):
    def func(uv):
        u, v = uv[0], uv[1]
        return coords(np.cos(u) * np.cos(a * v), np.cos(u) * np.sin(a * v), np.sin(u) * np.cos(b * v), np.sin(u) * np.sin(b * v))

    return func


def _euclidean_helicoid(c):
    def func(uv):
        u, v = uv[0], uv[1]
        return coords(u * np.cos(v), u * np.sin(v), c * v)

    return func


def _totally_geodesic_h2(uv):
    u, v = uv[0], uv[1]
    return coords(np.cosh(u) * np.cosh(v), np.cosh(u) * np.sinh(v), np.sinh(u))


def _holomorphic_curve(uv):
    # z -> (z, z^2 / 2) in C^2 = R^4
    u, v = uv[0], uv[1]
    return coords(u, v, 0.5 * (u * u - v * v), u * v)


def _perturbed_helicoid(eps):
    base = _helicoid_h3(1.0, 1.0)

    def func(uv):
        u, v = uv[0], uv[1]
        p = base(uv)
        bump = eps * (u * u + v)
        q = [component(p, i) for i in range(4)]
        q[3] = q[3] + bump
        norm2 = q[0] * q[0] - q[1] * q[1] - q[2] * q[2] - q[3] * q[3]
        s = np.sqrt(norm2)
        return coords(*(c / s for c in q))

    return func


SURFACES = (
    "totally_geodesic_h2",
    "helicoid_h3",
    "spherical_helicoid",
    "euclidean_helicoid",
    "holomorphic_curve",
    "perturbed_nonminimal",
)


def surface_catalog(name: str, **params) -> SurfaceSpec:
    """Named example surfaces.

    helicoid_h3(a, b) and spherical_helicoid(a, b) are ruled minimal
    surfaces of H^3 and S^3; euclidean_helicoid(c) lives in flat R^3 (a
    horosphere); holomorphic_curve is z -> (z, z^2/2) in R^4, minimal with a
    two-dimensional first normal space; perturbed_nonminimal(eps) breaks the
    minimality of helicoid_h3(1, 1) and serves as a negative control.
    """
    box = params.pop("box", None)
    if name == "helicoid_h3":
        a, b = float(params.get("a", 1.0)), float(params.get("b", 1.0))
        lo, hi = box or ((-1.5, -2.0), (1.5, 2.0))
        return SurfaceSpec(name, _helicoid_h3(a, b), "hyperbolic", 4, lo, hi, True, a * b == 0, {"a": a, "b": b})
    if name == "spherical_helicoid":
        a, b = float(params.get("a", 1.0)), float(params.get("b", 1.0))
        lo, hi = box or ((0.2, -2.0), (1.3, 2.0))
        return SurfaceSpec(name, _spherical_helicoid(a, b), "spherical", 4, lo, hi, True, a * b == 0, {"a": a, "b": b})
    if name == "euclidean_helicoid":
        c = float(params.get("c", params.get("b", 1.0)))
        lo, hi = box or ((-1.5, -2.0), (1.5, 2.0))
        return SurfaceSpec(name, _euclidean_helicoid(c), "euclidean", 3, lo, hi, True, c == 0, {"c": c})
    if name == "totally_geodesic_h2":
        lo, hi = box or ((-1.5, -1.5), (1.5, 1.5))
        return SurfaceSpec(name, _totally_geodesic_h2, "hyperbolic", 3, lo, hi, True, True, {})
    if name == "holomorphic_curve":
        lo, hi = box or ((-1.0, -1.0), (1.0, 1.0))
        return SurfaceSpec(name, _holomorphic_curve, "euclidean", 4, lo, hi, True, False, {})
    if name == "perturbed_nonminimal":
        eps = float(params.get("eps", 0.1))
        lo, hi = box or ((-1.0, -1.0), (1.0, 1.0))
        return SurfaceSpec(name, _perturbed_helicoid(eps), "hyperbolic", 4, lo, hi, False, False, {"eps": eps})
    raise ValueError(f"unknown surface {name!r}; choose from {SURFACES}")


def helicoid_for(inc: UmbilicalInclusion, a=1.0, b=1.0) -> SurfaceSpec:
    """The helicoid family member living in the intrinsic model of ``inc``."""
    if inc.model == "hyperbolic":
        return surface_catalog("helicoid_h3", a=a, b=b)
    if inc.model == "spherical":
        return surface_catalog("spherical_helicoid", a=a, b=b)
    return surface_catalog("euclidean_helicoid", c=b)


@dataclass(frozen=True)
class ConeSpec:
    surface: SurfaceSpec
    inclusion: UmbilicalInclusion
    t_lo: float = -3.0
    t_hi: float = 3.0

    def __post_init__(self):
        if self.surface.model != self.inclusion.model:
            raise PreconditionError(
                f"surface {self.surface.name} lives in a {self.surface.model} model, "
                f"inclusion {self.inclusion.kind} has a {self.inclusion.model} one"
            )
        if self.surface.ncoords > self.inclusion.model_coords:
            raise PreconditionError("surface does not fit in the intrinsic model of the inclusion")

    @property
    def nu(self) -> int:
        return self.inclusion.codim

    @property
    def m(self) -> int:
        return 2 + self.nu

    @property
    def n(self) -> int:
        return self.inclusion.n

    @property
    def lo(self) -> tuple:
        return tuple(self.surface.lo) + (self.t_lo,) * self.nu

    @property
    def hi(self) -> tuple:
        return tuple(self.surface.hi) + (self.t_hi,) * self.nu

    def label(self) -> str:
        return f"cone over {self.surface.name} in {self.inclusion.label()}"


def surface_map(spec: ConeSpec) -> ParamMap:
    """h = i o g as a map into H^n."""
    inc, surf = spec.inclusion, spec.surface

    def func(uv):
        point, _ = inc.include(surf.point(uv, inc.model_coords), check=False)
        return point

    return ParamMap(func, 2, spec.n + 1, tuple(surf.lo), tuple(surf.hi), name=f"{surf.name}-surface")


def cone_map(spec: ConeSpec) -> ParamMap:
    """G(x, t) built by the recursion f_j = cosh t_j f_{j-1} + sinh t_j eta_j."""
    inc, surf = spec.inclusion, spec.surface

    def func(x):
        f, normals = inc.include(surf.point([x[0], x[1]], inc.model_coords), check=False)
        for j, eta in enumerate(normals):
            t = x[2 + j]
            f = np.cosh(t)[..., None] * f + np.sinh(t)[..., None] * eta
        return f

    return ParamMap(func, spec.m, spec.n + 1, spec.lo, spec.hi, name=spec.label())


def fiber_factors(t) -> np.ndarray:
    """h_j = prod_{k > j} cosh t_k for j = 1..nu (h_nu = 1); t has shape (nu,) + S."""
    t = np.asarray(t, dtype=float)
    ch = np.cosh(t)
    out = np.ones_like(t)
    for j in range(t.shape[0] - 2, -1, -1):
        out[j] = out[j + 1] * ch[j + 1]
    return out


def radius_r(spec: ConeSpec | float, t) -> np.ndarray:
    """Conformal factor r with G_* X = r g_* X on surface directions.

    ``spec`` may be a ConeSpec or directly the mean curvature norm |H|.
    """
    hnorm = spec.inclusion.hnorm if isinstance(spec, ConeSpec) else float(spec)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    h = fiber_factors(t)
    return h[0] * (np.cosh(t[0]) - hnorm * np.sinh(t[0]))


def cone_metric_closed(spec: ConeSpec, x) -> np.ndarray:
    """r^2 <,>_g + h_1^2 dt_1^2 + ... + dt_nu^2 at parameters x = (u, v, t...)."""
    x = np.asarray(x, dtype=float)
    t = x[2:]
    r = radius_r(spec, t)
    if np.any(np.abs(r) < DEGENERATE_RTOL):
        raise DegeneracyError("r = 0: the cone map is not an immersion here")
    gl = gram(eval_jet2(surface_map(spec), x[:2]).grad)
    shape = x.shape[1:]
    m = spec.m
    g = np.zeros(shape + (m, m))
    g[..., :2, :2] = r[..., None, None] ** 2 * gl
    h = fiber_factors(t)
    for j in range(spec.nu):
        g[..., 2 + j, 2 + j] = h[j] ** 2
    return g


def surface_alpha_norm2(spec: ConeSpec, uv) -> np.ndarray:
    """|alpha_g|^2 of g inside Q_c, in a g-orthonormal frame.

    Computed from h = i o g by removing the components along the normals of
    the umbilical inclusion.
    """
    uv = np.asarray(uv, dtype=float)
    ev = evaluate(surface_map(spec), uv)
    p_model = spec.surface.point([uv[0], uv[1]], spec.inclusion.model_coords)
    _, normals = spec.inclusion.include(p_model, check=False)
    alpha = ev.alpha
    eta = signature(spec.n + 1)
    for nrm in normals:
        comp = np.einsum("...ijn,n,...n->...ij", alpha, eta, nrm)
        alpha = alpha - comp[..., None] * nrm[..., None, None, :]
    gi = ev.metric_inv
    inner = np.einsum("...ijn,n,...kln->...ijkl", alpha, eta, alpha)
    return np.einsum("...ik,...jl,...ijkl->...", gi, gi, inner)


def scalar_curvature_formula(spec: ConeSpec, x) -> np.ndarray:
    """s = -m(m-1) - |alpha_g|^2 / r^2."""
    x = np.asarray(x, dtype=float)
    r = radius_r(spec, x[2:])
    if np.any(np.abs(r) < DEGENERATE_RTOL):
        raise DegeneracyError("r = 0: scalar curvature undefined")
    m = spec.m
    return -m * (m - 1) - surface_alpha_norm2(spec, x[:2]) / r**2


@dataclass(frozen=True)
class ImmersionCriterion:
    immersion_everywhere: bool
    t_locus: float | None = None

    @property
    def label(self) -> str:
        if self.immersion_everywhere:
            return "immersion-everywhere"
        return f"degenerate-at(tanh t1 = 1/|H|, t1 = {self.t_locus:.12g})"


def immersion_criterion(spec: ConeSpec | UmbilicalInclusion) -> ImmersionCriterion:
    """|H| <= 1: immersion everywhere; |H| > 1: r vanishes where tanh t_1 = 1/|H|."""
    inc = spec.inclusion if isinstance(spec, ConeSpec) else spec
    hnorm = inc.hnorm
    if hnorm <= 1.0:
        return ImmersionCriterion(True)
    return ImmersionCriterion(False, float(np.arctanh(1.0 / hnorm)))


def metric_eigen_ratio(pmap: ParamMap, x) -> np.ndarray:
    """min/max eigenvalue of the induced metric; no degeneracy error is raised."""
    g = gram(eval_jet2(pmap, x).grad)
    w = np.linalg.eigvalsh(g)
    return w[..., 0] / np.abs(w[..., -1])


@dataclass(frozen=True)
class DegeneracyScan:
    degenerate: bool
    t_min: float
    ratio_min: float
    threshold: float


def scan_degeneracy(spec: ConeSpec, uv, t_range=(-3.0, 3.0), samples=601, other_t=0.0,
                    threshold=DEGENERATE_RTOL) -> DegeneracyScan:
    """Locate rank loss of the numerical cone metric along the first fiber coordinate.

    Scans t_1 on a grid, then refines the smallest eigenvalue ratio with a
    bounded scalar minimization.
    """
    pmap = cone_map(spec)
    u, v = (float(c) for c in uv)
    lo, hi = t_range

    def point(t1):
        t1 = np.atleast_1d(np.asarray(t1, dtype=float))
        rest = [np.full_like(t1, other_t) for _ in range(spec.nu - 1)]
        return np.stack([np.full_like(t1, u), np.full_like(t1, v), t1, *rest])

    ts = np.linspace(lo, hi, samples)
    ratios = metric_eigen_ratio(pmap, point(ts))
    k = int(np.argmin(ratios))
    a, b = ts[max(k - 1, 0)], ts[min(k + 1, samples - 1)]
    res = minimize_scalar(lambda t: float(metric_eigen_ratio(pmap, point(t))[0]), bounds=(a, b),
                          method="bounded", options={"xatol": 1e-12})
    t_best, r_best = (float(res.x), float(res.fun)) if res.fun < ratios[k] else (float(ts[k]), float(ratios[k]))
    return DegeneracyScan(r_best < threshold, t_best, r_best, threshold)


def grid(spec: ConeSpec, size=16, t_range=None, margin=0.05) -> np.ndarray:
    """Uniform size^m grid of parameters inside the cone box, shape (m, size, ..., size)."""
    lo = np.array(spec.lo, dtype=float)
    hi = np.array(spec.hi, dtype=float)
    if t_range is not None:
        lo[2:], hi[2:] = t_range
    span = hi - lo
    axes = [np.linspace(lo[i] + margin * span[i], hi[i] - margin * span[i], size) for i in range(spec.m)]
    return np.stack(np.meshgrid(*axes, indexing="ij"))


def random_points(spec: ConeSpec, count, rng, t_range=None, margin=0.05) -> np.ndarray:
    lo = np.array(spec.lo, dtype=float)
    hi = np.array(spec.hi, dtype=float)
    if t_range is not None:
        lo[2:], hi[2:] = t_range
    span = hi - lo
    return rng.uniform(lo + margin * span, hi - margin * span, size=(count, spec.m)).T


def check_minimal(pmap: ParamMap, x) -> float:
    """Largest mean curvature norm over the samples."""
    return float(np.max(evaluate(pmap, x).mean_curvature_norm))


def cone(surface: str | SurfaceSpec = "helicoid", inclusion_kind="equidistant", n=4, nu=1, a=1.0, b=1.0,
         d=0.7, rho=1.0, t_range=(-3.0, 3.0)) -> ConeSpec:
    """Convenience constructor used by the suites and the command line."""
    from .hyperbolic import inclusion

    inc = inclusion(inclusion_kind, n, codim=nu, d=d, rho=rho)
    if isinstance(surface, SurfaceSpec):
        surf = surface
    elif surface == "helicoid":
        surf = helicoid_for(inc, a, b)
    else:
        surf = surface_catalog(surface, a=a, b=b)
    return ConeSpec(surf, inc, float(t_range[0]), float(t_range[1]))
