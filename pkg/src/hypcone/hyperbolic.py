"""Hyperboloid model of H^n and its complete umbilical submanifolds.

Points of H^n are arrays ``x`` with <x, x> = -1 and x0 > 0.  The umbilical
inclusions are realized at canonical positions:

* equidistant(d): at distance d from the totally geodesic slice x_{k+1} = 0,
* horosphere: through e0 with null direction (1, 1, 0, ..., 0),
* geodesic_sphere(rho): centred at e0,
* totally_geodesic: the coordinate slice.

Codimension l > 1 is obtained by first placing the hypersurface inside the
totally geodesic H^{n-l+1} spanned by the leading coordinates; the remaining
normals are the constant vectors e_{n-l+2}, ..., e_n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ModelViolation, PreconditionError
from .jets import Jet, ParamMap, component, coords
from .lorentz import minkowski_dot, minkowski_norm2
from .report import CheckResult

POINT_TOL = 1e-10

KINDS = ("equidistant", "horosphere", "geodesic_sphere", "totally_geodesic")


def _value(x):
    return x.v if isinstance(x, Jet) else np.asarray(x, dtype=float)


def normalize_point(x):
    """Project onto the upper sheet by dividing by sqrt(-<x, x>)."""
    x = np.asarray(x, dtype=float)
    q = -minkowski_norm2(x)
    if np.any(q <= 0):
        raise ModelViolation("vector is not timelike; cannot project to the hyperboloid")
    return x / np.sqrt(q)[..., None] * np.sign(x[..., :1])


def is_point(x, tol=POINT_TOL) -> bool:
    x = np.asarray(x, dtype=float)
    return bool(np.all(np.abs(minkowski_norm2(x) + 1.0) <= tol) and np.all(x[..., 0] > 0))


def check_tangent(p, v, tol=POINT_TOL):
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    scale = np.maximum(1.0, np.max(np.abs(v), axis=-1))
    if np.any(np.abs(minkowski_dot(p, v)) > tol * scale):
        raise PreconditionError("vector is not tangent to the hyperboloid at the base point")


def exp_point(p, v):
    """Exponential map exp_p(v) = cosh|v| p + sinh|v| v/|v|."""
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    check_tangent(p, v)
    norm = np.sqrt(np.maximum(minkowski_norm2(v), 0.0))[..., None]
    with np.errstate(invalid="ignore", divide="ignore"):
        direction = np.where(norm > 0, v / np.where(norm > 0, norm, 1.0), 0.0)
    out = np.cosh(norm) * p + np.sinh(norm) * direction
    return normalize_point(out)


def dist(p, q, tol=1e-10):
    """Hyperbolic distance arccosh(-<p, q>), evaluated as 2 asinh(|p - q| / 2) for accuracy."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    c = -minkowski_dot(p, q)
    if np.any(c < 1.0 - tol):
        raise ModelViolation(f"-<p,q> = {np.min(c):.3e} < 1: not points of one hyperboloid sheet")
    chord = np.sqrt(np.maximum(minkowski_norm2(p - q), 0.0))
    return 2.0 * np.arcsinh(0.5 * chord)


def random_tangent(p, rng, scale=1.0):
    """A random tangent vector at p with Minkowski length <= scale (for tests and sweeps)."""
    p = np.asarray(p, dtype=float)
    w = rng.normal(size=p.shape)
    w = w + minkowski_dot(p, w)[..., None] * p
    n = np.sqrt(minkowski_norm2(w))[..., None]
    return w / n * scale * rng.uniform(size=p.shape[:-1] + (1,))


def hyperboloid_chart(y):
    """Chart R^k -> H^k, y -> (sqrt(1 + |y|^2), y)."""
    s = 1.0
    for yi in y:
        s = s + yi * yi
    return coords(np.sqrt(s), *y)


def sphere_chart(y):
    """Chart of the upper unit hemisphere, y -> (sqrt(1 - |y|^2), y)."""
    s = 1.0
    for yi in y:
        s = s - yi * yi
    return coords(np.sqrt(s), *y)


def euclidean_chart(y):
    return coords(*y)


@dataclass(frozen=True)
class UmbilicalInclusion:
    """A complete umbilical submanifold Q_c^{n-l} of H^n with a normal frame.

    ``param`` is the distance d for equidistant hypersurfaces and the radius
    rho for geodesic spheres; it is ignored otherwise.  The first normal
    eta_1 points along the mean curvature vector, so that the shape operator
    A_{eta_1} is hnorm * Id.
    """

    kind: str
    n: int
    codim: int = 1
    param: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown umbilical kind {self.kind!r}; choose from {KINDS}")
        if self.codim < 1 or self.n - self.codim < 2:
            raise ValueError(f"codimension {self.codim} not admissible in H^{self.n}")
        if self.kind in ("equidistant", "geodesic_sphere") and not self.param > 0:
            raise ValueError(f"{self.kind} needs a positive parameter, got {self.param}")

    @property
    def dim(self) -> int:
        """Intrinsic dimension n - l."""
        return self.n - self.codim

    @property
    def model(self) -> str:
        return {
            "equidistant": "hyperbolic",
            "totally_geodesic": "hyperbolic",
            "horosphere": "euclidean",
            "geodesic_sphere": "spherical",
        }[self.kind]

    @property
    def model_coords(self) -> int:
        """Number of coordinates of a point of the intrinsic model."""
        return self.dim if self.model == "euclidean" else self.dim + 1

    @property
    def curvature(self) -> float:
        """Intrinsic sectional curvature c."""
        if self.kind == "equidistant":
            return -1.0 / np.cosh(self.param) ** 2
        if self.kind == "horosphere":
            return 0.0
        if self.kind == "geodesic_sphere":
            return 1.0 / np.sinh(self.param) ** 2
        return -1.0

    @property
    def hnorm(self) -> float:
        """Length of the mean curvature vector of the inclusion."""
        if self.kind == "equidistant":
            return float(np.tanh(self.param))
        if self.kind == "horosphere":
            return 1.0
        if self.kind == "geodesic_sphere":
            return float(1.0 / np.tanh(self.param))
        return 0.0

    def chart(self, y):
        """Local chart of the intrinsic model (used for the umbilicity check)."""
        return {"hyperbolic": hyperboloid_chart, "euclidean": euclidean_chart, "spherical": sphere_chart}[
            self.model
        ](y)

    def check_model_point(self, p, tol=1e-8):
        p = _value(p)
        if p.shape[-1] != self.model_coords:
            raise PreconditionError(
                f"{self.kind} expects {self.model_coords} intrinsic coordinates, got {p.shape[-1]}"
            )
        if self.model == "hyperbolic":
            if np.any(np.abs(minkowski_norm2(p) + 1.0) > tol) or np.any(p[..., 0] <= 0):
                raise PreconditionError("intrinsic point is off the hyperboloid")
        elif self.model == "spherical":
            if np.any(np.abs(np.sum(p * p, axis=-1) - 1.0) > tol):
                raise PreconditionError("intrinsic point is off the unit sphere")

    def include(self, p, check=True):
        """Image point and normal frame (eta_1, ..., eta_l) at intrinsic point p.

        Works for arrays and jets; the outputs have n + 1 coordinates.
        """
        if check:
            self.check_model_point(p)
        k = self.dim
        comps = [component(p, i) for i in range(self.model_coords)]
        zero = 0.0 * comps[0]
        pad = self.n - (k + 1)  # coordinates beyond the hypersurface's H^{k+1}
        kind = self.kind
        if kind == "totally_geodesic":
            point = comps + [zero] * (self.n - k)
            normals = []
        elif kind == "equidistant":
            ch, sh = np.cosh(self.param), np.sinh(self.param)
            point = [ch * c for c in comps] + [sh + zero] + [zero] * pad
            normals = [[-sh * c for c in comps] + [-ch + zero] + [zero] * pad]
        elif kind == "horosphere":
            s = 0.0 * comps[0]
            for c in comps:
                s = s + 0.5 * c * c
            point = [1.0 + s, s] + comps + [zero] * pad
            normals = [[-s, 1.0 - s] + [-c for c in comps] + [zero] * pad]
        else:
            ch, sh = np.cosh(self.param), np.sinh(self.param)
            point = [ch + zero] + [sh * c for c in comps] + [zero] * pad
            normals = [[-sh + zero] + [-ch * c for c in comps] + [zero] * pad]
        first_const = self.n + 1 - (self.codim - len(normals))
        for j in range(first_const, self.n + 1):
            e = [zero] * (self.n + 1)
            e[j] = 1.0 + zero
            normals.append(e)
        return coords(*point), [coords(*nrm) for nrm in normals]

    def include_map(self, box=None) -> ParamMap:
        """The inclusion composed with the intrinsic chart, as a ParamMap."""
        k = self.dim
        lo, hi = box if box is not None else ((-0.5,) * k, (0.5,) * k)

        def func(y):
            point, _ = self.include(self.chart(list(y)), check=False)
            return point

        return ParamMap(func, k, self.n + 1, tuple(lo), tuple(hi), name=f"{self.kind}-inclusion")

    def label(self) -> str:
        extra = f"({self.param:g})" if self.kind in ("equidistant", "geodesic_sphere") else ""
        return f"{self.kind}{extra} codim {self.codim} in H^{self.n}"


def inclusion(kind: str, n: int, codim: int = 1, d: float | None = None, rho: float | None = None):
    kind = kind.replace("-", "_")
    param = d if kind == "equidistant" else rho if kind == "geodesic_sphere" else 0.0
    if kind in ("equidistant", "geodesic_sphere") and param is None:
        raise ValueError(f"{kind} requires {'d' if kind == 'equidistant' else 'rho'}")
    return UmbilicalInclusion(kind, n, codim, float(param or 0.0))


def umbilic_check(inc: UmbilicalInclusion, samples, tol=1e-8) -> CheckResult:
    """Verify A_{eta_1} = hnorm Id, A_{eta_j} = 0 (j >= 2) and the intrinsic curvature.

    ``samples`` are intrinsic chart coordinates, shape (k,) + S.
    """
    from .immersion import evaluate, scalar_curvature_intrinsic, shape_operator

    y = np.asarray(samples, dtype=float)
    pmap = inc.include_map(box=((-np.inf,) * inc.dim, (np.inf,) * inc.dim))
    if inc.model == "spherical" and np.any(np.sum(y * y, axis=0) >= 1.0):
        raise DomainError("sphere chart samples must satisfy |y| < 1")
    ev = evaluate(pmap, y)
    _, normals = inc.include(inc.chart([y[i] for i in range(inc.dim)]), check=False)
    eye = np.eye(inc.dim)
    dev_shape = 0.0
    for j, eta in enumerate(normals):
        target = inc.hnorm if j == 0 else 0.0
        A = shape_operator(ev, eta)
        dev_shape = max(dev_shape, float(np.max(np.abs(A - target * eye))))
    k = inc.dim
    s = scalar_curvature_intrinsic(pmap, y)
    dev_curv = float(np.max(np.abs(s - k * (k - 1) * inc.curvature)))
    return CheckResult(
        name=f"umbilic.{inc.kind}",
        ref="Prop po2 proof: umbilical inclusion, A_eta1 = |H| Id",
        residual=max(dev_shape, dev_curv),
        tolerance=tol,
        samples=int(np.prod(y.shape[1:])) if y.ndim > 1 else 1,
        detail={"shape_operator": dev_shape, "curvature": dev_curv, "c": inc.curvature, "hnorm": inc.hnorm},
    )
