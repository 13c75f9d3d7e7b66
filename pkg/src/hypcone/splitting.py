"""Splitting tensor of three-dimensional immersions with one-dimensional nullity.

For m = 3 and nu = 1 we use a g-orthonormal frame (e1, e2, e3) with e3
spanning the relative nullity D and J e1 = e2 on the conullity.  Covariant
derivatives are taken in chart coordinates:

    (nabla_X e3)^l = X^i d_i e3^l + Gamma^l_ij X^i e3^j,

with Christoffel symbols from the exact 2-jet of the map and d_i e3 by
central differences of the frame field.  The splitting tensor on D^perp is
C X = -(nabla_X e3)^h and decomposes as v I - u J.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .cone import ConeSpec, cone_map
from .errors import PreconditionError
from .immersion import ImmersionEval, evaluate, nullity_space
from .jets import ParamMap, first_step, richardson_derivative
from .report import CheckResult

J = np.array([[0.0, -1.0], [1.0, 0.0]])
ALIGN_TOL = 1e-6


def _gs_pair(metric, a, b):
    """g-orthonormalize two coordinate vectors."""
    na = np.sqrt(np.einsum("...i,...ij,...j->...", a, metric, a))
    e1 = a / na[..., None]
    b = b - np.einsum("...i,...ij,...j->...", b, metric, e1)[..., None] * e1
    nb = np.sqrt(np.einsum("...i,...ij,...j->...", b, metric, b))
    return e1, b / nb[..., None]


def _complete_frame(metric, e3):
    m = metric.shape[-1]
    shape = metric.shape[:-2]
    coord = np.broadcast_to(np.eye(m), shape + (m, m))
    proj = []
    for k in (0, 1):
        c = coord[..., :, k]
        c = c - np.einsum("...i,...ij,...j->...", c, metric, e3)[..., None] * e3
        proj.append(c)
    e1, e2 = _gs_pair(metric, proj[0], proj[1])
    return np.stack([e1, e2, e3], axis=-1)


@dataclass(frozen=True)
class FrameField:
    """Adapted frame (e1, e2, e3) as coordinate columns, shape (S, 3, 3)."""

    pmap: ParamMap
    e3_rule: Callable
    name: str = "frame"

    def __call__(self, x) -> np.ndarray:
        ev = evaluate(self.pmap, x)
        e3 = self.e3_rule(ev)
        n3 = np.sqrt(np.einsum("...i,...ij,...j->...", e3, ev.metric, e3))
        return _complete_frame(ev.metric, e3 / n3[..., None])


def cone_frame_field(spec: ConeSpec) -> FrameField:
    """e3 = d_t (unit for nu = 1), e1, e2 from the surface coordinate fields."""
    if spec.nu != 1:
        raise PreconditionError("the adapted cone frame needs nu = 1")

    def e3_rule(ev):
        e = np.zeros(ev.metric.shape[:-1])
        e[..., 2] = 1.0
        return e

    return FrameField(cone_map(spec), e3_rule, "cone")


def nullity_frame_field(pmap: ParamMap, orient_axis: int = -1) -> FrameField:
    """e3 from the numerical nullity direction, oriented by <e3, d_axis>_g > 0."""

    def e3_rule(ev):
        nd = nullity_space(ev)
        if np.any(nd.index != 1):
            raise PreconditionError("nullity frame needs index of relative nullity 1")
        e3 = nd.directions[..., :, 0]
        ref = np.einsum("...ij,...j->...i", ev.metric, e3)[..., orient_axis]
        return np.where(ref[..., None] < 0, -e3, e3)

    return FrameField(pmap, e3_rule, "nullity")


@dataclass(frozen=True)
class SplittingData:
    """C_{e3} on D^perp in the basis (e1, e2) and its (u, v) decomposition.

    ``nabla[a, b] = <nabla_{e_a} e3, e_b>`` for a, b in {1, 2}; the C1
    residual compares the two expressions of v and of u.
    """

    C: np.ndarray
    v: np.ndarray
    u: np.ndarray
    residual: np.ndarray
    nabla: np.ndarray
    c1_residual: np.ndarray
    frame: np.ndarray
    orientation: str = "e3 = frame e3, J e1 = e2"


def nabla_e3(pmap: ParamMap, frame_field: FrameField, x, ev: ImmersionEval | None = None, h=None):
    """Coordinates of nabla_{e_a} e3 for a = 1, 2, 3, shape (S, 3, m) and the frame."""
    x = np.asarray(x, dtype=float)
    ev = ev or evaluate(pmap, x)
    frame = frame_field(x)
    if h is None:
        h = first_step(x)
    m = ev.m
    d_e3 = np.stack(
        [richardson_derivative(lambda y: frame_field(y)[..., :, 2], x, i, h[i]) for i in range(m)],
        axis=-2,
    )  # [i, l] = d_i e3^l
    e3 = frame[..., :, 2]
    out = []
    for a in range(3):
        X = frame[..., :, a]
        cov = np.einsum("...i,...il->...l", X, d_e3) + np.einsum("...lij,...i,...j->...l", ev.christoffel, X, e3)
        out.append(cov)
    return np.stack(out, axis=-2), frame, ev


def splitting_tensor(pmap: ParamMap, frame_field: FrameField, x, check_alignment=True) -> SplittingData:
    """C_{e3} on D^perp and (u, v) at a batch of points (requires nu = 1, m = 3)."""
    x = np.asarray(x, dtype=float)
    ev = evaluate(pmap, x)
    if ev.m != 3:
        raise PreconditionError("splitting tensor analysis is implemented for m = 3")
    nd = nullity_space(ev)
    if np.any(nd.index != 1):
        raise PreconditionError("splitting tensor needs index of relative nullity 1")
    cov, frame, _ = nabla_e3(pmap, frame_field, x, ev)
    if check_alignment:
        d = nd.directions[..., :, 0]
        e3 = frame[..., :, 2]
        cosang = np.abs(np.einsum("...i,...ij,...j->...", d, ev.metric, e3))
        if np.any(np.sqrt(np.maximum(1.0 - cosang**2, 0.0)) > ALIGN_TOL):
            raise PreconditionError("frame e3 is not aligned with the relative nullity")
    gx = np.einsum("...ij,...jb->...ib", ev.metric, frame[..., :, :2])
    nabla = np.einsum("...al,...lb->...ab", cov[..., :2, :], gx)  # <nabla_{e_a} e3, e_b>
    C = -np.swapaxes(nabla, -1, -2)  # column a = C e_a = -sum_b nabla[a, b] e_b
    v = 0.5 * (C[..., 0, 0] + C[..., 1, 1])
    u = 0.5 * (C[..., 0, 1] - C[..., 1, 0])
    model = v[..., None, None] * np.eye(2) - u[..., None, None] * J
    residual = np.linalg.norm(C - model, axis=(-2, -1))
    c1 = np.maximum(np.abs(nabla[..., 0, 0] - nabla[..., 1, 1]), np.abs(nabla[..., 0, 1] + nabla[..., 1, 0]))
    return SplittingData(C, v, u, residual, nabla, c1, frame)


def uv_fields(pmap: ParamMap, frame_field: FrameField):
    """Scalar fields x -> v(x) and x -> u(x)."""

    def v(x):
        return splitting_tensor(pmap, frame_field, x, check_alignment=False).v

    def u(x):
        return splitting_tensor(pmap, frame_field, x, check_alignment=False).u

    return u, v


def directional_derivative(field, x, direction, h):
    """d/ds field(x + s direction) at s = 0, central differences + Richardson."""
    x = np.asarray(x, dtype=float)
    d = np.moveaxis(np.asarray(direction, dtype=float), -1, 0)

    def central(step):
        return (field(x + step * d) - field(x - step * d)) / (2.0 * step)

    return (4.0 * central(h / 2.0) - central(h)) / 3.0


def trace_leaf(frame_field: FrameField, x0, s_values):
    """Integrate dx/ds = e3(x) with classical RK4 through the given arclengths.

    Returns parameter points of shape (m, len(s_values)) for a single start point.
    """
    x0 = np.asarray(x0, dtype=float)
    s_values = np.asarray(s_values, dtype=float)

    def rhs(x):
        return frame_field(x)[..., :, 2]

    order = np.argsort(np.abs(s_values))
    out = np.zeros((x0.shape[0], s_values.size))
    # integrate outwards from s = 0 in both directions
    for sign in (1.0, -1.0):
        x = x0.copy()
        s_prev = 0.0
        for k in order:
            s = s_values[k]
            if s * sign < 0 or (sign < 0 and s == 0):
                continue
            steps = max(1, int(np.ceil(abs(s - s_prev) / 0.01)))
            hstep = (s - s_prev) / steps
            for _ in range(steps):
                k1 = rhs(x)
                k2 = rhs(x + 0.5 * hstep * k1)
                k3 = rhs(x + 0.5 * hstep * k2)
                k4 = rhs(x + hstep * k3)
                x = x + hstep / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            s_prev = s
            out[:, k] = x
    return out


def check_c1(pmap, frame_field, x, tol=1e-6) -> CheckResult:
    sd = splitting_tensor(pmap, frame_field, x)
    return CheckResult("splitting.C1_frame_identities", "eq. (C1): v = -<nabla_e1 e3, e1> = -<nabla_e2 e3, e2>",
                       float(np.max(sd.c1_residual)), tol, int(sd.v.size))


def check_span_IJ(pmap, frame_field, x, tol=1e-6) -> CheckResult:
    sd = splitting_tensor(pmap, frame_field, x)
    return CheckResult("splitting.C_in_span_IJ", "Lemma L31: C_T in span{I, J}",
                       float(np.max(sd.residual)), tol, int(sd.v.size))


def check_umbilical_conullity(pmap, frame_field, x, tol=1e-8) -> CheckResult:
    """|C - v I| on cones: the conullity is umbilical exactly when u vanishes."""
    sd = splitting_tensor(pmap, frame_field, x)
    dev = np.linalg.norm(sd.C - sd.v[..., None, None] * np.eye(2), axis=(-2, -1))
    return CheckResult("splitting.C_multiple_of_identity", "Prop gencones: umbilical conullity, C = v I",
                       float(np.max(dev)), tol, int(sd.v.size))


def check_C2_leaf(pmap, frame_field, x, tol=1e-6, h=1e-3, cauchy_riemann=True) -> CheckResult:
    """e3(v) = v^2 - u^2 - 1 and e3(u) = 2uv at points x; optionally e1(u) = e2(v), e2(u) = -e1(v)."""
    x = np.asarray(x, dtype=float)
    u_f, v_f = uv_fields(pmap, frame_field)
    sd = splitting_tensor(pmap, frame_field, x)
    e = np.moveaxis(sd.frame, -1, 0)  # (3, S, m)
    dv = directional_derivative(v_f, x, e[2], h)
    du = directional_derivative(u_f, x, e[2], h)
    res_v = np.abs(dv - (sd.v**2 - sd.u**2 - 1.0))
    res_u = np.abs(du - 2.0 * sd.u * sd.v)
    detail = {"e3(v)": float(np.max(res_v)), "e3(u)": float(np.max(res_u))}
    worst = max(detail.values())
    if cauchy_riemann:
        e1u = directional_derivative(u_f, x, e[0], h)
        e2u = directional_derivative(u_f, x, e[1], h)
        e1v = directional_derivative(v_f, x, e[0], h)
        e2v = directional_derivative(v_f, x, e[1], h)
        detail["e1(u)-e2(v)"] = float(np.max(np.abs(e1u - e2v)))
        detail["e2(u)+e1(v)"] = float(np.max(np.abs(e2u + e1v)))
        worst = max(detail.values())
    return CheckResult("splitting.C2_leaf_ode", "eq. (C2): e3(v) = v^2 - u^2 - 1, e3(u) = 2uv",
                       worst, tol, int(sd.v.size), detail=detail)


def laplace_beltrami(pmap: ParamMap, field, x, h=1e-2, ev: ImmersionEval | None = None):
    """Delta phi = g^ij (d_ij phi - Gamma^k_ij d_k phi) with FD derivatives of phi."""
    x = np.asarray(x, dtype=float)
    ev = ev or evaluate(pmap, x)
    m = ev.m
    f0 = field(x)

    def shift(i, s):
        y = x.copy()
        y[i] = y[i] + s
        return y

    def first(i, s):
        return (field(shift(i, s)) - field(shift(i, -s))) / (2 * s)

    def second(i, j, s):
        if i == j:
            return (field(shift(i, s)) - 2 * f0 + field(shift(i, -s))) / s**2
        return (
            field(_shift2(x, i, j, s, s))
            - field(_shift2(x, i, j, s, -s))
            - field(_shift2(x, i, j, -s, s))
            + field(_shift2(x, i, j, -s, -s))
        ) / (4 * s * s)

    grad = np.stack([(4 * first(i, h / 2) - first(i, h)) / 3 for i in range(m)], axis=-1)
    hess = np.zeros(f0.shape + (m, m))
    for i in range(m):
        for j in range(i, m):
            val = (4 * second(i, j, h / 2) - second(i, j, h)) / 3
            hess[..., i, j] = hess[..., j, i] = val
    return np.einsum("...ij,...ij->...", ev.metric_inv, hess) - np.einsum(
        "...ij,...kij,...k->...", ev.metric_inv, ev.christoffel, grad
    )


def _shift2(x, i, j, si, sj):
    y = x.copy()
    y[i] = y[i] + si
    y[j] = y[j] + sj
    return y


def check_harmonic(pmap, field, x, tol=1e-5, name="splitting.harmonic", h=1e-2) -> CheckResult:
    lap = laplace_beltrami(pmap, field, x, h=h)
    return CheckResult(name, "Lemma L8: v and u are harmonic", float(np.max(np.abs(lap))), tol, int(np.size(lap)))


def alpha_norm2_field(pmap):
    def field(x):
        return evaluate(pmap, x).alpha_norm2

    return field


def e3_trace_form(pmap, frame_field, x):
    """2 sum_a tr(A_a C A_a) on D^perp in the orthonormal conullity frame."""
    ev = evaluate(pmap, x)
    sd = splitting_tensor(pmap, frame_field, x)
    e = sd.frame[..., :, :2]
    A = np.einsum("...ib,...aij,...jc->...abc", e, ev.h, e)
    return 2.0 * np.einsum("...abc,...cd,...adb->...", A, sd.C, A), ev.alpha_norm2, sd


def check_E3_leaf(pmap, frame_field, x, tol=1e-4, h=1e-3) -> CheckResult:
    """e3(|alpha|^2) against 2 sum_a tr(A_a C A_a), relative to |alpha|^2."""
    x = np.asarray(x, dtype=float)
    rhs, a2, sd = e3_trace_form(pmap, frame_field, x)
    lhs = directional_derivative(alpha_norm2_field(pmap), x, np.moveaxis(sd.frame, -1, 0)[2], h)
    scale = np.maximum(np.abs(a2), 1e-300)
    mask = a2 > 1e-6
    rel = np.abs(lhs - rhs) / scale
    worst = float(np.max(rel[mask])) if np.any(mask) else float(np.max(np.abs(lhs - rhs)))
    return CheckResult("splitting.E3_alpha_norm_derivative",
                       "eq. (E3): e(|alpha|^2) = 2 sum tr(A_xi C_e A_xi)", worst, tol, int(np.size(a2)))


def growth_exponent(pmap, frame_field, x0, s_values):
    """Least-squares slope of log |alpha|^2 along the leaf through x0."""
    pts = trace_leaf(frame_field, x0, s_values)
    a2 = evaluate(pmap, pts).alpha_norm2
    slope, _ = np.polyfit(np.asarray(s_values, dtype=float), np.log(a2), 1)
    return float(slope), a2


def check_commutation(pmap, frame_field, x, tol=1e-8, minimality_tol=None):
    """A C = C^t A and A J = J^t A (the latter is minimality) for every normal direction."""
    x = np.asarray(x, dtype=float)
    ev = evaluate(pmap, x)
    sd = splitting_tensor(pmap, frame_field, x)
    e = sd.frame[..., :, :2]
    A = np.einsum("...ib,...aij,...jc->...abc", e, ev.h, e)
    C = sd.C[..., None, :, :]
    eq1 = np.linalg.norm(A @ C - np.swapaxes(C, -1, -2) @ A, axis=(-2, -1))
    eq2 = np.linalg.norm(A @ J - J.T @ A, axis=(-2, -1))
    n = int(np.prod(sd.v.shape))
    return (
        CheckResult("splitting.eq1_A_C_commutation", "eq. (eq1): A_xi C_T = C_T^t A_xi", float(np.max(eq1)), tol, n),
        CheckResult("splitting.eq2_A_J_commutation", "eq. (eq2): A_xi J = J^t A_xi (minimality)",
                    float(np.max(eq2)), minimality_tol or tol, n),
    )
