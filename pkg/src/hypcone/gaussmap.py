"""Plucker Gauss map gamma = f ^ e1 ^ e2 ^ e3 of a three-dimensional immersion.

Two routes produce gamma at a point:

* ``gauss_value``: the wedge with an orthonormal frame field pushed to the
  ambient space (frame must be orthonormal),
* ``gamma_coordinates``: the frame-free form f ^ f_1 ^ f_2 ^ f_3 / sqrt(det g)
  built from coordinate tangents, which is smooth and cheap to differentiate.

Both agree whenever the frame is positively oriented with respect to the chart.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import PreconditionError
from .immersion import ImmersionEval, evaluate
from .jets import ParamMap, first_step, richardson_derivative
from .lorentz import Multivector4, basis_signs, gram, multivector_dot, wedge4
from .report import CheckResult
from .splitting import FrameField, laplace_beltrami

FRAME_TOL = 1e-8


@dataclass(frozen=True)
class GaussValue:
    """gamma at a batch of points together with the ambient frame used."""

    value: Multivector4
    point: np.ndarray
    frame: np.ndarray  # (S, 3, N) ambient e1, e2, e3

    @property
    def norm2(self) -> np.ndarray:
        return multivector_dot(self.value, self.value)


def ambient_frame(ev: ImmersionEval, frame: np.ndarray) -> np.ndarray:
    """Push coordinate columns (S, m, k) to ambient vectors (S, k, N)."""
    return np.einsum("...ia,...in->...an", frame, ev.tangents)


def gauss_value(pmap: ParamMap, frame_field: FrameField, x, tol=FRAME_TOL) -> GaussValue:
    x = np.asarray(x, dtype=float)
    ev = evaluate(pmap, x)
    if ev.m != 3:
        raise PreconditionError("the Gauss map is implemented for m = 3")
    E = ambient_frame(ev, frame_field(x))
    dev = np.max(np.abs(gram(E) - np.eye(3)))
    if dev > tol:
        raise PreconditionError(f"frame is not orthonormal (Gram deviation {dev:.2e})")
    return GaussValue(wedge4(ev.point, E[..., 0, :], E[..., 1, :], E[..., 2, :]), ev.point, E)


def gauss_from_vectors(point, E) -> Multivector4:
    """gamma = f ^ E[0] ^ E[1] ^ E[2] for ambient vectors E of shape (S, 3, N)."""
    return wedge4(point, E[..., 0, :], E[..., 1, :], E[..., 2, :])


def gamma_coordinates(pmap: ParamMap):
    """Frame-free gamma as a function x -> coefficients (S, Q)."""

    def field(x):
        ev = evaluate(pmap, x)
        t = ev.tangents
        w = wedge4(ev.point, t[..., 0, :], t[..., 1, :], t[..., 2, :])
        return w.coeffs / np.sqrt(np.linalg.det(ev.metric))[..., None]

    return field


def _replaced(point, E, slots: dict) -> np.ndarray:
    """Coefficients of f ^ e1 ^ e2 ^ e3 with frame slots replaced by given vectors."""
    vecs = [E[..., k, :] for k in range(3)]
    for k, vec in slots.items():
        vecs[k] = vec
    return wedge4(point, *vecs).coeffs


def frame_second_fundamental_form(ev: ImmersionEval, frame: np.ndarray) -> np.ndarray:
    """h^a(e_p, e_q) in the given coordinate frame, shape (S, n-m, 3, 3)."""
    return np.einsum("...ip,...aij,...jq->...apq", frame, ev.h, frame)


def gauss_differential(pmap: ParamMap, frame_field: FrameField, x, h=None):
    """FD gamma_* e_p and the normal-replacement expansion, both (S, 3, Q)."""
    x = np.asarray(x, dtype=float)
    ev = evaluate(pmap, x)
    frame = frame_field(x)
    if h is None:
        h = first_step(x)

    def gamma(y):
        E = ambient_frame(evaluate(pmap, y), frame_field(y))
        return gauss_from_vectors(evaluate(pmap, y).point, E).coeffs

    dgam = np.stack([richardson_derivative(gamma, x, i, h[i]) for i in range(ev.m)], axis=-2)  # (S, m, Q)
    fd = np.einsum("...ip,...iq->...pq", frame, dgam)
    E = ambient_frame(ev, frame)
    H = frame_second_fundamental_form(ev, frame)
    model = np.zeros_like(fd)
    basis = {}
    for j, a in product(range(3), range(ev.codim)):
        W = _replaced(ev.point, E, {j: ev.normals[..., a, :]})
        basis[(j, a)] = W
        model = model + H[..., a, :, j][..., None] * W[..., None, :]
    return fd, model, basis, ev


def check_gauss_norm(pmap, frame_field, x, tol=1e-8) -> CheckResult:
    gv = gauss_value(pmap, frame_field, x)
    dev = np.abs(gv.norm2 + 1.0)
    return CheckResult("gauss.normalization", "gamma = f^e1^e2^e3, <gamma, gamma> = -1",
                       float(np.max(dev)), tol, int(dev.size))


def check_frame_free_agreement(pmap, frame_field, x, tol=1e-10) -> CheckResult:
    """Frame route and frame-free route give the same gamma."""
    gv = gauss_value(pmap, frame_field, x)
    dev = np.abs(gv.value.coeffs - gamma_coordinates(pmap)(x))
    return CheckResult("gauss.frame_independence", "gamma = f^e1^e2^e3 (frame-free form)",
                       float(np.max(dev)), tol, int(np.prod(dev.shape[:-1])))


def check_gauss_differential(pmap, frame_field, x, tol=1e-5) -> CheckResult:
    """FD gamma_* e_p against sum_{j,a} h^a_pj f ^ e_{ja}.

    ``detail`` splits the FD derivative into its part along the normal
    replacement wedges and the remainder (tangential part).
    """
    fd, model, basis, ev = gauss_differential(pmap, frame_field, x)
    signs = basis_signs(ev.point.shape[-1])
    res = np.linalg.norm(fd - model, axis=-1)
    proj = np.zeros_like(fd)
    for W in basis.values():
        # <W, W> = -1 for each replacement wedge, and they are mutually orthogonal
        coef = -np.einsum("...pq,q,...q->...p", fd, signs, W)
        proj = proj + coef[..., None] * W[..., None, :]
    tangential = np.linalg.norm(fd - proj, axis=-1)
    scale = max(1.0, float(np.max(np.linalg.norm(model, axis=-1))))
    return CheckResult("gauss.differential_gm", "eq. (gm): gamma_* e_i = sum h^a_ij f^e_ja",
                       float(np.max(res)) / scale, tol, int(np.prod(res.shape[:-1])),
                       detail={"tangential_part": float(np.max(tangential))})


def check_energy(pmap, frame_field, x, tol=1e-4, floor=1e-6) -> CheckResult:
    """sum_p <gamma_* e_p, gamma_* e_p> = -|alpha|^2, relative where |alpha|^2 > floor."""
    fd, _, _, ev = gauss_differential(pmap, frame_field, x)
    signs = basis_signs(ev.point.shape[-1])
    energy = np.einsum("...pq,q,...pq->...", fd, signs, fd)
    a2 = ev.alpha_norm2
    mask = a2 > floor
    if not np.any(mask):
        residual = float(np.max(np.abs(energy + a2)))
    else:
        residual = float(np.max(np.abs(energy[mask] + a2[mask]) / a2[mask]))
    return CheckResult("gauss.energy_identity", "sum <gamma_* e_i, gamma_* e_i> = -|alpha|^2",
                       residual, tol, int(a2.size))


def gauss_laplacian(pmap: ParamMap, x, h=1e-2) -> np.ndarray:
    """Componentwise Laplace-Beltrami of gamma, shape (S, Q)."""
    field = gamma_coordinates(pmap)
    lap = laplace_beltrami(pmap, lambda y: np.moveaxis(field(y), -1, 0), x, h=h)
    return np.moveaxis(lap, 0, -1)


def mixed_term(ev: ImmersionEval, frame: np.ndarray) -> np.ndarray:
    """sum_{i, a != b, j != k} h^a_ij h^b_ik f ^ e_{ja,kb}, shape (S, Q)."""
    E = ambient_frame(ev, frame)
    H = frame_second_fundamental_form(ev, frame)
    out = 0.0
    for a, b in product(range(ev.codim), repeat=2):
        if a == b:
            continue
        for j, k in product(range(3), repeat=2):
            if j == k:
                continue
            W = _replaced(ev.point, E, {j: ev.normals[..., a, :], k: ev.normals[..., b, :]})
            coef = np.einsum("...i,...i->...", H[..., a, :, j], H[..., b, :, k])
            out = out + coef[..., None] * W
    if np.isscalar(out):
        return np.zeros(ev.point.shape[:-1] + (len(basis_signs(ev.point.shape[-1])),))
    return out


@dataclass(frozen=True)
class LaplacianData:
    laplacian: np.ndarray
    gamma: np.ndarray
    alpha_norm2: np.ndarray
    mixed: np.ndarray

    @property
    def residual_full(self) -> np.ndarray:
        return np.linalg.norm(self.laplacian + self.alpha_norm2[..., None] * self.gamma - self.mixed, axis=-1)

    @property
    def residual_without_mixed(self) -> np.ndarray:
        return np.linalg.norm(self.laplacian + self.alpha_norm2[..., None] * self.gamma, axis=-1)


def laplacian_data(pmap, frame_field, x, h=1e-2) -> LaplacianData:
    x = np.asarray(x, dtype=float)
    ev = evaluate(pmap, x)
    frame = frame_field(x)
    gamma = gamma_coordinates(pmap)(x)
    return LaplacianData(gauss_laplacian(pmap, x, h), gamma, ev.alpha_norm2, mixed_term(ev, frame))


def check_gauss_laplacian(pmap, frame_field, x, tol=1e-3, h=1e-2) -> CheckResult:
    ld = laplacian_data(pmap, frame_field, x, h)
    res = ld.residual_full
    return CheckResult("gauss.laplacian", "eq. (laplace): Delta gamma = -|alpha|^2 gamma + mixed term",
                       float(np.max(res)), tol, int(res.size),
                       detail={"without_mixed": float(np.max(ld.residual_without_mixed))})


def check_coordinate_form(pmap, frame_field, x, tol=1e-3, h=1e-2) -> CheckResult:
    """The Laplacian identity read on components w_J = <gamma, E_J> = -eps_J gamma_J."""
    ld = laplacian_data(pmap, frame_field, x, h)
    eps = -basis_signs(pmap.out_dim)
    w, lap_w, mix_w = (-eps * c for c in (ld.gamma, ld.laplacian, ld.mixed))
    res = np.max(np.abs(lap_w + ld.alpha_norm2[..., None] * w - mix_w), axis=-1)
    return CheckResult("gauss.coordinate_form_d1", "eq. (d1): componentwise Laplacian with eps_J",
                       float(np.max(res)), tol, int(res.size))


def check_mixed_ablation(pmap, frame_field, x, min_ratio=10.0, h=1e-2) -> CheckResult:
    """Residual without the mixed term divided by the full residual; must exceed min_ratio.

    Stored as residual = min_ratio / ratio so that passing means residual <= 1.
    """
    if pmap.out_dim - 1 - 3 < 2:
        return CheckResult("gauss.laplacian_mixed_ablation", "eq. (laplace): mixed term a != b needed in codim 2",
                           0.0, 1.0, 0, skipped=True, note="codimension 1: the mixed sum is empty")
    ld = laplacian_data(pmap, frame_field, x, h)
    full = float(np.max(ld.residual_full))
    without = float(np.max(ld.residual_without_mixed))
    ratio = without / max(full, 1e-300)
    return CheckResult("gauss.laplacian_mixed_ablation", "eq. (laplace): mixed term a != b needed in codim 2",
                       min_ratio / ratio, 1.0, int(ld.alpha_norm2.size),
                       detail={"ratio": ratio, "full": full, "without_mixed": without})
