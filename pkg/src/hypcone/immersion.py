"""Second-order geometry of a parametric immersion into H^n.

All routines accept a batch of parameter points ``x`` of shape (m,) + S and
return arrays whose leading axes are S.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError, PreconditionError
from .jets import Jet2, ParamMap, eval_jet2, first_step, richardson_derivative
from .lorentz import gram, minkowski_dot, signature

RANK_RTOL = 1e-8
NULLITY_RTOL = 1e-6
# singular values below this are zero regardless of scale (totally geodesic points)
NULLITY_ATOL = 1e-10


@dataclass(frozen=True)
class ImmersionEval:
    """Metric, normal frame and second fundamental form at a batch of points.

    Shapes (S = sample shape): point (S, N), tangents (S, m, N), metric and
    metric_inv (S, m, m), normals (S, n-m, N), h (S, n-m, m, m) with
    h[a, i, j] = <alpha(d_i, d_j), xi_a>, christoffel (S, m, m, m) with
    christoffel[l, i, j] = Gamma^l_ij.
    """

    point: np.ndarray
    tangents: np.ndarray
    metric: np.ndarray
    metric_inv: np.ndarray
    normals: np.ndarray
    h: np.ndarray
    christoffel: np.ndarray
    jet: Jet2

    @property
    def m(self) -> int:
        return self.metric.shape[-1]

    @property
    def codim(self) -> int:
        return self.normals.shape[-2]

    @property
    def alpha(self) -> np.ndarray:
        """alpha(d_i, d_j) as ambient vectors, shape (S, m, m, N)."""
        return np.einsum("...aij,...an->...ijn", self.h, self.normals)

    @property
    def mean_curvature(self) -> np.ndarray:
        """H = (1/m) trace_g alpha in normal-frame coordinates, shape (S, n-m)."""
        return np.einsum("...ij,...aij->...a", self.metric_inv, self.h) / self.m

    @property
    def mean_curvature_norm(self) -> np.ndarray:
        return np.linalg.norm(self.mean_curvature, axis=-1)

    @property
    def alpha_norm2(self) -> np.ndarray:
        """||alpha||^2 = sum_a tr(g^-1 h_a g^-1 h_a)."""
        gi = self.metric_inv
        return np.einsum("...ik,...akl,...lj,...aji->...", gi, self.h, gi, self.h)

    def orthonormal_tangent_basis(self) -> np.ndarray:
        """Columns form a g-orthonormal basis (coordinates), shape (S, m, m)."""
        return orthonormal_basis(self.metric)


def orthonormal_basis(metric) -> np.ndarray:
    w, q = np.linalg.eigh(metric)
    return q / np.sqrt(w)[..., None, :]


def _normal_frame(point, tangents):
    basis = np.concatenate([point[..., None, :], tangents], axis=-2)
    k = basis.shape[-2]
    eta = signature(point.shape[-1])
    _, _, vh = np.linalg.svd(basis * eta, full_matrices=True)
    z = vh[..., k:, :]
    if z.shape[-2] == 0:
        return z
    gz = gram(z)
    chol = np.linalg.cholesky(gz)
    return np.linalg.solve(chol, z)


def evaluate(pmap: ParamMap, x, backend: str = "exact-jet", rank_rtol: float = RANK_RTOL) -> ImmersionEval:
    """Metric, normals and second fundamental form of ``pmap`` at ``x``."""
    jet = eval_jet2(pmap, x, backend)
    p = jet.value
    if np.any(np.abs(minkowski_dot(p, p) + 1.0) > 1e-8):
        raise PreconditionError("map values are off the hyperboloid")
    t = jet.grad
    g = gram(t)
    w = np.linalg.eigvalsh(g)
    bad = w[..., 0] <= rank_rtol * np.abs(w[..., -1])
    if np.any(bad):
        raise DegeneracyError(f"Jacobian rank-deficient at {int(np.sum(bad))} sample(s)")
    gi = np.linalg.inv(g)
    xi = _normal_frame(p, t)
    eta = signature(p.shape[-1])
    h = np.einsum("...ijn,n,...an->...aij", jet.hess, eta, xi)
    h = 0.5 * (h + np.swapaxes(h, -1, -2))
    # d_k g_ij = <f_ik, f_j> + <f_i, f_jk>
    hess_t = np.einsum("...ikn,n,...jn->...kij", jet.hess, eta, t)
    dg = hess_t + np.swapaxes(hess_t, -1, -2)
    first_kind = 0.5 * (np.swapaxes(dg, -3, -2) + np.swapaxes(np.swapaxes(dg, -3, -2), -2, -1) - dg)
    # first_kind[k, i, j] = Gamma_{kij} = 0.5 (d_i g_kj + d_j g_ki - d_k g_ij)
    gamma = np.einsum("...lk,...kij->...lij", gi, first_kind)
    return ImmersionEval(p, t, g, gi, xi, h, gamma, jet)


def shape_operator(ev: ImmersionEval, xi, tol=1e-8) -> np.ndarray:
    """A_xi = g^-1 (<alpha(d_i, d_j), xi>) as a coordinate matrix, shape (S, m, m)."""
    xi = np.asarray(xi, dtype=float)
    scale = np.maximum(1.0, np.max(np.abs(xi), axis=-1))
    off = np.abs(np.einsum("...in,n,...n->...i", ev.tangents, signature(xi.shape[-1]), xi))
    off = np.maximum(np.max(off, axis=-1) if off.size else 0.0, np.abs(minkowski_dot(ev.point, xi)))
    if np.any(off > tol * scale):
        raise PreconditionError("shape_operator needs a normal vector")
    b = np.einsum("...ijn,n,...n->...ij", ev.alpha, signature(xi.shape[-1]), xi)
    return ev.metric_inv @ b


@dataclass(frozen=True)
class NullityData:
    """Relative nullity at a batch of points.

    ``directions[..., :, k]`` are coordinate vectors ordered by increasing
    singular value, g-orthonormal; the first ``index`` of them span D(x).
    """

    index: np.ndarray
    singular_values: np.ndarray
    directions: np.ndarray
    residual: np.ndarray
    threshold: float

    def basis(self, k=None) -> np.ndarray:
        """Coordinate basis of D at one sample (flat index k) or a uniform-nu batch."""
        if k is None:
            nu = np.unique(self.index)
            if nu.size != 1:
                raise ValueError("nullity index varies over the batch; pass a sample index")
            return self.directions[..., : int(nu[0])]
        d = self.directions.reshape((-1,) + self.directions.shape[-2:])[k]
        nu = int(self.index.reshape(-1)[k])
        return d[:, :nu]


def stacked_shape_operators(ev: ImmersionEval) -> tuple[np.ndarray, np.ndarray]:
    """Shape operators in a g-orthonormal basis, stacked to (S, (n-m) m, m)."""
    e = ev.orthonormal_tangent_basis()
    ho = np.einsum("...ip,...aij,...jq->...apq", e, ev.h, e)
    stacked = ho.reshape(ho.shape[:-3] + (-1, ho.shape[-1]))
    return stacked, e


def nullity_space(ev: ImmersionEval, threshold: float = NULLITY_RTOL, atol: float = NULLITY_ATOL) -> NullityData:
    """Kernel of X -> (A_xi_1 X, ..., A_xi_{n-m} X) via singular values."""
    stacked, e = stacked_shape_operators(ev)
    m = ev.m
    if stacked.shape[-2] == 0:
        sv = np.zeros(ev.metric.shape[:-1])
        vt = np.broadcast_to(np.eye(m), ev.metric.shape)
    else:
        _, sv, vt = np.linalg.svd(stacked, full_matrices=False)
    smax = sv[..., :1]
    small = sv < np.maximum(threshold * smax, atol)
    index = small.sum(axis=-1)
    # ascending order: reverse singular values and right vectors
    sv_asc = sv[..., ::-1]
    v_asc = np.swapaxes(vt, -1, -2)[..., ::-1]
    directions = e @ v_asc
    residual = np.where(index > 0, np.take_along_axis(sv_asc, np.maximum(index - 1, 0)[..., None], -1)[..., 0], 0.0)
    return NullityData(index, sv_asc, directions, residual, threshold)


def scalar_curvature_gauss(ev: ImmersionEval) -> np.ndarray:
    """s = -m(m-1) + m^2 |H|^2 - |alpha|^2 (Gauss equation in H^n)."""
    m = ev.m
    return -m * (m - 1) + m * m * ev.mean_curvature_norm**2 - ev.alpha_norm2


def christoffel(pmap: ParamMap, x) -> np.ndarray:
    return evaluate(pmap, x).christoffel


def scalar_curvature_intrinsic(pmap: ParamMap, x, h=None) -> np.ndarray:
    """Scalar curvature from g, dg and d^2 g (Christoffel symbols and Ricci).

    Christoffel symbols come from the exact 2-jet; their derivatives are
    central differences with one Richardson level.
    """
    x = np.asarray(x, dtype=float)
    ev = evaluate(pmap, x)
    gam = ev.christoffel  # [l, i, j]
    m = ev.m
    if h is None:
        h = first_step(x)

    def gamma_at(y):
        return evaluate(pmap, y).christoffel

    dgam = np.stack(
        [richardson_derivative(gamma_at, x, k, h[k] if np.ndim(h) else h) for k in range(m)],
        axis=-4,
    )  # [k, l, i, j] = d_k Gamma^l_ij
    # Ric_{sv} = d_r G^r_{vs} - d_v G^r_{rs} + G^r_{rl} G^l_{vs} - G^r_{vl} G^l_{rs}
    ric = (
        np.einsum("...rrvs->...sv", dgam)
        - np.einsum("...vrrs->...sv", dgam)
        + np.einsum("...rrl,...lvs->...sv", gam, gam)
        - np.einsum("...rvl,...lrs->...sv", gam, gam)
    )
    return np.einsum("...sv,...sv->...", ev.metric_inv, ric)
