"""Minkowski linear algebra on L^{n+1} and rank-4 exterior algebra.

Vectors are plain numpy arrays whose last axis holds the n+1 coordinates;
coordinate 0 is the timelike one.  Everything here broadcasts over leading
axes so grids of sample points can be processed in one call.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .errors import DegeneracyError, DimensionMismatch

DEGENERACY_RTOL = 1e-10


def signature(dim: int) -> np.ndarray:
    """Diagonal of the Minkowski form (-1, +1, ..., +1) for dim coordinates."""
    eta = np.ones(dim)
    eta[0] = -1.0
    return eta


def minkowski_dot(x, y):
    """-x0*y0 + sum_{i>=1} xi*yi along the last axis."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[-1] != y.shape[-1]:
        raise DimensionMismatch(f"dimension mismatch: {x.shape[-1]} vs {y.shape[-1]}")
    prod = x * y
    return prod[..., 1:].sum(axis=-1) - prod[..., 0]


def minkowski_norm2(x):
    return minkowski_dot(x, x)


def gram(vectors) -> np.ndarray:
    """Minkowski Gram matrix of the rows of ``vectors`` (shape (..., k, N))."""
    v = np.asarray(vectors, dtype=float)
    return np.einsum("...in,n,...jn->...ij", v, signature(v.shape[-1]), v)


@lru_cache(maxsize=None)
def wedge_basis(dim: int) -> tuple[tuple[int, int, int, int], ...]:
    """Sorted index quadruples of L^dim in lexicographic order."""
    return tuple(combinations(range(dim), 4))


@lru_cache(maxsize=None)
def basis_signs(dim: int) -> np.ndarray:
    """Minkowski square of each basis 4-vector: -1 iff it contains index 0."""
    return np.array([-1.0 if 0 in quad else 1.0 for quad in wedge_basis(dim)])


def timelike_count(dim: int) -> int:
    """Number S of timelike basis elements, C(n, 3) for dim = n + 1."""
    return comb(dim - 1, 3)


@dataclass(frozen=True)
class Multivector4:
    """Coefficients of a 4-vector on the lexicographic wedge basis.

    ``coeffs`` has shape (..., C(dim, 4)); leading axes index sample points.
    """

    coeffs: np.ndarray
    dim: int

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=float)
        if coeffs.shape[-1] != comb(self.dim, 4):
            raise DimensionMismatch(
                f"expected {comb(self.dim, 4)} coefficients for dim {self.dim}, "
                f"got {coeffs.shape[-1]}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def basis(self):
        return wedge_basis(self.dim)

    @property
    def signs(self) -> np.ndarray:
        return basis_signs(self.dim)

    def __add__(self, other: "Multivector4") -> "Multivector4":
        _check_same(self, other)
        return Multivector4(self.coeffs + other.coeffs, self.dim)

    def __sub__(self, other: "Multivector4") -> "Multivector4":
        _check_same(self, other)
        return Multivector4(self.coeffs - other.coeffs, self.dim)

    def __neg__(self) -> "Multivector4":
        return Multivector4(-self.coeffs, self.dim)

    def __mul__(self, scalar) -> "Multivector4":
        s = np.asarray(scalar, dtype=float)
        return Multivector4(self.coeffs * s[..., None], self.dim)

    __rmul__ = __mul__

    def components(self) -> np.ndarray:
        """Coordinates w_J with gamma = sum_J w_J A_J (the coefficients themselves)."""
        return self.coeffs

    def euclidean_norm(self) -> np.ndarray:
        return np.linalg.norm(self.coeffs, axis=-1)

    @classmethod
    def zeros(cls, dim: int, shape=()) -> "Multivector4":
        return cls(np.zeros(tuple(shape) + (comb(dim, 4),)), dim)


def _check_same(p: Multivector4, q: Multivector4):
    if p.dim != q.dim:
        raise DimensionMismatch(f"ambient dimensions differ: {p.dim} vs {q.dim}")


@lru_cache(maxsize=None)
def _basis_index_array(dim: int) -> np.ndarray:
    return np.array(wedge_basis(dim), dtype=int)


def wedge4(a, b, c, d) -> Multivector4:
    """a ^ b ^ c ^ d; the coefficient on (i<j<k<l) is the 4x4 minor on those columns."""
    rows = np.stack(np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a, b, c, d))), axis=-2)
    dim = rows.shape[-1]
    if dim < 4:
        raise DimensionMismatch("wedge4 needs at least four coordinates")
    idx = _basis_index_array(dim)
    # (..., 4, Q, 4) -> (..., Q, 4, 4)
    sub = np.moveaxis(rows[..., :, idx], -3, -2)
    return Multivector4(np.linalg.det(sub), dim)


def multivector_dot(p: Multivector4, q: Multivector4):
    """Lorentzian inner product; det of the Gram matrix for simple 4-vectors."""
    _check_same(p, q)
    return np.sum(p.signs * p.coeffs * q.coeffs, axis=-1)


def simple_dot(a_vectors, b_vectors):
    """det(<a_i, b_j>) computed directly from the factors (brute-force route)."""
    a = np.asarray(a_vectors, dtype=float)
    b = np.asarray(b_vectors, dtype=float)
    mixed = np.einsum("...in,n,...jn->...ij", a, signature(a.shape[-1]), b)
    return np.linalg.det(mixed)


def orthonormalize(vectors, expected_signature: tuple[int, int]) -> list[np.ndarray]:
    """Gram-Schmidt with the Minkowski product.

    Returns the frame in input order.  ``expected_signature`` is the pair
    (timelike count, spacelike count) the Gram matrix must have.
    """
    vecs = [np.asarray(v, dtype=float) for v in vectors]
    if not vecs:
        return []
    dim = vecs[0].shape[-1]
    if any(v.shape != (dim,) for v in vecs):
        raise DimensionMismatch("all vectors must share one dimension")
    n_time, n_space = expected_signature
    if n_time + n_space != len(vecs):
        raise DegeneracyError(
            f"signature {expected_signature} does not match {len(vecs)} input vectors"
        )
    scale = max(float(np.max(np.abs(v))) for v in vecs)
    if scale == 0.0:
        raise DegeneracyError("all input vectors vanish")
    out: list[np.ndarray] = []
    signs: list[float] = []
    for v in vecs:
        w = v.copy()
        for e, s in zip(out, signs):
            w = w - s * minkowski_dot(w, e) * e
        q = float(minkowski_dot(w, w))
        if abs(q) < DEGENERACY_RTOL * scale**2:
            raise DegeneracyError(f"near-degenerate pivot {q:.3e} during orthonormalization")
        s = 1.0 if q > 0 else -1.0
        out.append(w / np.sqrt(abs(q)))
        signs.append(s)
    got = (signs.count(-1.0), signs.count(1.0))
    if got != (n_time, n_space):
        raise DegeneracyError(f"Gram signature {got} differs from expected {expected_signature}")
    return out
