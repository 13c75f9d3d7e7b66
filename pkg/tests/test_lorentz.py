from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hypcone.errors import DegeneracyError, DimensionMismatch
from hypcone.lorentz import (
    Multivector4,
    basis_signs,
    gram,
    minkowski_dot,
    multivector_dot,
    orthonormalize,
    simple_dot,
    timelike_count,
    wedge4,
    wedge_basis,
)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def e(i, dim=5):
    v = np.zeros(dim)
    v[i] = 1.0
    return v


@pytest.mark.parametrize(
    "x, expected",
    [((1, 0, 0, 0, 0), -1.0), ((0, 1, 0, 0, 0), 1.0), ((1, 1, 0, 0, 0), 0.0)],
)
def test_minkowski_dot_examples(x, expected):
    assert minkowski_dot(x, x) == expected


def test_minkowski_dot_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        minkowski_dot(np.ones(4), np.ones(5))


@settings(max_examples=50, deadline=None)
@given(arrays(float, (3, 6), elements=finite), st.floats(-3, 3), st.floats(-3, 3))
def test_minkowski_dot_symmetric_bilinear(v, a, b):
    x, y, z = v
    assert minkowski_dot(x, y) == pytest.approx(minkowski_dot(y, x), abs=1e-14)
    lhs = minkowski_dot(a * x + b * y, z)
    rhs = a * minkowski_dot(x, z) + b * minkowski_dot(y, z)
    assert lhs == pytest.approx(rhs, abs=1e-12 * (1 + abs(lhs)))


@pytest.mark.parametrize("n", [4, 5, 6, 8])
def test_basis_size_and_timelike_count(n):
    dim = n + 1
    assert len(wedge_basis(dim)) == comb(n + 1, 4)
    assert timelike_count(dim) == comb(n, 3)
    assert int(np.sum(basis_signs(dim) < 0)) == comb(n, 3)


def test_wedge_of_basis_vectors_is_unit_on_its_quadruple():
    dim = 6
    for k, quad in enumerate(combinations(range(dim), 4)):
        w = wedge4(*(e(i, dim) for i in quad))
        expected = np.zeros(comb(dim, 4))
        expected[k] = 1.0
        np.testing.assert_array_equal(w.coeffs, expected)


def test_wedge_antisymmetry(rng):
    a, b, c, d = rng.normal(size=(4, 5))
    assert np.allclose(wedge4(a, a, c, d).coeffs, 0.0)
    np.testing.assert_allclose(wedge4(a, b, c, d).coeffs, -wedge4(b, a, c, d).coeffs, atol=1e-14)


def test_multivector_dot_orthonormal_frame_is_minus_one():
    w = wedge4(e(0), e(1), e(2), e(3))
    assert multivector_dot(w, w) == -1.0


def test_multivector_dot_disjoint_support():
    p = wedge4(e(0), e(1), e(2), e(3))
    q = wedge4(e(1), e(2), e(3), e(4))
    assert multivector_dot(p, q) == 0.0


def test_multivector_dot_matches_gram_determinant(rng):
    a = rng.normal(size=(1000, 4, 6))
    b = rng.normal(size=(1000, 4, 6))
    P = wedge4(*(a[:, k] for k in range(4)))
    Q = wedge4(*(b[:, k] for k in range(4)))
    coef = multivector_dot(P, Q)
    direct = simple_dot(a, b)
    scale = np.maximum(np.abs(direct), 1e-3 * np.abs(P.coeffs).sum(-1) * np.abs(Q.coeffs).sum(-1))
    assert np.max(np.abs(coef - direct) / scale) < 1e-10


def test_multivector_algebra():
    p = wedge4(e(0), e(1), e(2), e(3))
    q = wedge4(e(0), e(1), e(2), e(4))
    s = p + q * 2.0
    np.testing.assert_allclose((s - p).coeffs, 2.0 * q.coeffs)
    np.testing.assert_allclose((-s).coeffs, -s.coeffs)
    assert Multivector4.zeros(5).euclidean_norm() == 0.0
    with pytest.raises((ValueError, DimensionMismatch)):
        multivector_dot(p, wedge4(e(0, 6), e(1, 6), e(2, 6), e(3, 6)))


def test_orthonormalize_scaling():
    out = orthonormalize([2 * e(0), 3 * e(1)], (1, 1))
    np.testing.assert_allclose(out[0], e(0))
    np.testing.assert_allclose(out[1], e(1))


def test_orthonormalize_fixed_point():
    frame = [e(0), e(1), e(2), e(3)]
    out = orthonormalize(frame, (1, 3))
    for a, b in zip(frame, out):
        assert np.max(np.abs(a - b)) < 1e-14


def test_orthonormalize_random_frame(rng):
    p = np.array([np.sqrt(1 + 0.3**2 + 0.2**2), 0.3, 0.2, 0.0, 0.0, 0.0])
    vecs = [p] + list(rng.normal(size=(3, 6)))
    # make the extra vectors spacelike-ish by projecting off p
    vecs = [vecs[0]] + [v + minkowski_dot(v, p) * p for v in vecs[1:]]
    out = orthonormalize(vecs, (1, 3))
    assert np.max(np.abs(gram(np.array(out)) - np.diag([-1.0, 1, 1, 1]))) < 1e-12


def test_orthonormalize_errors():
    with pytest.raises(DegeneracyError):
        orthonormalize([e(1), e(1)], (0, 2))
    with pytest.raises(DegeneracyError):
        orthonormalize([e(1), e(2)], (1, 1))
    with pytest.raises(DegeneracyError):
        orthonormalize([e(0) + e(1)], (0, 1))
