"""Second-order jets and finite differences for parametric maps.

A :class:`Jet` carries a value together with its gradient and Hessian with
respect to ``m`` parameters.  It hooks into numpy's ufunc protocol, so a map
written with ``np.cosh``, ``np.sqrt``, arithmetic and ``np.stack`` can be
evaluated on plain arrays (finite-difference backend) or on jets (exact
backend) without change.

Shapes: a jet whose value has shape ``S`` stores ``grad`` as ``(m,) + S`` and
``hess`` as ``(m, m) + S``; derivative axes lead so that broadcasting over the
trailing sample/coordinate axes is plain numpy broadcasting.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, EvaluationError

EPS = np.finfo(float).eps


def _outer(a, b):
    return a[:, None] * b[None, :]


class Jet:
    __array_priority__ = 1000

    __slots__ = ("v", "g", "h")

    def __init__(self, v, g, h):
        self.v = np.asarray(v, dtype=float)
        self.g = np.asarray(g, dtype=float)
        self.h = np.asarray(h, dtype=float)

    @classmethod
    def variables(cls, x) -> list["Jet"]:
        """Seed jets for the parameters ``x`` (shape (m,) + S)."""
        x = np.asarray(x, dtype=float)
        m = x.shape[0]
        shape = x.shape[1:]
        out = []
        for i in range(m):
            g = np.zeros((m,) + shape)
            g[i] = 1.0
            out.append(cls(x[i], g, np.zeros((m, m) + shape)))
        return out

    @property
    def nvars(self) -> int:
        return self.g.shape[0]

    @property
    def shape(self):
        return self.v.shape

    @property
    def ndim(self):
        return self.v.ndim

    def _lift(self, c) -> "Jet":
        if isinstance(c, Jet):
            return c
        c = np.asarray(c, dtype=float)
        m = self.nvars
        return Jet(c, np.zeros((m,) + c.shape), np.zeros((m, m) + c.shape))

    def __getitem__(self, key):
        if not isinstance(key, tuple):
            key = (key,)
        return Jet(self.v[key], self.g[(slice(None),) + key], self.h[(slice(None), slice(None)) + key])

    def __len__(self):
        return len(self.v)

    def __repr__(self):
        return f"Jet(value={self.v!r}, nvars={self.nvars})"

    def _expand(self, ndim) -> "Jet":
        extra = ndim - self.ndim
        if extra <= 0:
            return self
        m = self.nvars
        shape = (1,) * extra + self.shape
        return Jet(self.v.reshape(shape), self.g.reshape((m,) + shape), self.h.reshape((m, m) + shape))

    def _pair(self, other) -> tuple["Jet", "Jet"]:
        o = self._lift(other)
        nd = max(self.ndim, o.ndim)
        return self._expand(nd), o._expand(nd)

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        a, o = self._pair(other)
        return Jet(a.v + o.v, a.g + o.g, a.h + o.h)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.v, -self.g, -self.h)

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        a, b = self._pair(other)
        v = a.v * b.v
        g = a.g * b.v + a.v * b.g
        h = a.h * b.v + _outer(a.g, b.g) + _outer(b.g, a.g) + a.v * b.h
        return Jet(v, g, h)

    __rmul__ = __mul__

    def reciprocal(self):
        if np.any(self.v == 0.0):
            raise EvaluationError("jet division by zero")
        inv = 1.0 / self.v
        return self._unary(inv, -inv**2, 2.0 * inv**3)

    def __truediv__(self, other):
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def __pow__(self, p):
        if isinstance(p, Jet):
            raise TypeError("jet exponents are not supported")
        p = float(p)
        if p == 2.0:
            return self * self
        v = self.v
        return self._unary(v**p, p * v ** (p - 1), p * (p - 1) * v ** (p - 2))

    def _unary(self, f0, f1, f2) -> "Jet":
        g = f1 * self.g
        h = f1 * self.h + f2 * _outer(self.g, self.g)
        return Jet(f0, g, h)

    # -- numpy protocol ----------------------------------------------------
    def __array_ufunc__(self, ufunc, method, *inputs, **kwargs):
        if method != "__call__" or kwargs:
            return NotImplemented
        if ufunc in _BINARY:
            a, b = inputs
            return _BINARY[ufunc](a, b)
        if ufunc in _UNARY and len(inputs) == 1:
            (x,) = inputs
            with np.errstate(all="raise"):
                try:
                    f0, f1, f2 = _UNARY[ufunc](x.v)
                except FloatingPointError as exc:
                    raise EvaluationError(f"{ufunc.__name__} failed on jet value") from exc
            return x._unary(f0, f1, f2)
        return NotImplemented

    def __array_function__(self, func, types, args, kwargs):
        if func in _FUNCTIONS:
            return _FUNCTIONS[func](*args, **kwargs)
        return NotImplemented


def _binary_op(name):
    def op(a, b):
        if isinstance(a, Jet):
            return getattr(a, f"__{name}__")(b)
        return getattr(b, f"__r{name}__")(a)

    return op


_BINARY = {
    np.add: _binary_op("add"),
    np.subtract: _binary_op("sub"),
    np.multiply: _binary_op("mul"),
    np.true_divide: _binary_op("truediv"),
}


def _sqrt(x):
    s = np.sqrt(x)
    return s, 0.5 / s, -0.25 / (s * x)


def _tanh(x):
    t = np.tanh(x)
    d = 1.0 - t * t
    return t, d, -2.0 * t * d


_UNARY = {
    np.negative: lambda x: (-x, -np.ones_like(x), np.zeros_like(x)),
    np.positive: lambda x: (x, np.ones_like(x), np.zeros_like(x)),
    np.square: lambda x: (x * x, 2.0 * x, 2.0 * np.ones_like(x)),
    np.sqrt: _sqrt,
    np.exp: lambda x: (np.exp(x),) * 3,
    np.log: lambda x: (np.log(x), 1.0 / x, -1.0 / (x * x)),
    np.cosh: lambda x: (np.cosh(x), np.sinh(x), np.cosh(x)),
    np.sinh: lambda x: (np.sinh(x), np.cosh(x), np.sinh(x)),
    np.tanh: _tanh,
    np.cos: lambda x: (np.cos(x), -np.sin(x), -np.cos(x)),
    np.sin: lambda x: (np.sin(x), np.cos(x), -np.sin(x)),
}


def _as_jets(items):
    items = list(items)
    ref = next(it for it in items if isinstance(it, Jet))
    jets = [ref._lift(it) for it in items]
    shape = np.broadcast_shapes(*(j.shape for j in jets))
    return [j if j.shape == shape else _broadcast_to(j, shape) for j in jets]


def _stack(arrays, axis=0):
    jets = _as_jets(arrays)
    nd = jets[0].ndim + 1
    ax = axis % nd
    return Jet(
        np.stack([j.v for j in jets], axis=ax),
        np.stack([j.g for j in jets], axis=ax + 1),
        np.stack([j.h for j in jets], axis=ax + 2),
    )


def _concatenate(arrays, axis=0):
    jets = _as_jets(arrays)
    ax = axis % jets[0].ndim
    return Jet(
        np.concatenate([j.v for j in jets], axis=ax),
        np.concatenate([j.g for j in jets], axis=ax + 1),
        np.concatenate([j.h for j in jets], axis=ax + 2),
    )


def _sum(a, axis=None):
    if axis is None:
        axes = tuple(range(a.ndim))
    else:
        axes = tuple(ax % a.ndim for ax in np.atleast_1d(axis))
    return Jet(
        a.v.sum(axis=axes),
        a.g.sum(axis=tuple(ax + 1 for ax in axes)),
        a.h.sum(axis=tuple(ax + 2 for ax in axes)),
    )


def _broadcast_to(a, shape):
    shape = tuple(shape)
    m = a.nvars
    a = a._expand(len(shape))
    return Jet(
        np.broadcast_to(a.v, shape),
        np.broadcast_to(a.g, (m,) + shape),
        np.broadcast_to(a.h, (m, m) + shape),
    )


def _zeros_like(a, *args, **kwargs):
    return np.zeros(a.shape)


def _ones_like(a, *args, **kwargs):
    return np.ones(a.shape)


_FUNCTIONS = {
    np.stack: _stack,
    np.concatenate: _concatenate,
    np.sum: _sum,
    np.broadcast_to: _broadcast_to,
    np.zeros_like: _zeros_like,
    np.ones_like: _ones_like,
}


def coords(*components):
    """Stack scalar components (arrays, floats or jets) along a new last axis."""
    if any(isinstance(c, Jet) for c in components):
        return _stack(components, axis=-1)
    arrays = np.broadcast_arrays(*(np.asarray(c, dtype=float) for c in components))
    return np.stack(arrays, axis=-1)


def component(x, i):
    """x[..., i] for arrays and jets alike."""
    return x[..., i]


# ---------------------------------------------------------------------------
# parametric maps


@dataclass(frozen=True)
class ParamMap:
    """A map from an m-dimensional parameter box into R^N (usually L^{n+1}).

    ``func`` takes a sequence of m parameter arrays (or jets) of common shape
    S and returns an array (or jet) of shape S + (N,).  It must be built from
    numpy ufuncs, arithmetic and ``np.stack`` so both backends apply.
    """

    func: Callable
    dim: int
    out_dim: int
    lo: tuple = ()
    hi: tuple = ()
    name: str = "map"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.func([x[i] for i in range(self.dim)])

    def jet(self, x) -> Jet:
        return self.func(Jet.variables(x))

    def contains(self, x, margin=0.0) -> bool:
        x = np.asarray(x, dtype=float)
        if not self.lo:
            return True
        lo = np.asarray(self.lo, dtype=float).reshape((self.dim,) + (1,) * (x.ndim - 1))
        hi = np.asarray(self.hi, dtype=float).reshape((self.dim,) + (1,) * (x.ndim - 1))
        margin = np.asarray(margin, dtype=float)
        return bool(np.all(x - margin >= lo) and np.all(x + margin <= hi))


@dataclass(frozen=True)
class Jet2:
    """Value, first and second partials of a map at a batch of points.

    ``value`` has shape S + (N,), ``grad`` S + (m, N), ``hess`` S + (m, m, N).
    """

    value: np.ndarray
    grad: np.ndarray
    hess: np.ndarray
    backend: str = field(default="exact-jet")

    @property
    def m(self) -> int:
        return self.grad.shape[-2]


def _jet_to_jet2(j: Jet, backend: str) -> Jet2:
    grad = np.moveaxis(j.g, 0, -2)
    hess = np.moveaxis(np.moveaxis(j.h, 0, -2), 0, -3)
    return Jet2(j.v, grad, hess, backend)


def first_step(x):
    return EPS ** (1.0 / 3.0) * (1.0 + np.abs(x))


def second_step(x):
    return EPS ** (1.0 / 4.0) * (1.0 + np.abs(x))


def _shift(x, i, h):
    y = np.array(x, dtype=float, copy=True)
    y[i] = y[i] + h
    return y


def richardson_derivative(func, x, i, h):
    """d/dx_i func at x by central differences with one Richardson level.

    ``func`` maps an array of shape (m,) + S to any array whose leading axes
    are S; ``h`` is a scalar or broadcastable to S.
    """
    x = np.asarray(x, dtype=float)

    def central(step):
        fp = np.asarray(func(_shift(x, i, step)))
        fm = np.asarray(func(_shift(x, i, -step)))
        s = np.reshape(step, np.shape(step) + (1,) * (fp.ndim - np.ndim(step)))
        return (fp - fm) / (2.0 * s)

    d1 = central(h)
    d2 = central(np.asarray(h) / 2.0)
    return (4.0 * d2 - d1) / 3.0


def _bcast(step, arr):
    return np.reshape(step, np.shape(step) + (1,) * (arr.ndim - np.ndim(step)))


def _fd_jet2(pmap: ParamMap, x) -> Jet2:
    x = np.asarray(x, dtype=float)
    m = pmap.dim
    h1 = first_step(x)
    h2 = second_step(x)
    if not pmap.contains(x, margin=h2):
        raise DomainError("finite-difference stencil leaves the parameter box")
    value = np.asarray(pmap(x))
    if not np.all(np.isfinite(value)):
        raise EvaluationError("non-finite map value")
    grads = [richardson_derivative(pmap, x, i, h1[i]) for i in range(m)]
    hess = [[None] * m for _ in range(m)]

    def second(i, j, h):
        if i == j:
            fp = pmap(_shift(x, i, h))
            fm = pmap(_shift(x, i, -h))
            return (fp - 2.0 * value + fm) / _bcast(h, value) ** 2
        hi, hj = h
        pp = pmap(_shift(_shift(x, i, hi), j, hj))
        pm = pmap(_shift(_shift(x, i, hi), j, -hj))
        mp = pmap(_shift(_shift(x, i, -hi), j, hj))
        mm = pmap(_shift(_shift(x, i, -hi), j, -hj))
        return (pp - pm - mp + mm) / (4.0 * _bcast(hi, value) * _bcast(hj, value))

    for i in range(m):
        for j in range(i, m):
            if i == j:
                d1 = second(i, i, h2[i])
                d2 = second(i, i, h2[i] / 2.0)
            else:
                d1 = second(i, j, (h2[i], h2[j]))
                d2 = second(i, j, (h2[i] / 2.0, h2[j] / 2.0))
            hess[i][j] = hess[j][i] = (4.0 * d2 - d1) / 3.0
    grad = np.stack(grads, axis=-2)
    hess_arr = np.stack([np.stack(row, axis=-2) for row in hess], axis=-3)
    return Jet2(value, grad, hess_arr, "finite-difference")


def eval_jet2(pmap: ParamMap, x, backend: str = "exact-jet") -> Jet2:
    """Value, gradient and Hessian of ``pmap`` at ``x`` (shape (m,) or (m,) + S)."""
    x = np.asarray(x, dtype=float)
    if x.shape[0] != pmap.dim:
        raise DomainError(f"expected {pmap.dim} parameters, got {x.shape[0]}")
    if backend == "exact-jet":
        if not pmap.contains(x):
            raise DomainError("evaluation point outside the parameter box")
        j = pmap.jet(x)
        out = _jet_to_jet2(j, backend)
        if not (np.all(np.isfinite(out.value)) and np.all(np.isfinite(out.hess))):
            raise EvaluationError("non-finite jet entries")
        return out
    if backend == "finite-difference":
        return _fd_jet2(pmap, x)
    raise ValueError(f"unknown backend {backend!r}")


def directional_derivative3(pmap: ParamMap, x, direction, h=None):
    """Third derivative of ``pmap`` along ``direction`` (FD of exact Hessians)."""
    x = np.asarray(x, dtype=float)
    d = np.asarray(direction, dtype=float)
    d = d.reshape(d.shape + (1,) * (x.ndim - 1))
    if h is None:
        h = float(np.max(first_step(x)))
    if not pmap.contains(x, margin=h * float(np.max(np.abs(d)))):
        raise DomainError("stencil leaves the parameter box")

    def second_along(s):
        jet = eval_jet2(pmap, x + s * d)
        dd = np.moveaxis(d, 0, -1)
        return np.einsum("...i,...j,...ijn->...n", dd, dd, jet.hess)

    def central(step):
        return (second_along(step) - second_along(-step)) / (2.0 * step)

    return (4.0 * central(h / 2.0) - central(h)) / 3.0
