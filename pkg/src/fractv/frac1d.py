"""Grünwald-Letnikov discretizations of Riemann-Liouville fractional
integrals and derivatives on the unit interval.

All operators act on the zero extension of the samples outside
:math:`[0, 1]`. The left-sided GL operator of order ``r`` is the
lower-triangular Toeplitz matrix

.. math::

    (G_r w)_i = h^{-r} \\sum_{j=0}^{i} g^{(r)}_j w_{i-j},
    \\qquad g^{(r)}_j = (-1)^j \\binom{r}{j},

and the fractional integral of order ``r`` is :math:`G_{-r}`. Right-sided
operators are obtained by reflecting :math:`x \\mapsto 1 - x`.

Every function takes an ``axis`` argument (a numpy axis) so the same code
sweeps grid lines of 2D fields.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.typing import ArrayLike

from fractv.grid import NumericalError, OrderLike, as_order
from fractv.special import gamma

__all__ = [
    "Side",
    "GLWeights",
    "gl_derivative_weights",
    "gl_integral_weights",
    "reflect",
    "gl_apply",
    "frac_integral",
    "frac_derivative_rl",
    "frac_derivative_caputo",
    "frac_derivative_revised",
    "adjoint_apply",
    "power_rule",
]


class Side(enum.Enum):
    """Side of a fractional operator."""

    LEFT = "left"
    """Integrates over :math:`[0, x]`."""
    RIGHT = "right"
    """Integrates over :math:`[x, 1]`."""

    @classmethod
    def parse(cls, side: Side | str) -> Side:
        return side if isinstance(side, Side) else cls(str(side).lower())

    @property
    def opposite(self) -> Side:
        return Side.RIGHT if self is Side.LEFT else Side.LEFT


# {{{ weights


@dataclass(frozen=True)
class GLWeights:
    """Grünwald-Letnikov weights :math:`g_0, \\dots, g_m`."""

    order: float
    kind: str
    weights: np.ndarray


@lru_cache(maxsize=128)
def _binomial_weights(a: float, m: int) -> np.ndarray:
    # coefficients of (1 - z)^a, by g_j = g_{j-1} (1 - (a + 1) / j)
    g = np.empty(m + 1)
    g[0] = 1.0
    if m > 0:
        j = np.arange(1, m + 1, dtype=np.float64)
        g[1:] = np.cumprod(1.0 - (a + 1.0) / j)
    g.setflags(write=False)
    return g


def gl_derivative_weights(r: float, m: int) -> GLWeights:
    """Weights :math:`(-1)^j \\binom{r}{j}` for ``j = 0, ..., m``."""
    if m < 0:
        raise ValueError(f"m must be non-negative, got {m}")
    return GLWeights(float(r), "derivative", _binomial_weights(float(r), int(m)))


def gl_integral_weights(r: float, m: int) -> GLWeights:
    """Weights :math:`(-1)^j \\binom{-r}{j} \\ge 0` of the order ``r`` integral."""
    if m < 0:
        raise ValueError(f"m must be non-negative, got {m}")
    return GLWeights(float(r), "integral", _binomial_weights(-float(r), int(m)))


@lru_cache(maxsize=32)
def _toeplitz(a: float, m: int) -> np.ndarray:
    """Lower-triangular Toeplitz matrix of size ``m`` for weights of ``(1 - z)^a``."""
    g = _binomial_weights(a, m - 1)
    idx = np.arange(m)
    diff = idx[:, None] - idx[None, :]
    mat = np.where(diff >= 0, g[np.clip(diff, 0, None)], 0.0)
    mat.setflags(write=False)
    return mat


# }}}


# {{{ raw operators


def reflect(w: ArrayLike, axis: int = 0) -> np.ndarray:
    """Reflect samples about the midpoint, :math:`w(x) \\mapsto w(1 - x)`."""
    return np.flip(np.asarray(w, dtype=np.float64), axis=axis)


def _apply_lower(w: np.ndarray, a: float, axis: int) -> np.ndarray:
    m = w.shape[axis]
    mat = _toeplitz(a, m)
    out = np.moveaxis(w, axis, -1) @ mat.T
    return np.moveaxis(out, -1, axis)


def gl_apply(w: ArrayLike, a: float, side: Side | str = Side.LEFT, axis: int = 0) -> np.ndarray:
    """Apply the GL operator with symbol :math:`(1 - z)^a`, unscaled.

    Positive ``a`` differentiates, negative ``a`` integrates. No powers of
    ``h`` and no endpoint convention are applied.
    """
    w = np.asarray(w, dtype=np.float64)
    if Side.parse(side) is Side.RIGHT:
        return reflect(_apply_lower(reflect(w, axis), a, axis), axis)
    return _apply_lower(w, a, axis)


def _endpoint_nodes(r: float) -> int:
    """Number of output nodes next to the base point that get overwritten."""
    order = as_order(r)
    if order.r == 0:
        return 0
    if order.is_integer:
        return order.floor_part
    return 1


def _copy_endpoint(out: np.ndarray, k: int, side: Side, axis: int) -> np.ndarray:
    if k == 0:
        return out
    out = np.moveaxis(out, axis, 0)
    if side is Side.LEFT:
        out[:k] = out[k]
    else:
        out[-k:] = out[-k - 1]
    return np.moveaxis(out, 0, axis)


def _uncopy_endpoint(v: np.ndarray, k: int, side: Side, axis: int) -> np.ndarray:
    """Transpose of :func:`_copy_endpoint`."""
    if k == 0:
        return v
    v = np.moveaxis(v.copy(), axis, 0)
    if side is Side.LEFT:
        v[k] += v[:k].sum(axis=0)
        v[:k] = 0.0
    else:
        v[-k - 1] += v[-k:].sum(axis=0)
        v[-k:] = 0.0
    return np.moveaxis(v, 0, axis)


# }}}


# {{{ integrals and derivatives


def frac_integral(
    w: ArrayLike, r: float, side: Side | str = Side.LEFT, axis: int = 0
) -> np.ndarray:
    """Riemann-Liouville integral of order ``r > 0`` at the nodes.

    The GL weights are non-negative, so the operator preserves
    non-negativity. The scheme is first-order accurate for continuous ``w``.
    """
    r = float(r)
    if not r > 0:
        raise ValueError(f"integral order must be positive, got {r}")
    w = np.asarray(w, dtype=np.float64)
    h = 1.0 / (w.shape[axis] - 1)
    return h**r * gl_apply(w, -r, side, axis)


def frac_derivative_rl(
    w: ArrayLike, r: OrderLike, side: Side | str = Side.LEFT, axis: int = 0
) -> np.ndarray:
    """Riemann-Liouville derivative of order ``r`` at the nodes.

    For integer ``r`` this is the ``r``-fold backward difference (forward
    difference with a sign for the right side). The stencil is undefined at
    the base point, so the nodes ``0, ..., k - 1`` (``k = r`` for integer
    orders, ``k = 1`` otherwise) copy the value of node ``k``; mirrored for
    the right side.
    """
    order = as_order(r)
    side = Side.parse(side)
    w = np.asarray(w, dtype=np.float64)
    if not np.all(np.isfinite(w)):
        raise NumericalError("input to the fractional derivative is not finite")
    if order.r == 0:
        return w.copy()
    h = 1.0 / (w.shape[axis] - 1)
    out = h ** (-order.r) * gl_apply(w, order.r, side, axis)
    return _copy_endpoint(out, _endpoint_nodes(order.r), side, axis)


def adjoint_apply(
    v: ArrayLike, r: OrderLike, side: Side | str = Side.LEFT, axis: int = 0
) -> np.ndarray:
    """Exact transpose of :func:`frac_derivative_rl` in the Euclidean pairing."""
    order = as_order(r)
    side = Side.parse(side)
    v = np.asarray(v, dtype=np.float64)
    if order.r == 0:
        return v.copy()
    h = 1.0 / (v.shape[axis] - 1)
    v = _uncopy_endpoint(v, _endpoint_nodes(order.r), side, axis)
    # the transpose of a lower-triangular Toeplitz matrix is its reflection
    return h ** (-order.r) * gl_apply(v, order.r, side.opposite, axis)


def _taylor_polynomial(w: np.ndarray, k: int) -> np.ndarray:
    # interpolate the first k + 2 nodes and keep the terms of degree <= k
    m = w.size
    npts = min(k + 2, m)
    t = np.arange(npts, dtype=np.float64)
    coeffs = np.polynomial.polynomial.polyfit(t, w[:npts], npts - 1)
    x = np.arange(m, dtype=np.float64)
    return np.polynomial.polynomial.polyval(x, coeffs[: k + 1])


def frac_derivative_caputo(
    w: ArrayLike, r: OrderLike, side: Side | str = Side.LEFT
) -> np.ndarray:
    """Caputo derivative, computed as ``d^r (w - P)`` with ``P`` the Taylor
    polynomial of degree ``ceil(r) - 1`` at the base point (``floor(r)`` for
    fractional orders; for integer orders Caputo and Riemann-Liouville agree).

    Endpoint derivatives are taken from the polynomial interpolating the
    first ``deg(P) + 2`` nodes, so ``P`` is exact for polynomials of degree
    ``deg(P) + 1``.
    """
    order = as_order(r)
    side = Side.parse(side)
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 1:
        raise ValueError("the Caputo derivative is implemented for 1D signals")
    if side is Side.RIGHT:
        return reflect(frac_derivative_caputo(reflect(w), order, Side.LEFT))
    if order.r == 0:
        return w.copy()
    degree = order.floor_part - 1 if order.is_integer else order.floor_part
    return frac_derivative_rl(w - _taylor_polynomial(w, degree), order)


def frac_derivative_revised(w: ArrayLike, s: float) -> np.ndarray:
    """Left derivative of order ``s`` in ``(0, 1)`` with the base-point
    singularity removed: the derivative of ``w - w(0)``.

    In the continuum this equals ``d^s w - w(0) x^{-s} / Gamma(1 - s)``.
    """
    s = float(s)
    if not 0 < s < 1:
        raise ValueError(f"order must lie in (0, 1), got {s}")
    w = np.asarray(w, dtype=np.float64)
    return frac_derivative_rl(w - w[0], s)


def power_rule(x: ArrayLike, k: float, s: float) -> np.ndarray:
    """Closed form of :math:`d^s x^k = \\Gamma(k+1)/\\Gamma(k-s+1) x^{k-s}`."""
    x = np.asarray(x, dtype=np.float64)
    if k - s + 1 <= 0 and k - s + 1 == np.floor(k - s + 1):
        return np.zeros_like(x)
    with np.errstate(divide="ignore"):
        return gamma(k + 1) / gamma(k - s + 1) * x ** (k - s)


# }}}
