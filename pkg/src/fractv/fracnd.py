"""Axis-wise fractional partial derivatives, the fractional gradient and the
scaled fractional divergence on 1D and 2D node arrays.

Vector and tensor fields are arrays whose leading axis enumerates
components; a field with ``N**k`` components on an ``N``-dimensional grid
is read as a rank-``k`` tensor, first index most significant.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike

from fractv.frac1d import Side, adjoint_apply, frac_derivative_rl
from fractv.grid import OrderLike, as_order, numpy_axis

__all__ = [
    "partial_frac",
    "partial_frac_adjoint",
    "frac_gradient",
    "divergence_scale",
    "frac_divergence",
    "integer_divergence",
    "div_r",
]


def partial_frac(
    u: ArrayLike, axis: int, r: OrderLike, side: Side | str = Side.LEFT
) -> np.ndarray:
    """Fractional derivative along coordinate ``axis`` (1-based), line by line."""
    u = np.asarray(u, dtype=np.float64)
    return frac_derivative_rl(u, r, side, axis=numpy_axis(axis, u.ndim))


def partial_frac_adjoint(
    v: ArrayLike, axis: int, r: OrderLike, side: Side | str = Side.LEFT
) -> np.ndarray:
    """Transpose of :func:`partial_frac` in the Euclidean pairing."""
    v = np.asarray(v, dtype=np.float64)
    return adjoint_apply(v, r, side, axis=numpy_axis(axis, v.ndim))


def frac_gradient(u: ArrayLike, s: float, side: Side | str = Side.LEFT) -> np.ndarray:
    """Stack of the order-``s`` partial derivatives along every axis."""
    u = np.asarray(u, dtype=np.float64)
    return np.stack([partial_frac(u, i + 1, s, side) for i in range(u.ndim)])


def divergence_scale(s: float, dim: int) -> float:
    """Factor :math:`(1 - 1/N) s + 1/N`: averaging at ``s = 0``, one at ``s = 1``."""
    return (1.0 - 1.0 / dim) * s + 1.0 / dim


def _check_components(phi: np.ndarray) -> int:
    dim = phi.ndim - 1
    if dim not in (1, 2):
        raise ValueError(f"expected components of a 1D or 2D field, got shape {phi.shape}")
    return dim


def frac_divergence(phi: ArrayLike, s: float) -> np.ndarray:
    """Scaled fractional divergence with right-sided partials.

    ``phi`` has shape ``(N, *grid)``. The right-sided derivative of order one
    is ``-d/dx``, so at ``s = 1`` this is the negative of the classical
    divergence; at ``s = 0`` it is the component average.
    """
    phi = np.asarray(phi, dtype=np.float64)
    dim = _check_components(phi)
    if phi.shape[0] != dim:
        raise ValueError(f"expected {dim} components, got {phi.shape[0]}")
    s = float(s)
    if not 0 <= s <= 1:
        raise ValueError(f"order must lie in [0, 1], got {s}")
    total = sum(partial_frac(phi[i], i + 1, s, Side.RIGHT) for i in range(dim))
    return divergence_scale(s, dim) * total


def integer_divergence(phi: ArrayLike, times: int) -> np.ndarray:
    """Contract the last tensor index ``times`` times with right-sided
    first-order partials.

    With ``N = 2`` and a rank-2 field ``[p1, p2; p3, p4]`` two contractions
    give ``d1 d1 p1 + d1 d2 p2 + d2 d1 p3 + d2 d2 p4`` (right-sided).
    """
    phi = np.asarray(phi, dtype=np.float64)
    dim = _check_components(phi)
    for _ in range(times):
        m = phi.shape[0]
        if m % dim:
            raise ValueError(f"{m} components cannot be contracted in dimension {dim}")
        grouped = phi.reshape(m // dim, dim, *phi.shape[1:])
        phi = np.stack([
            sum(partial_frac(g[b], b + 1, 1, Side.RIGHT) for b in range(dim))
            for g in grouped
        ])
    return phi


def div_r(phi: ArrayLike, r: OrderLike) -> np.ndarray:
    """Composite divergence ``div^s[div^k phi]`` for ``r = k + s``.

    ``phi`` must carry ``N**(k + 1)`` components.
    """
    order = as_order(r)
    phi = np.asarray(phi, dtype=np.float64)
    dim = _check_components(phi)
    k = order.floor_part
    if phi.shape[0] != dim ** (k + 1):
        raise ValueError(
            f"order {order.r} needs {dim ** (k + 1)} components, got {phi.shape[0]}"
        )
    return frac_divergence(integer_divergence(phi, k), order.frac_part)
