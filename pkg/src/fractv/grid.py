"""Uniform node grids on the unit interval and unit square, plus elementary
operations on sampled functions (norms, zero extension, shifts, boundary
sampling).

Arrays are the working currency of the library. A 1D signal is an array of
``n + 1`` node values ``w(i h)``; a 2D field has shape ``(ny + 1, nx + 1)``
with ``values[j, i] = u(x_i, y_j)``, so rows run along ``y`` (the second
coordinate ``x_2``) and columns along ``x`` (the first coordinate ``x_1``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from numpy.typing import ArrayLike

__all__ = [
    "FracTVError",
    "NumericalError",
    "Grid1D",
    "Grid2D",
    "Signal1D",
    "Field2D",
    "TensorField",
    "FracOrder",
    "LpIndex",
    "as_order",
    "as_lp",
    "spacing",
    "trapezoid_weights",
    "extend_by_zero",
    "translate",
    "lp_norm",
    "pointwise_lp",
    "l1_integral",
    "boundary_sup",
    "numpy_axis",
]


class FracTVError(Exception):
    """Base class for errors raised by this package."""


class NumericalError(FracTVError):
    """A computation produced non-finite values."""


# {{{ grids and sampled functions


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid with ``n`` cells on :math:`[0, 1]`."""

    n: int

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"grid needs at least 2 cells, got n={self.n}")

    @property
    def h(self) -> float:
        return 1.0 / self.n

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n + 1)


@dataclass(frozen=True)
class Grid2D:
    """Tensor-product grid on the unit square with ``nx`` by ``ny`` cells."""

    nx: int
    ny: int

    def __post_init__(self) -> None:
        Grid1D(self.nx)
        Grid1D(self.ny)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.ny + 1, self.nx + 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.nx + 1)

    @property
    def y(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.ny + 1)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(X, Y)`` arrays shaped like a field on this grid."""
        return np.meshgrid(self.x, self.y, indexing="xy")


def _finite(values: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise NumericalError(f"{what} contains non-finite values")
    return values


@dataclass(frozen=True)
class Signal1D:
    """Node values of a function on the unit interval."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=np.float64)
        if v.ndim != 1:
            raise ValueError(f"signal must be one-dimensional, got shape {v.shape}")
        Grid1D(v.size - 1)
        _finite(v, "signal")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, f, n: int) -> Signal1D:
        return cls(f(Grid1D(n).nodes))

    @property
    def grid(self) -> Grid1D:
        return Grid1D(self.values.size - 1)

    def __array__(self, dtype=None, copy=None) -> np.ndarray:
        return np.asarray(self.values, dtype=dtype)


@dataclass(frozen=True)
class Field2D:
    """Node values of a function on the unit square (rows along ``y``)."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError(f"field must be two-dimensional, got shape {v.shape}")
        Grid2D(v.shape[1] - 1, v.shape[0] - 1)
        _finite(v, "field")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, f, nx: int, ny: int | None = None) -> Field2D:
        X, Y = Grid2D(nx, nx if ny is None else ny).mesh()
        return cls(f(X, Y))

    @property
    def grid(self) -> Grid2D:
        ny, nx = self.values.shape
        return Grid2D(nx - 1, ny - 1)

    def __array__(self, dtype=None, copy=None) -> np.ndarray:
        return np.asarray(self.values, dtype=dtype)


@dataclass(frozen=True)
class TensorField:
    """Per-node tensor with ``dim**rank`` components.

    ``components`` has shape ``(dim**rank, *grid_shape)``; component ``c``
    corresponds to the multi-index obtained by writing ``c`` in base ``dim``
    with the first index most significant.
    """

    components: np.ndarray
    rank: int
    dim: int = field(default=2)

    def __post_init__(self) -> None:
        c = np.asarray(self.components, dtype=np.float64)
        if c.ndim != self.dim + 1:
            raise ValueError(
                f"expected {self.dim}-dimensional component arrays, got shape {c.shape}"
            )
        if c.shape[0] != self.dim**self.rank:
            raise ValueError(
                f"rank-{self.rank} tensor in dimension {self.dim} needs "
                f"{self.dim ** self.rank} components, got {c.shape[0]}"
            )
        _finite(c, "tensor field")
        object.__setattr__(self, "components", c)

    def index(self, c: int) -> tuple[int, ...]:
        """Multi-index (axes numbered from 1) of flat component ``c``."""
        digits = []
        for _ in range(self.rank):
            c, d = divmod(c, self.dim)
            digits.append(d + 1)
        return tuple(reversed(digits))


# }}}


# {{{ orders and exponents


@dataclass(frozen=True)
class FracOrder:
    """Real order ``r >= 0`` split into integer part and fractional part."""

    r: float

    def __post_init__(self) -> None:
        r = float(self.r)
        if not math.isfinite(r) or r < 0:
            raise ValueError(f"order must be finite and non-negative, got {r}")
        # snap values that are integers up to rounding, e.g. 0.3 + 0.7
        if abs(r - round(r)) < 1e-12:
            r = float(round(r))
        object.__setattr__(self, "r", r)

    @property
    def floor_part(self) -> int:
        return int(math.floor(self.r))

    @property
    def frac_part(self) -> float:
        return self.r - self.floor_part

    @property
    def is_integer(self) -> bool:
        return self.frac_part == 0.0

    def __float__(self) -> float:
        return self.r


@dataclass(frozen=True)
class LpIndex:
    """Exponent ``p`` in ``[1, inf]``."""

    p: float

    def __post_init__(self) -> None:
        p = float(self.p)
        if math.isnan(p) or p < 1:
            raise ValueError(f"exponent must lie in [1, inf], got {p}")
        object.__setattr__(self, "p", p)

    @property
    def dual(self) -> LpIndex:
        if self.p == 1:
            return LpIndex(math.inf)
        if math.isinf(self.p):
            return LpIndex(1.0)
        return LpIndex(self.p / (self.p - 1.0))

    def __float__(self) -> float:
        return self.p


OrderLike = Union[FracOrder, float, int]
LpLike = Union[LpIndex, float, int, str]


def as_order(r: OrderLike) -> FracOrder:
    return r if isinstance(r, FracOrder) else FracOrder(r)


def as_lp(p: LpLike) -> LpIndex:
    if isinstance(p, LpIndex):
        return p
    if isinstance(p, str):
        p = math.inf if p.strip().lower() in {"inf", "infinity", "oo"} else float(p)
    return LpIndex(p)


# }}}


# {{{ elementary operations


def numpy_axis(axis: int, ndim: int) -> int:
    """Map a coordinate axis (1-based, ``x_1`` first) to a numpy axis.

    In 2D the first coordinate runs along columns (numpy axis 1).
    """
    if ndim == 1:
        if axis != 1:
            raise ValueError(f"1D signals only have axis 1, got {axis}")
        return 0
    if ndim == 2:
        if axis not in (1, 2):
            raise ValueError(f"axis must be 1 or 2, got {axis}")
        return 2 - axis
    raise ValueError(f"only 1D and 2D data are supported, got ndim={ndim}")


def spacing(values: np.ndarray) -> tuple[float, ...]:
    """Grid spacing along each numpy axis of a node array."""
    return tuple(1.0 / (m - 1) for m in np.shape(values))


def trapezoid_weights(shape: tuple[int, ...]) -> np.ndarray:
    """Quadrature weights of the composite trapezoid rule on the unit cube."""
    w = np.ones(())
    for m in shape:
        w1 = np.full(m, 1.0 / (m - 1))
        w1[[0, -1]] *= 0.5
        w = np.multiply.outer(w, w1)
    return w


def extend_by_zero(w: ArrayLike, pad: int) -> np.ndarray:
    """Append ``pad`` zero nodes on each side of a 1D signal."""
    if pad < 0:
        raise ValueError(f"pad must be non-negative, got {pad}")
    return np.pad(np.asarray(w, dtype=np.float64), pad)


def translate(w: ArrayLike, k: int) -> np.ndarray:
    """Shift a signal by ``k`` nodes, ``out[i] = w[i + k]``, filling with 0.

    This is the node version of :math:`\\tau_h w(x) = w(x + h)` applied to
    the zero extension, restricted back to the original nodes. Use
    :func:`extend_by_zero` first to keep the mass that leaves the interval.
    """
    w = np.asarray(w, dtype=np.float64)
    m = w.shape[0]
    if abs(k) > m - 1:
        raise ValueError(f"shift {k} exceeds the grid ({m - 1} cells)")
    out = np.zeros_like(w)
    if k >= 0:
        out[: m - k] = w[k:]
    else:
        out[-k:] = w[: m + k]
    return out


def lp_norm(v: ArrayLike, p: LpLike) -> float:
    """Euclidean :math:`\\ell^p` norm of a vector."""
    v = np.abs(np.ravel(np.asarray(v, dtype=np.float64)))
    p = as_lp(p).p
    if v.size == 0:
        return 0.0
    if math.isinf(p):
        return float(v.max())
    if p == 1:
        return float(v.sum())
    if p == 2:
        return float(np.sqrt(np.dot(v, v)))
    return float((v**p).sum() ** (1.0 / p))


def pointwise_lp(components: np.ndarray, p: LpLike) -> np.ndarray:
    """:math:`\\ell^p` norm over the leading axis, evaluated at every node."""
    a = np.abs(np.asarray(components, dtype=np.float64))
    p = as_lp(p).p
    if math.isinf(p):
        return a.max(axis=0)
    if p == 1:
        return a.sum(axis=0)
    if p == 2:
        return np.sqrt((a * a).sum(axis=0))
    return ((a**p).sum(axis=0)) ** (1.0 / p)


def l1_integral(w: ArrayLike) -> float:
    """Discrete :math:`L^1` norm with trapezoid weights (exact for constants)."""
    w = np.asarray(w, dtype=np.float64)
    return float(np.sum(trapezoid_weights(w.shape) * np.abs(w)))


def boundary_sup(u: ArrayLike) -> float:
    """Largest absolute value on the boundary nodes (trace surrogate)."""
    u = np.abs(np.asarray(u, dtype=np.float64))
    if u.ndim == 1:
        return float(max(u[0], u[-1]))
    return float(max(u[0].max(), u[-1].max(), u[:, 0].max(), u[:, -1].max()))


# }}}
