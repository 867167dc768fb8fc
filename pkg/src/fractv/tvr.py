"""The r-order total variation, a TV-based loss and the ROF energy."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from numpy.typing import ArrayLike

from fractv.fracnd import div_r, integer_divergence, partial_frac, partial_frac_adjoint
from fractv.grid import (
    LpLike,
    OrderLike,
    as_lp,
    as_order,
    l1_integral,
    pointwise_lp,
    trapezoid_weights,
)

__all__ = [
    "TVResult",
    "derivative_multi_indices",
    "mixed_partials",
    "mixed_partials_adjoint",
    "tv_primal",
    "dual_operator",
    "random_test_field",
    "tv_dual_estimate",
    "tvr_loss",
    "smoothed_norm",
    "smoothed_tv",
    "rof_energy",
    "rof_gradient",
]


@dataclass(frozen=True)
class TVResult:
    value: float
    r: float
    p: float
    method: str
    n: tuple[int, ...]
    trials: int | None = None
    seed: int | None = None
    extra: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("extra")
        d["n"] = [m - 1 for m in self.n]
        d["p"] = "inf" if math.isinf(self.p) else self.p
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


# {{{ mixed partials


def derivative_multi_indices(r: OrderLike, dim: int) -> list[tuple[int, ...]]:
    """Axis multi-indices of the mixed partials making up the order-``r``
    derivative tensor.

    Integer orders ``k`` give ``dim**k`` indices of length ``k``; otherwise
    ``dim**(k + 1)`` indices whose first entry carries the fractional order.
    """
    order = as_order(r)
    m = order.floor_part if order.is_integer else order.floor_part + 1
    return list(itertools.product(range(1, dim + 1), repeat=m))


def _factors(order, alpha):
    # (axis, order) in application order: integer partials first, fraction last
    if order.is_integer:
        return [(a, 1.0) for a in reversed(alpha)]
    return [(a, 1.0) for a in reversed(alpha[1:])] + [(alpha[0], order.frac_part)]


def mixed_partials(u: ArrayLike, r: OrderLike) -> np.ndarray:
    """All left-sided mixed partials, shape ``(n_components, *u.shape)``."""
    order = as_order(r)
    u = np.asarray(u, dtype=np.float64)
    out = []
    cache: dict[tuple, np.ndarray] = {(): u}
    for alpha in derivative_multi_indices(order, u.ndim):
        steps = _factors(order, alpha)
        # reuse shared integer prefixes, e.g. d1 d1 u and d2 d1 u
        key: tuple = ()
        v = u
        for step in steps:
            key = key + (step,)
            if key not in cache:
                cache[key] = partial_frac(v, step[0], step[1])
            v = cache[key]
        out.append(v)
    return np.stack(out)


def mixed_partials_adjoint(t: ArrayLike, r: OrderLike) -> np.ndarray:
    """Transpose of :func:`mixed_partials` in the Euclidean pairing."""
    order = as_order(r)
    t = np.asarray(t, dtype=np.float64)
    indices = derivative_multi_indices(order, t.ndim - 1)
    total = np.zeros(t.shape[1:])
    for comp, alpha in zip(t, indices):
        v = comp
        for axis, s in reversed(_factors(order, alpha)):
            v = partial_frac_adjoint(v, axis, s)
        total += v
    return total


def tv_primal(u: ArrayLike, r: OrderLike, p: LpLike = 1) -> TVResult:
    """Evaluate :math:`\\int |\\nabla^s \\nabla^k u|_{\\ell^p}` with the
    trapezoid rule; ``r = 0`` gives the :math:`L^1` norm.
    """
    order, lp = as_order(r), as_lp(p)
    u = np.asarray(u, dtype=np.float64)
    value = l1_integral(pointwise_lp(mixed_partials(u, order), lp))
    return TVResult(value, order.r, lp.p, "primal", u.shape)


# }}}


# {{{ dual estimate


def dual_operator(phi: ArrayLike, r: OrderLike) -> np.ndarray:
    """Divergence paired with ``u`` in the dual definition.

    Fractional orders use :func:`~fractv.fracnd.div_r`; an integer order
    ``k`` uses the classical ``k``-fold divergence of a rank-``k`` field.
    """
    order = as_order(r)
    if order.is_integer:
        out = integer_divergence(phi, order.floor_part)
        return out[0]
    return div_r(phi, order)


def random_test_field(
    shape: tuple[int, ...],
    n_components: int,
    rng: np.random.Generator,
    p: LpLike = 1,
    degree: int = 8,
) -> np.ndarray:
    """Smooth test field vanishing on the boundary, scaled so the pointwise
    dual norm :math:`|\\varphi(x)|_{\\ell^{p^*}}` is at most one everywhere.
    """
    axes = [np.linspace(0.0, 1.0, m) for m in shape]
    k = np.arange(degree + 1)
    comps = []
    for _ in range(n_components):
        field_ = np.ones(shape)
        basis = []
        for x in axes:
            bump = 4.0 * x * (1.0 - x)
            b = np.concatenate([np.cos(np.pi * np.outer(k, x)), np.sin(np.pi * np.outer(k[1:], x))])
            basis.append(bump * b)
        decay = 1.0 / (1.0 + np.concatenate([k, k[1:]])) ** 2
        if len(shape) == 1:
            c = rng.standard_normal(decay.size) * decay
            field_ = c @ basis[0]
        else:
            c = rng.standard_normal((decay.size, decay.size)) * np.outer(decay, decay)
            # basis[1] runs along y (rows), basis[0] along x (columns)
            field_ = basis[1].T @ c @ basis[0]
        comps.append(field_)
    phi = np.stack(comps)
    scale = pointwise_lp(phi, as_lp(p).dual).max()
    return phi / scale if scale > 0 else phi


def tv_dual_estimate(
    u: ArrayLike, r: OrderLike, p: LpLike = 1, trials: int = 64, seed: int = 0
) -> TVResult:
    """Lower bound for the total variation from random admissible test fields.

    Trial ``i`` draws from ``default_rng((seed, i))``, so increasing
    ``trials`` never lowers the estimate.
    """
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    order, lp = as_order(r), as_lp(p)
    u = np.asarray(u, dtype=np.float64)
    n_comp = len(derivative_multi_indices(order, u.ndim))
    wts = trapezoid_weights(u.shape) * u
    best = 0.0
    for i in range(trials):
        phi = random_test_field(u.shape, n_comp, np.random.default_rng((seed, i)), lp)
        # phi and -phi are both admissible
        best = max(best, abs(float(np.sum(wts * dual_operator(phi, order)))))
    return TVResult(best, order.r, lp.p, "dual", u.shape, trials, seed)


# }}}


# {{{ loss and ROF energy


def tvr_loss(
    u: ArrayLike,
    v: ArrayLike,
    r: OrderLike,
    p: LpLike = 1,
    beta0: float = 1.0,
    beta1: float = 1.0,
) -> float:
    """:math:`\\beta_0 \\|u - v\\|_{L^1} + \\beta_1 TV^r_{\\ell^p}(u - v)`."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"shape mismatch: {u.shape} vs {v.shape}")
    if beta0 < 0 or beta1 < 0:
        raise ValueError("loss weights must be non-negative")
    d = u - v
    loss = 0.0
    if beta0:
        loss += beta0 * l1_integral(d)
    if beta1:
        loss += beta1 * tv_primal(d, r, p).value
    return loss


def smoothed_norm(t: np.ndarray, p: LpLike, eps: float) -> tuple[np.ndarray, np.ndarray]:
    """Smoothed pointwise norm of the components ``t`` and its derivative.

    ``p = 1`` uses the componentwise Huber function; ``1 < p < inf`` uses
    :math:`\\sqrt{|t|_p^2 + \\varepsilon^2} - \\varepsilon`.
    """
    p = as_lp(p).p
    if p == 1:
        a = np.abs(t)
        small = a <= eps
        val = np.where(small, t * t / (2 * eps), a - eps / 2).sum(axis=0)
        grad = np.where(small, t / eps, np.sign(t))
        return val, grad
    if math.isinf(p):
        raise ValueError("the smoothed energy supports 1 <= p < inf")
    norm = pointwise_lp(t, p)
    root = np.sqrt(norm * norm + eps * eps)
    val = root - eps
    with np.errstate(divide="ignore", invalid="ignore"):
        dnorm = np.where(norm > 0, np.sign(t) * np.abs(t) ** (p - 1) / norm ** (p - 1), 0.0)
    grad = (norm / root) * dnorm
    return val, grad


def smoothed_tv(u: ArrayLike, r: OrderLike, p: LpLike, eps: float) -> float:
    u = np.asarray(u, dtype=np.float64)
    val, _ = smoothed_norm(mixed_partials(u, r), p, eps)
    return float(np.sum(trapezoid_weights(u.shape) * val))


def _default_eps(u_eta: np.ndarray) -> float:
    span = float(np.ptp(u_eta)) if u_eta.size else 0.0
    return 1e-6 * (span if span > 0 else 1.0)


def rof_energy(
    u: ArrayLike,
    u_eta: ArrayLike,
    alpha: float,
    r: OrderLike,
    p: LpLike = 2,
    eps: float | None = None,
) -> float:
    """:math:`\\|u - u_\\eta\\|_{L^2}^2 + \\alpha TV^r_\\varepsilon(u)`.

    ``eps`` defaults to ``1e-6`` times the dynamic range of ``u_eta``.
    """
    u = np.asarray(u, dtype=np.float64)
    u_eta = np.asarray(u_eta, dtype=np.float64)
    if u.shape != u_eta.shape:
        raise ValueError(f"shape mismatch: {u.shape} vs {u_eta.shape}")
    if eps is None:
        eps = _default_eps(u_eta)
    w = trapezoid_weights(u.shape)
    fidelity = float(np.sum(w * (u - u_eta) ** 2))
    return fidelity + alpha * smoothed_tv(u, r, p, eps)


def rof_gradient(
    u: ArrayLike,
    u_eta: ArrayLike,
    alpha: float,
    r: OrderLike,
    p: LpLike = 2,
    eps: float | None = None,
) -> np.ndarray:
    """Exact gradient of :func:`rof_energy` with respect to the node values."""
    u = np.asarray(u, dtype=np.float64)
    u_eta = np.asarray(u_eta, dtype=np.float64)
    if eps is None:
        eps = _default_eps(u_eta)
    w = trapezoid_weights(u.shape)
    _, dpsi = smoothed_norm(mixed_partials(u, r), p, eps)
    return 2.0 * w * (u - u_eta) + alpha * mixed_partials_adjoint(w * dpsi, r)


# }}}
