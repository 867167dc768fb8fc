"""ROF-type denoising with an r-order TV regularizer and a grid search over
the order against a dataset of (clean, noisy) pairs.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from numpy.typing import ArrayLike

from fractv.grid import FracTVError, NumericalError, as_lp, as_order, trapezoid_weights
from fractv.tvr import rof_energy, rof_gradient, tvr_loss

__all__ = [
    "DenoiseConfig",
    "DenoiseReport",
    "Dataset",
    "LossSpec",
    "OrderSearchResult",
    "denoise",
    "order_search",
    "max_workers",
]


def max_workers() -> int:
    """Thread cap from ``FRACTV_THREADS`` (unset or 0 means automatic)."""
    try:
        n = int(os.environ.get("FRACTV_THREADS", "0") or 0)
    except ValueError:
        n = 0
    return n if n > 0 else min(8, os.cpu_count() or 1)


@dataclass(frozen=True)
class DenoiseConfig:
    alpha: float
    r: float = 1.0
    p: float = 2.0
    eps: float = 1e-3
    max_iters: int = 500
    tol: float = 1e-6
    step: float | None = None

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be at least 1, got {self.max_iters}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.step is not None and not self.step > 0:
            raise ValueError(f"step must be positive, got {self.step}")
        as_order(self.r)
        if math.isinf(as_lp(self.p).p):
            raise ValueError("the smoothed energy supports 1 <= p < inf")

    def initial_step(self, shape: tuple[int, ...]) -> float:
        if self.step is not None:
            return self.step
        h = 1.0 / (max(shape) - 1)
        return 1.0 / (8.0 * self.alpha * h ** (-2.0 * self.r) + 2.0)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha, "r": self.r, "p": self.p, "eps": self.eps,
            "max_iters": self.max_iters, "tol": self.tol, "step": self.step,
        }


@dataclass
class DenoiseReport:
    u: np.ndarray
    energy: list[float]
    iterations: int
    converged: bool


def denoise(u_eta: ArrayLike, cfg: DenoiseConfig) -> DenoiseReport:
    """Minimize the smoothed ROF energy by gradient descent from ``u_eta``.

    The gradient is taken in the trapezoid-weighted inner product, so the
    fidelity part has unit curvature independent of the grid. A trial step
    that would raise the energy is halved until it does not; after an
    accepted step the step size is doubled again.
    """
    u_eta = np.asarray(u_eta, dtype=np.float64)
    if not np.all(np.isfinite(u_eta)):
        raise NumericalError("noisy input is not finite")
    w = trapezoid_weights(u_eta.shape)

    def energy(v: np.ndarray) -> float:
        return rof_energy(v, u_eta, cfg.alpha, cfg.r, cfg.p, cfg.eps)

    u = u_eta.copy()
    e = energy(u)
    trace = [e]
    step = cfg.initial_step(u_eta.shape)
    converged = False
    it = 0
    for it in range(1, cfg.max_iters + 1):
        g = rof_gradient(u, u_eta, cfg.alpha, cfg.r, cfg.p, cfg.eps) / w
        if not np.all(np.isfinite(g)):
            raise NumericalError(f"non-finite gradient at iteration {it}")
        if not np.any(g):
            trace.append(e)
            converged = True
            break
        while True:
            trial = u - step * g
            e_trial = energy(trial)
            if math.isnan(e_trial):
                raise NumericalError(f"non-finite energy at iteration {it}")
            if e_trial <= e or step < 1e-300:
                break
            step *= 0.5
        if e_trial > e:
            # no admissible step left at working precision
            trace.append(e)
            converged = True
            break
        decrease = (e - e_trial) / max(abs(e), np.finfo(float).tiny)
        u, e = trial, e_trial
        if not math.isfinite(e):
            raise NumericalError(f"non-finite energy at iteration {it}")
        trace.append(e)
        if decrease < cfg.tol:
            converged = True
            break
        step *= 2.0
    return DenoiseReport(u, trace, it, converged)


# {{{ order search


@dataclass(frozen=True)
class Dataset:
    """Pairs of (clean, corrupted) samples, with optional names."""

    pairs: tuple[tuple[np.ndarray, np.ndarray], ...]
    names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        pairs = tuple(
            (np.asarray(c, dtype=np.float64), np.asarray(n, dtype=np.float64))
            for c, n in self.pairs
        )
        if not pairs:
            raise ValueError("dataset is empty")
        for i, (c, n) in enumerate(pairs):
            if c.shape != n.shape:
                raise ValueError(f"pair {i}: clean {c.shape} vs noisy {n.shape}")
        names = tuple(self.names) or tuple(f"pair{i}" for i in range(len(pairs)))
        if len(names) != len(pairs):
            raise ValueError("one name per pair is required")
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "names", names)

    def __len__(self) -> int:
        return len(self.pairs)

    @classmethod
    def load(cls, directory: str | Path) -> Dataset:
        """Read ``<name>.clean.{pgm,csv}`` / ``<name>.noisy.{pgm,csv}`` pairs."""
        from fractv.io import read_array

        directory = Path(directory)
        if not directory.is_dir():
            raise FileNotFoundError(f"dataset directory not found: {directory}")
        pairs, names = [], []
        for clean in sorted(directory.glob("*.clean.*")):
            name, ext = clean.name[: -len(".clean" + clean.suffix)], clean.suffix
            noisy = directory / f"{name}.noisy{ext}"
            if not noisy.exists():
                raise FileNotFoundError(f"missing noisy partner for {clean}")
            pairs.append((read_array(clean), read_array(noisy)))
            names.append(name)
        if not pairs:
            raise FileNotFoundError(f"no '*.clean.pgm' or '*.clean.csv' files in {directory}")
        return cls(tuple(pairs), tuple(names))


@dataclass(frozen=True)
class LossSpec:
    beta0: float = 1.0
    beta1: float = 1.0
    p: float = 1.0
    r_loss: float | None = None
    """Order of the loss; ``None`` uses the candidate order itself."""


@dataclass
class OrderSearchResult:
    best_r: float
    table: list[dict]
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"best_r": self.best_r, "table": self.table, "config": self.config}


def _argmin_order(table: list[dict], tie_tol: float) -> float:
    lowest = min(row["total_loss"] for row in table)
    tied = [row["r"] for row in table if row["total_loss"] <= lowest + tie_tol]
    return min(tied)


def order_search(
    ds: Dataset,
    orders: list[float],
    cfg_base: DenoiseConfig,
    loss: LossSpec = LossSpec(),
    tie_tol: float = 1e-9,
    workers: int | None = None,
) -> OrderSearchResult:
    """Pick the regularization order with the smallest summed loss.

    Every candidate order denoises every noisy sample; the loss compares the
    result with the clean sample. Totals within ``tie_tol`` of the minimum
    count as ties, resolved toward the smallest order.
    """
    orders = [float(r) for r in orders]
    if not orders:
        raise ValueError("no candidate orders")
    if any(not r > 0 for r in orders):
        raise ValueError("candidate orders must be positive")

    def job(r: float, i: int) -> float:
        clean, noisy = ds.pairs[i]
        try:
            out = denoise(noisy, replace(cfg_base, r=r)).u
        except FracTVError as exc:
            raise type(exc)(f"order {r}: {exc}") from exc
        r_loss = r if loss.r_loss is None else loss.r_loss
        return tvr_loss(out, clean, r_loss, loss.p, loss.beta0, loss.beta1)

    keys = [(r, i) for r in orders for i in range(len(ds))]
    with ThreadPoolExecutor(max_workers=workers or max_workers()) as pool:
        values = list(pool.map(lambda key: job(*key), keys))
    losses = dict(zip(keys, values))

    table = []
    for r in orders:
        per_pair = [losses[r, i] for i in range(len(ds))]
        table.append({"r": r, "total_loss": math.fsum(per_pair), "per_pair": per_pair})
    config = {
        "denoise": cfg_base.to_dict(),
        "loss": {"beta0": loss.beta0, "beta1": loss.beta1, "p": loss.p, "r_loss": loss.r_loss},
        "tie_tol": tie_tol,
        "pairs": list(ds.names),
    }
    return OrderSearchResult(_argmin_order(table, tie_tol), table, config)


# }}}
