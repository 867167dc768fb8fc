"""Seeded test functions: bumps, trigonometric polynomials, ramps and
mollified steps on the unit interval and square.
"""

from __future__ import annotations

import zlib

import numpy as np

__all__ = [
    "rng_for",
    "smooth_bump",
    "reference_bump",
    "signals_1d",
    "compact_signals_1d",
    "fields_2d",
    "compact_fields_2d",
    "gaussian_bump_2d",
]


def rng_for(name: str, seed: int) -> np.random.Generator:
    """Independent stream per experiment name, stable across runs."""
    return np.random.default_rng((zlib.crc32(name.encode()), int(seed)))


def smooth_bump(x: np.ndarray, center: float = 0.5, radius: float = 0.3) -> np.ndarray:
    """:math:`C^\\infty` bump :math:`\\exp(1 - 1/(1 - t^2))` supported on ``|t| < 1``."""
    t = (np.asarray(x, dtype=np.float64) - center) / radius
    out = np.zeros_like(t)
    inside = np.abs(t) < 1
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - t[inside] ** 2))
    return out


def reference_bump(n: int) -> np.ndarray:
    return smooth_bump(np.linspace(0.0, 1.0, n + 1))


def _mollified_step(x: np.ndarray, at: float, width: float) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh((x - at) / width))


def signals_1d(n: int, rng: np.random.Generator, count: int, piecewise_constant: bool = False) -> list[np.ndarray]:
    """Mixture of smooth signals with values of order one.

    With ``piecewise_constant`` every fourth signal is a random staircase.
    """
    x = np.linspace(0.0, 1.0, n + 1)
    out = []
    for i in range(count):
        kind = i % 4
        if piecewise_constant and kind == 3:
            cuts = np.sort(rng.uniform(0.05, 0.95, 3))
            levels = rng.uniform(-1.0, 1.0, 4)
            out.append(levels[np.searchsorted(cuts, x)])
            continue
        if kind == 0:
            w = rng.uniform(0.5, 1.5) * smooth_bump(x, rng.uniform(0.3, 0.7), rng.uniform(0.1, 0.3))
        elif kind == 1:
            k = rng.integers(1, 5)
            w = rng.uniform(-1, 1) * np.cos(np.pi * k * x + rng.uniform(0, np.pi)) + rng.uniform(-0.5, 0.5)
        elif kind == 2:
            w = rng.uniform(-1, 1) * x + rng.uniform(-0.5, 0.5)
        else:
            w = rng.uniform(-1, 1) * _mollified_step(x, rng.uniform(0.3, 0.7), rng.uniform(0.02, 0.1))
        out.append(w)
    return out


def compact_signals_1d(n: int, rng: np.random.Generator, count: int) -> list[np.ndarray]:
    """Smooth signals supported strictly inside the interval."""
    x = np.linspace(0.0, 1.0, n + 1)
    out = []
    for _ in range(count):
        c = rng.uniform(0.35, 0.65)
        rad = rng.uniform(0.15, min(c, 1 - c) - 0.05)
        k = rng.integers(0, 4)
        osc = 1.0 + 0.5 * np.cos(2 * np.pi * k * x + rng.uniform(0, np.pi))
        out.append(rng.uniform(0.5, 1.5) * smooth_bump(x, c, rad) * osc)
    return out


def gaussian_bump_2d(n: int, center=(0.5, 0.5), width: float = 0.1) -> np.ndarray:
    x = np.linspace(0.0, 1.0, n + 1)
    X, Y = np.meshgrid(x, x)
    return np.exp(-((X - center[0]) ** 2 + (Y - center[1]) ** 2) / (2 * width**2))


def fields_2d(n: int, rng: np.random.Generator, count: int, image_class: bool = True) -> list[np.ndarray]:
    """Smooth fields: Gaussian bumps plus a low-frequency trigonometric part.

    With ``image_class`` each field is divided by its boundary maximum when
    that exceeds one, so the boundary sup-norm is at most one.
    """
    x = np.linspace(0.0, 1.0, n + 1)
    X, Y = np.meshgrid(x, x)
    out = []
    for _ in range(count):
        c = rng.uniform(0.2, 0.8, 2)
        w = rng.uniform(0.05, 0.2)
        u = rng.uniform(-2, 2) * np.exp(-((X - c[0]) ** 2 + (Y - c[1]) ** 2) / w**2)
        a, b = rng.integers(1, 4, 2)
        u += 0.5 * rng.uniform(-1, 1) * np.cos(np.pi * a * X) * np.sin(np.pi * b * Y + rng.uniform(0, 1))
        if image_class:
            edge = max(np.abs(u[0]).max(), np.abs(u[-1]).max(), np.abs(u[:, 0]).max(), np.abs(u[:, -1]).max())
            u = u / max(1.0, edge)
        out.append(u)
    return out


def compact_fields_2d(n: int, rng: np.random.Generator, count: int) -> list[np.ndarray]:
    """Smooth fields supported strictly inside the square."""
    x = np.linspace(0.0, 1.0, n + 1)
    out = []
    for _ in range(count):
        c = rng.uniform(0.4, 0.6, 2)
        rad = rng.uniform(0.2, 0.35, 2)
        k = rng.integers(0, 3, 2)
        bx = smooth_bump(x, c[0], rad[0]) * (1 + 0.5 * np.cos(2 * np.pi * k[0] * x))
        by = smooth_bump(x, c[1], rad[1]) * (1 + 0.5 * np.sin(2 * np.pi * k[1] * x))
        out.append(rng.uniform(0.5, 1.5) * np.outer(by, bx))
    return out
