"""Gamma function via the Lanczos approximation."""

from __future__ import annotations

import math

__all__ = ["gamma"]

# g = 7, 9 terms (Godfrey's coefficients)
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma(x: float) -> float:
    """Evaluate :math:`\\Gamma(x)` for real ``x``.

    Uses the reflection formula :math:`\\Gamma(x)\\Gamma(1-x) = \\pi/\\sin(\\pi x)`
    for ``x < 0.5``. Relative error is below ``1e-12`` on ``(0, 50]``.

    :raises ValueError: at the poles ``x = 0, -1, -2, ...``.
    """
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise ValueError(f"gamma has a pole at {x}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    if x == math.floor(x) and x <= 23:
        return float(math.factorial(int(x) - 1))

    x -= 1.0
    a = _LANCZOS_COEFFS[0]
    t = x + _LANCZOS_G + 0.5
    for i, c in enumerate(_LANCZOS_COEFFS[1:], start=1):
        a += c / (x + i)
    # split the power to avoid overflow for large arguments
    p = t ** ((x + 0.5) / 2)
    return math.sqrt(2 * math.pi) * p * (p * math.exp(-t)) * a
