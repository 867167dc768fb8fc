"""Numerical experiments that check quantitative properties of the fractional
operators and of the r-order total variation.

Each ``check_*`` function returns an :class:`ExperimentReport`. A report
collects one or more elementary checks ``measured <= bound`` (or ``>=``);
its headline numbers are those of the tightest check, and it passes exactly
when every margin is non-negative.

Tolerances follow ``tol(n) = C / n``. The constants in :data:`TOL_CONSTANTS`
were fitted once from the discretization error observed at ``n`` and ``2n``
and then frozen. Whenever an experiment relies on such a tolerance it also
carries a refinement check at ``2n`` showing that the tolerance does cover
the discretization error. Checks that hold to rounding are flagged
``exact``.

Quantities with an integrable endpoint singularity (derivatives of signals
that do not vanish at the base point) converge like ``h^(1-s)`` rather than
``h``; those use :func:`singular_tol` instead.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.integrate import trapezoid
from scipy.ndimage import map_coordinates

from fractv.corpus import (
    compact_fields_2d,
    compact_signals_1d,
    fields_2d,
    gaussian_bump_2d,
    reference_bump,
    rng_for,
    signals_1d,
)
from fractv.frac1d import (
    frac_derivative_caputo,
    frac_derivative_rl,
    frac_integral,
    power_rule,
)
from fractv.grid import boundary_sup, extend_by_zero, l1_integral, translate, trapezoid_weights
from fractv.io import format_float
from fractv.special import gamma
from fractv.tvr import derivative_multi_indices, tv_primal

__all__ = [
    "ExperimentReport",
    "TOL_CONSTANTS",
    "INTERPOLATION_CONSTANT",
    "EXPERIMENTS",
    "tol",
    "singular_tol",
    "check_power_rule",
    "check_semigroup",
    "check_integral_bound",
    "check_caputo_equiv",
    "check_order_limits",
    "check_tv_equivalence",
    "check_monotonicity",
    "check_interpolation",
    "check_translation_estimate",
    "check_lsc_order",
    "check_strict_approx_scaling",
    "run_suite",
    "resolve_names",
    "write_reports",
    "center_scale",
    "interpolation_ratio",
    "LSC_RECIPES",
    "reports_to_csv",
    "reports_to_json",
]

TOL_CONSTANTS = {
    # relative L1 error of the power rule; tol(1024) = 0.02
    "power_rule": 20.48,
    # L1 error of iterated integrals against the closed form, observed ~1.0 / n
    "semigroup": 2.0,
    # R-L vs Caputo on compactly supported bumps (zero up to rounding)
    "caputo_equiv": 2.0,
    # TV^s changes by at most ~2.6 / n between n and 2n on the image corpus
    "monotonicity": 6.0,
    # TV^r change between n and 2n for interior bumps: ~0.03 / n for r < 1,
    # ~0.8 / n for 1 < r < 2
    "strict_approx": 0.1,
    "strict_approx_high": 2.0,
    # 1D TV^r of the reference bump, change between n and 2n
    "lsc_order": 2.0,
}

SINGULAR_CONSTANT = 2.0
EXACT_RTOL = 1e-12

# max over r in {1.1, ..., 1.9} of TV^s / (|u|_1 + TV^r) on compact corpora
# drawn with seeds 100..111 was 0.088 at n = 64 and 128; frozen with a 1.5x
# safety factor
INTERPOLATION_CONSTANT = 0.13


def tol(name: str, n: int) -> float:
    return TOL_CONSTANTS[name] / n


def singular_tol(s: float, n: int) -> float:
    """Tolerance for quantities carrying an ``x^(-s)`` endpoint singularity."""
    return SINGULAR_CONSTANT * (1.0 / n) ** (1.0 - s)


# {{{ report


@dataclass(frozen=True)
class Check:
    label: str
    measured: float
    bound: float
    upper: bool = True

    @property
    def margin(self) -> float:
        m = self.bound - self.measured if self.upper else self.measured - self.bound
        return m if math.isfinite(m) else -math.inf

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "measured": self.measured,
            "bound": self.bound,
            "sense": "<=" if self.upper else ">=",
            "margin": self.margin,
        }


@dataclass(frozen=True)
class ExperimentReport:
    name: str
    params: dict
    measured: float
    bound: float
    margin: float
    passed: bool
    grid_sizes: tuple[int, ...]
    exact: bool = False
    checks: tuple[Check, ...] = ()
    traces: dict = field(default_factory=dict)

    @classmethod
    def from_checks(
        cls,
        name: str,
        params: dict,
        checks: list[Check],
        grid_sizes,
        exact: bool = False,
        traces: dict | None = None,
    ) -> ExperimentReport:
        if not checks:
            raise ValueError("an experiment needs at least one check")
        worst = min(checks, key=lambda c: c.margin)
        return cls(
            name=name,
            params=dict(params),
            measured=float(worst.measured),
            bound=float(worst.bound),
            margin=float(worst.margin),
            passed=bool(worst.margin >= 0),
            grid_sizes=tuple(int(m) for m in grid_sizes),
            exact=exact,
            checks=tuple(checks),
            traces=traces or {},
        )

    @property
    def label(self) -> str:
        args = ",".join(f"{k}={_fmt_param(v)}" for k, v in self.params.items())
        return f"{self.name}({args})"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "params": self.params,
            "measured": self.measured,
            "bound": self.bound,
            "margin": self.margin,
            "passed": self.passed,
            "grid_sizes": list(self.grid_sizes),
            "exact": self.exact,
            "checks": [c.to_dict() for c in self.checks],
            "traces": self.traces,
        }


def _fmt_param(v) -> str:
    if isinstance(v, float):
        return "inf" if math.isinf(v) else f"{v:g}"
    if isinstance(v, (list, tuple)):
        return "[" + " ".join(_fmt_param(x) for x in v) + "]"
    return str(v)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def reports_to_json(reports: list[ExperimentReport]) -> str:
    doc = {
        "passed": all(r.passed for r in reports),
        "experiments": [r.to_dict() for r in reports],
    }
    return json.dumps(_jsonable(doc), sort_keys=True, indent=2) + "\n"


def reports_to_csv(reports: list[ExperimentReport]) -> str:
    lines = ["name,params,measured,bound,margin,pass"]
    for r in reports:
        params = json.dumps(_jsonable(r.params), sort_keys=True, separators=(";", "="))
        lines.append(",".join([
            r.name,
            '"' + params.replace('"', "") + '"',
            format_float(r.measured),
            format_float(r.bound),
            format_float(r.margin),
            "pass" if r.passed else "FAIL",
        ]))
    return "\n".join(lines) + "\n"


# }}}


# {{{ helpers


def _nodes(n: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, n + 1)


def _window_l1(x: np.ndarray, f: np.ndarray, lo: float) -> float:
    keep = x >= lo - 1e-12
    return float(trapezoid(np.abs(f[keep]), x[keep]))


def _refinement(label: str, coarse: float, fine: float, rate: float = 1.0) -> Check:
    """Error at ``2n`` against error at ``n`` for a method of order ``rate``.

    Allows 20% over the ideal factor ``2^-rate``; errors at rounding level
    pass trivially.
    """
    if coarse < 1e-13:
        return Check(label, fine, 1e-13)
    return Check(label, fine / coarse, 1.2 * 2.0 ** (-rate))


def _lp_norm_fn(w: np.ndarray, p: float) -> float:
    a = np.abs(w)
    if math.isinf(p):
        return float(a.max())
    return float(np.sum(trapezoid_weights(w.shape) * a**p) ** (1.0 / p))


# }}}


# {{{ one-dimensional operators


def check_power_rule(s: float, k: int, n: int) -> ExperimentReport:
    """Derivative of ``x^k`` against ``Gamma(k+1)/Gamma(k-s+1) x^(k-s)``.

    For ``k = 0`` the derivative of the constant must be non-zero with
    ``L1`` norm ``1/Gamma(2-s)``, and ``x^(s-1)`` must be annihilated away
    from the singular base point.
    """
    if not 0 < s < 1 or k < 0:
        raise ValueError("need 0 < s < 1 and k >= 0")

    def rel_err(m: int) -> float:
        x = _nodes(m)
        exact = power_rule(x, k, s)
        num = frac_derivative_rl(x**k, s)
        return _window_l1(x, num - exact, 0.1) / _window_l1(x, exact, 0.1)

    e1, e2 = rel_err(n), rel_err(2 * n)
    checks = [
        Check("relative L1 error on [0.1, 1]", e1, tol("power_rule", n)),
        _refinement("error ratio n -> 2n", e1, e2),
    ]
    traces = {"rel_err": {str(n): e1, str(2 * n): e2}}
    if k == 0:
        target = 1.0 / gamma(2.0 - s)
        norm = l1_integral(frac_derivative_rl(np.ones(n + 1), s))
        checks.append(Check("|d^s 1|_1 - 1/Gamma(2-s)", abs(norm - target), singular_tol(s, n)))
        checks.append(Check("|d^s 1|_1 is non-zero", norm, 0.5 * target, upper=False))
        x = _nodes(n)
        w = np.empty_like(x)
        w[1:] = x[1:] ** (s - 1.0)
        # cell average of the integrable singularity over [0, h]
        w[0] = x[1] ** (s - 1.0) / s
        annihilated = _window_l1(x, frac_derivative_rl(w, s), 0.2)
        checks.append(Check("|d^s x^(s-1)|_1 on [0.2, 1]", annihilated, 0.1))
        traces.update(const_norm=norm, const_target=target, singular_residual=annihilated)
    return ExperimentReport.from_checks(
        "power_rule", {"s": s, "k": k}, checks, (n, 2 * n), traces=traces
    )


def check_semigroup(r1: float, r2: float, n: int, seed: int = 0, count: int = 20) -> ExperimentReport:
    """Composition of fractional integrals on a seeded corpus and on ``w = 1``."""
    corpus = signals_1d(n, rng_for("semigroup", seed), count, piecewise_constant=True)
    discrete = max(
        l1_integral(frac_integral(frac_integral(w, r2), r1) - frac_integral(w, r1 + r2))
        for w in corpus
    )

    def closed_form_err(m: int) -> float:
        x = _nodes(m)
        one = np.ones(m + 1)
        exact = x ** (r1 + r2) / gamma(r1 + r2 + 1.0)
        return l1_integral(frac_integral(frac_integral(one, r2), r1) - exact)

    e1, e2 = closed_form_err(n), closed_form_err(2 * n)
    checks = [
        Check("corpus: |I^a I^b w - I^(a+b) w|_1", discrete, tol("semigroup", n)),
        Check("w = 1: error against x^(a+b)/Gamma(a+b+1)", e1, tol("semigroup", n)),
        _refinement("closed-form error ratio n -> 2n", e1, e2),
    ]
    return ExperimentReport.from_checks(
        "semigroup", {"r1": r1, "r2": r2}, checks, (n, 2 * n),
        traces={"corpus_max": discrete, "closed_form_err": [e1, e2]},
    )


def check_integral_bound(r: float, p: float, n: int, seed: int = 0, count: int = 20) -> ExperimentReport:
    """``|I^r w|_p <= |w|_p / Gamma(r + 1)`` on the unit interval, up to ``1 + 5h``."""
    corpus = signals_1d(n, rng_for("integral_bound", seed), count, piecewise_constant=True)
    corpus.append(np.ones(n + 1))
    ratios = []
    for w in corpus:
        norm = _lp_norm_fn(w, p)
        if norm > 0:
            ratios.append(_lp_norm_fn(frac_integral(w, r), p) / norm)
    bound = (1.0 / (r * gamma(r))) * (1.0 + 5.0 / n)
    checks = [Check("max ratio |I^r w|_p / |w|_p", max(ratios), bound)]
    return ExperimentReport.from_checks(
        "integral_bound", {"r": r, "p": float(p)}, checks, (n,), traces={"ratios": ratios}
    )


def check_caputo_equiv(r: float, n: int, seed: int = 0, count: int = 8) -> ExperimentReport:
    """R-L and Caputo derivatives agree on compactly supported bumps.

    Constants separate them for ``0 < r < 1`` (negative control); for integer
    orders they coincide on any signal.
    """
    bumps = compact_signals_1d(n, rng_for("caputo_equiv", seed), count)
    gap = max(l1_integral(frac_derivative_rl(b, r) - frac_derivative_caputo(b, r)) for b in bumps)
    checks = [Check("bumps: |d^r phi - d^r_c phi|_1", gap, tol("caputo_equiv", n))]
    traces: dict = {"bump_gap": gap}
    grids = [n]
    exact = False
    if 0 < r < 1:
        target = 1.0 / gamma(2.0 - r)

        def control(m: int) -> float:
            one = np.ones(m + 1)
            return l1_integral(frac_derivative_rl(one, r) - frac_derivative_caputo(one, r))

        c1, c2 = control(n), control(2 * n)
        rel = abs(c1 - target) / target
        checks.append(Check("w = 1: relative gap deviation from 1/Gamma(2-r)", rel, 0.05))
        checks.append(_refinement(
            "w = 1: deviation ratio n -> 2n", abs(c1 - target), abs(c2 - target), 1.0 - r
        ))
        traces.update(control_gap=[c1, c2], control_target=target)
        grids.append(2 * n)
    elif float(r).is_integer():
        smooth = signals_1d(n, rng_for("caputo_equiv/smooth", seed), count)
        k = int(r)
        worst = 0.0
        for w in smooth:
            d = frac_derivative_rl(w, r)[k:] - frac_derivative_caputo(w, r)[k:]
            worst = max(worst, float(np.abs(d).max() / max(1.0, np.abs(frac_derivative_rl(w, r)).max())))
        checks.append(Check("integer order: interior agreement (relative)", worst, EXACT_RTOL * n))
        traces["integer_gap"] = worst
        exact = True
    return ExperimentReport.from_checks("caputo_equiv", {"r": r}, checks, grids, exact, traces)


def check_order_limits(n: int, s_grid=None) -> ExperimentReport:
    """Order limits of ``d^s phi`` at ``s -> 0+`` and ``s -> 1-`` and a
    uniform sup bound over ``s`` for the reference bump."""
    if s_grid is None:
        s_grid = [round(0.05 * i, 2) for i in range(1, 20)]
    phi = reference_bump(n)
    d1 = frac_derivative_rl(phi, 1)
    d2 = frac_derivative_rl(phi, 2)
    sup_phi, sup_d1, sup_d2 = (float(np.abs(a).max()) for a in (phi, d1, d2))

    def to_identity(s):
        return l1_integral(frac_derivative_rl(phi, s) - phi)

    def to_derivative(s):
        return l1_integral(frac_derivative_rl(phi, s) - d1)

    low = {s: to_identity(s) for s in (0.1, 0.05, 0.01)}
    high = {s: to_derivative(s) for s in (0.9, 0.95, 0.99)}
    sups = {s: float(np.abs(frac_derivative_rl(phi, s)).max()) for s in s_grid}
    per_s = max(sups[s] - sup_d1 / gamma(2.0 - s) for s in s_grid)

    def trend(values: list[float]) -> float:
        return max(b / a for a, b in zip(values, values[1:]))

    checks = [
        Check("|d^0.01 phi - phi|_1", low[0.01], 0.05),
        Check("|d^0.99 phi - d phi|_1", high[0.99], 0.05),
        Check("trend s -> 0 (max successive ratio)", trend(list(low.values())), 1.0),
        Check("trend s -> 1 (max successive ratio)", trend(list(high.values())), 1.0),
        Check("sup_s |d^s phi|_inf vs 1.1 |d phi|_inf + |phi|_inf", max(sups.values()), 1.1 * sup_d1 + sup_phi),
        Check("sup_s |d^s phi|_inf vs |d phi|_inf + |d^2 phi|_inf", max(sups.values()), sup_d1 + sup_d2),
        Check("max_s |d^s phi|_inf - |d phi|_inf / Gamma(2-s)", per_s, tol("lsc_order", n)),
    ]
    traces = {
        "to_identity": {str(k): v for k, v in low.items()},
        "to_derivative": {str(k): v for k, v in high.items()},
        "sup_norms": {str(k): v for k, v in sups.items()},
    }
    return ExperimentReport.from_checks("order_limits", {"n": n}, checks, (n,), traces=traces)


def check_translation_estimate(
    signals: list[np.ndarray], s: float, shifts: list[int]
) -> ExperimentReport:
    """Shift estimate for the zero extension of 1D signals.

    ``shifts`` are node counts; a shift of ``k`` nodes is ``h = k / n``. The
    bound is ``h^s C_s (TV^s(w) + |w|_{L^inf(boundary)}) + 2 |w|_inf h``.
    """
    c_s = 1.0 / (gamma(1.0 - s) * (1.0 - s)) + 1.0 / gamma(1.0 + s)
    n = signals[0].size - 1
    checks = []
    rows = []
    for i, w in enumerate(signals):
        tv = tv_primal(w, s).value
        edge = boundary_sup(w)
        sup = float(np.abs(w).max()) if w.size else 0.0
        for k in shifts:
            h = k / n
            ext = extend_by_zero(w, k)
            lhs = float(np.sum(np.abs(translate(ext, k) - ext))) / n
            rhs = h**s * c_s * (tv + edge) + 2.0 * sup * h
            rows.append([i, k, lhs, rhs])
            checks.append(Check(f"signal {i}, shift {k}/{n}", lhs, rhs))
    return ExperimentReport.from_checks(
        "translation_estimate",
        {"s": s, "shifts": [k / n for k in shifts]},
        checks,
        (n,),
        traces={"C_s": c_s, "rows": rows},
    )


# }}}


# {{{ total variation


def check_tv_equivalence(
    fields: list[np.ndarray], r: float, q: float, p: float
) -> ExperimentReport:
    """``N^(1/p - 1/q) TV_q <= TV_p <= TV_q`` for ``q < p``, exactly.

    The component-count constant ``M^(1/p - 1/q)``, with ``M`` the number of
    mixed partials, is reported in the traces as well.
    """
    if not q < p:
        raise ValueError("need q < p")
    dim = fields[0].ndim
    factor = dim ** (1.0 / p - 1.0 / q)
    m = len(derivative_multi_indices(r, dim))
    comp_factor = m ** (1.0 / p - 1.0 / q)
    lo, hi = math.inf, -math.inf
    for u in fields:
        tq, tp = tv_primal(u, r, q).value, tv_primal(u, r, p).value
        if tq == 0:
            if tp != 0:
                hi = math.inf
            continue
        lo, hi = min(lo, tp / tq), max(hi, tp / tq)
    if math.isinf(lo):
        lo, hi = 1.0, 1.0
    checks = [
        Check("min TV_p / TV_q >= N^(1/p-1/q)", lo, factor * (1 - EXACT_RTOL), upper=False),
        Check("max TV_p / TV_q <= 1", hi, 1.0 + EXACT_RTOL),
    ]
    return ExperimentReport.from_checks(
        "tv_equivalence",
        {"r": r, "q": float(q), "p": float(p)},
        checks,
        (fields[0].shape[0] - 1,),
        exact=True,
        traces={"min_ratio": lo, "max_ratio": hi, "N_factor": factor, "component_factor": comp_factor},
    )


def _ramp_tv(s: float) -> float:
    return 1.0 / ((2.0 - s) * gamma(2.0 - s))


def check_monotonicity(
    fields: list[np.ndarray], fine: list[np.ndarray], s: float, t: float, ramp_n: int
) -> ExperimentReport:
    """``TV^s <= TV^t + tol`` and ``|u|_1 <= TV^t + tol`` on image-class
    fields (boundary sup at most one), plus the 1D ramp in closed form.

    ``fine`` holds the same fields sampled at ``2n`` for the refinement check.
    """
    if not 0 < s < t < 1:
        raise ValueError("need 0 < s < t < 1")
    n = fields[0].shape[0] - 1
    tolerance = tol("monotonicity", n)
    checks = []
    rows = []
    gap = 0.0
    for i, (u, uf) in enumerate(zip(fields, fine)):
        if boundary_sup(u) > 1 + 1e-12:
            raise ValueError(f"field {i} is outside the image class")
        ts, tt, l1 = tv_primal(u, s).value, tv_primal(u, t).value, l1_integral(u)
        rows.append([i, l1, ts, tt])
        checks.append(Check(f"field {i}: TV^s - TV^t", ts - tt, tolerance))
        checks.append(Check(f"field {i}: |u|_1 - TV^t", l1 - tt, tolerance))
        gap = max(gap, abs(ts - tv_primal(uf, s).value), abs(tt - tv_primal(uf, t).value))
    checks.append(Check("discretization change n -> 2n", gap, tolerance))
    x = _nodes(ramp_n)
    ramp = {o: tv_primal(x, o).value for o in (s, t)}
    for o in (s, t):
        checks.append(Check(f"ramp TV^{o:g} relative error", abs(ramp[o] / _ramp_tv(o) - 1.0), 0.02))
    checks.append(Check("ramp closed form increasing", _ramp_tv(s), _ramp_tv(t)))
    return ExperimentReport.from_checks(
        "monotonicity",
        {"s": s, "t": t, "fields": len(fields)},
        checks,
        (n, 2 * n, ramp_n),
        traces={"rows": rows, "ramp": {str(k): v for k, v in ramp.items()}, "refinement_gap": gap},
    )


def interpolation_ratio(u: np.ndarray, r: float) -> float:
    """``TV^s(u) / (|u|_1 + TV^r(u))`` with ``s`` the fractional part; 0/0 is 0."""
    s = r - math.floor(r)
    den = l1_integral(u) + tv_primal(u, r).value
    return tv_primal(u, s).value / den if den > 0 else 0.0


def check_interpolation(
    fields: list[np.ndarray], fine: list[np.ndarray], orders: list[float]
) -> ExperimentReport:
    """Lower-order TV controlled by ``|u|_1 + TV^r`` with one frozen constant."""
    if any(r <= 1 or float(r).is_integer() for r in orders):
        raise ValueError("orders must be non-integers above one")
    coarse = {r: max(interpolation_ratio(u, r) for u in fields) for r in orders}
    refined = {r: max(interpolation_ratio(u, r) for u in fine) for r in orders}
    drift = max(abs(refined[r] / coarse[r] - 1.0) for r in orders if coarse[r] > 0)
    checks = [
        Check("max ratio over orders and corpus", max(coarse.values()), INTERPOLATION_CONSTANT),
        Check("max ratio over orders and corpus (2n)", max(refined.values()), INTERPOLATION_CONSTANT),
        Check("relative change of per-order max n -> 2n", drift, 0.10),
    ]
    n = fields[0].shape[0] - 1
    return ExperimentReport.from_checks(
        "interpolation",
        {"orders": list(orders), "fields": len(fields)},
        checks,
        (n, 2 * n),
        traces={"max_ratio": {f"{r:g}": v for r, v in coarse.items()},
                "max_ratio_2n": {f"{r:g}": v for r, v in refined.items()}},
    )


# }}}


# {{{ sequences and approximations

LSC_RECIPES = ("constant", "oscillation", "drift")


def _lsc_sequence(recipe: str, u: np.ndarray, r: float, k: int) -> tuple[np.ndarray, float]:
    x = _nodes(u.size - 1)
    if recipe == "constant":
        return u, r
    if recipe == "oscillation":
        return u + np.sin(2 * np.pi * k * x) / k, r + 1.0 / k
    if recipe == "drift":
        return u, r - 1.0 / k
    raise ValueError(f"unknown recipe {recipe!r}; choose from {LSC_RECIPES}")


def check_lsc_order(
    recipe: str, n: int, r: float | None = None, ladder=(16, 24, 32, 48, 64), n0: int = 16
) -> ExperimentReport:
    """Lower semicontinuity of ``TV^(r_k)(u_k)`` along a sequence recipe.

    * ``constant``: ``u_k = u``, ``r_k = r`` (default 0.5);
    * ``oscillation``: ``u_k = u + sin(2 pi k x) / k``, ``r_k = r + 1/k`` (default 0.5);
    * ``drift``: ``u_k = u``, ``r_k = r - 1/k`` (default 1).

    The liminf is estimated from the last two ladder points by first-order
    extrapolation in ``1/k``; the tail minimum is reported alongside.
    """
    if r is None:
        r = 1.0 if recipe == "drift" else 0.5
    u = reference_bump(n)
    target = tv_primal(u, r).value
    tail = [k for k in ladder if k >= n0]
    values = {k: tv_primal(*_lsc_sequence(recipe, u, r, k)).value for k in tail}
    k1, k2 = tail[-2], tail[-1]
    extrapolated = (k2 * values[k2] - k1 * values[k1]) / (k2 - k1)
    tolerance = tol("lsc_order", n)
    target_fine = tv_primal(reference_bump(2 * n), r).value
    checks = [
        Check("liminf estimate vs TV^r(u) - tol", extrapolated, target - tolerance, upper=False),
        Check("discretization change of TV^r(u) n -> 2n", abs(target - target_fine), tolerance),
    ]
    return ExperimentReport.from_checks(
        "lsc_order",
        {"recipe": recipe, "r": r, "n0": n0},
        checks,
        (n, 2 * n),
        traces={
            "target": target,
            "ladder": {str(k): v for k, v in values.items()},
            "tail_min": min(values.values()),
            "extrapolated": extrapolated,
        },
    )


def center_scale(u: np.ndarray, eps: float, center=(0.5, 0.5)) -> np.ndarray:
    """``u((x - x0) / (1 + eps) + x0)`` by bilinear resampling."""
    ny, nx = u.shape
    lam = 1.0 + eps
    jj, ii = np.meshgrid(np.arange(ny, dtype=np.float64), np.arange(nx, dtype=np.float64), indexing="ij")
    cy, cx = center[1] * (ny - 1), center[0] * (nx - 1)
    coords = [(jj - cy) / lam + cy, (ii - cx) / lam + cx]
    return map_coordinates(u, coords, order=1, mode="nearest")


def check_strict_approx_scaling(
    u: np.ndarray, u_fine: np.ndarray, r: float, eps_ladder=(0.2, 0.1, 0.05)
) -> ExperimentReport:
    """``TV^r(u^eps) <= (1 + eps)^(floor(r) + 1) TV^r(u) + tol`` and
    ``|u^eps - u|_1`` decreasing along the ladder.

    ``u_fine`` is the same field at ``2n`` for the refinement check.
    """
    n = u.shape[0] - 1
    tolerance = tol("strict_approx" if r < 1 else "strict_approx_high", n)
    base = tv_primal(u, r).value
    expo = math.floor(r) + 1
    checks = []
    rows = []
    dist = []
    gap = abs(base - tv_primal(u_fine, r).value)
    for eps in eps_ladder:
        scaled = center_scale(u, eps)
        tv_eps = tv_primal(scaled, r).value
        bound = (1.0 + eps) ** expo * base + tolerance
        checks.append(Check(f"eps={eps:g}: TV^r(u^eps)", tv_eps, bound))
        dist.append(l1_integral(scaled - u))
        rows.append([eps, tv_eps, tv_eps / base if base else 0.0, (1.0 + eps) ** expo, dist[-1]])
        gap = max(gap, abs(tv_eps - tv_primal(center_scale(u_fine, eps), r).value))
    if len(dist) > 1:
        checks.append(Check(
            "|u^eps - u|_1 decreasing (max successive ratio)",
            max(b / a for a, b in zip(dist, dist[1:])), 1.0,
        ))
    checks.append(Check("discretization change n -> 2n", gap, tolerance))
    return ExperimentReport.from_checks(
        "strict_approx_scaling",
        {"r": r, "eps": list(eps_ladder)},
        checks,
        (n, 2 * n),
        traces={"tv_base": base, "rows": rows, "refinement_gap": gap},
    )


# }}}


# {{{ suite


def _suite_power_rule(n, seed):
    return [check_power_rule(s, k, 4 * n) for s in (0.25, 0.5, 0.75) for k in (0, 1, 2)]


def _suite_semigroup(n, seed):
    return [check_semigroup(a, b, 2 * n, seed) for a, b in ((0.5, 0.5), (0.3, 0.4), (1.0, 1.0))]


def _suite_integral_bound(n, seed):
    return [check_integral_bound(r, p, 2 * n, seed) for r in (0.5, 1.0, 2.0) for p in (1.0, 2.0, math.inf)]


def _suite_caputo_equiv(n, seed):
    return [check_caputo_equiv(r, 2 * n, seed) for r in (0.3, 0.5, 1.0, 1.5)]


def _suite_order_limits(n, seed):
    return [check_order_limits(4 * n)]


def _suite_tv_equivalence(n, seed):
    m = max(n // 2, 8)
    fields = fields_2d(m, rng_for("tv_equivalence", seed), 50)
    pairs = ((1.0, 2.0), (1.0, math.inf), (2.0, math.inf))
    return [check_tv_equivalence(fields, r, q, p) for r in (0.5, 1.0, 1.5) for q, p in pairs]


def _suite_monotonicity(n, seed):
    coarse = fields_2d(n, rng_for("monotonicity", seed), 20, image_class=True)
    fine = fields_2d(2 * n, rng_for("monotonicity", seed), 20, image_class=True)
    return [check_monotonicity(coarse, fine, 0.3, 0.7, 4 * n)]


def _suite_interpolation(n, seed):
    m = max(n // 2, 8)
    coarse = compact_fields_2d(m, rng_for("interpolation", seed), 6)
    fine = compact_fields_2d(2 * m, rng_for("interpolation", seed), 6)
    orders = [round(1.0 + 0.1 * i, 1) for i in range(1, 10)]
    return [check_interpolation(coarse, fine, orders)]


def _suite_translation_estimate(n, seed):
    signals = signals_1d(n, rng_for("translation_estimate", seed), 20, piecewise_constant=True)
    shifts = [n // 64, n // 32, n // 16, n // 8]
    return [check_translation_estimate(signals, s, shifts) for s in (0.3, 0.5, 0.7)]


def _suite_lsc_order(n, seed):
    return [check_lsc_order(recipe, 4 * n) for recipe in LSC_RECIPES]


def _suite_strict_approx(n, seed):
    u, uf = gaussian_bump_2d(n), gaussian_bump_2d(2 * n)
    return [check_strict_approx_scaling(u, uf, r) for r in (0.5, 1.5)]


EXPERIMENTS: dict[str, Callable[[int, int], list[ExperimentReport]]] = {
    "power_rule": _suite_power_rule,
    "semigroup": _suite_semigroup,
    "integral_bound": _suite_integral_bound,
    "caputo_equiv": _suite_caputo_equiv,
    "order_limits": _suite_order_limits,
    "tv_equivalence": _suite_tv_equivalence,
    "monotonicity": _suite_monotonicity,
    "interpolation": _suite_interpolation,
    "translation_estimate": _suite_translation_estimate,
    "lsc_order": _suite_lsc_order,
    "strict_approx_scaling": _suite_strict_approx,
}


def resolve_names(names) -> list[str]:
    """Expand ``"all"`` and validate experiment names, keeping registry order."""
    if isinstance(names, str):
        names = [t.strip() for t in names.split(",") if t.strip()]
    names = list(names)
    if "all" in names:
        return list(EXPERIMENTS)
    unknown = [x for x in names if x not in EXPERIMENTS]
    if unknown:
        raise ValueError(f"unknown experiment(s) {unknown}; choose from {list(EXPERIMENTS)}")
    return [x for x in EXPERIMENTS if x in names]


def run_suite(names, n: int = 256, seed: int = 0, workers: int | None = 1) -> list[ExperimentReport]:
    """Run the named experiments (or ``"all"``) and return their reports.

    Each experiment draws its corpus from a stream keyed by its own name, so
    results do not depend on which other experiments run or in what order.
    """
    if n < 64:
        raise ValueError(f"the suite needs n >= 64, got {n}")
    selected = resolve_names(names)
    if not selected:
        return []
    if workers is None:
        from fractv.denoise import max_workers

        workers = max_workers()
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        batches = list(pool.map(lambda name: EXPERIMENTS[name](n, seed), selected))
    return [rep for batch in batches for rep in batch]


def write_reports(reports: list[ExperimentReport], path: str | Path) -> list[Path]:
    """Write ``<path>.csv`` and ``<path>.json``; returns the files written."""
    path = Path(path)
    stem = path.with_suffix("") if path.suffix in (".csv", ".json") else path
    stem.parent.mkdir(parents=True, exist_ok=True)
    csv_path, json_path = (stem.parent / (stem.name + ext) for ext in (".csv", ".json"))
    csv_path.write_text(reports_to_csv(reports))
    json_path.write_text(reports_to_json(reports))
    return [csv_path, json_path]


# }}}
