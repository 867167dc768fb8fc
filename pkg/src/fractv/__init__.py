"""Fractional-order total variation: Grünwald-Letnikov operators, the
r-order total variation, ROF denoising with an order search, and a suite of
numerical experiments checking the underlying estimates."""

from fractv.denoise import Dataset, DenoiseConfig, LossSpec, denoise, order_search
from fractv.frac1d import (
    Side,
    adjoint_apply,
    frac_derivative_caputo,
    frac_derivative_revised,
    frac_derivative_rl,
    frac_integral,
)
from fractv.fracnd import div_r, frac_divergence, frac_gradient, partial_frac
from fractv.grid import (
    FracOrder,
    FracTVError,
    Grid1D,
    Grid2D,
    LpIndex,
    NumericalError,
    Signal1D,
    Field2D,
    l1_integral,
)
from fractv.special import gamma
from fractv.tvr import TVResult, rof_energy, tv_dual_estimate, tv_primal, tvr_loss
from fractv.verify import ExperimentReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "DenoiseConfig",
    "ExperimentReport",
    "Field2D",
    "FracOrder",
    "FracTVError",
    "Grid1D",
    "Grid2D",
    "LossSpec",
    "LpIndex",
    "NumericalError",
    "Side",
    "Signal1D",
    "TVResult",
    "adjoint_apply",
    "denoise",
    "div_r",
    "frac_derivative_caputo",
    "frac_derivative_revised",
    "frac_derivative_rl",
    "frac_divergence",
    "frac_gradient",
    "frac_integral",
    "gamma",
    "l1_integral",
    "order_search",
    "partial_frac",
    "rof_energy",
    "run_suite",
    "tv_dual_estimate",
    "tv_primal",
    "tvr_loss",
]
