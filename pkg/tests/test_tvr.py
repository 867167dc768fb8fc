import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fractv.corpus import compact_fields_2d, fields_2d, gaussian_bump_2d
from fractv.grid import Grid2D, l1_integral, trapezoid_weights
from fractv.special import gamma
from fractv.tvr import (
    derivative_multi_indices,
    mixed_partials,
    mixed_partials_adjoint,
    rof_energy,
    rof_gradient,
    smoothed_tv,
    tv_dual_estimate,
    tv_primal,
    tvr_loss,
)

RAMP_HALF = 1.0 / (1.5 * gamma(1.5))  # 0.752253...
lps = st.sampled_from([1.0, 1.5, 2.0, math.inf])
orders = st.sampled_from([0.3, 0.5, 1.0, 1.5, 2.0])


def field(seed, n=16):
    return np.random.default_rng(seed).normal(size=(n + 1, n + 1))


def test_multi_indices():
    assert derivative_multi_indices(0.5, 2) == [(1,), (2,)]
    assert derivative_multi_indices(1.0, 2) == [(1,), (2,)]
    assert len(derivative_multi_indices(1.5, 2)) == 4
    assert len(derivative_multi_indices(2.0, 2)) == 4
    assert derivative_multi_indices(2.5, 1) == [(1, 1, 1)]


@given(orders, lps)
def test_zero_field(r, p):
    assert tv_primal(np.zeros((9, 9)), r, p).value == 0


def test_ramp_closed_form_1d():
    x = np.linspace(0, 1, 1025)
    assert RAMP_HALF == pytest.approx(0.752253, abs=1e-6)
    assert tv_primal(x, 0.5).value == pytest.approx(RAMP_HALF, rel=2e-3)


@pytest.mark.parametrize("p", [1, 2, math.inf])
def test_ramp_2d_order_one(p):
    X, _ = Grid2D(32, 32).mesh()
    assert tv_primal(X, 1, p).value == pytest.approx(1.0, rel=1e-12)


def test_order_zero_is_l1_norm():
    u = field(1)
    assert tv_primal(u, 0).value == pytest.approx(l1_integral(u), rel=1e-14)


def test_constants():
    c = np.full((17, 17), 2.0)
    assert tv_primal(c, 1).value == 0 and tv_primal(c, 2).value == 0
    for s in (0.2, 0.5, 0.8):
        assert tv_primal(c, s).value > 0


@given(orders, lps, st.floats(-5, 5), st.integers(0, 1000))
def test_absolute_homogeneity(r, p, lam, seed):
    u = field(seed, 8)
    assert tv_primal(lam * u, r, p).value == pytest.approx(abs(lam) * tv_primal(u, r, p).value, rel=1e-10, abs=1e-12)


@given(orders, lps, st.integers(0, 1000))
def test_triangle_inequality(r, p, seed):
    u, v = field(seed, 8), field(seed + 1, 8)
    lhs = tv_primal(u + v, r, p).value
    assert lhs <= (tv_primal(u, r, p).value + tv_primal(v, r, p).value) * (1 + 1e-12)


@given(orders, st.sampled_from([(1, 2), (1, math.inf), (2, math.inf)]), st.integers(0, 1000))
def test_lp_equivalence_with_component_count(r, qp, seed):
    q, p = qp
    u = field(seed, 10)
    m = len(derivative_multi_indices(r, 2))
    tq, tp = tv_primal(u, r, q).value, tv_primal(u, r, p).value
    assert tp <= tq * (1 + 1e-12)
    assert m ** (1 / p - 1 / q) * tq <= tp * (1 + 1e-12)


def test_lp_lower_bound_needs_component_count_above_order_one():
    # at r = 1.5 there are four mixed partials; the sum of ramps puts them in
    # near balance, which pushes TV_2 / TV_1 below 2^(-1/2)
    X, Y = Grid2D(128, 128).mesh()
    ratio = tv_primal(X + Y, 1.5, 2).value / tv_primal(X + Y, 1.5, 1).value
    assert ratio < 2**-0.5
    assert ratio >= 4**-0.5


def test_monotonicity_on_image_corpus():
    n = 128
    for u in fields_2d(n, np.random.default_rng(11), 10):
        t7 = tv_primal(u, 0.7).value
        assert tv_primal(u, 0.3).value <= t7 + 6.0 / n
        assert l1_integral(u) <= t7 + 6.0 / n


@given(st.sampled_from([0.5, 1.0, 1.5, 2.5]), st.integers(0, 1000))
def test_mixed_partials_adjoint_is_transpose(r, seed):
    rng = np.random.default_rng(seed)
    u = rng.normal(size=(9, 11))
    t = rng.normal(size=(len(derivative_multi_indices(r, 2)), 9, 11))
    lhs = np.sum(mixed_partials(u, r) * t)
    rhs = np.sum(u * mixed_partials_adjoint(t, r))
    assert lhs == pytest.approx(rhs, rel=1e-9)


# {{{ dual estimate


def test_dual_of_zero():
    assert tv_dual_estimate(np.zeros((9, 9)), 0.5, trials=4).value == 0


def test_dual_ramp_1d_in_unit_interval():
    x = np.linspace(0, 1, 257)
    val = tv_dual_estimate(x, 1, trials=64, seed=0).value
    assert 0 < val <= 1


def test_dual_is_monotone_in_trials_and_deterministic():
    x = np.linspace(0, 1, 129)
    vals = [tv_dual_estimate(x, 1, trials=t, seed=3).value for t in (4, 16, 64)]
    assert vals == sorted(vals)
    assert tv_dual_estimate(x, 1, trials=16, seed=3) == tv_dual_estimate(x, 1, trials=16, seed=3)


@pytest.mark.parametrize("r", [0.5, 1.0, 1.5])
@pytest.mark.parametrize("p", [1, 2, math.inf])
def test_dual_below_primal_on_smooth_corpus(r, p):
    n = 64
    for u in compact_fields_2d(n, np.random.default_rng(2), 3):
        dual = tv_dual_estimate(u, r, p, trials=16, seed=0).value
        assert dual <= tv_primal(u, r, p).value + 1.0 / n


def test_dual_rejects_zero_trials():
    with pytest.raises(ValueError):
        tv_dual_estimate(np.zeros(5), 1, trials=0)


def test_result_json():
    res = tv_dual_estimate(np.linspace(0, 1, 33), 0.5, "inf", trials=2, seed=9)
    d = json.loads(res.to_json())
    assert set(d) == {"value", "r", "p", "method", "n", "trials", "seed"}
    assert d["p"] == "inf" and d["n"] == [32] and d["method"] == "dual"


# }}}


# {{{ loss and energy


def test_loss_examples():
    u = field(3)
    assert tvr_loss(u, u, 0.5) == 0
    v = field(4)
    assert tvr_loss(u, v, 0.5, beta0=1, beta1=0) == pytest.approx(l1_integral(u - v))
    x = np.linspace(0, 1, 1025)
    assert tvr_loss(x, np.zeros_like(x), 0.5, beta0=0, beta1=1) == pytest.approx(RAMP_HALF, rel=2e-3)
    with pytest.raises(ValueError):
        tvr_loss(u, v[:-1], 0.5)
    with pytest.raises(ValueError):
        tvr_loss(u, v, 0.5, beta0=-1)


def test_energy_examples():
    u = gaussian_bump_2d(32)
    assert rof_energy(u, u, 0.3, 1.5, 2, 1e-3) == pytest.approx(0.3 * smoothed_tv(u, 1.5, 2, 1e-3))
    z = np.zeros((9, 9))
    assert rof_energy(z, z, 1.0, 0.5, 2, 1e-3) == 0


@pytest.mark.parametrize("r", [0.5, 1.0, 1.5])
@pytest.mark.parametrize("p", [1, 2, 3])
def test_energy_gradient_against_central_differences(r, p):
    rng = np.random.default_rng(int(10 * r) + p)
    u_eta = rng.normal(size=(6, 7))
    u = rng.normal(size=(6, 7))
    eps, alpha = 0.05, 0.01
    g = rof_gradient(u, u_eta, alpha, r, p, eps)
    fd = np.zeros_like(u)
    h = 1e-6
    for idx in np.ndindex(u.shape):
        e = np.zeros_like(u)
        e[idx] = h
        fd[idx] = (rof_energy(u + e, u_eta, alpha, r, p, eps) - rof_energy(u - e, u_eta, alpha, r, p, eps)) / (2 * h)
    np.testing.assert_allclose(g, fd, rtol=1e-5, atol=1e-5 * np.abs(fd).max())


def test_energy_rejects_infinite_exponent():
    with pytest.raises(ValueError):
        rof_energy(np.zeros((4, 4)), np.zeros((4, 4)), 1.0, 1.0, math.inf, 1e-3)


def test_fidelity_uses_trapezoid_weights():
    u = np.ones((5, 5))
    assert rof_energy(u, 0 * u, 1e-300, 1.0) == pytest.approx(trapezoid_weights(u.shape).sum())


# }}}
