import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fractv.corpus import reference_bump
from fractv.frac1d import frac_derivative_rl, power_rule
from fractv.fracnd import (
    div_r,
    divergence_scale,
    frac_divergence,
    frac_gradient,
    integer_divergence,
    partial_frac,
    partial_frac_adjoint,
)
from fractv.grid import Grid2D
from fractv.special import gamma


def mesh(n):
    return Grid2D(n, n).mesh()


def interior_bump_field(n):
    b = reference_bump(n)
    return np.outer(b, b)


def test_partial_of_ramp_along_own_axis():
    X, _ = mesh(32)
    np.testing.assert_allclose(partial_frac(X, 1, 1)[:, 1:], 1.0, rtol=1e-12)


def test_partial_of_ramp_across_axis():
    n = 512
    X, Y = mesh(n)
    d = partial_frac(X, 2, 0.5)
    rows = Y[:, 0] >= 0.1
    oracle = X[rows] * Y[rows] ** -0.5 / gamma(0.5)
    np.testing.assert_allclose(d[rows], oracle, atol=0.02)


def test_separable_field_line_by_line():
    n = 40
    x = np.linspace(0, 1, n + 1)
    f, g = np.cos(2 * x), 1 + x**2
    u = np.outer(g, f)
    np.testing.assert_allclose(partial_frac(u, 1, 0.7), np.outer(g, frac_derivative_rl(f, 0.7)), rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(partial_frac(u, 2, 0.7), np.outer(frac_derivative_rl(g, 0.7), f), rtol=1e-12, atol=1e-12)


@given(st.floats(0.05, 2.5), st.integers(0, 1000))
def test_partial_commutes_with_functions_of_the_other_axis(r, seed):
    rng = np.random.default_rng(seed)
    u = rng.normal(size=(9, 13))
    g = rng.normal(size=(9, 1))
    np.testing.assert_allclose(partial_frac(g * u, 1, r), g * partial_frac(u, 1, r), rtol=1e-12, atol=1e-9)


def test_bad_axis():
    with pytest.raises(ValueError):
        partial_frac(np.zeros((4, 4)), 3, 0.5)


def test_gradient_of_zero_and_sum_of_ramps():
    assert not np.any(frac_gradient(np.zeros((5, 5)), 0.5))
    n = 1024
    X, Y = mesh(n)
    g = frac_gradient(X + Y, 0.5)
    inner = (X >= 0.1) & (Y >= 0.1)
    X, Y = X + (~inner), Y + (~inner)
    oracle1 = power_rule(X, 1, 0.5) + Y * power_rule(X, 0, 0.5)
    oracle2 = power_rule(Y, 1, 0.5) + X * power_rule(Y, 0, 0.5)
    np.testing.assert_allclose(g[0][inner], oracle1[inner], rtol=0.02)
    np.testing.assert_allclose(g[1][inner], oracle2[inner], rtol=0.02)


def test_gradient_near_order_one_matches_differences():
    n = 512
    u = interior_bump_field(n)
    g = frac_gradient(u, 0.999)
    d = np.stack([partial_frac(u, 1, 1), partial_frac(u, 2, 1)])
    assert np.abs(g - d).max() < 0.05 * np.abs(d).max()


def test_divergence_scale():
    assert divergence_scale(1.0, 2) == 1.0
    assert divergence_scale(0.0, 2) == 0.5
    assert divergence_scale(0.3, 1) == 1.0


def test_divergence_at_order_zero_averages():
    rng = np.random.default_rng(0)
    phi = rng.normal(size=(2, 6, 6))
    np.testing.assert_allclose(frac_divergence(phi, 0.0), phi.mean(axis=0))


def test_divergence_at_order_one_is_minus_classical():
    n = 64
    X, Y = mesh(n)
    phi = np.stack([X**2, X * Y])
    div = frac_divergence(phi, 1.0)
    # right-sided first derivative is -d/dx: forward differences with a sign
    classical = 2 * X + X + 1.0 / n
    np.testing.assert_allclose(div[:-1, :-1], -classical[:-1, :-1], rtol=1e-10)


def test_divergence_of_single_component():
    n, s = 64, 0.6
    b = reference_bump(n)
    phi = np.stack([np.tile(b, (n + 1, 1)), np.zeros((n + 1, n + 1))])
    expected = divergence_scale(s, 2) * frac_derivative_rl(b, s, "right")
    np.testing.assert_allclose(frac_divergence(phi, s), np.tile(expected, (n + 1, 1)), rtol=1e-12)


@given(st.floats(0.0, 1.0), st.integers(0, 1000))
def test_divergence_is_linear(s, seed):
    rng = np.random.default_rng(seed)
    a, b = rng.normal(size=(2, 2, 7, 7))
    np.testing.assert_allclose(
        frac_divergence(2 * a - 3 * b, s), 2 * frac_divergence(a, s) - 3 * frac_divergence(b, s),
        rtol=1e-9, atol=1e-9,
    )


@given(st.floats(0.05, 1.0), st.integers(0, 1000))
def test_divergence_duality_with_left_gradient(s, seed):
    # phi vanishes near the boundary; pairing is the plain node sum
    n = 24
    rng = np.random.default_rng(seed)
    u = rng.normal(size=(n + 1, n + 1))
    phi = np.zeros((2, n + 1, n + 1))
    phi[:, 3:-3, 3:-3] = rng.normal(size=(2, n - 5, n - 5))
    lhs = np.sum(u * frac_divergence(phi, s))
    rhs = divergence_scale(s, 2) * np.sum(frac_gradient(u, s) * phi)
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9 * n)


def test_divergence_adjoint_without_support_condition():
    rng = np.random.default_rng(5)
    u = rng.normal(size=(9, 9))
    phi = rng.normal(size=(2, 9, 9))
    s = 0.4
    lhs = np.sum(u * frac_divergence(phi, s))
    adj = sum(np.sum(partial_frac_adjoint(u, i + 1, s, "right") * phi[i]) for i in range(2))
    assert lhs == pytest.approx(divergence_scale(s, 2) * adj, rel=1e-10)


def test_integer_divergence_worked_example():
    n = 16
    rng = np.random.default_rng(6)
    p = rng.normal(size=(4, n + 1, n + 1))

    def d(a, f):
        return partial_frac(f, a, 1, "right")

    expected = d(1, d(1, p[0])) + d(1, d(2, p[1])) + d(2, d(1, p[2])) + d(2, d(2, p[3]))
    got = integer_divergence(integer_divergence(p, 1), 1)
    np.testing.assert_allclose(got[0], expected, rtol=1e-10, atol=1e-8)
    np.testing.assert_allclose(div_r(p[:2], 0.0), p[:2].mean(axis=0))


def test_div_r_integer_and_fractional_cases():
    rng = np.random.default_rng(7)
    p4 = rng.normal(size=(4, 9, 9))
    np.testing.assert_allclose(div_r(p4, 1.0), 0.5 * integer_divergence(p4, 1).sum(axis=0))
    p2 = p4[:2]
    np.testing.assert_array_equal(div_r(p2, 0.4), frac_divergence(p2, 0.4))
    with pytest.raises(ValueError):
        div_r(p2, 1.5)


def test_div_r_of_constant_tensor():
    # fractional derivatives do not kill constants, integer ones do
    assert np.abs(div_r(np.ones((2, 17, 17)), 0.5)).max() > 0
    assert not np.any(div_r(np.ones((4, 17, 17)), 1.5))
