from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from ramanujan_roots.quad import (QuadratureError, QuadratureResult, a_integral, contour_integral,
                                  delta_weight, line_integral, torus_quadrature, weighted_torus_mean)
from ramanujan_roots.rootsys import build_root_system


def test_torus_constant():
    for rank in (1, 2):
        assert torus_quadrature(lambda th: np.ones(len(th)), rank).require() == pytest.approx(1.0)


@pytest.mark.parametrize("mu", [(1,), (3,), (-2,)])
def test_torus_characters_vanish_rank_one(mu):
    res = torus_quadrature(lambda th: np.exp(1j * th @ np.array(mu, float)), 1)
    assert abs(res.require()) < 1e-14


@given(st.integers(-6, 6), st.integers(-6, 6))
def test_torus_characters_vanish_rank_two(a, b):
    val = torus_quadrature(lambda th: np.exp(1j * th @ np.array([a, b], float)), 2).require()
    assert abs(val - float(a == 0 and b == 0)) < 1e-13


def test_torus_sine_square():
    res = torus_quadrature(lambda th: np.abs(2 * np.sin(th[:, 0])) ** 2, 1)
    assert res.require() == pytest.approx(2.0, abs=1e-14)
    assert res.converged and res.abs_error_estimate < 1e-10


def test_torus_non_convergence_is_reported():
    res = torus_quadrature(lambda th: np.abs(np.sin(th[:, 0])) ** 0.3, 1, tol=1e-15, max_refine=2)
    assert not res.converged
    with pytest.raises(QuadratureError):
        res.require()


def test_weighted_mean_matches_plain_torus_for_integer_weight():
    rs = build_root_system("A1", [2.0])
    w = weighted_torus_mean(rs, lambda th: np.cos(2 * th[:, 0])).require()
    assert w == pytest.approx(-1.0, abs=1e-13)
    assert weighted_torus_mean(rs, lambda th: np.ones(len(th))).require() == pytest.approx(2.0, abs=1e-13)


def test_weighted_mean_fractional_weight():
    rs = build_root_system("A1", [1.0])
    assert weighted_torus_mean(rs, lambda th: np.ones(len(th))).require() == pytest.approx(4 / math.pi, rel=1e-12)


@pytest.mark.parametrize("name,m", [("A2", [2.0]), ("B2", [2.0, 2.0]), ("BC2", [2.0, 2.0, 2.0])])
def test_weighted_mean_agrees_with_torus_for_even_weights(name, m):
    rs = build_root_system(name, m)
    # integer exponents make delta a trigonometric polynomial, so the plain torus rule is exact
    exact = torus_quadrature(lambda th: delta_weight(rs, th), 2, tol=1e-12, max_refine=4).require()
    mean = weighted_torus_mean(rs, lambda th: np.ones(len(th))).require()
    assert mean == pytest.approx(exact.real, rel=1e-11)


def test_gaussian_contour_rank_one():
    res = contour_integral(lambda lam: np.exp(lam[:, 0] ** 2), [0.3], tol=1e-12)
    assert res.require() == pytest.approx(math.sqrt(math.pi), rel=1e-11)


def test_gaussian_contour_rank_two():
    res = contour_integral(lambda lam: np.exp((lam ** 2).sum(axis=1)), [0.2, -0.1], tol=1e-10)
    assert res.require() == pytest.approx(math.pi, rel=1e-9)


def test_contour_rejects_nonpositive_decay():
    with pytest.raises(ValueError):
        contour_integral(lambda lam: lam[:, 0], [0.0], decay_rate=0.0)


@pytest.mark.parametrize("P", [0.5, 1.0, 2.0, 6.0])
def test_dwight_line_integral(P):
    res = line_integral(lambda y: np.sin(P * y) / np.sinh(np.pi * y), tol=1e-12, decay_rate=math.pi)
    assert res.require() == pytest.approx(math.tanh(P / 2), abs=1e-10)


def test_dwight_value_at_one():
    res = line_integral(lambda y: np.sin(y) / np.sinh(np.pi * y), tol=1e-12, decay_rate=math.pi)
    assert res.require() == pytest.approx(0.4621171573, abs=1e-10)


def test_truncated_tail_below_tolerance():
    # decay like exp(-pi |y|): the integral over R of sech(pi y) cos(y) is sech(1/2)
    tol = 1e-9
    res = line_integral(lambda y: np.cos(y) / np.cosh(np.pi * y), tol=tol, decay_rate=math.pi)
    assert abs(res.require() - 1 / math.cosh(0.5)) < tol


def test_a_integral_elementary():
    c = math.cosh(1.0)
    res = a_integral(lambda u: np.sinh(u) / (c + np.cosh(u)) ** 2, 0.0, tol=1e-12)
    assert res.require() == pytest.approx(1 / (1 + c), rel=1e-11)
    # the same integral through the weight |2 sinh u|^1
    res1 = a_integral(lambda u: 0.5 / (c + np.cosh(u)) ** 2, 1.0, tol=1e-12)
    assert res1.require() == pytest.approx(1 / (1 + c), rel=1e-11)


def test_a_integral_zero():
    assert a_integral(lambda u: np.zeros_like(u), 2.0).require() == 0.0


@pytest.mark.parametrize("m", [0.5, 2.0, 3.7])
def test_a_integral_against_scipy(m):
    f = lambda u: 1.0 / np.cosh(u) ** (m + 2)  # noqa: E731
    ref, _ = integrate.quad(lambda u: f(u) * abs(2 * math.sinh(u)) ** m, 0, 80, epsabs=1e-14, limit=200)
    assert a_integral(f, m, tol=1e-12).require() == pytest.approx(ref, rel=1e-9)


def test_doubling_stability_regression():
    # once two successive refinements agree, the next one does too
    for tol in (1e-6, 1e-9, 1e-12):
        r1 = line_integral(lambda y: np.sin(2 * y) / np.sinh(np.pi * y), tol=tol, decay_rate=math.pi)
        r2 = line_integral(lambda y: np.sin(2 * y) / np.sinh(np.pi * y), tol=tol / 4, decay_rate=math.pi)
        assert r1.converged and r2.converged
        assert abs(r1.value - r2.value) < tol


def test_deterministic():
    f = lambda th: np.exp(np.cos(th[:, 0]) + 0.3j * np.sin(th[:, 1]))  # noqa: E731
    a = torus_quadrature(f, 2)
    b = torus_quadrature(f, 2)
    assert a == b
    g = lambda u: np.exp(-3 * u) / (1 + u)  # noqa: E731
    assert a_integral(g, 1.5) == a_integral(g, 1.5)


def test_a_integral_detects_non_decay():
    with np.errstate(over="ignore"):
        with pytest.raises(QuadratureError):
            a_integral(lambda u: np.exp(-u), 1.5)


def test_result_type():
    r = QuadratureResult(1.0, 0.0, 4, True)
    assert r.require() == 1.0
