"""Adaptive panels, series acceleration, oscillatory tails, envelope fits."""

from __future__ import annotations

import math

import numpy as np
import pytest

from cigarmartin.quadrature import (
    QuadratureConfig,
    ToleranceError,
    fit_exponential_envelope,
    fixed_panel_vector,
    integrate_adaptive,
    integrate_oscillatory_tail,
    wynn_epsilon,
)


def test_adaptive_polynomial_exact():
    res = integrate_adaptive(lambda s: s * s, 0.0, 1.0)
    assert res.value == pytest.approx(1.0 / 3.0, abs=1e-14)
    assert res.error < 1e-12
    assert res.nodes_used > 0


def test_adaptive_gaussian_value_and_error_bound():
    res = integrate_adaptive(lambda s: np.exp(-s * s), 0.0, 10.0, rel_tol=1e-12)
    want = math.sqrt(math.pi) / 2.0
    true_err = abs(res.value - want)
    assert true_err < 1e-12
    assert res.error >= true_err * 0.1  # estimate must not wildly undershoot


def test_adaptive_empty_interval():
    res = integrate_adaptive(lambda s: s, 2.0, 2.0)
    assert res.value == 0.0 and res.nodes_used == 0


def test_adaptive_honours_breakpoints():
    # A kink at s = 0.3 is resolved exactly when the breakpoint is supplied.
    f = lambda s: np.abs(s - 0.3)
    res = integrate_adaptive(f, 0.0, 1.0, initial_breakpoints=[0.3])
    want = 0.3**2 / 2.0 + 0.7**2 / 2.0
    assert res.value == pytest.approx(want, abs=1e-13)


def test_adaptive_node_budget_error():
    # An integrable singularity with a starved node budget must raise,
    # not silently return an under-resolved value.
    f = lambda s: 1.0 / np.sqrt(np.abs(s - 1.0 / math.pi) + 1e-300)
    with pytest.raises(ToleranceError):
        integrate_adaptive(f, 0.0, 1.0, rel_tol=1e-13, max_nodes=800)


def test_wynn_epsilon_accelerates_alternating_series():
    # ln 2 = 1 - 1/2 + 1/3 - ...: 25 raw terms carry ~2e-2 error.
    terms = [(-1.0) ** k / (k + 1.0) for k in range(25)]
    partial = np.cumsum(terms)
    limit, err = wynn_epsilon(partial)
    assert abs(limit - math.log(2.0)) < 1e-10
    assert err < 1e-8
    assert abs(partial[-1] - math.log(2.0)) > 1e-2  # acceleration did the work


def test_oscillatory_tail_known_integral():
    # int_0^inf cos(s) / (1 + s^2) ds = pi / (2 e)
    f = lambda s: np.cos(s) / (1.0 + s * s)
    res = integrate_oscillatory_tail(f, 0.0, 1.0, rel_tol=1e-10)
    assert res.value == pytest.approx(math.pi / (2.0 * math.e), rel=1e-9)


def test_oscillatory_tail_damped_cosine():
    # int_5^inf e^{-0.1 s} cos 2s ds has the closed form below.
    f = lambda s: np.cos(2.0 * s) * np.exp(-0.1 * s)
    tail = integrate_oscillatory_tail(f, 5.0, 2.0, rel_tol=1e-10)
    a, w = 0.1, 2.0
    tail_exact = (
        math.exp(-a * 5.0)
        * (a * math.cos(w * 5.0) - w * math.sin(w * 5.0))
        / (a * a + w * w)
    )
    assert tail.value == pytest.approx(tail_exact, rel=1e-8)


def test_fixed_panel_vector_scalar_and_vector():
    val, err = fixed_panel_vector(lambda s: s**3, [0.0, 0.3, 1.0])
    assert float(val) == pytest.approx(0.25, abs=1e-14)
    assert float(err) < 1e-10

    def vec(s):
        return np.stack([s, s * s], axis=-1)

    vals, errs = fixed_panel_vector(vec, [0.0, 0.5, 1.0])
    assert vals.shape == (2,) and errs.shape == (2,)
    assert vals[0] == pytest.approx(0.5, abs=1e-14)
    assert vals[1] == pytest.approx(1.0 / 3.0, abs=1e-14)


def test_envelope_fit_recovers_parameters():
    s = np.linspace(1.0, 20.0, 25)
    mags = 3.5 * np.exp(-0.8 * s) * np.exp(0.01 * np.sin(5 * s))
    fit = fit_exponential_envelope(s, mags)
    assert fit is not None
    c0, rate = fit
    assert rate == pytest.approx(0.8, rel=0.02)
    assert c0 == pytest.approx(3.5, rel=0.2)


def test_envelope_fit_rejects_flat_and_bad_data():
    s = np.linspace(1.0, 10.0, 10)
    assert fit_exponential_envelope(s, np.ones_like(s)) is None
    assert fit_exponential_envelope(s, np.zeros_like(s)) is None


def test_quadrature_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(tail_policy="magic")
    cfg = QuadratureConfig(s_max=30.0)
    assert cfg.s_max == 30.0 and cfg.rel_tol == 1e-9
