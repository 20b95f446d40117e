"""Surface geometry: metric, curvature, geodesics, boundary classification."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cigarmartin.surface import (
    BoundaryPoint,
    GeodesicSpec,
    SurfaceError,
    SurfacePoint,
    christoffel_factor,
    classify_direction,
    curvature_minimum,
    gauss_curvature,
    geodesic_closed_form,
    geodesic_integrate,
    metric_factor,
)

SQRT3 = math.sqrt(3.0)


# ---------------------------------------------------------------------------
# metric factor
# ---------------------------------------------------------------------------


def test_metric_factor_far_field_limit():
    assert abs(metric_factor(40.0) - 0.25) < 1e-12


def test_metric_factor_small_y_blowup_rate():
    y = 1e-6
    assert abs(math.sqrt(metric_factor(y)) * y - SQRT3 / 2.0) < 1e-12


def test_metric_factor_hand_value():
    # (16 + 40 + 1) / (4 * 9) at y = log 2
    assert abs(metric_factor(math.log(2.0)) - 57.0 / 36.0) < 1e-14


def test_metric_factor_next_order_term():
    # sqrt(P) = sqrt(3)/(2y) + y^3/(20 sqrt 3) + ...
    y = 0.01
    correction = math.sqrt(metric_factor(y)) * y - SQRT3 / 2.0
    assert correction == pytest.approx(y**4 / (20.0 * SQRT3), rel=0.05)


def test_metric_factor_domain_error():
    for y in (0.0, -1.0):
        with pytest.raises(SurfaceError):
            metric_factor(y)


def test_metric_factor_vectorised():
    ys = np.array([0.5, 1.0, 2.0])
    vals = metric_factor(ys)
    assert vals.shape == ys.shape
    assert vals[1] == pytest.approx(metric_factor(1.0))


@given(st.floats(1e-3, 30.0))
def test_metric_factor_exceeds_quarter(y):
    # Strictly above 1/4 until the 10 e^{-2y} correction sinks below one ulp.
    assert metric_factor(y) >= 0.25
    if y < 15.0:
        assert metric_factor(y) > 0.25


# ---------------------------------------------------------------------------
# curvature
# ---------------------------------------------------------------------------


def test_curvature_minimum_pin():
    y_star, k_star = curvature_minimum()
    assert abs(y_star - math.log(2.0 + SQRT3)) < 1e-15
    assert k_star == -5.0 / 3.0
    assert abs(gauss_curvature(y_star) - k_star) < 1e-12


def test_curvature_minimum_is_critical_point():
    y_star, _ = curvature_minimum()
    h = 1e-5
    grad = (gauss_curvature(y_star + h) - gauss_curvature(y_star - h)) / (2.0 * h)
    second = (
        gauss_curvature(y_star + h)
        - 2.0 * gauss_curvature(y_star)
        + gauss_curvature(y_star - h)
    ) / (h * h)
    assert abs(grad) < 1e-10
    assert second > 0.1


def test_curvature_boundary_limit():
    assert abs(gauss_curvature(1e-6) + 4.0 / 3.0) < 1e-4


def test_curvature_exponential_flattening():
    k40 = gauss_curvature(40.0)
    assert abs(k40) < 1e-20
    assert k40 / (-96.0 * math.exp(-80.0)) == pytest.approx(1.0, rel=1e-3)


@given(st.floats(1e-3, 30.0))
def test_curvature_strictly_negative(y):
    assert gauss_curvature(y) < 0.0


def test_curvature_domain_error():
    with pytest.raises(SurfaceError):
        gauss_curvature(-0.5)


# ---------------------------------------------------------------------------
# Christoffel factor
# ---------------------------------------------------------------------------


def test_christoffel_negative_everywhere_sampled():
    for y in (0.05, 0.3, 1.0, 3.0, 10.0):
        assert christoffel_factor(y) < 0.0


def test_christoffel_is_half_log_derivative_of_metric():
    y, h = 1.0, 1e-6
    fd = (metric_factor(y + h) - metric_factor(y - h)) / (2.0 * h)
    want = fd / (2.0 * metric_factor(y))
    assert christoffel_factor(y) == pytest.approx(want, rel=1e-8)


def test_christoffel_far_field_decay():
    y = 40.0
    assert christoffel_factor(y) == pytest.approx(-12.0 * math.exp(-2.0 * y), rel=1e-3)


def test_christoffel_domain_error():
    with pytest.raises(SurfaceError):
        christoffel_factor(0.0)


# ---------------------------------------------------------------------------
# closed-form geodesics
# ---------------------------------------------------------------------------


def test_apex_family_turning_point():
    spec = GeodesicSpec("ii", a=1.0)
    assert geodesic_closed_form(spec, 1.0) == pytest.approx(0.0, abs=1e-12)


def test_apex_family_range_error():
    with pytest.raises(SurfaceError):
        geodesic_closed_form(GeodesicSpec("ii", a=1.0), 1.5)


def test_apex_family_monotone_toward_boundary():
    spec = GeodesicSpec("ii", a=1.0)
    ys = np.linspace(0.999, 1e-3, 200)
    xs = geodesic_closed_form(spec, ys)
    assert np.all(np.diff(xs) > 0.0)
    assert np.isfinite(xs[-1])


def test_critical_family_values_and_slope():
    spec = GeodesicSpec("iii", a=1.0)
    assert geodesic_closed_form(spec, 1.0) == pytest.approx(0.0, abs=1e-14)
    h = 1e-6
    dxdy = (
        geodesic_closed_form(spec, 1.0 + h) - geodesic_closed_form(spec, 1.0 - h)
    ) / (2.0 * h)
    # tangent slope dy/dx = sqrt(3)/sinh(a) at the crossing height
    assert dxdy == pytest.approx(math.sinh(1.0) / SQRT3, rel=1e-8)


def test_supercritical_crossing_and_slope():
    spec = GeodesicSpec("iv", a=1.0, m=3.0)
    assert geodesic_closed_form(spec, 1.0) == pytest.approx(0.0, abs=1e-12)
    h = 1e-6
    dxdy = (
        geodesic_closed_form(spec, 1.0 + h) - geodesic_closed_form(spec, 1.0 - h)
    ) / (2.0 * h)
    assert dxdy == pytest.approx(1.0 / 3.0, rel=1e-8)


def test_shift_and_reflection():
    base = GeodesicSpec("iii", a=1.0)
    moved = GeodesicSpec("iii", a=1.0, x_shift=2.0, reflected=True)
    for y in (0.5, 1.0, 2.0):
        assert geodesic_closed_form(moved, y) == pytest.approx(
            2.0 - geodesic_closed_form(base, y)
        )


def test_vertical_kind_rejects_graph_form():
    with pytest.raises(SurfaceError):
        geodesic_closed_form(GeodesicSpec("i", a=1.0), 0.5)


def test_geodesic_spec_validation():
    with pytest.raises(SurfaceError):
        GeodesicSpec("v", a=1.0)
    with pytest.raises(SurfaceError):
        GeodesicSpec("ii", a=-1.0)
    with pytest.raises(SurfaceError):
        GeodesicSpec("iv", a=1.0, m=1.0)  # m sinh(a) < sqrt(3): not kind iv
    with pytest.raises(SurfaceError):
        geodesic_closed_form(GeodesicSpec("iii", a=1.0), -0.2)


# ---------------------------------------------------------------------------
# geodesic integrator
# ---------------------------------------------------------------------------


def test_vertical_geodesic_stays_vertical():
    path = geodesic_integrate(SurfacePoint(0.0, 1.0), (0.0, 1.0), t_max=5.0)
    assert np.max(np.abs(path.x)) < 1e-12
    assert path.y[-1] > path.y[0]
    assert np.max(path.speed_drift) < 1e-8


def test_integrator_matches_critical_closed_form():
    m = SQRT3 / math.sinh(1.0)
    path = geodesic_integrate(SurfacePoint(0.0, 1.0), (1.0, m), t_max=20.0)
    spec = GeodesicSpec("iii", a=1.0)
    predicted = geodesic_closed_form(spec, path.y)
    assert np.max(np.abs(path.x - predicted)) < 1e-6
    assert np.max(path.speed_drift) < 1e-8


def test_integrator_matches_apex_closed_form():
    path = geodesic_integrate(SurfacePoint(0.5, 1.2), (1.0, 0.0), t_max=6.0)
    spec = GeodesicSpec("ii", a=1.2, x_shift=0.5)
    ys = np.minimum(path.y, 1.2)
    keep = path.y > 1e-5
    predicted = geodesic_closed_form(spec, ys[keep])
    assert np.max(np.abs(path.x[keep] - predicted)) < 1e-6


def test_integrator_translation_invariance():
    m = SQRT3 / math.sinh(1.0)
    base = geodesic_integrate(SurfacePoint(0.0, 1.0), (1.0, m), t_max=10.0)
    moved = geodesic_integrate(SurfacePoint(0.7, 1.0), (1.0, m), t_max=10.0)
    assert np.max(np.abs(moved.x - 0.7 - base.x)) < 1e-9
    assert np.max(np.abs(moved.y - base.y)) < 1e-9


def test_integrator_rejects_zero_direction():
    with pytest.raises(SurfaceError):
        geodesic_integrate(SurfacePoint(0.0, 1.0), (0.0, 0.0), t_max=1.0)


def test_boundary_distance_diverges_logarithmically():
    """Arc length down to height eps grows like (sqrt(3)/2) |log eps|."""
    path = geodesic_integrate(
        SurfacePoint(0.0, 1.0), (0.0, -1.0), t_max=40.0, n_samples=4001, y_floor=1e-9
    )
    assert path.reached_floor
    logeps = np.array([-math.log(1e-4), -math.log(1e-6), -math.log(1e-8)])
    times = []
    for eps in (1e-4, 1e-6, 1e-8):
        idx = int(np.argmax(path.y <= eps))
        # linear interpolation of t against log y around the crossing
        t0, t1 = path.t[idx - 1], path.t[idx]
        l0, l1 = math.log(path.y[idx - 1]), math.log(path.y[idx])
        frac = (math.log(eps) - l0) / (l1 - l0)
        times.append(t0 + frac * (t1 - t0))
    slope = np.polyfit(logeps, np.array(times), 1)[0]
    assert slope == pytest.approx(SQRT3 / 2.0, rel=0.01)


# ---------------------------------------------------------------------------
# boundary-direction classification
# ---------------------------------------------------------------------------


def test_classify_critical_slope_hits_corner():
    a = 1.0
    omega = classify_direction(a, SQRT3 / math.sinh(a), +1)
    assert omega.kind == "circle" and omega.theta == 0.0
    omega = classify_direction(a, SQRT3 / math.sinh(a), -1)
    assert omega.theta == pytest.approx(math.pi)


def test_classify_supercritical_angle_value():
    a = math.asinh(1.0)  # sinh a = 1
    omega = classify_direction(a, math.sqrt(6.0), +1)
    assert math.tan(omega.theta) == pytest.approx(SQRT3 / 2.0, rel=1e-12)


def test_classify_vertical_limit():
    assert classify_direction(1.0, math.inf, +1).theta == math.pi / 2.0
    omega = classify_direction(1.0, 1e9, +1)
    assert abs(omega.theta - math.pi / 2.0) < 1e-8


def test_classify_angle_monotone_in_slope():
    a = 1.0
    m_crit = SQRT3 / math.sinh(a)
    slopes = np.linspace(1.01 * m_crit, 50.0, 40)
    thetas = [classify_direction(a, float(m), +1).theta for m in slopes]
    assert np.all(np.diff(thetas) > 0.0)


def test_classify_subcritical_lands_on_real_line():
    m = 0.4 * SQRT3 / math.sinh(1.0)
    omega = classify_direction(1.0, m, +1)
    assert omega.kind == "real_line"
    assert np.isfinite(omega.xi) and omega.xi > 0.0
    # Reflecting x -> -x maps the (+1, m) branch onto the (-1, -m) branch.
    mirror = classify_direction(1.0, -m, -1)
    assert mirror.xi == pytest.approx(-omega.xi, rel=1e-6)
    # The horizontal-tangent start is exactly mirror-symmetric on its own.
    flat = classify_direction(1.0, 0.0, +1)
    assert classify_direction(1.0, 0.0, -1).xi == pytest.approx(-flat.xi, rel=1e-9)


def test_classify_validation():
    with pytest.raises(SurfaceError):
        classify_direction(-1.0, 1.0, +1)
    with pytest.raises(SurfaceError):
        classify_direction(1.0, 1.0, 0)


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------


def test_surface_point_validation():
    with pytest.raises(SurfaceError):
        SurfacePoint(0.0, 0.0)
    assert SurfacePoint(1.0, 2.0).y == 2.0


def test_boundary_point_validation():
    with pytest.raises(SurfaceError):
        BoundaryPoint("edge")
    with pytest.raises(SurfaceError):
        BoundaryPoint("real_line")
    with pytest.raises(SurfaceError):
        BoundaryPoint("circle", theta=4.0)
    assert BoundaryPoint("circle", theta=math.pi / 2.0).theta == math.pi / 2.0
