"""Green's function of (Laplacian - 1): kernel forms, quadrature, PDE checks."""

from __future__ import annotations

import math

import numpy as np
import pytest

from cigarmartin.green import (
    GreenError,
    GreenQuery,
    NearDiagonalError,
    eta0_coefficient_integral,
    eta0_density,
    green_eval,
    integrand_tail_bound,
    kernel_both,
    kernel_k,
    re_k_spectral_density,
)
from cigarmartin.quadrature import QuadratureConfig
from cigarmartin.surface import SurfacePoint, metric_factor


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


# ---------------------------------------------------------------------------
# kernel forms
# ---------------------------------------------------------------------------


def test_kernel_two_forms_agree_at_spot():
    k_d = kernel_k(1.3, 0.8, 2.1, "definition")
    k_p = kernel_k(1.3, 0.8, 2.1, "product")
    assert abs(k_d - k_p) / abs(k_d) < 1e-9


def test_kernel_two_forms_agree_on_grid():
    for s in (0.0, 2.5, 7.5, 15.0, 20.0):
        for y, eta in ((0.2, 1.0), (1.0, 0.5), (3.0, 2.0), (0.2, 3.0)):
            k_d = kernel_k(s, y, eta, "definition")
            k_p = kernel_k(s, y, eta, "product")
            scale = max(abs(k_d), abs(k_p), 1e-30)
            assert abs(k_d - k_p) / scale < 1e-9, (s, y, eta)


def test_kernel_real_part_even_in_s():
    plus = kernel_k(2.0, 1.0, 1.0).real
    minus = kernel_k(-2.0, 1.0, 1.0).real
    assert abs(plus - minus) < 1e-12 * max(abs(plus), 1.0)


def test_kernel_small_eta_quadratic_coefficient():
    # Re k(s, y, eta) = sqrt(pi) h(s, y) eta^2 + O(eta^3)
    s, y = 1.1, 0.9
    target = math.sqrt(math.pi) * eta0_density(s, y)
    r3 = kernel_k(s, y, 1e-3).real / 1e-6
    r4 = kernel_k(s, y, 1e-4).real / 1e-8
    assert _rel(r4, target) < 1e-3
    assert _rel(r3, target) / max(_rel(r4, target), 1e-12) > 5.0  # O(eta) remainder


def test_kernel_both_record():
    rec = kernel_both(0.8, 1.0, 1.5)
    assert rec.re_k == rec.k_def.real
    assert abs(rec.k_def - rec.k_product) / abs(rec.k_def) < 1e-9


def test_kernel_domain_errors():
    with pytest.raises(GreenError):
        kernel_k(1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        kernel_k(1.0, 1.0, 1.0, form="other")


def test_density_zero_at_origin():
    assert re_k_spectral_density(0.0, 1.0, 1.0) == 0.0


def test_density_positive():
    assert re_k_spectral_density(1.0, 1.0, 1.0) > 0.0


def test_density_matches_definition_form():
    rng = np.random.default_rng(42)
    for _ in range(20):
        s = rng.uniform(0.1, 12.0)
        y = rng.uniform(0.2, 3.0)
        eta = rng.uniform(0.2, 3.0)
        dens = re_k_spectral_density(s, y, eta)
        ref = kernel_k(s, y, eta, "definition").real
        assert abs(dens - ref) / max(abs(ref), 1e-30) < 1e-9, (s, y, eta)


def test_density_vectorised():
    s = np.array([0.5, 1.0, 4.0])
    dens = re_k_spectral_density(s, 0.8, 1.2)
    assert dens.shape == (3,)
    assert dens[1] == pytest.approx(re_k_spectral_density(1.0, 0.8, 1.2))
    assert isinstance(re_k_spectral_density(1.0, 0.8, 1.2), float)


# ---------------------------------------------------------------------------
# Green's function
# ---------------------------------------------------------------------------


def test_green_symmetry():
    g_ab = green_eval(GreenQuery(SurfacePoint(0.0, 1.0), SurfacePoint(1.0, 2.0)))
    g_ba = green_eval(GreenQuery(SurfacePoint(1.0, 2.0), SurfacePoint(0.0, 1.0)))
    assert _rel(g_ab.value, g_ba.value) < 1e-6


def test_green_reference_regressions(green_reference_rows):
    for row in green_reference_rows:
        q = GreenQuery(
            SurfacePoint(float(row["x"]), float(row["y"])),
            SurfacePoint(float(row["xi"]), float(row["eta"])),
        )
        res = green_eval(q)
        assert _rel(res.value, float(row["value"])) < 1e-9, row
        assert res.value > 0.0
        assert res.error < 1e-6 * res.value
        assert res.nodes_used > 0


def test_green_pde_residual_in_target():
    """(d_xi^2 + d_eta^2 - P(eta)) G = 0 away from the source."""
    src = SurfacePoint(0.0, 1.0)
    xi, eta, h = 1.5, 1.5, 1e-3

    def g(u, v):
        return green_eval(GreenQuery(src, SurfacePoint(u, v))).value

    center = g(xi, eta)
    lap = (
        g(xi + h, eta) + g(xi - h, eta) + g(xi, eta + h) + g(xi, eta - h)
        - 4.0 * center
    ) / (h * h)
    resid = lap - metric_factor(eta) * center
    assert abs(resid) / (metric_factor(eta) * center) < 1e-3


def test_green_near_diagonal_rejected():
    with pytest.raises(NearDiagonalError):
        green_eval(GreenQuery(SurfacePoint(0.0, 1.0), SurfacePoint(1e-3, 1.0)))
    with pytest.raises(NearDiagonalError):
        GreenQuery(SurfacePoint(0.0, 1.0), SurfacePoint(0.0, 1.0))


def test_green_vertical_alignment_allowed():
    # x = xi is fine whenever y != eta: Re k alone carries the decay.
    res = green_eval(GreenQuery(SurfacePoint(0.0, 0.6), SurfacePoint(0.0, 2.0)))
    assert res.value > 0.0


def test_green_monotone_far_field_decay():
    src = SurfacePoint(0.0, 1.0)
    vals = [
        green_eval(GreenQuery(src, SurfacePoint(1.0, eta))).value
        for eta in (3.0, 4.0, 5.0, 6.0)
    ]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    # bounded ratio against the e^{-eta/2} eta^{-1/2} envelope
    scaled = [
        v * math.exp(0.5 * eta) * math.sqrt(eta)
        for v, eta in zip(vals, (3.0, 4.0, 5.0, 6.0))
    ]
    assert max(scaled) / min(scaled) < 1.5


def test_green_error_estimate_tracks_refinement():
    q = GreenQuery(SurfacePoint(0.0, 1.0), SurfacePoint(1.0, 1.0))
    loose = green_eval(q, QuadratureConfig(rel_tol=1e-6))
    tight = green_eval(q, QuadratureConfig(rel_tol=1e-11))
    assert abs(loose.value - tight.value) <= max(loose.error, 1e-12)
    assert tight.error < loose.error * 10.0


# ---------------------------------------------------------------------------
# tail bound
# ---------------------------------------------------------------------------


def _abs_integrand(s: float, q: GreenQuery) -> float:
    a_dist = abs(q.source.x - q.target.x)
    dens = re_k_spectral_density(s, q.source.y, q.target.y)
    root = math.sqrt(s * s + 0.25)
    return abs(dens) * math.exp(-a_dist * root) / root


def test_tail_bound_dominates_integrand():
    queries = [
        GreenQuery(SurfacePoint(0.0, 1.0), SurfacePoint(1.0, 2.0)),
        GreenQuery(SurfacePoint(0.5, 0.5), SurfacePoint(2.0, 1.0)),
        GreenQuery(SurfacePoint(0.0, 2.0), SurfacePoint(0.5, 0.7)),
    ]
    for q in queries:
        for s in (8.0, 14.0):
            bound = integrand_tail_bound(s, q)
            assert bound >= _abs_integrand(2.0 * s, q), (q, s)


def test_tail_bound_decreasing():
    q = GreenQuery(SurfacePoint(0.0, 1.0), SurfacePoint(1.0, 2.0))
    bounds = [integrand_tail_bound(s, q) for s in (8.0, 12.0, 16.0)]
    assert bounds[0] > bounds[1] > bounds[2]


def test_tail_bound_small_at_thirty():
    q = GreenQuery(SurfacePoint(0.0, 1.0), SurfacePoint(1.0, 1.5))
    assert integrand_tail_bound(30.0, q) < 1e-12


def test_tail_bound_requires_positive_s():
    q = GreenQuery(SurfacePoint(0.0, 1.0), SurfacePoint(1.0, 1.5))
    with pytest.raises(GreenError):
        integrand_tail_bound(0.0, q)


# ---------------------------------------------------------------------------
# eta -> 0 coefficient integral
# ---------------------------------------------------------------------------


def test_eta0_coefficient_positive_and_decaying_in_distance():
    near = eta0_coefficient_integral(1.0, 1.0)
    far = eta0_coefficient_integral(2.0, 1.0)
    assert near.value > far.value > 0.0


def test_eta0_coefficient_requires_offset():
    with pytest.raises(GreenError):
        eta0_coefficient_integral(0.0, 1.0)


# ---------------------------------------------------------------------------
# qualitative delta normalization
# ---------------------------------------------------------------------------


def test_green_reproduces_point_values_from_sources():
    """-int G(p, .) (Lap - P) phi  ~=  phi(p) for a narrow bump phi.

    Coarse by design: the quadrature walks over the logarithmic diagonal
    singularity.  The check still pins the overall normalization (an
    erroneous 2 pi or sqrt(pi) factor would shift the ratio far outside the
    window).
    """
    x0, y0, sig = 0.3, 1.2, 0.1
    p = SurfacePoint(0.325, 1.225)
    n = 21
    us = np.linspace(x0 - 0.5, x0 + 0.5, n)
    vs = np.linspace(y0 - 0.5, y0 + 0.5, n)

    def simpson(m, h):
        w = np.ones(m)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        return w * (h / 3.0)

    wu = simpson(n, us[1] - us[0])
    wv = simpson(n, vs[1] - vs[0])
    cfg = QuadratureConfig(rel_tol=1e-6)
    acc = 0.0
    for i, u in enumerate(us):
        for j, v in enumerate(vs):
            r2 = (u - x0) ** 2 + (v - y0) ** 2
            phi = math.exp(-r2 / (2.0 * sig * sig))
            lphi = phi * (r2 / sig**4 - 2.0 / sig**2 - metric_factor(v))
            if abs(lphi) < 1e-12:
                continue
            g = green_eval(GreenQuery(p, SurfacePoint(u, v)), cfg).value
            acc += wu[i] * wv[j] * g * lphi
    phi_p = math.exp(-((p.x - x0) ** 2 + (p.y - y0) ** 2) / (2.0 * sig * sig))
    ratio = -acc / phi_p
    assert 0.90 < ratio < 1.05
