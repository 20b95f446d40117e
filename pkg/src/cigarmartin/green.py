"""Green's function of the operator (Laplacian - 1) on the cigar surface.

The evaluation uses the real-line spectral integral

    G(x, y, xi, eta) = e^{y+eta} / (2 pi sqrt((e^{2y}-1)(e^{2eta}-1)))
                       * Int_0^inf Re k(s, y, eta)
                         e^{-|x-xi| sqrt(s^2+1/4)} / sqrt(s^2+1/4) ds

with the kernel k available in two algebraically equal forms:

* definition form: k = a(s) e^{-is(y+eta)} f(s,y) f(s,eta)
                       + e^{is(y-eta)} conj(f(s,y)) f(s,eta),
  where f(s,y) = 2F1(-1/2, -1/2+is; 1+is; e^{-2y}).  Its series has uniformly
  bounded terms in s, so this form stays accurate at arbitrarily large s, but
  Re k is then a difference of O(1) oscillatory terms.

* product form: Re k = (pi/2) s (s^2+1/4) tanh(pi s) e^{-(y+eta)/2}
                       sinh^2 y sinh^2 eta Phi(s,y) Phi(s,eta),
  with Phi(s,y) = 2F1(3/4-is/2, 3/4+is/2; 2; -sinh^2 y).  Manifestly real and
  positive, but the conical series loses roughly e^{s (r(y)+r(eta))} digits to
  cancellation, r(y) = min(tanh y, sech y), so it is trusted only below an
  s-cap.

Route selection by A = |x - xi|:
  A >= 0.1   product density on [0, s_cap], definition density on the rest,
             truncated where the e^{-A s} damping certifies the tail;
  A < 0.1    each definition-form term integrated separately: the term with
             frequency y+eta (and the |y-eta| term when the frequency is
             usable) by half-period segments with Wynn acceleration, pure
             damping otherwise.

The eta -> 0 coefficient density Re{Gamma(3/2+is)/Gamma(is) e^{-isy} f(s,y)}
shares this quadrature machinery (``eta0_coefficient_integral``); the boundary
kernel of the real-line family is a ratio of two such integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import loggamma as _sc_loggamma

from .quadrature import (
    QuadratureConfig,
    QuadratureResult,
    ToleranceError,
    fit_exponential_envelope,
    integrate_adaptive,
    integrate_oscillatory_tail,
)
from .specfun import a_coefficient, f_hypergeo_vec, hyp2f1_conical
from .surface import SurfacePoint, metric_factor

__all__ = [
    "GreenError",
    "NearDiagonalError",
    "GreenQuery",
    "KernelEval",
    "GreenResult",
    "kernel_k",
    "re_k_spectral_density",
    "green_eval",
    "integrand_tail_bound",
    "eta0_coefficient_integral",
    "eta0_density",
]

PUBLIC_OPERATIONS = [
    "green.kernel_k",
    "green.re_k_spectral_density",
    "green.green_eval",
    "green.integrand_tail_bound",
    "green.eta0_coefficient_integral",
]


class GreenError(RuntimeError):
    """Evaluation failure in the spectral-integral machinery."""


class NearDiagonalError(GreenError):
    """Query too close to the diagonal for the spectral integral."""


@dataclass(frozen=True)
class GreenQuery:
    """Source/target pair for one Green's function evaluation."""

    source: SurfacePoint
    target: SurfacePoint

    def __post_init__(self):
        if self.source == self.target:
            raise NearDiagonalError("source and target must be distinct")


@dataclass(frozen=True)
class KernelEval:
    """Both algebraic forms of the spectral kernel at one (s, y, eta)."""

    s: float
    k_def: complex
    k_product: complex
    re_k: float


@dataclass(frozen=True)
class GreenResult:
    value: float
    error: float
    nodes_used: int


# ---------------------------------------------------------------------------
# kernel forms
# ---------------------------------------------------------------------------


def _conical_profile(s, y: float) -> np.ndarray:
    """Phi(s, y) = 2F1(3/4 - is/2, 3/4 + is/2; 2; -sinh^2 y), real for real s."""
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    vals = hyp2f1_conical(1j * s_arr, y, 2.0)
    return np.real(vals)


def _conical_loss_rate(y: float) -> float:
    """Digits-per-s loss rate of the conical series at height y."""
    return min(math.tanh(y), 1.0 / math.cosh(y))


def _gamma_ratio_32(s_arr: np.ndarray) -> np.ndarray:
    """Gamma(3/2 + is) / Gamma(is), vectorised; 0 at s = 0 (Gamma pole)."""
    i_s = 1j * s_arr
    out = np.zeros(s_arr.shape, dtype=complex)
    nz = s_arr != 0
    out[nz] = np.exp(_sc_loggamma(1.5 + i_s[nz]) - _sc_loggamma(i_s[nz]))
    return out


def kernel_k(s: float, y: float, eta: float, form: str = "definition") -> complex:
    """Spectral kernel k(s, y, eta) in the requested algebraic form."""
    if y <= 0 or eta <= 0:
        raise GreenError("kernel requires y, eta > 0")
    if form == "definition":
        f_y = complex(f_hypergeo_vec(s, y)[()])
        f_eta = complex(f_hypergeo_vec(s, eta)[()])
        a_s = a_coefficient(s)
        return a_s * np.exp(-1j * s * (y + eta)) * f_y * f_eta + np.exp(
            1j * s * (y - eta)
        ) * np.conj(f_y) * f_eta
    if form == "product":
        s_arr = np.atleast_1d(float(s))
        ratio = _gamma_ratio_32(s_arr)[0]
        phi = complex(hyp2f1_conical(1j * s_arr, y, 2.0)[0])
        f_eta = complex(f_hypergeo_vec(s, eta)[()])
        return (
            math.sqrt(math.pi)
            * ratio
            * math.exp(-0.5 * y)
            * math.sinh(y) ** 2
            * phi
            * np.exp(-1j * s * eta)
            * f_eta
        )
    raise ValueError(f"unknown kernel form {form!r}")


def kernel_both(s: float, y: float, eta: float) -> KernelEval:
    """Cross-evaluated kernel forms at one spectral point."""
    k_d = kernel_k(s, y, eta, "definition")
    k_p = kernel_k(s, y, eta, "product")
    return KernelEval(s=s, k_def=k_d, k_product=k_p, re_k=k_d.real)


def re_k_spectral_density(s, y: float, eta: float):
    """Re k(s, y, eta) via the manifestly real product formula (vectorised)."""
    if y <= 0 or eta <= 0:
        raise GreenError("density requires y, eta > 0")
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    dens = (
        0.5
        * math.pi
        * s_arr
        * (s_arr**2 + 0.25)
        * np.tanh(math.pi * s_arr)
        * math.exp(-0.5 * (y + eta))
        * math.sinh(y) ** 2
        * math.sinh(eta) ** 2
        * _conical_profile(s_arr, y)
        * _conical_profile(s_arr, eta)
    )
    if np.ndim(s) == 0:
        return float(dens[0])
    return dens


# ---------------------------------------------------------------------------
# integrand pieces
# ---------------------------------------------------------------------------


def _damping(s_arr: np.ndarray, a_dist: float) -> np.ndarray:
    root = np.sqrt(s_arr**2 + 0.25)
    return np.exp(-a_dist * root) / root


def _integrand_product(s_arr, y, eta, a_dist):
    return re_k_spectral_density(s_arr, y, eta) * _damping(s_arr, a_dist)


def _integrand_definition(s_arr, y, eta, a_dist):
    f_y = f_hypergeo_vec(s_arr, y)
    f_eta = f_hypergeo_vec(s_arr, eta)
    a_s = a_coefficient(s_arr)
    k = a_s * np.exp(-1j * s_arr * (y + eta)) * f_y * f_eta + np.exp(
        1j * s_arr * (y - eta)
    ) * np.conj(f_y) * f_eta
    return np.real(k) * _damping(s_arr, a_dist)


def _integrand_term(s_arr, y, eta, a_dist, term: int):
    f_eta = f_hypergeo_vec(s_arr, eta)
    if term == 1:
        f_y = f_hypergeo_vec(s_arr, y)
        c = a_coefficient(s_arr) * np.exp(-1j * s_arr * (y + eta)) * f_y * f_eta
    else:
        f_y = f_hypergeo_vec(s_arr, y)
        c = np.exp(1j * s_arr * (y - eta)) * np.conj(f_y) * f_eta
    return np.real(c) * _damping(s_arr, a_dist)


# ---------------------------------------------------------------------------
# quadrature assembly
# ---------------------------------------------------------------------------

_CONICAL_BUDGET = 34.0  # ~ digits16 * ln 10 headroom for the conical cancellation


def _linear_breakpoints(lo: float, hi: float, spacing: float) -> np.ndarray:
    n = int(max(8, min(4000, math.ceil((hi - lo) / spacing))))
    return np.linspace(lo, hi, n + 1)


def _envelope_samples(f, centers: np.ndarray, width: float, k: int = 7):
    """Max of |f| over a window around each center: oscillation-proof probes."""
    offsets = np.linspace(-0.5 * width, 0.5 * width, k)
    pts = centers[:, None] + offsets[None, :]
    pts = np.maximum(pts, 1e-12)
    vals = np.abs(np.asarray(f(pts.ravel()))).reshape(pts.shape)
    return vals.max(axis=1)


def _plain_tail(
    f, s_end: float, rel_tol: float, scale: float, policy: str, osc_freq: float = 0.0
):
    """Tail handling past s_end: (value_add, error_bound, nodes)."""
    if policy == "geometric-extrapolation":
        nodes = 0
        ends = [s_end, 1.3 * s_end, 1.69 * s_end]
        incs = []
        for lo, hi in zip(ends[:-1], ends[1:]):
            r = integrate_adaptive(
                f, lo, hi, rel_tol=1e-6, abs_tol=max(1e-300, 1e-3 * rel_tol * scale)
            )
            incs.append(r.value)
            nodes += r.nodes_used
        d1, d2 = abs(incs[0]), abs(incs[1])
        if d1 == 0.0:
            return sum(incs), d2 + 1e-300, nodes
        ratio = min(d2 / d1, 0.9)
        bound = d2 * ratio / (1.0 - ratio)
        return sum(incs), bound, nodes
    # bound-by-decay-rate
    centers = np.linspace(0.75 * s_end, s_end, 10)
    spacing = centers[1] - centers[0]
    width = min(math.pi / max(osc_freq, 0.3), 0.8 * spacing)
    mags = _envelope_samples(f, centers, width)
    fit = fit_exponential_envelope(centers, mags)
    if fit is None:
        return 0.0, math.inf, 70
    c0, rate = fit
    bound = 1.5 * c0 * math.exp(-0.95 * rate * s_end) / (0.95 * rate)
    return 0.0, bound, 70


def _eval_damped(
    f, s_end: float, rel_tol: float, policy: str, osc_freq: float
) -> tuple[float, float, int]:
    """Adaptive integral of a damped density on [0, s_end] plus tail term."""
    spacing = min(4.0, math.pi / max(osc_freq, 0.8), s_end / 8.0)
    res = integrate_adaptive(
        f,
        0.0,
        s_end,
        rel_tol=rel_tol,
        max_nodes=600_000,
        initial_breakpoints=_linear_breakpoints(0.0, s_end, spacing),
    )
    add, bound, n_tail = _plain_tail(f, s_end, rel_tol, abs(res.value), policy, osc_freq)
    return res.value + add, res.error + bound, res.nodes_used + n_tail


def _eval_oscillatory(
    f, omega: float, rel_tol: float, abs_scale: float, head_len: float = 40.0
) -> tuple[float, float, int]:
    """Head integral plus Wynn-accelerated oscillatory tail for one term."""
    half = math.pi / omega
    n_head = max(1, math.ceil(head_len / half))
    s_head = n_head * half
    head = integrate_adaptive(
        f,
        0.0,
        s_head,
        rel_tol=rel_tol,
        max_nodes=400_000,
        initial_breakpoints=_linear_breakpoints(0.0, s_head, min(2.0, half / 4.0)),
    )
    scale = max(abs_scale, abs(head.value))
    tail = integrate_oscillatory_tail(
        f, s_head, omega, rel_tol=rel_tol, abs_scale=scale, max_segments=2000
    )
    return (
        head.value + tail.value,
        head.error + tail.error,
        head.nodes_used + tail.nodes_used,
    )


def _metric_separation(p: SurfacePoint, q: SurfacePoint) -> float:
    """Local estimate of the geodesic distance (accurate for nearby points)."""
    dx = p.x - q.x
    dy = p.y - q.y
    step = math.hypot(dx, dy)
    if step == 0.0:
        return 0.0
    y_mid = 0.5 * (p.y + q.y)
    return math.sqrt(metric_factor(y_mid)) * step


def _log_prefactor(y: float, eta: float) -> float:
    """log of e^{y+eta} / (2 pi sqrt((e^{2y}-1)(e^{2eta}-1))), overflow-free."""

    def half_log_e2m1(t: float) -> float:
        return 0.5 * (2.0 * t + math.log1p(-math.exp(-2.0 * t)))

    return (y + eta) - half_log_e2m1(y) - half_log_e2m1(eta) - math.log(2.0 * math.pi)


def green_eval(q: GreenQuery, cfg: QuadratureConfig | None = None) -> GreenResult:
    """Green's function value with error estimate and node count."""
    if cfg is None:
        cfg = QuadratureConfig()
    x, y = q.source.x, q.source.y
    xi, eta = q.target.x, q.target.y
    a_dist = abs(x - xi)
    sep = _metric_separation(q.source, q.target)
    if math.hypot(x - xi, y - eta) < 0.5 and sep < 1e-2:
        raise NearDiagonalError(
            f"points separated by metric distance {sep:.2e} < 1e-2; "
            "the spectral integral has a logarithmic singularity there"
        )
    rel = cfg.rel_tol

    if a_dist >= 0.1 and y + eta <= 8.0:
        s_cap = _CONICAL_BUDGET / (_conical_loss_rate(y) + _conical_loss_rate(eta))
        s_end = max(cfg.s_max, 45.0 / a_dist + 12.0)
        if s_end > 1e5:
            raise ToleranceError(f"required s range {s_end:.1e} exceeds budget")
        freq = y + eta
        if s_end <= s_cap:
            f = lambda s: _integrand_product(s, y, eta, a_dist)
            val, err, nodes = _eval_damped(f, s_end, rel, cfg.tail_policy, freq)
        else:
            f_prod = lambda s: _integrand_product(s, y, eta, a_dist)
            f_def = lambda s: _integrand_definition(s, y, eta, a_dist)
            head = integrate_adaptive(
                f_prod,
                0.0,
                s_cap,
                rel_tol=rel,
                max_nodes=400_000,
                initial_breakpoints=_linear_breakpoints(
                    0.0, s_cap, min(4.0, math.pi / (2.0 * freq), s_cap / 8.0)
                ),
            )
            spacing = min(2.0, math.pi / (2.0 * freq))
            rest = integrate_adaptive(
                f_def,
                s_cap,
                s_end,
                rel_tol=1e-4,
                abs_tol=max(1e-300, 0.3 * rel * abs(head.value)),
                max_nodes=600_000,
                initial_breakpoints=_linear_breakpoints(s_cap, s_end, spacing),
            )
            add, bound, n_tail = _plain_tail(
                f_def, s_end, rel, abs(head.value), cfg.tail_policy, freq
            )
            val = head.value + rest.value + add
            err = head.error + rest.error + bound
            nodes = head.nodes_used + rest.nodes_used + n_tail
    else:
        # split the definition form into its two oscillation frequencies; its
        # series terms stay bounded at every s, so large frequencies cost
        # nothing in conditioning
        head_len = 40.0 if a_dist <= 0.0 else min(40.0, 45.0 / a_dist + 5.0)
        val, err, nodes = 0.0, 0.0, 0
        running = 0.0
        for term, omega in ((1, y + eta), (2, abs(y - eta))):
            f = lambda s, _t=term: _integrand_term(s, y, eta, a_dist, _t)
            if omega > 1e-3:
                v, e, n = _eval_oscillatory(f, omega, rel, abs(running), head_len)
            else:
                if a_dist <= 0.0:
                    raise NearDiagonalError(
                        "x = xi with y = eta has no convergent spectral integral"
                    )
                s_end = min(1e5, max(cfg.s_max, 45.0 / a_dist + 12.0))
                v, e, n = _eval_damped(f, s_end, rel, cfg.tail_policy, omega)
            val += v
            err += e
            nodes += n
            running = val

    log_pref = _log_prefactor(y, eta)
    pref = math.exp(log_pref)
    return GreenResult(value=pref * val, error=pref * err, nodes_used=nodes)


def integrand_tail_bound(s: float, q: GreenQuery) -> float:
    """Certified envelope overestimate of the absolute integrand beyond s.

    Fits an exponential to sampled integrand magnitudes over [0.6 s, s] and
    returns its (safety-inflated) value at s, which bounds the integrand on
    [s, infinity) as long as the fitted decay persists.  Returns +inf when no
    decaying fit exists, signalling that s_max must be enlarged.
    """
    if s <= 0:
        raise GreenError("tail bound requires s > 0")
    y, eta = q.source.y, q.target.y
    a_dist = abs(q.source.x - q.target.x)
    s_cap = _CONICAL_BUDGET / (_conical_loss_rate(y) + _conical_loss_rate(eta))
    if s <= s_cap:
        f = lambda t: _integrand_product(t, y, eta, a_dist)
    else:
        f = lambda t: np.abs(_integrand_term(t, y, eta, a_dist, 1)) + np.abs(
            _integrand_term(t, y, eta, a_dist, 2)
        )
    centers = np.linspace(max(0.6 * s, s - 30.0), s, 12)
    spacing = centers[1] - centers[0]
    width = min(math.pi / max(y + eta, 0.3), 0.8 * spacing)
    mags = _envelope_samples(f, centers, width)
    fit = fit_exponential_envelope(centers, mags)
    if fit is None:
        return math.inf
    c0, rate = fit
    return 2.0 * c0 * math.exp(-0.95 * rate * s)


# ---------------------------------------------------------------------------
# eta -> 0 coefficient machinery (shared with the boundary-kernel family)
# ---------------------------------------------------------------------------


def eta0_density(s, y: float):
    """h(s, y) = Re{Gamma(3/2+is)/Gamma(is) e^{-isy} f(s, y)}, vectorised."""
    if y <= 0:
        raise GreenError("density requires y > 0")
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    vals = _gamma_ratio_32(s_arr) * np.exp(-1j * s_arr * y) * f_hypergeo_vec(s_arr, y)
    out = np.real(vals)
    if np.ndim(s) == 0:
        return float(out[0])
    return out


def eta0_coefficient_integral(
    a_dist: float, y: float, cfg: QuadratureConfig | None = None
) -> GreenResult:
    """Int_0^inf h(s, y) e^{-A sqrt(s^2+1/4)} / sqrt(s^2+1/4) ds for A > 0.

    The density grows like s^{3/2} with oscillation frequency y, so the
    damping factor alone must carry convergence; A = 0 is rejected (the
    integral diverges there).
    """
    if cfg is None:
        cfg = QuadratureConfig()
    if a_dist <= 0:
        raise GreenError("the eta -> 0 coefficient integral requires |x - xi| > 0")
    f = lambda s: eta0_density(s, y) * _damping(np.asarray(s, dtype=float), a_dist)
    if a_dist >= 0.01:
        s_end = min(1e5, max(cfg.s_max, (48.0 + 3.0 * abs(math.log(a_dist))) / a_dist))
        val, err, nodes = _eval_damped(f, s_end, cfg.rel_tol, cfg.tail_policy, y)
    else:
        val, err, nodes = _eval_oscillatory(f, y, cfg.rel_tol, 0.0)
    return GreenResult(value=val, error=err, nodes_used=nodes)
