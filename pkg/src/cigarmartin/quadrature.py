"""Quadrature engines for the spectral integrals.

* ``integrate_adaptive``: globally adaptive Gauss-Kronrod (G7, K15) rule for
  scalar integrands that accept numpy arrays of abscissae.  Panels are
  evaluated in batches (one vectorised call per refinement sweep), refined by
  bisection where the embedded-rule error estimate concentrates, and summed
  in interval order so results are bit-deterministic.

* ``integrate_oscillatory_tail``: infinite oscillatory tails summed over
  half-period segments with Wynn-epsilon acceleration of the partial sums.
  Used where the integrand has an O(1) oscillatory envelope and plain
  truncation cannot converge.

* ``fixed_panel_vector``: non-adaptive panel rule for vector-valued
  integrands (one integral per output component), with the embedded error
  estimate returned per component.

* ``fit_exponential_envelope``: least-squares exponential fit of a sampled
  envelope, used to certify truncation bounds; reports failure instead of
  guessing when the data is not decaying.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "QuadratureConfig",
    "QuadratureResult",
    "ToleranceError",
    "integrate_adaptive",
    "integrate_oscillatory_tail",
    "fixed_panel_vector",
    "fit_exponential_envelope",
    "wynn_epsilon",
]

# 7-point Gauss / 15-point Kronrod abscissae and weights on [-1, 1].
_XGK = np.array(
    [
        -0.991455371120813,
        -0.949107912342759,
        -0.864864423359769,
        -0.741531185599394,
        -0.586087235467691,
        -0.405845151377397,
        -0.207784955007898,
        0.0,
        0.207784955007898,
        0.405845151377397,
        0.586087235467691,
        0.741531185599394,
        0.864864423359769,
        0.949107912342759,
        0.991455371120813,
    ]
)
_WGK = np.array(
    [
        0.022935322010529,
        0.063092092629979,
        0.104790010322250,
        0.140653259715525,
        0.169004726639267,
        0.190350578064785,
        0.204432940075298,
        0.209482141084728,
        0.204432940075298,
        0.190350578064785,
        0.169004726639267,
        0.140653259715525,
        0.104790010322250,
        0.063092092629979,
        0.022935322010529,
    ]
)
_WG = np.array(
    [
        0.129484966168870,
        0.279705391489277,
        0.381830050505119,
        0.417959183673469,
        0.381830050505119,
        0.279705391489277,
        0.129484966168870,
    ]
)
_GAUSS_IDX = np.arange(1, 15, 2)  # Gauss points sit at the odd Kronrod slots


class ToleranceError(RuntimeError):
    """Requested tolerance could not be certified within the node budget."""


@dataclass(frozen=True)
class QuadratureConfig:
    """Budget and policy knobs for the spectral-integral evaluators."""

    s_max: float = 60.0
    rel_tol: float = 1e-9
    abs_tol: float = 0.0
    max_nodes: int = 400_000
    tail_policy: str = "bound-by-decay-rate"  # or "geometric-extrapolation"

    def __post_init__(self):
        if self.tail_policy not in ("bound-by-decay-rate", "geometric-extrapolation"):
            raise ValueError(f"unknown tail policy {self.tail_policy!r}")


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float
    nodes_used: int


def _panel_eval(f, lo: np.ndarray, hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate the K15/G7 pair on a batch of panels.  Returns (I_K, err)."""
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    pts = mid[:, None] + half[:, None] * _XGK[None, :]
    vals = np.asarray(f(pts.ravel()), dtype=float).reshape(pts.shape)
    i_k = half * (vals @ _WGK)
    i_g = half * (vals[:, _GAUSS_IDX] @ _WG)
    diff = np.abs(i_k - i_g)
    # QUADPACK-style sharpening of the embedded estimate
    scale = np.abs(half) * (np.abs(vals) @ _WGK)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(scale > 0, 200.0 * diff / np.maximum(scale, 1e-300), 0.0)
    err = np.where(ratio < 1.0, scale * ratio**1.5 / 200.0 * 200.0**0.5, diff)
    err = np.maximum(err, np.abs(i_k) * 5e-16)
    return i_k, err


def integrate_adaptive(
    f,
    lo: float,
    hi: float,
    rel_tol: float = 1e-10,
    abs_tol: float = 0.0,
    max_nodes: int = 400_000,
    initial_breakpoints=None,
) -> QuadratureResult:
    """Adaptive Gauss-Kronrod integral of ``f`` over [lo, hi].

    ``f`` must accept a 1-D numpy array and return values elementwise.
    """
    if hi <= lo:
        return QuadratureResult(0.0, 0.0, 0)
    if initial_breakpoints is None:
        bks = np.linspace(lo, hi, 9)
    else:
        bks = np.unique(np.clip(np.asarray(initial_breakpoints, dtype=float), lo, hi))
        if bks[0] > lo:
            bks = np.concatenate(([lo], bks))
        if bks[-1] < hi:
            bks = np.concatenate((bks, [hi]))
    los, his = bks[:-1].copy(), bks[1:].copy()
    i_k, err = _panel_eval(f, los, his)
    nodes = 15 * len(los)

    while True:
        order = np.argsort(los, kind="stable")
        total = float(np.sum(i_k[order]))
        total_err = float(np.sum(err))
        # when the integral is a small residue of a large oscillatory mass,
        # the achievable accuracy is floored by roundoff in the panel sums;
        # accept that floor honestly instead of refining forever
        floor = 8e-15 * float(np.sum(np.abs(i_k)))
        tol = max(abs_tol, rel_tol * abs(total), floor)
        if total_err <= tol:
            return QuadratureResult(total, total_err, nodes)
        if nodes >= max_nodes:
            raise ToleranceError(
                f"adaptive quadrature stalled: error {total_err:.3e} > tol {tol:.3e} "
                f"after {nodes} nodes"
            )
        # refine every panel carrying more than its per-panel share of the budget
        cut = max(tol / (4.0 * len(los)), float(np.max(err)) * 0.125)
        sel = err > cut
        if not np.any(sel):
            sel = err >= np.max(err)
        mid = 0.5 * (los[sel] + his[sel])
        new_lo = np.concatenate((los[sel], mid))
        new_hi = np.concatenate((mid, his[sel]))
        ik_new, err_new = _panel_eval(f, new_lo, new_hi)
        nodes += 15 * len(new_lo)
        los = np.concatenate((los[~sel], new_lo))
        his = np.concatenate((his[~sel], new_hi))
        i_k = np.concatenate((i_k[~sel], ik_new))
        err = np.concatenate((err[~sel], err_new))


def wynn_epsilon(psums) -> tuple[float, float]:
    """Wynn epsilon acceleration of a sequence of partial sums.

    Builds the even columns of the epsilon table and returns the entry whose
    agreement with the preceding even column is smallest, together with that
    agreement.  Deep columns are dominated by roundoff, so "deepest" is not
    "best"; selecting on internal agreement keeps the estimate honest.
    """
    s = np.asarray(psums, dtype=float)
    n = len(s)
    if n == 1:
        return float(s[0]), abs(float(s[0]))
    e0 = np.zeros(n + 1)  # column k-1 (starts as the zero column)
    e1 = s.copy()  # column k
    best = float(s[-1])
    best_err = abs(s[-1] - s[-2])
    last_even = s
    col = 0
    while len(e1) >= 2:
        diff = np.diff(e1)
        if np.any(np.abs(diff) < 1e-300):
            break
        e2 = e0[1 : len(e1)] + 1.0 / diff
        col += 1
        if col % 2 == 0:  # even columns approximate the sum
            m = min(len(e2), len(last_even))
            agree = np.abs(e2[-m:] - last_even[-m:])
            j = int(np.argmin(agree))
            if agree[j] < best_err:
                best_err = float(agree[j])
                best = float(e2[-m:][j])
            last_even = e2
        e0, e1 = e1, e2
    return best, best_err


def integrate_oscillatory_tail(
    f,
    s0: float,
    omega: float,
    rel_tol: float = 1e-9,
    abs_scale: float = 0.0,
    max_segments: int = 800,
    batch: int = 20,
) -> QuadratureResult:
    """Integral of ``f`` over [s0, infinity) for a single-frequency oscillator.

    The axis is cut into half-period segments of length pi/omega; each segment
    integral uses one K15 rule, partial sums are accelerated with the Wynn
    epsilon algorithm, and the run stops once two successive accelerated
    estimates agree to the requested tolerance.  ``abs_scale`` supplies an
    external magnitude (e.g. the head integral) for the relative test.
    """
    if omega <= 0:
        raise ValueError("omega must be positive")
    h = math.pi / omega
    psums: list[float] = []
    acc = 0.0
    nodes = 0
    est_prev = None
    good = 0
    n_done = 0
    while n_done < max_segments:
        nseg = min(batch, max_segments - n_done)
        idx = n_done + np.arange(nseg)
        los = s0 + idx * h
        his = los + h
        i_k, _ = _panel_eval(f, los, his)
        nodes += 15 * nseg
        for v in i_k:
            acc += float(v)
            psums.append(acc)
        n_done += nseg
        if len(psums) >= 6:
            window = psums[-61:] if len(psums) > 61 else psums
            est, spread = wynn_epsilon(window)
            scale = max(abs_scale, abs(est))
            if est_prev is not None:
                drift = abs(est - est_prev)
                if max(drift, spread) <= max(rel_tol * scale, 1e-300):
                    good += 1
                    if good >= 2:
                        return QuadratureResult(est, max(drift, spread), nodes)
                else:
                    good = 0
            est_prev = est
    raise ToleranceError(
        f"oscillatory tail did not settle after {max_segments} segments"
    )


def fixed_panel_vector(f, breakpoints) -> tuple[np.ndarray, np.ndarray]:
    """Fixed-panel K15 rule for a vector-valued integrand.

    ``f`` maps a 1-D array of abscissae (n,) to an array (n, ...) of values.
    Returns (integral, error_estimate) with the integrand's trailing shape.
    """
    bks = np.asarray(breakpoints, dtype=float)
    los, his = bks[:-1], bks[1:]
    half = 0.5 * (his - los)
    mid = 0.5 * (his + los)
    pts = (mid[:, None] + half[:, None] * _XGK[None, :]).ravel()
    vals = np.asarray(f(pts))
    vals = vals.reshape(len(los), 15, *vals.shape[1:])
    i_k = np.einsum("pk...,k->p...", vals, _WGK) * half.reshape(
        -1, *([1] * (vals.ndim - 2))
    )
    i_g = np.einsum("pk...,k->p...", vals[:, _GAUSS_IDX], _WG) * half.reshape(
        -1, *([1] * (vals.ndim - 2))
    )
    err = np.sum(np.abs(i_k - i_g), axis=0)
    return np.sum(i_k, axis=0), err


def fit_exponential_envelope(
    s: np.ndarray, magnitudes: np.ndarray, min_rate: float = 1e-3
) -> tuple[float, float] | None:
    """Fit |f| ~ C exp(-rate s) by least squares on log magnitudes.

    Returns (C, rate) or None when the fit fails (non-positive data, rate
    below ``min_rate``, or poor fit quality), signalling that no certified
    exponential bound exists.
    """
    s = np.asarray(s, dtype=float)
    mags = np.asarray(magnitudes, dtype=float)
    keep = mags > 0
    if np.count_nonzero(keep) < 4:
        return None
    s, mags = s[keep], mags[keep]
    logm = np.log(mags)
    coef = np.polyfit(s, logm, 1)
    rate = -coef[0]
    if not np.isfinite(rate) or rate < min_rate:
        return None
    resid = logm - np.polyval(coef, s)
    if np.max(np.abs(resid)) > 3.0:  # more than e^3 scatter: not an envelope
        return None
    return math.exp(coef[1]), rate
