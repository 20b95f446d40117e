"""Geometry of the cigar-like half-plane surface.

The surface is the half plane R x (0, inf) carrying the conformal metric
g = P(y) (dx^2 + dy^2) with

    P(y) = (e^{4y} + 10 e^{2y} + 1) / (4 (e^{2y} - 1)^2).

P(y) ~ 3/(4 y^2) as y -> 0+, so the real line lies at infinite distance and
the surface is complete; P -> 1/4 as y -> infinity (cylindrical end).  This
module provides the metric factor, the Gauss curvature, the Christoffel
factor k = P'/(2P), closed-form geodesics, a numerical geodesic integrator,
and the classification of geodesic escape directions into boundary points
(a real-line point or an angle on the ideal half circle).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

__all__ = [
    "SurfaceError",
    "SurfacePoint",
    "GeodesicSpec",
    "GeodesicPath",
    "BoundaryPoint",
    "metric_factor",
    "gauss_curvature",
    "christoffel_factor",
    "curvature_minimum",
    "geodesic_closed_form",
    "geodesic_integrate",
    "classify_direction",
]

PUBLIC_OPERATIONS = [
    "surface.metric_factor",
    "surface.gauss_curvature",
    "surface.christoffel_factor",
    "surface.geodesic_closed_form",
    "surface.geodesic_integrate",
    "surface.classify_direction",
]

_SERIES_CUT = 1e-4
_SQRT3 = math.sqrt(3.0)


class SurfaceError(ValueError):
    """Invalid geometric input (e.g. y <= 0 where the metric is undefined)."""


@dataclass(frozen=True)
class SurfacePoint:
    """A point (x, y) of the half plane, y > 0."""

    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise SurfaceError(f"surface points need y > 0, got y = {self.y}")


@dataclass(frozen=True)
class GeodesicSpec:
    """Closed-form geodesic family selector.

    kind
        "i"   vertical line x = x_shift (no graph form; rejected by
              ``geodesic_closed_form``),
        "ii"  curve with horizontal tangent at apex height ``a``,
        "iii" critical escaping curve through (x_shift, a) with slope
              sqrt(3)/sinh(a) there,
        "iv"  super-critical escaping curve through (x_shift, a) with slope
              ``m`` there, m sinh(a) > sqrt(3).
    ``reflected`` mirrors the curve through the vertical line x = x_shift.
    """

    kind: str
    a: float
    m: float | None = None
    x_shift: float = 0.0
    reflected: bool = False

    def __post_init__(self):
        if self.kind not in ("i", "ii", "iii", "iv"):
            raise SurfaceError(f"unknown geodesic kind {self.kind!r}")
        if not self.a > 0:
            raise SurfaceError("geodesic parameter a must be positive")
        if self.kind == "iv":
            if self.m is None:
                raise SurfaceError("kind iv needs a slope m")
            if self.m * math.sinh(self.a) <= _SQRT3:
                raise SurfaceError(
                    "kind iv requires m sinh(a) > sqrt(3); "
                    f"got m sinh(a) = {self.m * math.sinh(self.a)}"
                )


@dataclass(frozen=True)
class BoundaryPoint:
    """Ideal boundary point: either a real-line abscissa or a circle angle.

    ``kind`` is "real_line" (with ``xi`` set) or "circle" (with
    ``theta`` in [0, pi]; theta = 0 is the right corner, pi/2 the vertical
    direction, pi the left corner).
    """

    kind: str
    xi: float | None = None
    theta: float | None = None

    def __post_init__(self):
        if self.kind not in ("real_line", "circle"):
            raise SurfaceError(f"unknown boundary kind {self.kind!r}")
        if self.kind == "real_line" and self.xi is None:
            raise SurfaceError("real_line boundary point needs xi")
        if self.kind == "circle":
            if self.theta is None or not -1e-12 <= self.theta <= math.pi + 1e-12:
                raise SurfaceError("circle boundary point needs theta in [0, pi]")


@dataclass(frozen=True)
class GeodesicPath:
    """Sampled numerically integrated geodesic with drift diagnostics."""

    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    xdot: np.ndarray
    ydot: np.ndarray
    speed_drift: np.ndarray
    reached_floor: bool = False

    def rows(self) -> list[dict]:
        return [
            {
                "t": float(self.t[i]),
                "x": float(self.x[i]),
                "y": float(self.y[i]),
                "xdot": float(self.xdot[i]),
                "ydot": float(self.ydot[i]),
                "speed_drift": float(self.speed_drift[i]),
            }
            for i in range(len(self.t))
        ]


def _check_y(y) -> np.ndarray:
    arr = np.asarray(y, dtype=float)
    if np.any(arr <= 0):
        raise SurfaceError("metric quantities need y > 0")
    return arr


def metric_factor(y):
    """Conformal factor P(y); series for y < 1e-4, exact expm1 form otherwise.

    P(y) = (1 + 10 e^{-2y} + e^{-4y}) / (4 (1 - e^{-2y})^2)
         = 3/(4 y^2) + y^2/20 - y^4/126 + O(y^6).
    """
    arr = _check_y(y)
    out = np.empty_like(arr)
    small = arr < _SERIES_CUT
    if np.any(small):
        ys = arr[small]
        y2 = ys * ys
        out[small] = 0.75 / y2 + y2 * (1.0 / 20.0 - y2 / 126.0)
    big = ~small
    if np.any(big):
        yb = arr[big]
        em = np.exp(-2.0 * yb)
        out[big] = (1.0 + 10.0 * em + em * em) / (4.0 * np.expm1(-2.0 * yb) ** 2)
    return out if np.ndim(y) else float(out)


def gauss_curvature(y):
    """Gauss curvature K(y) of the metric P(y)(dx^2 + dy^2).

    K(y) = -96 e^{-2y} (1 + 2 e^{-2y} + 18 e^{-4y} + 2 e^{-6y} + e^{-8y})
           / (1 + 10 e^{-2y} + e^{-4y})^3.

    K(0+) = -4/3, the minimum K = -5/3 sits at y = log(2 + sqrt 3), and
    K ~ -96 e^{-2y} -> 0 along the cylindrical end.
    """
    arr = _check_y(y)
    em = np.exp(-2.0 * arr)
    e2 = em * em
    num = -96.0 * em * (1.0 + 2.0 * em + 18.0 * e2 + 2.0 * em * e2 + e2 * e2)
    den = (1.0 + 10.0 * em + e2) ** 3
    out = num / den
    return out if np.ndim(y) else float(out)


def christoffel_factor(y):
    """k(y) = P'(y) / (2 P(y)) = -12 e^{2y}(e^{2y}+1) / (e^{6y}+9e^{4y}-9e^{2y}-1).

    Strictly negative; k ~ -1/y + 2 y^3/15 as y -> 0 and k ~ -12 e^{-2y} as
    y -> infinity.
    """
    arr = _check_y(y)
    out = np.empty_like(arr)
    small = arr < _SERIES_CUT
    if np.any(small):
        ys = arr[small]
        y2 = ys * ys
        out[small] = -1.0 / ys + ys * y2 * (2.0 / 15.0 - 2.0 * y2 / 63.0)
    mid = (~small) & (arr < 10.0)
    if np.any(mid):
        ym = arr[mid]
        den = np.expm1(6.0 * ym) + 9.0 * np.expm1(4.0 * ym) - 9.0 * np.expm1(2.0 * ym)
        e2 = np.exp(2.0 * ym)
        out[mid] = -12.0 * e2 * (e2 + 1.0) / den
    big = arr >= 10.0
    if np.any(big):
        em = np.exp(-2.0 * arr[big])
        den = 1.0 + 9.0 * em - 9.0 * em * em - em**3
        out[big] = -12.0 * em * (1.0 + em) / den
    return out if np.ndim(y) else float(out)


def curvature_minimum() -> tuple[float, float]:
    """Location and value of the curvature minimum: (log(2+sqrt 3), -5/3)."""
    return math.log(2.0 + _SQRT3), -5.0 / 3.0


# ---------------------------------------------------------------------------
# closed-form geodesics
# ---------------------------------------------------------------------------


def geodesic_closed_form(spec: GeodesicSpec, y):
    """x(y) along the closed-form geodesic described by ``spec``.

    kind "ii" (apex family, y in (0, a]):
        x = +- C atan2(sqrt(2) cosh y sqrt(cosh 2a - cosh 2y),
                        cosh 2y - sinh^2 a),
        C = sqrt(e^{2a} + 10 + e^{-2a}) / (4 sqrt 3); the atan2 form glues the
        two square-root branches continuously through the sign change of the
        denominator.

    kind "iii" (critical):  x = +-(cosh y - cosh a)/sqrt(3).

    kind "iv" (super-critical, beta^2 = m^2 sinh^2 a - 3 > 0):
        x = +-(F(y) - F(a)),
        F(y) = sqrt(3 + sinh^2 a)/beta
               * log(beta^2 cosh y + beta sqrt(beta^2 cosh^2 y + c0)),
        c0 = 3 cosh^2 a + 2 m^2 sinh^2 a.

    kind "i" is a vertical line and has no graph form x(y); it is rejected.
    """
    arr = np.asarray(y, dtype=float)
    if np.any(arr <= 0):
        raise SurfaceError("geodesic graph requires y > 0")
    a = spec.a
    sign = -1.0 if spec.reflected else 1.0

    if spec.kind == "i":
        raise SurfaceError("kind i is a vertical line: x(y) is not a graph")

    if spec.kind == "ii":
        if np.any(arr > a * (1.0 + 1e-12)):
            raise SurfaceError("kind ii is only defined for y <= a")
        yc = np.minimum(arr, a)
        c2a, c2y = math.cosh(2.0 * a), np.cosh(2.0 * yc)
        p = math.sqrt(2.0) * np.cosh(yc) * np.sqrt(np.maximum(c2a - c2y, 0.0))
        q = c2y - math.sinh(a) ** 2
        coeff = math.sqrt(math.exp(2.0 * a) + 10.0 + math.exp(-2.0 * a)) / (4.0 * _SQRT3)
        x = coeff * np.arctan2(p, q)
    elif spec.kind == "iii":
        x = (np.cosh(arr) - math.cosh(a)) / _SQRT3
    else:  # "iv"
        m = float(spec.m)
        sh2 = math.sinh(a) ** 2
        beta2 = m * m * sh2 - 3.0
        beta = math.sqrt(beta2)
        c0 = 3.0 * math.cosh(a) ** 2 + 2.0 * m * m * sh2
        amp = math.sqrt(3.0 + sh2) / beta

        def _F(yy):
            ch = np.cosh(yy)
            return amp * np.log(beta2 * ch + beta * np.sqrt(beta2 * ch * ch + c0))

        x = _F(arr) - _F(a)

    out = sign * x + spec.x_shift
    return out if np.ndim(y) else float(out)


# ---------------------------------------------------------------------------
# numerical integration
# ---------------------------------------------------------------------------


def _geodesic_rhs(_t, u):
    y = max(u[1], 1e-14)
    kf = christoffel_factor(y)
    xd, yd = u[2], u[3]
    return [xd, yd, -2.0 * kf * xd * yd, kf * (xd * xd - yd * yd)]


def geodesic_integrate(
    start: SurfacePoint,
    direction: tuple[float, float],
    t_max: float,
    n_samples: int = 801,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    y_floor: float = 1e-8,
) -> GeodesicPath:
    """Integrate the geodesic ODE from ``start`` with metric-unit speed.

    ``direction`` is any nonzero Euclidean tangent (dx, dy); it is rescaled so
    that P(y) (xdot^2 + ydot^2) = 1.  Equations (k = P'/(2P)):

        x'' + 2 k(y) x' y' = 0,      y'' + k(y) (y'^2 - x'^2) = 0.

    The run stops early if y falls to ``y_floor`` (the path is then flagged
    ``reached_floor``).  ``speed_drift`` reports |P(y)(x'^2 + y'^2) - 1|.
    """
    dx, dy = float(direction[0]), float(direction[1])
    norm = math.hypot(dx, dy)
    if norm == 0:
        raise SurfaceError("direction must be nonzero")
    scale = 1.0 / (norm * math.sqrt(metric_factor(start.y)))
    u0 = [start.x, start.y, dx * scale, dy * scale]

    def _floor_event(_t, u):
        return u[1] - y_floor

    _floor_event.terminal = True
    _floor_event.direction = -1

    sol = solve_ivp(
        _geodesic_rhs,
        (0.0, t_max),
        u0,
        method="RK45",
        rtol=rtol,
        atol=atol,
        dense_output=True,
        events=[_floor_event],
    )
    if not sol.success:
        raise SurfaceError(f"geodesic integration failed: {sol.message}")
    t_end = sol.t[-1]
    t = np.linspace(0.0, t_end, n_samples)
    states = sol.sol(t)
    x, yv, xd, yd = states
    yv = np.maximum(yv, y_floor * 0.5)
    drift = np.abs(metric_factor(yv) * (xd * xd + yd * yd) - 1.0)
    reached = len(sol.t_events[0]) > 0
    return GeodesicPath(t, x, yv, xd, yd, drift, reached_floor=reached)


def classify_direction(a: float, m: float, sign_x: int) -> BoundaryPoint:
    """Boundary endpoint of the geodesic through (0, a) with slope m.

    The geodesic leaves (0, a) in the direction sign_x * (1, m).  With
    m_crit = sqrt(3)/sinh(a):

    * |m| = infinity: the vertical line, circle angle pi/2;
    * m > m_crit: escapes along the cylinder, circle angle theta with
      tan(theta) = sqrt(m^2 sinh^2 a - 3) / sqrt(3 + sinh^2 a)
      (mirrored to pi - theta when sign_x < 0);
    * m = m_crit: the corner, theta = 0 (or pi);
    * m < m_crit: turns around and lands on the real line; the abscissa xi is
      found by numerical integration down to y -> 0 (no closed form).
    """
    if not a > 0:
        raise SurfaceError("a must be positive")
    if sign_x not in (1, -1):
        raise SurfaceError("sign_x must be +1 or -1")
    if math.isinf(m):
        return BoundaryPoint("circle", theta=math.pi / 2.0)
    m_crit = _SQRT3 / math.sinh(a)
    if m > m_crit * (1.0 + 1e-12):
        sh2 = math.sinh(a) ** 2
        theta = math.atan(math.sqrt(m * m * sh2 - 3.0) / math.sqrt(3.0 + sh2))
        if sign_x < 0:
            theta = math.pi - theta
        return BoundaryPoint("circle", theta=theta)
    if abs(m - m_crit) <= 1e-12 * m_crit:
        return BoundaryPoint("circle", theta=0.0 if sign_x > 0 else math.pi)

    path = geodesic_integrate(
        SurfacePoint(0.0, a),
        (sign_x * 1.0, sign_x * m),
        t_max=80.0,
        n_samples=41,
        y_floor=1e-8,
    )
    if not path.reached_floor:
        raise SurfaceError("sub-critical geodesic did not reach the real line")
    return BoundaryPoint("real_line", xi=float(path.x[-1]))
