"""Boundary kernel families of the half-disk compactification.

Every ideal boundary point of the surface carries a positive solution of
Delta_g K = K, normalized to 1 at a reference interior point:

* real-line points (xi, 0): a ratio of damped spectral coefficient
  integrals shared with the Green's-function module,
* the vertical direction (circle angle theta = pi/2): the closed profile
  W0(y) = (e^y - 1)^2 / (e^{y/2} sqrt(e^{2y} - 1)), independent of x,
* oblique circle angles theta in [0, pi]: the closed family
  sinh^{3/2}(y) 2F1(3/4 - sin(theta)/4, 3/4 + sin(theta)/4; 2; -sinh^2 y)
  e^{(cos(theta)/2) x}.

The module also provides the separated-variable ODE residual check for the
circle family, the real-line-to-corner limit sweep, finite sums of kernels
against discrete boundary measures, and the growth diagnostic
d/dy W - W/2 >= 0 that singles out the vertical-direction kernel among
mixtures of circle atoms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .green import eta0_coefficient_integral
from .quadrature import QuadratureConfig
from .specfun import hyp2f1_conical
from .surface import BoundaryPoint, SurfacePoint, metric_factor

__all__ = [
    "MartinError",
    "ReferencePoint",
    "MartinKernel",
    "DiscreteBoundaryMeasure",
    "KernelOdeReport",
    "RealLineLimitRow",
    "RealLineLimitReport",
    "UniquenessReport",
    "w0_profile",
    "circle_profile",
    "j_profile",
    "j_circle",
    "kernel_eval",
    "build_kernel",
    "kernel_ode_residual",
    "kernel_realline_limits",
    "represent",
    "measure_from_dicts",
    "uniqueness_diagnostic",
]

PUBLIC_OPERATIONS = [
    "martin.kernel_eval",
    "martin.kernel_ode_residual",
    "martin.kernel_realline_limits",
    "martin.represent",
    "martin.uniqueness_diagnostic",
]

_VERTICAL_TOL = 1e-12


class MartinError(ValueError):
    """Invalid boundary-kernel input (bad angle, on-ray abscissa, bad weight)."""


@dataclass(frozen=True)
class ReferencePoint:
    """Interior point where every boundary kernel is normalized to 1."""

    point: SurfacePoint = field(default_factory=lambda: SurfacePoint(0.0, 1.0))

    def __post_init__(self):
        if not self.point.y > 0:
            raise MartinError("reference point needs y0 > 0")


@dataclass(frozen=True)
class MartinKernel:
    """A boundary kernel with its normalization constant frozen in.

    ``normalization`` is the unnormalized profile evaluated at the reference
    point, so ``evaluate(reference.point)`` returns exactly 1.
    """

    boundary: BoundaryPoint
    reference: ReferencePoint
    normalization: float

    def __post_init__(self):
        if not (math.isfinite(self.normalization) and self.normalization > 0):
            raise MartinError(
                f"normalization must be finite and positive, got {self.normalization}"
            )

    def evaluate(self, p: SurfacePoint, cfg: QuadratureConfig | None = None) -> float:
        return _unnormalized(p, self.boundary, cfg) / self.normalization


@dataclass(frozen=True)
class DiscreteBoundaryMeasure:
    """Finite nonnegative measure supported on finitely many boundary points."""

    atoms: tuple[tuple[BoundaryPoint, float], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "atoms", tuple((omega, float(w)) for omega, w in self.atoms)
        )
        for omega, w in self.atoms:
            if not isinstance(omega, BoundaryPoint):
                raise MartinError("measure atoms must sit on boundary points")
            if not (math.isfinite(w) and w >= 0.0):
                raise MartinError(f"atom weights must be finite and >= 0, got {w}")

    @property
    def total_weight(self) -> float:
        return math.fsum(w for _, w in self.atoms)


# ---------------------------------------------------------------------------
# unnormalized profiles
# ---------------------------------------------------------------------------


def w0_profile(y):
    """Vertical-direction profile W0(y) = (e^y-1)^2 / (e^{y/2} sqrt(e^{2y}-1)).

    Evaluated in the equivalent overflow-safe form
    sqrt(2) (cosh y - 1) / sqrt(sinh y).  Vectorised; W0 ~ y^{3/2} sqrt(2)/2
    as y -> 0 and W0 ~ e^{y/2} as y -> infinity.
    """
    arr = np.asarray(y, dtype=float)
    if np.any(arr <= 0):
        raise MartinError("the vertical profile requires y > 0")
    out = math.sqrt(2.0) * (np.cosh(arr) - 1.0) / np.sqrt(np.sinh(arr))
    return out if np.ndim(y) else float(out)


def _conical_theta(y: float, theta: float, c: float = 2.0) -> float:
    """2F1(3/4 - sin(theta)/4, 3/4 + sin(theta)/4; c; -sinh^2 y), real."""
    v = math.sin(theta) / 2.0
    return float(np.real(hyp2f1_conical(v, y, c=c))[0])


def circle_profile(y: float, theta: float) -> float:
    """Unnormalized x = 0 profile of the circle-angle kernel family.

    sinh^{3/2}(y) 2F1(3/4 - sin(theta)/4, 3/4 + sin(theta)/4; 2; -sinh^2 y);
    at theta = pi/2 this is sqrt(2) W0(y).
    """
    if not 0.0 <= theta <= math.pi:
        raise MartinError(f"circle angle must lie in [0, pi], got {theta}")
    if y <= 0:
        raise MartinError("circle kernels are defined for y > 0")
    return math.sinh(y) ** 1.5 * _conical_theta(y, theta)


def _unnormalized(
    p: SurfacePoint, omega: BoundaryPoint, cfg: QuadratureConfig | None = None
) -> float:
    if omega.kind == "real_line":
        xi = float(omega.xi)
        if p.x == xi:
            raise MartinError(
                "the real-line kernel's coefficient integral diverges when the "
                f"evaluation abscissa equals xi = {xi}; move off the vertical ray"
            )
        res = eta0_coefficient_integral(abs(p.x - xi), p.y, cfg)
        return res.value / math.sqrt(-math.expm1(-2.0 * p.y))
    theta = float(omega.theta)
    if abs(theta - math.pi / 2.0) <= _VERTICAL_TOL:
        return w0_profile(p.y)
    return circle_profile(p.y, theta) * math.exp(0.5 * math.cos(theta) * p.x)


def kernel_eval(
    p: SurfacePoint,
    omega: BoundaryPoint,
    ref: ReferencePoint | None = None,
    cfg: QuadratureConfig | None = None,
) -> float:
    """Normalized boundary kernel K(p, omega) with K(ref, omega) = 1.

    Real-line points use the ratio of damped spectral coefficient integrals
    sqrt(1-e^{-2 y0})/sqrt(1-e^{-2 y}) * I(|x-xi|, y)/I(|x0-xi|, y0); circle
    points use the closed profiles.  Both the evaluation point and the
    reference must avoid x = xi on the real-line family.
    """
    if ref is None:
        ref = ReferencePoint()
    value = _unnormalized(p, omega, cfg) / _unnormalized(ref.point, omega, cfg)
    if not (math.isfinite(value) and value > 0):
        raise MartinError(f"kernel evaluation produced a non-positive value {value}")
    return value


def build_kernel(
    omega: BoundaryPoint,
    ref: ReferencePoint | None = None,
    cfg: QuadratureConfig | None = None,
) -> MartinKernel:
    """Freeze the normalization constant of one boundary kernel."""
    if ref is None:
        ref = ReferencePoint()
    return MartinKernel(omega, ref, _unnormalized(ref.point, omega, cfg))


# ---------------------------------------------------------------------------
# ODE residual of the separated circle family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KernelOdeReport:
    """Finite-difference check that w(y) = K(0, y, theta) solves
    -w'' + P w = (cos^2(theta)/4) w, with growth and boundary diagnostics."""

    theta: float
    lam: float
    y: np.ndarray
    w: np.ndarray
    residual: np.ndarray
    rel_residual: np.ndarray
    max_rel_residual: float
    boundary_value: float
    growth_rate: float


def kernel_ode_residual(
    theta: float,
    y_grid,
    h: float = 1e-3,
    ref: ReferencePoint | None = None,
) -> KernelOdeReport:
    """Five-point second-difference residual of the circle-kernel ODE.

    Relative residual divides by (P(y) + 1/4)|w|, the natural scale of the
    equation.  ``boundary_value`` reports w at y = 1e-3 (the profile vanishes
    like y^{3/2} at the real line) and ``growth_rate`` is the log-slope of w
    between the two largest grid points (the exact rate is sin(theta)/2 up to
    terms decaying like e^{-sin(theta) y}).
    """
    if ref is None:
        ref = ReferencePoint()
    grid = np.asarray(y_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise MartinError("the ODE residual needs a 1-d grid of at least 2 points")
    if np.any(grid - 2.0 * h <= 0):
        raise MartinError("grid points must satisfy y > 2h so the stencil stays in y > 0")
    omega = BoundaryPoint("circle", theta=theta)

    def w_of(yv: float) -> float:
        return kernel_eval(SurfacePoint(0.0, yv), omega, ref)

    lam = 0.25 * math.cos(theta) ** 2
    w0 = np.array([w_of(yv) for yv in grid])
    stencil = np.empty((5, grid.size))
    for k, off in enumerate((-2.0, -1.0, 0.0, 1.0, 2.0)):
        if off == 0.0:
            stencil[k] = w0
        else:
            stencil[k] = [w_of(yv + off * h) for yv in grid]
    d2 = (
        -stencil[0] + 16.0 * stencil[1] - 30.0 * stencil[2] + 16.0 * stencil[3] - stencil[4]
    ) / (12.0 * h * h)
    p_vals = metric_factor(grid)
    residual = -d2 + p_vals * w0 - lam * w0
    scale = (p_vals + 0.25) * np.abs(w0)
    rel = np.abs(residual) / np.maximum(scale, 1e-300)
    top = np.argsort(grid)[-2:]
    y_lo, y_hi = grid[top[0]], grid[top[1]]
    growth = (math.log(w0[top[1]]) - math.log(w0[top[0]])) / (y_hi - y_lo)
    return KernelOdeReport(
        theta=theta,
        lam=lam,
        y=grid,
        w=w0,
        residual=residual,
        rel_residual=rel,
        max_rel_residual=float(np.max(rel)),
        boundary_value=w_of(1e-3),
        growth_rate=growth,
    )


# ---------------------------------------------------------------------------
# real-line limits toward the corners
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RealLineLimitRow:
    xi: float
    side: int
    kernel_value: float
    corner_value: float
    ratio: float


@dataclass(frozen=True)
class RealLineLimitReport:
    point: SurfacePoint
    rows: tuple[RealLineLimitRow, ...]


def kernel_realline_limits(
    p: SurfacePoint,
    xi_values,
    ref: ReferencePoint | None = None,
    cfg: QuadratureConfig | None = None,
) -> RealLineLimitReport:
    """Compare real-line kernels K(p, omega_xi) against the corner kernels.

    For each xi the row holds the real-line kernel value, the corner kernel
    value (circle angle 0 for xi > x, pi for xi < x), and their ratio, which
    tends to 1 as |xi| grows.
    """
    if ref is None:
        ref = ReferencePoint()
    corner = {
        1: kernel_eval(p, BoundaryPoint("circle", theta=0.0), ref),
        -1: kernel_eval(p, BoundaryPoint("circle", theta=math.pi), ref),
    }
    rows = []
    for xi in xi_values:
        xi = float(xi)
        side = 1 if xi >= p.x else -1
        value = kernel_eval(p, BoundaryPoint("real_line", xi=xi), ref, cfg)
        rows.append(
            RealLineLimitRow(
                xi=xi,
                side=side,
                kernel_value=value,
                corner_value=corner[side],
                ratio=value / corner[side],
            )
        )
    return RealLineLimitReport(point=p, rows=tuple(rows))


# ---------------------------------------------------------------------------
# discrete measures: representation and the growth diagnostic
# ---------------------------------------------------------------------------


def represent(
    measure: DiscreteBoundaryMeasure,
    p: SurfacePoint,
    ref: ReferencePoint | None = None,
    cfg: QuadratureConfig | None = None,
) -> float:
    """Sum of weight * K(p, omega) over the atoms; 0 for the empty measure."""
    if ref is None:
        ref = ReferencePoint()
    return math.fsum(
        w * kernel_eval(p, omega, ref, cfg) for omega, w in measure.atoms if w != 0.0
    )


def measure_from_dicts(entries) -> DiscreteBoundaryMeasure:
    """Build a measure from mapping rows like {"theta": 1.57, "weight": 0.5}.

    Rows carry either "theta" (circle atom) or "xi" (real-line atom), plus a
    "weight" (default 1).
    """
    atoms = []
    for row in entries:
        if "theta" in row and "xi" in row:
            raise MartinError("atom rows must set exactly one of theta, xi")
        if "theta" in row:
            omega = BoundaryPoint("circle", theta=float(row["theta"]))
        elif "xi" in row:
            omega = BoundaryPoint("real_line", xi=float(row["xi"]))
        else:
            raise MartinError("atom rows must set one of theta, xi")
        atoms.append((omega, float(row.get("weight", 1.0))))
    return DiscreteBoundaryMeasure(tuple(atoms))


def j_profile(y: float, theta: float) -> float:
    """Unnormalized growth margin of the x = 0 circle profile.

    With Phi_c(y) = 2F1(3/4 - sin(theta)/4, 3/4 + sin(theta)/4; c; -sinh^2 y)
    and the contiguous derivative z d/dz F(a,b;2;z) = F(a,b;1;z) - F(a,b;2;z),
    the derivative of the profile U(y) = sinh^{3/2}(y) Phi_2(y) gives

        U'(y) - U(y)/2
          = sinh^{1/2}(y) [cosh(y) (2 Phi_1 - Phi_2/2) - sinh(y) Phi_2 / 2].

    Positive and decaying to 0 for theta = pi/2; tends to -infinity at least
    linearly in the profile scale for every other angle.
    """
    if not 0.0 <= theta <= math.pi:
        raise MartinError(f"circle angle must lie in [0, pi], got {theta}")
    if y <= 0:
        raise MartinError("the growth margin is defined for y > 0")
    phi2 = _conical_theta(y, theta, c=2.0)
    phi1 = _conical_theta(y, theta, c=1.0)
    sh, ch = math.sinh(y), math.cosh(y)
    return math.sqrt(sh) * (ch * (2.0 * phi1 - 0.5 * phi2) - 0.5 * sh * phi2)


def j_circle(y: float, theta: float, ref: ReferencePoint | None = None) -> float:
    """Normalized growth margin J(0, y, theta) = d/dy K(0, y, theta) - K/2."""
    if ref is None:
        ref = ReferencePoint()
    x0, y0 = ref.point.x, ref.point.y
    norm = circle_profile(y0, theta) * math.exp(0.5 * math.cos(theta) * x0)
    return j_profile(y, theta) / norm


@dataclass(frozen=True)
class UniquenessReport:
    """Growth-condition scan d/dy W - W/2 >= 0 for a circle-atom mixture."""

    b: float
    x: float
    y: np.ndarray
    w_values: np.ndarray
    margin: np.ndarray
    holds: bool
    first_violation_y: float | None
    margin_min: float


def uniqueness_diagnostic(
    measure: DiscreteBoundaryMeasure,
    b: float,
    ref: ReferencePoint | None = None,
    x: float = 0.0,
    y_grid=None,
    h: float = 1e-3,
) -> UniquenessReport:
    """Scan the growth condition that forces a mixture onto the vertical atom.

    Evaluates W = represent(measure) along (x, y) for y on a grid above ``b``
    and reports where the five-point finite-difference margin
    d/dy W - W/2 drops below zero.  A measure concentrated at theta = pi/2
    keeps the margin positive for every y; any other circle mixture fails at
    some finite height.  Atoms must all sit on the circle part.
    """
    if ref is None:
        ref = ReferencePoint()
    if not b > 0:
        raise MartinError("the growth scan needs b > 0")
    for omega, _ in measure.atoms:
        if omega.kind != "circle":
            raise MartinError("the growth scan applies to circle-supported measures")
    grid = (
        np.linspace(b, b + 11.0, 221) if y_grid is None else np.asarray(y_grid, dtype=float)
    )
    if np.any(grid - 2.0 * h <= 0):
        raise MartinError("grid points must satisfy y > 2h for the derivative stencil")

    def w_of(yv: float) -> float:
        return represent(measure, SurfacePoint(x, yv), ref)

    w_vals = np.array([w_of(yv) for yv in grid])
    offsets = {}
    for off in (-2.0, -1.0, 1.0, 2.0):
        offsets[off] = np.array([w_of(yv + off * h) for yv in grid])
    deriv = (
        offsets[-2.0] - 8.0 * offsets[-1.0] + 8.0 * offsets[1.0] - offsets[2.0]
    ) / (12.0 * h)
    margin = deriv - 0.5 * w_vals
    tol = 1e-10 * max(float(np.max(np.abs(w_vals))), 1.0)
    bad = margin < -tol
    holds = not bool(np.any(bad))
    first = None if holds else float(grid[np.argmax(bad)])
    return UniquenessReport(
        b=b,
        x=x,
        y=grid,
        w_values=w_vals,
        margin=margin,
        holds=holds,
        first_violation_y=first,
        margin_min=float(np.min(margin)),
    )
