"""Command-line front end: evaluation and verification workflows as subcommands.

Subcommands map onto the library modules::

    surface {curvature|geodesic|classify}
    green eval
    asym sweep
    martin {kernel|verify-uniqueness}
    sturm {scan|reconstruct}
    verify identities

Tabular results go to standard out as RFC-4180-style CSV or JSON (floats with
17 significant digits); diagnostics go to standard error.  Exit codes: 0
success, 1 evaluation error or failed verification, 2 usage error.  A JSON
config file (``--config``) supplies defaults that explicit flags override.
With a fixed seed the output is byte-identical across runs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import asymptotic, green, martin, specfun, sturm, surface
from .quadrature import QuadratureConfig
from .surface import SurfacePoint

__all__ = ["RunConfig", "run", "main", "emit_table", "COMMAND_OPERATIONS"]

# Which library operations each subcommand exercises (directly or through the
# documented call chain).  Tests check this table covers every operation the
# modules export.
COMMAND_OPERATIONS = {
    "surface curvature": [
        "surface.metric_factor",
        "surface.gauss_curvature",
        "surface.christoffel_factor",
    ],
    "surface geodesic": [
        "surface.geodesic_integrate",
        "surface.geodesic_closed_form",
    ],
    "surface classify": ["surface.classify_direction"],
    "green eval": ["green.green_eval", "green.kernel_k", "green.re_k_spectral_density"],
    "asym sweep": [
        "asymptotic.compare_sweep",
        "asymptotic.predict_eta0",
        "asymptotic.predict_eta_inf",
        "asymptotic.predict_ray",
        "green.green_eval",
    ],
    "martin kernel": ["martin.kernel_eval", "green.eta0_coefficient_integral"],
    "martin verify-uniqueness": ["martin.represent", "martin.uniqueness_diagnostic"],
    "sturm scan": [
        "sturm.discrete_spectrum_scan",
        "sturm.fundamental_solutions",
        "specfun.legendre_halforder",
    ],
    "sturm reconstruct": ["sturm.reconstruct", "specfun.w_solution"],
    "verify identities": [
        "specfun.complex_log_gamma",
        "specfun.digamma",
        "specfun.hyp2f1",
        "specfun.a_coefficient",
        "specfun.f_hypergeo",
        "specfun.w_solution",
        "specfun.legendre_halforder",
        "green.kernel_k",
        "green.re_k_spectral_density",
        "green.integrand_tail_bound",
        "asymptotic.i_eta",
        "sturm.fundamental_solutions",
        "sturm.wronskian",
        "sturm.spectral_kernel",
        "martin.kernel_ode_residual",
        "martin.kernel_realline_limits",
    ],
}

_EVAL_ERRORS = (
    green.GreenError,
    sturm.SturmError,
    martin.MartinError,
    surface.SurfaceError,
    specfun.SpecialFunctionError,
    ValueError,
    OSError,
)


@dataclass(frozen=True)
class RunConfig:
    """Resolved invocation: command, numeric parameters, output plumbing."""

    command: str
    params: dict
    output_format: str = "csv"
    rel_tol: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.output_format not in ("csv", "json"):
            raise ValueError(f"output_format must be csv or json, got {self.output_format}")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")


@dataclass
class CommandResult:
    rows: list
    diagnostics: list = field(default_factory=list)
    exit_code: int = 0
    columns: list | None = None


# ---------------------------------------------------------------------------
# tabular output
# ---------------------------------------------------------------------------


def _fmt_scalar_csv(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _fmt_scalar_json(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        f = float(v)
        if not math.isfinite(f):
            return "null"
        return format(f, ".17g")
    return json.dumps(str(v))


def emit_table(rows: list, output_format: str, columns: list[str] | None = None) -> bytes:
    """Serialize homogeneous row dicts as CSV (header row, CRLF) or JSON.

    Floats are printed with 17 significant digits in both formats, enough for
    exact double round-trips.  Empty input yields a header-only CSV (when
    ``columns`` names the header) or ``[]`` in JSON.
    """
    rows = list(rows)
    if rows:
        header = list(rows[0].keys())
    else:
        header = list(columns) if columns else []
    for r in rows:
        if list(r.keys()) != header:
            raise ValueError("rows must share one column set, in order")
    if output_format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        if header:
            writer.writerow(header)
        for r in rows:
            writer.writerow([_fmt_scalar_csv(v) for v in r.values()])
        return buf.getvalue().encode("utf-8")
    if output_format == "json":
        parts = []
        for r in rows:
            inner = ", ".join(
                f"{json.dumps(k)}: {_fmt_scalar_json(v)}" for k, v in r.items()
            )
            parts.append("  {" + inner + "}")
        if not parts:
            return b"[]\n"
        return ("[\n" + ",\n".join(parts) + "\n]\n").encode("utf-8")
    raise ValueError(f"unknown output format {output_format!r}")


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------


class _UsageError(Exception):
    pass


def _parse_grid(text: str) -> list[float]:
    """Grid syntax: 'start:stop:n' (inclusive linspace) or comma list."""
    if ":" in text:
        bits = text.split(":")
        if len(bits) != 3:
            raise _UsageError(f"--grid wants start:stop:n or a comma list, got {text!r}")
        start, stop, n = float(bits[0]), float(bits[1]), int(bits[2])
        if n < 1:
            raise _UsageError("--grid length must be >= 1")
        return [float(v) for v in np.linspace(start, stop, n)]
    return [float(v) for v in text.split(",") if v.strip()]


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default=None,
                        help="output format (default depends on subcommand)")
    common.add_argument("--config", default=None, metavar="FILE",
                        help="JSON file of defaults; explicit flags win")
    common.add_argument("--rel-tol", type=float, default=None,
                        help="relative tolerance for quadrature-backed commands")
    common.add_argument("--seed", type=int, default=None,
                        help="seed for randomized verification sampling")

    p = argparse.ArgumentParser(prog="cigarmartin", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="group", metavar="GROUP")

    surf = sub.add_parser("surface", help="metric, curvature, geodesics").add_subparsers(
        dest="action", metavar="ACTION"
    )
    sc = surf.add_parser("curvature", parents=[common], help="curvature factors at y")
    sc.add_argument("--y", type=float, default=None)
    sg = surf.add_parser("geodesic", parents=[common],
                         help="integrate a geodesic, or sample a closed form")
    sg.add_argument("--x0", type=float, default=None)
    sg.add_argument("--y0", type=float, default=None)
    sg.add_argument("--dx", type=float, default=None)
    sg.add_argument("--dy", type=float, default=None)
    sg.add_argument("--t-max", type=float, default=None)
    sg.add_argument("--n", type=int, default=None)
    sg.add_argument("--kind", choices=("ii", "iii", "iv"), default=None,
                    help="closed-form family; switches to x(y) sampling")
    sg.add_argument("--a", type=float, default=None)
    sg.add_argument("--m", type=float, default=None)
    sg.add_argument("--x-shift", type=float, default=None)
    sg.add_argument("--reflected", action="store_true", default=None)
    sg.add_argument("--y-min", type=float, default=None)
    sg.add_argument("--y-max", type=float, default=None)
    scl = surf.add_parser("classify", parents=[common],
                          help="boundary point hit by a half-geodesic")
    scl.add_argument("--a", type=float, default=None)
    scl.add_argument("--m", type=float, default=None)
    scl.add_argument("--sign-x", type=int, choices=(-1, 1), default=None)

    gr = sub.add_parser("green", help="Green's function evaluation").add_subparsers(
        dest="action", metavar="ACTION"
    )
    ge = gr.add_parser("eval", parents=[common], help="G(x,y;xi,eta) with error estimate")
    for flag in ("--x", "--y", "--xi", "--eta"):
        ge.add_argument(flag, type=float, default=None)

    asy = sub.add_parser("asym", help="boundary-regime asymptotics").add_subparsers(
        dest="action", metavar="ACTION"
    )
    asw = asy.add_parser("sweep", parents=[common],
                         help="numeric vs predicted values over a grid")
    asw.add_argument("--regime", choices=("eta0", "etainf", "ray"), default=None)
    asw.add_argument("--grid", default=None, help="start:stop:n or comma list")
    asw.add_argument("--x", type=float, default=None)
    asw.add_argument("--y", type=float, default=None)
    asw.add_argument("--xi", type=float, default=None)
    asw.add_argument("--m", type=float, default=None, help="ray slope eta = m|xi|")
    asw.add_argument("--sign-xi", type=int, choices=(-1, 1), default=None)

    mar = sub.add_parser("martin", help="boundary kernels and uniqueness").add_subparsers(
        dest="action", metavar="ACTION"
    )
    mk = mar.add_parser("kernel", parents=[common], help="boundary kernel at a point")
    mk.add_argument("--theta", type=float, default=None,
                    help="circle boundary angle in [0, pi]")
    mk.add_argument("--xi", type=float, default=None, help="real-line boundary point")
    mk.add_argument("--x", type=float, default=None)
    mk.add_argument("--y", type=float, default=None)
    mk.add_argument("--ref-x", type=float, default=None)
    mk.add_argument("--ref-y", type=float, default=None)
    mu = mar.add_parser("verify-uniqueness", parents=[common],
                        help="derivative-margin check of a discrete measure")
    mu.add_argument("--atoms", default=None, metavar="FILE",
                    help="JSON list of {theta|xi, weight} atoms")
    mu.add_argument("--b", type=float, default=None)

    stu = sub.add_parser("sturm", help="spectral problem on the half line").add_subparsers(
        dest="action", metavar="ACTION"
    )
    ss = stu.add_parser("scan", parents=[common], help="discrete-spectrum scan")
    ss.add_argument("--lmin", type=float, default=None)
    ss.add_argument("--lmax", type=float, default=None)
    ss.add_argument("--n", type=int, default=None)
    sr = stu.add_parser("reconstruct", parents=[common],
                        help="round-trip a sampled function through the transform")
    sr.add_argument("--input", default=None, metavar="FILE", help="CSV with columns x,h")
    sr.add_argument("--smax", type=float, default=None)

    ver = sub.add_parser("verify", help="randomized identity checks").add_subparsers(
        dest="action", metavar="ACTION"
    )
    ver.add_parser("identities", parents=[common], help="seeded pass/fail table")

    return p


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise _UsageError("--config file must hold a JSON object")
    return {str(k).replace("-", "_"): v for k, v in data.items()}


def _resolve(ns, cfg: dict, name: str, default=None, required=False):
    """Effective parameter value: explicit flag, else config file, else default."""
    value = getattr(ns, name, None)
    if value is None and name in cfg:
        value = cfg[name]
    if value is None:
        value = default
    if value is None and required:
        flag = "--" + name.replace("_", "-")
        raise _UsageError(f"missing required flag {flag}")
    return value


def _quadrature_config(rel_tol: float) -> QuadratureConfig:
    return QuadratureConfig(rel_tol=rel_tol)


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------


def _cmd_surface_curvature(config: RunConfig) -> CommandResult:
    y = config.params["y"]
    return CommandResult(
        rows=[
            {
                "y": y,
                "metric_factor": float(surface.metric_factor(y)),
                "gauss_curvature": float(surface.gauss_curvature(y)),
                "christoffel_factor": float(surface.christoffel_factor(y)),
            }
        ]
    )


def _cmd_surface_geodesic(config: RunConfig) -> CommandResult:
    p = config.params
    if p["kind"] is not None:
        spec = surface.GeodesicSpec(
            kind=p["kind"],
            a=p["a"] if p["a"] is not None else 1.0,
            m=p["m"] if p["m"] is not None else 1.0,
            x_shift=p["x_shift"] or 0.0,
            reflected=bool(p["reflected"]),
        )
        y_hi = p["y_max"] if p["y_max"] is not None else (
            spec.a if spec.kind == "ii" else 4.0
        )
        y_lo = p["y_min"] if p["y_min"] is not None else y_hi / 200.0
        n = p["n"] or 201
        ys = np.linspace(y_lo, y_hi, n)
        xs = surface.geodesic_closed_form(spec, ys)
        rows = [{"y": float(yv), "x": float(xv)} for yv, xv in zip(ys, xs)]
        return CommandResult(rows=rows)
    start = SurfacePoint(p["x0"], p["y0"])
    path = surface.geodesic_integrate(
        start, (p["dx"], p["dy"]), p["t_max"], n_samples=p["n"] or 801
    )
    diag = []
    if path.reached_floor:
        diag.append("geodesic reached the y floor before t_max; path truncated")
    return CommandResult(rows=path.rows(), diagnostics=diag)


def _cmd_surface_classify(config: RunConfig) -> CommandResult:
    p = config.params
    bp = surface.classify_direction(p["a"], p["m"], p["sign_x"])
    return CommandResult(
        rows=[
            {
                "a": p["a"],
                "m": p["m"],
                "sign_x": p["sign_x"],
                "kind": bp.kind,
                "xi": bp.xi,
                "theta": bp.theta,
            }
        ]
    )


def _cmd_green_eval(config: RunConfig) -> CommandResult:
    p = config.params
    q = green.GreenQuery(
        source=SurfacePoint(p["x"], p["y"]), target=SurfacePoint(p["xi"], p["eta"])
    )
    res = green.green_eval(q, _quadrature_config(config.rel_tol))
    return CommandResult(
        rows=[
            {
                "value": res.value,
                "error_estimate": res.error,
                "nodes_used": res.nodes_used,
            }
        ]
    )


def _cmd_asym_sweep(config: RunConfig) -> CommandResult:
    p = config.params
    ray = None
    if p["regime"] == "ray":
        ray = asymptotic.RayParams(
            m=p["m"] if p["m"] is not None else 1.0,
            sign_xi=p["sign_xi"] if p["sign_xi"] is not None else 1,
        )
    reports = asymptotic.compare_sweep(
        p["regime"],
        p["grid"],
        x=p["x"],
        y=p["y"],
        xi=p["xi"],
        ray=ray,
        cfg=_quadrature_config(config.rel_tol),
    )
    columns = ["parameter", "numeric", "predicted", "ratio", "fitted_rate"]
    rows = [
        {
            "parameter": r.parameter,
            "numeric": r.numeric,
            "predicted": r.predicted,
            "ratio": r.ratio,
            "fitted_rate": r.fitted_rate,
        }
        for r in reports
    ]
    return CommandResult(rows=rows, columns=columns)


def _cmd_martin_kernel(config: RunConfig) -> CommandResult:
    p = config.params
    if (p["theta"] is None) == (p["xi"] is None):
        raise _UsageError("exactly one of --theta or --xi must be given")
    if p["theta"] is not None:
        omega = martin.BoundaryPoint(kind="circle", theta=p["theta"])
    else:
        omega = martin.BoundaryPoint(kind="real_line", xi=p["xi"])
    ref = martin.ReferencePoint(SurfacePoint(p["ref_x"], p["ref_y"]))
    value = martin.kernel_eval(
        SurfacePoint(p["x"], p["y"]), omega, ref=ref, cfg=_quadrature_config(config.rel_tol)
    )
    return CommandResult(
        rows=[
            {
                "boundary": omega.kind,
                "theta": p["theta"],
                "xi": p["xi"],
                "x": p["x"],
                "y": p["y"],
                "ref_x": p["ref_x"],
                "ref_y": p["ref_y"],
                "kernel": value,
            }
        ]
    )


def _cmd_martin_verify_uniqueness(config: RunConfig) -> CommandResult:
    p = config.params
    with open(p["atoms"], "r", encoding="utf-8") as fh:
        entries = json.load(fh)
    if not isinstance(entries, list):
        raise _UsageError("--atoms file must hold a JSON list of atom objects")
    measure = martin.measure_from_dicts(entries)
    report = martin.uniqueness_diagnostic(measure, p["b"])
    return CommandResult(
        rows=[
            {
                "b": report.b,
                "atom_count": len(measure.atoms),
                "total_weight": measure.total_weight,
                "holds": report.holds,
                "margin_min": report.margin_min,
                "first_violation_y": report.first_violation_y,
            }
        ]
    )


def _cmd_sturm_scan(config: RunConfig) -> CommandResult:
    p = config.params
    lams = np.linspace(p["lmin"], p["lmax"], int(p["n"]))
    rows = []
    for r in sturm.discrete_spectrum_scan(lams):
        rows.append(
            {
                "lam": r.lam,
                "alpha_re": r.alpha.real,
                "alpha_im": r.alpha.imag,
                "case": r.case,
                "slope_infinity_w1": r.slope_infinity_w1,
                "slope_infinity_w2": r.slope_infinity_w2,
                "slope_zero_w1": r.slope_zero_w1,
                "slope_zero_w2": r.slope_zero_w2,
                "confirmed_no_l2": r.confirmed_no_l2,
                "inconclusive": r.inconclusive,
                "note": r.note,
            }
        )
    return CommandResult(rows=rows)


def _cmd_sturm_reconstruct(config: RunConfig) -> CommandResult:
    p = config.params
    xs, hs = [], []
    with open(p["input"], "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or len(header) < 2:
            raise _UsageError("--input CSV needs a header row with two columns (x, h)")
        for rec in reader:
            if not rec:
                continue
            xs.append(float(rec[0]))
            hs.append(float(rec[1]))
    report = sturm.reconstruct(np.array(xs), np.array(hs), p["smax"])
    rows = [
        {"x": float(x), "h_input": float(hi), "h_output": float(ho)}
        for x, hi, ho in zip(report.x, report.h_input, report.h_output)
    ]
    return CommandResult(
        rows=rows,
        diagnostics=[f"l2_rel_error = {report.l2_rel_error:.6e} at s_max = {p['smax']:g}"],
    )


# ---------------------------------------------------------------------------
# randomized identity verification
# ---------------------------------------------------------------------------


def _offgrid_complex(rng, n, re_lo, re_hi, im_lo, im_hi, avoid_halfint=False):
    """Seeded complex draws keeping Re away from (half-)integer resonances."""
    out = []
    while len(out) < n:
        zre = rng.uniform(re_lo, re_hi)
        zim = rng.uniform(im_lo, im_hi)
        step = 0.5 if avoid_halfint else 1.0
        if abs(zre / step - round(zre / step)) * step < 0.15:
            continue
        out.append(complex(zre, zim))
    return out


def _verify_rows(seed: int, rel_tol: float) -> list[dict]:
    rng = np.random.default_rng(seed)
    rows = []

    def add(check, samples, max_error, tolerance):
        rows.append(
            {
                "check": check,
                "samples": samples,
                "max_error": float(max_error),
                "tolerance": float(tolerance),
                "status": "pass" if max_error <= tolerance else "fail",
            }
        )

    # recurrence of the complex log-gamma: lg(z+1) = lg(z) + log z
    zs = _offgrid_complex(rng, 20, -8.0, 8.0, 0.3, 8.0)
    err = max(
        abs(specfun.complex_log_gamma(z + 1.0) - specfun.complex_log_gamma(z) - np.log(z))
        / max(abs(specfun.complex_log_gamma(z + 1.0)), 1.0)
        for z in zs
    )
    add("loggamma-recurrence", len(zs), err, 1e-13)

    # digamma reflection: psi(1-z) - psi(z) = pi cot(pi z)
    zs = _offgrid_complex(rng, 20, -6.0, 6.0, 0.3, 3.0)
    err = max(
        abs(
            specfun.digamma(1.0 - z)
            - specfun.digamma(z)
            - math.pi / np.tan(math.pi * z)
        )
        / max(abs(specfun.digamma(1.0 - z)), 1.0)
        for z in zs
    )
    add("digamma-reflection", len(zs), err, 1e-11)

    # two-solution hypergeometric connection identity
    zs = _offgrid_complex(rng, 25, -3.0, 3.0, 0.2, 3.0, avoid_halfint=True)
    err = max(
        specfun.connection_identity_residual(z, float(rng.uniform(0.3, 4.0))) for z in zs
    )
    add("hypergeometric-connection", len(zs), err, 1e-9)

    # gamma-ratio asymptotic: exact/asymptotic -> 1 like O(z^-2)
    errs = []
    for _ in range(10):
        z = complex(rng.uniform(-2.0, 2.0), rng.uniform(15.0, 40.0))
        exact, asym = specfun.gamma_ratio_asymptotic(z)
        errs.append(abs(exact / asym - 1.0))
    add("gamma-ratio-asymptotic", len(errs), max(errs), 1e-2)

    # |a(s)| = 1 on the spectral line
    ss = rng.uniform(0.0, 50.0, size=100)
    err = max(abs(abs(specfun.a_coefficient(float(s))) - 1.0) for s in ss)
    add("reflection-unimodularity", len(ss), err, 1e-12)

    # definition form vs product form of the two-form kernel
    errs = []
    for _ in range(30):
        s = float(rng.uniform(0.3, 20.0))
        yv = float(rng.uniform(0.2, 3.0))
        ev = float(rng.uniform(0.2, 3.0))
        both = green.kernel_both(s, yv, ev)
        scale = max(abs(both.k_def), abs(both.k_product), 1e-300)
        errs.append(abs(both.k_def - both.k_product) / scale)
    add("two-form-agreement", len(errs), max(errs), 1e-9)

    # manifestly real spectral density vs Re of the definition form
    errs = []
    for _ in range(30):
        s = float(rng.uniform(0.3, 20.0))
        yv = float(rng.uniform(0.2, 3.0))
        ev = float(rng.uniform(0.2, 3.0))
        dens = float(green.re_k_spectral_density(s, yv, ev))
        k_def = green.kernel_k(s, yv, ev, "definition")
        errs.append(abs(dens - k_def.real) / max(abs(dens), abs(k_def.real), 1e-300))
    add("spectral-density-consistency", len(errs), max(errs), 1e-9)

    # fitted tail envelope dominates the sampled integrand beyond its anchor
    ratios = []
    for _ in range(6):
        a_dist = float(rng.uniform(0.5, 2.0))
        yv = float(rng.uniform(0.5, 2.0))
        ev = float(rng.uniform(0.5, 2.0))
        q = green.GreenQuery(SurfacePoint(0.0, yv), SurfacePoint(a_dist, ev))
        s0 = float(rng.uniform(8.0, 15.0))
        bound = green.integrand_tail_bound(s0, q)
        for ds in (0.0, 2.0, 5.0):
            s_pt = s0 + ds
            damp = math.exp(-a_dist * math.sqrt(s_pt * s_pt + 0.25)) / math.sqrt(
                s_pt * s_pt + 0.25
            )
            actual = abs(float(green.re_k_spectral_density(s_pt, yv, ev))) * damp
            ratios.append(actual / bound)
    add("integrand-tail-domination", len(ratios), max(ratios), 1.0)

    # Wronskian of the fundamental pair vs 2 alpha, and x-constancy
    errs = []
    for _ in range(6):
        if rng.uniform() < 0.5:
            lam = 0.25 + float(rng.uniform(0.3, 3.0)) ** 2
        else:
            lam = float(rng.uniform(-4.0, -0.3))
            alpha = sturm.SpectralParam.from_lambda(lam).alpha
            if abs(alpha.real - round(alpha.real)) < 0.05:
                continue
        target = 2.0 * specfun.branch_alpha(lam)
        w_a = sturm.wronskian(lam, 0.7)
        w_b = sturm.wronskian(lam, 2.1)
        errs.extend([abs(w_a - target), abs(w_b - target), abs(w_a - w_b)])
    add("wronskian-constancy", len(errs), max(errs), 1e-8)

    # b-coefficient Wronskian: conj(b1) b2 - b1 conj(b2) = -2 i s
    errs = []
    for _ in range(10):
        s = float(rng.uniform(0.3, 10.0))
        b1, b2 = sturm.b_coefficients(s, 1.0)
        errs.append(abs(b1.conjugate() * b2 - b1 * b2.conjugate() + 2j * s))
    add("spectral-b-wronskian", len(errs), max(errs), 1e-10)

    # half-order Legendre pair Wronskian: (-1)^m Gamma(3/2+m)/Gamma(3/2-m)
    # (the sign tracks the (-1)^m in the second function's normalization)
    errs = []
    for m in (1, 2):
        pair = sturm.fundamental_pair(0.25 - m * m)
        target = (-1.0) ** m * math.gamma(1.5 + m) / math.gamma(1.5 - m)
        for xv in (0.6, 1.4):
            errs.append(abs(sturm.wronskian_of(pair.w1, pair.w2, xv) - target))
    add("legendre-pair-wronskian", len(errs), max(errs), 1e-8)

    # boundary kernel solves the eigenvalue ODE on the axis
    rep = martin.kernel_ode_residual(math.pi / 3.0, np.linspace(0.5, 2.5, 11), h=1e-3)
    add("boundary-kernel-ode", rep.y.size, rep.max_rel_residual, 1e-6)

    # real-line kernels approach the corner profiles for far-off boundary points
    lim = martin.kernel_realline_limits(
        SurfacePoint(0.5, 1.5), [12.0], martin.ReferencePoint()
    )
    err = max(abs(row.ratio - 1.0) for row in lim.rows)
    add("boundary-corner-limit", len(lim.rows), err, 0.12)

    # truncated expansion kernel is symmetric
    k_ab = sturm.spectral_kernel(1.0, 2.0, 30.0)
    k_ba = sturm.spectral_kernel(2.0, 1.0, 30.0)
    add(
        "spectral-kernel-symmetry",
        2,
        abs(k_ab - k_ba) / max(abs(k_ab), 1e-300),
        1e-9,
    )

    # contour identity behind the large-eta law: spectral vs Laplace form
    v_spec = asymptotic.i_eta(5.0, 1.0, 1.0, form="spectral")
    v_lap = asymptotic.i_eta(5.0, 1.0, 1.0, form="laplace")
    add(
        "laplace-spectral-agreement",
        2,
        abs(v_spec / v_lap - 1.0),
        1e-6,
    )
    return rows


def _cmd_verify_identities(config: RunConfig) -> CommandResult:
    rows = _verify_rows(config.seed, config.rel_tol)
    failed = [r["check"] for r in rows if r["status"] != "pass"]
    diag = []
    code = 0
    if failed:
        diag.append("failed checks: " + ", ".join(failed))
        code = 1
    return CommandResult(rows=rows, diagnostics=diag, exit_code=code)


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

_HANDLERS = {
    "surface curvature": _cmd_surface_curvature,
    "surface geodesic": _cmd_surface_geodesic,
    "surface classify": _cmd_surface_classify,
    "green eval": _cmd_green_eval,
    "asym sweep": _cmd_asym_sweep,
    "martin kernel": _cmd_martin_kernel,
    "martin verify-uniqueness": _cmd_martin_verify_uniqueness,
    "sturm scan": _cmd_sturm_scan,
    "sturm reconstruct": _cmd_sturm_reconstruct,
    "verify identities": _cmd_verify_identities,
}

_JSON_DEFAULT = {
    "surface curvature",
    "surface classify",
    "green eval",
    "martin kernel",
    "martin verify-uniqueness",
}


def _build_run_config(command: str, ns: argparse.Namespace) -> RunConfig:
    cfg_file = _load_config(getattr(ns, "config", None))
    fmt = _resolve(ns, cfg_file, "format",
                   default="json" if command in _JSON_DEFAULT else "csv")
    rel_tol = float(_resolve(ns, cfg_file, "rel_tol", default=1e-9))
    seed = int(_resolve(ns, cfg_file, "seed", default=0))

    p: dict = {}
    if command == "surface curvature":
        p["y"] = float(_resolve(ns, cfg_file, "y", required=True))
    elif command == "surface geodesic":
        p["kind"] = _resolve(ns, cfg_file, "kind")
        for name in ("a", "m", "x_shift", "y_min", "y_max"):
            v = _resolve(ns, cfg_file, name)
            p[name] = None if v is None else float(v)
        p["reflected"] = bool(_resolve(ns, cfg_file, "reflected", default=False))
        nv = _resolve(ns, cfg_file, "n")
        p["n"] = None if nv is None else int(nv)
        if p["kind"] is None:
            for name in ("x0", "y0", "dx", "dy", "t_max"):
                p[name] = float(_resolve(ns, cfg_file, name, required=True))
        else:
            for name in ("x0", "y0", "dx", "dy", "t_max"):
                v = _resolve(ns, cfg_file, name)
                p[name] = None if v is None else float(v)
    elif command == "surface classify":
        p["a"] = float(_resolve(ns, cfg_file, "a", required=True))
        p["m"] = float(_resolve(ns, cfg_file, "m", required=True))
        p["sign_x"] = int(_resolve(ns, cfg_file, "sign_x", default=1))
    elif command == "green eval":
        for name in ("x", "y", "xi", "eta"):
            p[name] = float(_resolve(ns, cfg_file, name, required=True))
    elif command == "asym sweep":
        p["regime"] = _resolve(ns, cfg_file, "regime", required=True)
        grid_text = _resolve(ns, cfg_file, "grid", required=True)
        p["grid"] = (
            [float(g) for g in grid_text]
            if isinstance(grid_text, list)
            else _parse_grid(str(grid_text))
        )
        p["x"] = float(_resolve(ns, cfg_file, "x", default=0.0))
        p["y"] = float(_resolve(ns, cfg_file, "y", default=1.0))
        p["xi"] = float(_resolve(ns, cfg_file, "xi", default=1.0))
        mv = _resolve(ns, cfg_file, "m")
        p["m"] = None if mv is None else float(mv)
        sv = _resolve(ns, cfg_file, "sign_xi")
        p["sign_xi"] = None if sv is None else int(sv)
    elif command == "martin kernel":
        tv = _resolve(ns, cfg_file, "theta")
        xv = _resolve(ns, cfg_file, "xi")
        p["theta"] = None if tv is None else float(tv)
        p["xi"] = None if xv is None else float(xv)
        p["x"] = float(_resolve(ns, cfg_file, "x", required=True))
        p["y"] = float(_resolve(ns, cfg_file, "y", required=True))
        p["ref_x"] = float(_resolve(ns, cfg_file, "ref_x", default=0.0))
        p["ref_y"] = float(_resolve(ns, cfg_file, "ref_y", default=1.0))
    elif command == "martin verify-uniqueness":
        p["atoms"] = str(_resolve(ns, cfg_file, "atoms", required=True))
        p["b"] = float(_resolve(ns, cfg_file, "b", default=1.0))
    elif command == "sturm scan":
        p["lmin"] = float(_resolve(ns, cfg_file, "lmin", required=True))
        p["lmax"] = float(_resolve(ns, cfg_file, "lmax", required=True))
        p["n"] = int(_resolve(ns, cfg_file, "n", required=True))
    elif command == "sturm reconstruct":
        p["input"] = str(_resolve(ns, cfg_file, "input", required=True))
        p["smax"] = float(_resolve(ns, cfg_file, "smax", default=40.0))
    elif command == "verify identities":
        pass
    return RunConfig(
        command=command, params=p, output_format=fmt, rel_tol=rel_tol, seed=seed
    )


def run(argv: list[str]) -> int:
    """Parse argv, execute, write table to stdout and diagnostics to stderr."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles --help and usage errors
        return int(exc.code or 0)
    if ns.group is None:
        parser.print_usage(sys.stderr)
        return 2
    action = getattr(ns, "action", None)
    if action is None:
        print(f"error: '{ns.group}' needs an action", file=sys.stderr)
        return 2
    command = f"{ns.group} {action}"
    try:
        config = _build_run_config(command, ns)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        result = _HANDLERS[command](config)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _EVAL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    data = emit_table(result.rows, config.output_format, columns=result.columns)
    sys.stdout.write(data.decode("utf-8"))
    sys.stdout.flush()
    for line in result.diagnostics:
        print(line, file=sys.stderr)
    return result.exit_code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
