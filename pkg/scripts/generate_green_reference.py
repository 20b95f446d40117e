"""Regenerate tests/fixtures/green_reference.csv with arbitrary-precision quadrature.

Recomputes the interior Green's function at a handful of well-separated point
pairs using mpmath at 200-bit precision, fully independently of the package's
double-precision evaluator: the spectral density is assembled from
``mpmath.hyp2f1`` directly (no series code shared with the package) and the
damped s-integral is done with ``mp.quad`` on an explicit panel list, or with
``mp.quadosc`` for the vertically aligned pair where the exponential damping
factor is absent and the integrand only decays through phase cancellation.

Slow by design (minutes): meant to be run once to refresh the fixture, not in
the test suite.  Run from the repository root:

    python3 scripts/generate_green_reference.py > tests/fixtures/green_reference.csv
"""

from __future__ import annotations

import mpmath as mp

CASES = [
    (0.0, 1.0, 1.0, 2.0),
    (0.0, 1.0, 1.0, 1.0),
    (1.3, 0.8, 2.1, 0.8),
    (2.0, 0.4, 3.5, 2.6),
    (0.0, 0.6, 0.0, 2.0),
]


def spectral_density(s, y, eta):
    """Product-form integrand Re k(s) * exp(-A*sqrt(1/4+s^2)) / sqrt(1/4+s^2)."""
    half = mp.mpf(1) / 2
    quarter = mp.mpf(1) / 4
    phi_y = mp.re(mp.hyp2f1(mp.mpf(3) / 4 - 1j * s / 2, mp.mpf(3) / 4 + 1j * s / 2, 2, -mp.sinh(y) ** 2))
    phi_e = mp.re(mp.hyp2f1(mp.mpf(3) / 4 - 1j * s / 2, mp.mpf(3) / 4 + 1j * s / 2, 2, -mp.sinh(eta) ** 2))
    re_k = (
        (mp.pi / 2)
        * s
        * (s * s + quarter)
        * mp.tanh(mp.pi * s)
        * mp.exp(-(y + eta) / 2)
        * mp.sinh(y) ** 2
        * mp.sinh(eta) ** 2
        * phi_y
        * phi_e
    )
    return re_k


def green_mp(x, y, xi, eta):
    x, y, xi, eta = (mp.mpf(v) for v in (x, y, xi, eta))
    a_dist = abs(x - xi)
    quarter = mp.mpf(1) / 4
    prefactor = mp.exp(y + eta) / (2 * mp.pi * mp.sqrt((mp.exp(2 * y) - 1) * (mp.exp(2 * eta) - 1)))

    def f(s):
        root = mp.sqrt(quarter + s * s)
        return spectral_density(s, y, eta) * mp.exp(-a_dist * root) / root

    if a_dist > 0:
        s_end = 90 / a_dist + 20
        panels = mp.linspace(0, s_end, 24)
        integral = mp.quad(f, panels, maxdegree=8)
    else:
        # No exponential damping: integrate against the oscillation of the
        # conical-function product, whose asymptotic period in s is
        # 2*pi / (y + eta) but never longer than 2*pi.
        period = 2 * mp.pi / min(mp.mpf(1), y + eta)
        integral = mp.quadosc(f, [0, mp.inf], period=period)
    return prefactor * integral


def main() -> None:
    mp.mp.prec = 200
    print("x,y,xi,eta,value")
    for x, y, xi, eta in CASES:
        value = green_mp(x, y, xi, eta)
        print(f"{x},{y},{xi},{eta},{mp.nstr(value, 17)}")


if __name__ == "__main__":
    main()
