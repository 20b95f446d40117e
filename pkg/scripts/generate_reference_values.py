#!/usr/bin/env python3
"""Arbitrary-precision oracle for the special-function layer.

Independent pre-build program: uses mpmath (not the package under test) to
produce a frozen table of reference values for complex log-Gamma, digamma,
and the Gauss hypergeometric function 2F1 with complex parameters and real
argument.  The table is committed as a test fixture; the test suite compares
the double-precision implementation against it and never imports mpmath.

Rows are computed at 256-bit precision and accepted only if recomputing at
384 bits agrees to 60 significant digits, so every printed digit is exact.

Usage:
    python scripts/generate_reference_values.py [output.csv]

Default output: tests/fixtures/special_function_reference.csv
"""

from __future__ import annotations

import csv
import pathlib
import sys

import mpmath as mp

PREC_BITS = 256
CHECK_BITS = 384
DIGITS = 40  # digits written to the CSV (double precision needs ~17)


def _fmt(x: mp.mpf) -> str:
    return mp.nstr(x, DIGITS, strip_zeros=False)


def _eval(func: str, args: list[complex]) -> mp.mpc:
    if func == "loggamma":
        return mp.loggamma(args[0])
    if func == "digamma":
        return mp.digamma(args[0])
    if func == "hyp2f1":
        a, b, c, x = args
        return mp.hyp2f1(a, b, c, x)
    raise ValueError(func)


def _row(func: str, args: list[complex]) -> list[str]:
    with mp.workprec(PREC_BITS):
        val = mp.mpc(_eval(func, args))
    with mp.workprec(CHECK_BITS):
        val_hi = mp.mpc(_eval(func, args))
        scale = max(abs(val_hi), mp.mpf(1) / mp.mpf(10) ** 30)
        err = abs(val - val_hi) / scale
        if err > mp.mpf(10) ** (-60):
            raise RuntimeError(f"precision check failed for {func}{args}: {err}")
    cells = [func]
    padded = list(args) + [None] * (4 - len(args))
    for z in padded:
        if z is None:
            cells += ["", ""]
        else:
            zc = mp.mpc(z)
            cells += [_fmt(zc.real), _fmt(zc.imag)]
    cells += [_fmt(val.real), _fmt(val.imag), str(PREC_BITS)]
    return cells


def build_table() -> list[list[str]]:
    j = 1j
    rows: list[tuple[str, list[complex]]] = []

    # --- complex log-Gamma (principal branch) ---
    for z in [
        1.5 + 2j,
        0.5,
        1e-3,
        -2.5 + 1j,
        -0.5 - 3j,
        10 + 30j,
        1.5 + 50j,
        0.25 + 0.1j,
    ]:
        rows.append(("loggamma", [z]))

    # --- digamma ---
    for z in [
        1.5 + 5j,
        2.0,
        1.0 / 3.0,
        -1.5 + 0.5j,
        0.1 + 10j,
        5 - 2j,
    ]:
        rows.append(("digamma", [z]))

    # --- 2F1: direct series region (0 < x <= 1/2) ---
    rows += [
        ("hyp2f1", [-0.5, -0.5 + 3j, 1 + 3j, 0.3]),
        ("hyp2f1", [0.5, 0.7, 1.2, 0.45]),
        ("hyp2f1", [-0.5, -0.5 - 2j, 1 - 2j, 0.5]),
        ("hyp2f1", [1 + 2j, 1 - 2j, 2.0, 0.25]),
        ("hyp2f1", [0.75 - 7.5j, 0.75 + 7.5j, 2.0, 0.4]),
        ("hyp2f1", [-0.5, -0.5 + 20j, 1 + 20j, 0.67]),
        ("hyp2f1", [-0.5, -0.5 + 40j, 1 + 40j, 0.135]),
    ]

    # --- 2F1: connection region x in (1/2, 1), c-a-b not an integer ---
    rows += [
        ("hyp2f1", [0.75 - 1j, 0.75 + 1j, 2.0, 0.8]),
        ("hyp2f1", [0.3 + 0.2j, 0.4 - 0.1j, 1.1, 0.9]),
        ("hyp2f1", [0.25, 0.75, 1.9, 0.99]),
        ("hyp2f1", [1.25 - 4j, 1.25 + 4j, 3.0, 0.6]),
    ]

    # --- 2F1: connection region, integer c-a-b = m (logarithmic case) ---
    rows += [
        ("hyp2f1", [-0.5, -0.5 + 1.3j, 1 + 1.3j, 0.85]),   # m = 2
        ("hyp2f1", [-0.5, -0.5 + 0.5j, 1 + 0.5j, 0.99]),   # m = 2
        ("hyp2f1", [-0.5, -0.5 + 6j, 1 + 6j, 0.55]),       # m = 2
        ("hyp2f1", [0.75, 1.25, 2.0, 0.9]),                # m = 0
        ("hyp2f1", [0.6 + 0.4j, 1.4 - 0.4j, 2.0, 0.87]),   # m = 0
        ("hyp2f1", [0.5, 0.5, 2.0, 0.93]),                 # m = 1
        ("hyp2f1", [-0.3, 0.3, 3.0, 0.9]),                 # m = 3
        ("hyp2f1", [1.25, 1.75, 2.0, 0.75]),               # m = -1 (Euler flip)
        ("hyp2f1", [1.25, 1.75, 2.0, 0.95]),               # m = -1, stress
    ]

    # --- 2F1: negative argument (Pfaff region) ---
    rows += [
        ("hyp2f1", [0.75 - 1j, 0.75 + 1j, 2.0, -4.0]),
        ("hyp2f1", [-0.9, 2.1, 2.0, -2.5]),
        ("hyp2f1", [0.75 - 2.5j, 0.75 + 2.5j, 2.0, -100.3]),
        ("hyp2f1", [0.75, 1.25, 2.0, -25.0]),
        ("hyp2f1", [0.75 - 5j, 0.75 + 5j, 2.0, -12.0]),
        ("hyp2f1", [0.5 - 1.5, 1 + 1.5, 2.0, -1.0]),
    ]

    # --- 2F1: unit argument (Gauss summation) ---
    rows += [
        ("hyp2f1", [-0.5, -0.2, 1.3, 1.0]),
        ("hyp2f1", [-0.5, -0.5 + 2j, 1 + 2j, 1.0]),
        ("hyp2f1", [0.2 + 0.1j, 0.3, 2.4, 1.0]),
    ]

    # --- 2F1: terminating polynomials ---
    rows += [
        ("hyp2f1", [-0.5, -2.0, -0.5, 1.0]),
        ("hyp2f1", [-0.5, -3.0, -1.5, 0.77]),
        ("hyp2f1", [2.3, -4.0, 1.7, 0.9]),
        ("hyp2f1", [-0.5, -1.0, 0.5, 0.6]),
        ("hyp2f1", [-0.5, -2.0, -0.5, -3.5]),
    ]

    table = []
    for func, args in rows:
        table.append(_row(func, [complex(z) for z in args]))
    return table


def main() -> None:
    out = (
        pathlib.Path(sys.argv[1])
        if len(sys.argv) > 1
        else pathlib.Path(__file__).resolve().parent.parent
        / "tests"
        / "fixtures"
        / "special_function_reference.csv"
    )
    out.parent.mkdir(parents=True, exist_ok=True)
    header = [
        "function",
        "a1_re", "a1_im",
        "a2_re", "a2_im",
        "a3_re", "a3_im",
        "a4_re", "a4_im",
        "re", "im",
        "precision_bits",
    ]
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(build_table())
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
