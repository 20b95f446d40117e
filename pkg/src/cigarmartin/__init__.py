"""Positive solutions of (Laplacian - 1) w = 0 on a cigar-like surface.

Subpackages cover the surface geometry, the special-function layer, adaptive
quadrature, the Green's function, its boundary asymptotics, the boundary
kernels of the compactification, and the half-line spectral transform,
together with a command-line interface (``cigarmartin``).
"""

__version__ = "0.1.0"

__all__ = [
    "surface",
    "specfun",
    "quadrature",
    "green",
    "asymptotic",
    "martin",
    "sturm",
    "cli",
]
