"""Analytic discs attached to rigid hypersurfaces v = P(z, zbar) in C^2."""

from ._core import (
    CrdiscsError,
    EggFamily,
    attach_disc,
    classify_point,
    eval_poly,
    hilbert_transform,
    holder_norm,
    laplacian,
    make_egg_family,
    modified_hilbert,
    perturbation_slope,
    poisson_extend,
    pv_hilbert,
    sector_decomposition,
    solve_bishop,
    spectral_derivative,
    translation_experiment,
)

__all__ = [
    "CrdiscsError",
    "EggFamily",
    "attach_disc",
    "classify_point",
    "eval_poly",
    "hilbert_transform",
    "holder_norm",
    "laplacian",
    "make_egg_family",
    "modified_hilbert",
    "perturbation_slope",
    "poisson_extend",
    "pv_hilbert",
    "sector_decomposition",
    "solve_bishop",
    "spectral_derivative",
    "translation_experiment",
]
