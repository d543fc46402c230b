"""Spectral gap tools for one-dimensional Schroedinger operators on [0, pi]."""

from ._core import (
    BoundaryConditions,
    GapResult,
    Potential,
    PotentialClass,
    dense_oracle,
    gap,
    limit_gap,
    minimize_step_family,
    solve,
    solve_reduced,
    solve_theta,
    step_eigenvalues,
    step_potential,
    x_minus_expansion,
)

__all__ = [
    "BoundaryConditions",
    "GapResult",
    "Potential",
    "PotentialClass",
    "dense_oracle",
    "gap",
    "limit_gap",
    "minimize_step_family",
    "solve",
    "solve_reduced",
    "solve_theta",
    "step_eigenvalues",
    "step_potential",
    "x_minus_expansion",
]
