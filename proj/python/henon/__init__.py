"""Radial, spectral and perturbed-domain solvers for -Laplace u = |x|^alpha u^p."""

from ._core import (
    ContractionReport,
    DegeneracyEntry,
    DegenerateExponent,
    Error,
    FastDecayReport,
    InvalidArgument,
    NoConvergence,
    PohozaevReport,
    ProblemParams,
    RadialProfile,
    SpectralSample,
    alpha_for_fast_decay,
    critical_exponent,
    fast_decay_pipeline,
    find_pk,
    fractional_dimension,
    kelvin_beta,
    mode_boundary_value,
    perturbed_solve,
    pohozaev_residual,
    radial_residual_sup,
    run_cli,
    solve_radial,
    spectral_sample,
    sweep_nu,
)

__all__ = [name for name in dir() if not name.startswith("_")]
