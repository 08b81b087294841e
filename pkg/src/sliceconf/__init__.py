"""Conformal geometry of axially symmetric slices.

Tools to evaluate Ricci, Riemann and Cotton data of slices whose Ricci
tensor has the axial form, transform them under conformal rescalings,
build axial conformal Killing vectors, check the slice equations of
locally rotationally symmetric spacetimes, and validate everything against
a finite-difference curvature oracle for warped metrics.
"""

__version__ = "0.1.0"

from .ckv import (CKVCandidate, build_energy_ckv, build_sheet_ckv, build_shear_ckv,
                  build_wconst_ckv, ckv_constraint_residuals, curvatures_from_sheet)
from .conformal import (ConformalFactor, classify, criterion_integral, criterion_scalar,
                        gate_checks, g_tensor, theorem_premises, transformed_ricci,
                        transformed_scalar)
from .curvature import (RicciData, alpha_beta_of, bianchi_residual, cotton_twist_residual,
                        riemann_components, solve_alpha_minus_beta)
from .lrs import ckv_admission_consequences, einstein_type_check, slice_constraint_residuals
from .oracle import WarpedMetric3, conformal_recompute, frame_geometry, lie_residual
from .presets import list_presets, load_preset
from .profiles import Grid, Profile, SliceState, hat, integrate_from, is_constant

__all__ = [
    "Grid", "Profile", "SliceState", "hat", "integrate_from", "is_constant",
    "RicciData", "alpha_beta_of", "riemann_components", "bianchi_residual",
    "solve_alpha_minus_beta", "cotton_twist_residual",
    "ConformalFactor", "classify", "transformed_scalar", "transformed_ricci", "g_tensor",
    "criterion_scalar", "criterion_integral", "gate_checks", "theorem_premises",
    "CKVCandidate", "build_sheet_ckv", "build_shear_ckv", "build_energy_ckv",
    "build_wconst_ckv", "ckv_constraint_residuals", "curvatures_from_sheet",
    "slice_constraint_residuals", "einstein_type_check", "ckv_admission_consequences",
    "WarpedMetric3", "frame_geometry", "lie_residual", "conformal_recompute",
    "list_presets", "load_preset",
]
