"""Constraints on a slice of a locally rotationally symmetric spacetime.

A slice orthogonal to the fluid flow inherits the 1+1+2 covariant
equations.  With all time derivatives dropped, the evolution equations turn
into algebraic constraints and the propagation equations into first-order
laws along the axis.  This module evaluates those residuals, the
consequences of admitting an axial conformal Killing vector, and the
Einstein-type alternatives.
"""

from dataclasses import dataclass, field

import numpy as np

from .curvature import alpha_beta_of
from .errors import DomainError
from .profiles import hat, is_constant

__all__ = [
    "LRSVerdict",
    "EinsteinCheck",
    "ACCELERATION_LAWS",
    "slice_constraint_residuals",
    "einstein_type_check",
    "ckv_admission_consequences",
    "corollary_conditions",
]

ACCELERATION_LAWS = ("standard", "as_printed")


def slice_constraint_residuals(state, acceleration_law="standard"):
    """Residuals of the slice equations, ``lhs - rhs`` with time derivatives set to zero.

    Parameters
    ----------
    state : SliceState
    acceleration_law : {"standard", "as_printed"}
        Sign of the ``Theta^2 / 3`` term in the propagation law of the
        acceleration.  ``standard`` follows the Raychaudhuri equation;
        ``as_printed`` flips it, which leaves a residual of ``2 Theta^2 / 3``
        on an expanding de Sitter slice.

    Returns
    -------
    dict of str -> Profile
        Algebraic constraints (former evolution equations):
        ``shear_expansion_evolution``, ``sheet_expansion_evolution``,
        ``twist_evolution``, ``rotation_evolution``,
        ``magnetic_weyl_evolution``, ``electric_weyl_evolution``;
        the magnetic Weyl constraint ``magnetic_weyl_constraint``;
        propagation laws ``shear_expansion_propagation``,
        ``sheet_expansion_propagation``, ``twist_propagation``,
        ``rotation_propagation``, ``magnetic_weyl_propagation``,
        ``electric_weyl_propagation``; and the mixed laws
        ``acceleration_propagation``, ``energy_conservation``,
        ``momentum_conservation``.

    Examples
    --------
    The flat de Sitter slice ``Theta = 3, rho = 3, p = -3`` satisfies all
    of them; dropping the pressure leaves ``-3`` in the first one.
    """
    if acceleration_law not in ACCELERATION_LAWS:
        raise DomainError(f"acceleration_law must be one of {ACCELERATION_LAWS}")
    s = state
    A, T, phi, S = s.A, s.Theta, s.phi, s.Sigma
    E, H, rho, p, Pi, Q, Om, xi = s.E, s.H, s.rho, s.p, s.Pi, s.Q, s.Omega, s.xi
    k = 2.0 * T / 3.0 - S
    ts = T / 3.0 + S
    out = {
        "shear_expansion_evolution":
            A * phi - 0.5 * k * k - 2.0 * Om * Om + E - 0.5 * Pi - (rho + 3.0 * p) / 3.0,
        "sheet_expansion_evolution": 0.5 * k * (2.0 * A - phi) + 2.0 * xi * Om + Q,
        "twist_evolution": -0.5 * k * xi + 0.5 * (2.0 * A - phi) * Om,
        "rotation_evolution": A * xi - k * Om,
        "magnetic_weyl_evolution": -3.0 * xi * E - 1.5 * k * H + Om * Q,
        "electric_weyl_evolution":
            3.0 * xi * H + 0.5 * phi * Q + k * (0.5 * (rho + p) - 1.5 * (E + Pi / 6.0)),
        "magnetic_weyl_constraint": H - 3.0 * S * xi + (2.0 * A - phi) * Om,
        "shear_expansion_propagation":
            (2.0 / 3.0) * hat(T) - hat(S) - (1.5 * phi * S + 2.0 * xi * Om + Q),
        "sheet_expansion_propagation":
            hat(phi) - (-0.5 * phi * phi + ts * k + 2.0 * xi * xi - (2.0 / 3.0) * rho - (E + 0.5 * Pi)),
        "twist_propagation": hat(xi) - (-phi * xi + ts * Om),
        "rotation_propagation": hat(Om) - (A - phi) * Om,
        "magnetic_weyl_propagation":
            hat(H) - (-(3.0 * E + rho + p - 0.5 * Pi) * Om - 3.0 * phi * H - xi * Q),
        "electric_weyl_propagation":
            hat(E) - hat(rho) / 3.0 + 0.5 * hat(Pi)
            - (-1.5 * phi * (E + 0.5 * Pi) + 3.0 * Om * H - 0.5 * k * Q),
    }
    sign = 1.0 if acceleration_law == "standard" else -1.0
    out["acceleration_propagation"] = hat(A) - (
        -(A + phi) * A + sign * T * T / 3.0 + 1.5 * S * S - 2.0 * Om * Om + 0.5 * (rho + 3.0 * p))
    out["energy_conservation"] = hat(Q) - (
        -T * (rho + p) - (2.0 * A + phi) * Q - 1.5 * S * Pi)
    out["momentum_conservation"] = hat(p) + hat(Pi) - (
        -(rho + p) * A - (A + 1.5 * phi) * Pi - (4.0 * T / 3.0 + S) * Q)
    return out


@dataclass(frozen=True, eq=False)
class EinsteinCheck:
    """Consequences of an Einstein-type slice.

    Attributes
    ----------
    einstein_type : bool
        ``max|alpha - beta| <= tol``.
    residuals : dict of str -> Profile
        ``enthalpy`` rho + p, ``expansion_density`` phi^2 + 4 rho / 3,
        ``anisotropic_stress`` alpha - beta - 3 Pi / 4,
        ``einstein_propagation`` phi hat(phi) + 2 hat(rho) / 3.
    consequences_hold : bool
        For an Einstein-type slice, whether ``rho + p = 0`` and
        ``phi^2 = -4 rho / 3`` hold; always True otherwise.
    improper_sheet_vector : bool
        Einstein type with constant ``rho`` and constant sheet expansion, so
        the power-law vector of the sheet expansion cannot be proper.
    """

    einstein_type: bool
    residuals: dict
    consequences_hold: bool
    improper_sheet_vector: bool


def einstein_type_check(state, tol=1e-10):
    """Evaluate the Einstein-type alternatives of a slice.

    Examples
    --------
    ``rho = -3, p = 3, phi = 2``: both consequences hold with zero residual.
    """
    s = state
    r = alpha_beta_of(s)
    d = r.difference
    einstein = d.max_abs() <= tol
    res = {
        "enthalpy": s.rho + s.p,
        "expansion_density": s.phi * s.phi + (4.0 / 3.0) * s.rho,
        "anisotropic_stress": d - 0.75 * s.Pi,
        "einstein_propagation": s.phi * hat(s.phi) + (2.0 / 3.0) * hat(s.rho),
    }
    holds = True
    if einstein:
        holds = res["enthalpy"].max_abs() <= tol and res["expansion_density"].max_abs() <= tol
    improper = bool(einstein and is_constant(s.rho, tol)[0] and hat(s.phi).max_abs() <= tol)
    return EinsteinCheck(bool(einstein), res, bool(holds), improper)


@dataclass(frozen=True, eq=False)
class LRSVerdict:
    """Consequences of an axial conformal Killing vector on the slice.

    Attributes
    ----------
    residuals : dict of str -> Profile
    einstein_type, time_symmetric, conformally_flat : bool
    lemma_ok : bool
        The admission constraints hold and every stated consequence holds.
    proper_branch : {"branch1", "branch2", "none"}
        Which sufficient condition for a proper vector applies.
    notes : dict
        Margins and premise flags.
    """

    residuals: dict
    einstein_type: bool
    time_symmetric: bool
    conformally_flat: bool
    lemma_ok: bool
    proper_branch: str
    notes: dict = field(default_factory=dict)


def _in_set(value, targets, tol):
    """Whether a profile coincides with one of the target profiles."""
    for t in targets:
        if float(np.max(np.abs((value - t).values))) <= tol * (1.0 + t.max_abs()):
            return True
    return False


def _branch(s, einstein, tol):
    """Sufficient condition for a proper vector, with its premises."""
    premises = {
        "rho_constant": is_constant(s.rho, tol)[0],
        "non_einstein": not einstein,
        "sheet_expansion_nowhere_zero": float(np.abs(s.phi.values).min()) > tol,
    }
    if not all(premises.values()):
        return "none", premises
    w = s.rho + s.p
    if float(np.abs(w.values).min()) > tol:
        if not is_constant(s.phi / w.map(np.cbrt), tol)[0]:
            return "branch1", premises
    sq = s.phi * s.phi
    core = (5.0 / 3.0) * s.rho + s.p
    if hat(s.p).max_abs() <= tol and not _in_set(core, (sq, 0.5 * sq), tol):
        return "branch2", premises
    return "none", premises


def ckv_admission_consequences(state, tol=1e-10):
    """Check what admitting an axial conformal Killing vector forces.

    The admission constraints are ``phi = 2 A`` and ``Theta / 3 + Sigma = 0``.
    They imply vanishing twist, rotation, magnetic Weyl scalar and heat flux,
    ``rho + p = 3 (E + Pi / 6)``, ``Pi = 2 (rho + p)``, ``E = 0`` and a
    time-symmetric slice.  The energy bound ``rho + 3 p / 2 > 0`` is reported
    as a margin.

    Returns
    -------
    LRSVerdict

    Examples
    --------
    ``rho = 1, p = 0, Pi = 2, phi = 2 A = 2`` satisfies the whole chain,
    with ``alpha - beta = 3 Pi / 4 = 3/2``.
    """
    s = state
    r = alpha_beta_of(s)
    einstein = r.difference.max_abs() <= tol
    res = {
        "sheet_acceleration": s.phi - 2.0 * s.A,
        "shear_expansion": s.Theta / 3.0 + s.Sigma,
        "twist_shear": (2.0 * s.Theta / 3.0 - s.Sigma) * s.xi,
        "twist_acceleration": s.A * s.xi,
        "twist": s.xi,
        "rotation": s.Omega,
        "magnetic_weyl": s.H,
        "heat_flux": s.Q,
        "enthalpy_weyl": (s.rho + s.p) - 3.0 * (s.E + s.Pi / 6.0),
        "stress_enthalpy": s.Pi - 2.0 * (s.rho + s.p),
        "electric_weyl": s.E,
        "expansion": s.Theta,
        "shear": s.Sigma,
        "anisotropic_stress": r.difference - 0.75 * s.Pi,
    }
    ok = {k: v.max_abs() <= tol for k, v in res.items()}
    admitted = ok["sheet_acceleration"] and ok["shear_expansion"]
    ts = ok["expansion"] and ok["shear"]
    cflat = ok["electric_weyl"] and ok["magnetic_weyl"]
    nonzero_phi = float(np.abs(s.phi.values).min()) > tol
    chain = all(ok[k] for k in ("twist", "rotation", "magnetic_weyl", "heat_flux",
                                "enthalpy_weyl", "stress_enthalpy"))
    lemma_ok = bool(admitted and nonzero_phi and chain and ts and cflat)
    branch, premises = _branch(s, einstein, tol)
    bound = s.rho + 1.5 * s.p
    notes = {
        "admission_constraints_hold": bool(admitted),
        "sheet_expansion_nowhere_zero": bool(nonzero_phi),
        "energy_bound_margin": float(bound.values.min()),
        "anisotropic_stress_positive": bool(float(s.Pi.values.min()) > 0),
        "branch_premises": {k: bool(v) for k, v in premises.items()},
    }
    return LRSVerdict(res, bool(einstein), bool(ts), bool(cflat), lemma_ok, branch, notes)


def corollary_conditions(state, *, compact, rtilde_equals_rprime, convention="derived", tol=1e-10):
    """Hypotheses under which the slice is forced to be a round sphere.

    The slice must have strictly negative sheet expansion, be compact, have
    constant ``rho``, equal original and rescaled scalar curvature, not be
    Einstein, and satisfy either ``phi`` not proportional to
    ``(rho + p)^{1/3}``, or ``hat(p) = 0``,
    ``5 rho / 3 + p`` not in ``{phi^2, phi^2 / 2}`` and ``W = -1/(4 n)`` for a
    nonzero integer ``n``.

    Returns
    -------
    dict
        One boolean per condition plus ``criteria_met``.
    """
    from .ckv import w_parameter

    s = state
    r = alpha_beta_of(s)
    w = s.rho + s.p
    out = {
        "sheet_expansion_negative": float(s.phi.values.max()) < 0,
        "compact": bool(compact),
        "rho_constant": is_constant(s.rho, tol)[0],
        "rtilde_equals_rprime": bool(rtilde_equals_rprime),
        "non_einstein": r.difference.max_abs() > tol,
    }
    cond1 = bool(float(np.abs(w.values).min()) > tol
                 and not is_constant(s.phi / w.map(np.cbrt), tol)[0])
    sq = s.phi * s.phi
    core = (5.0 / 3.0) * s.rho + s.p
    cond2 = False
    if hat(s.p).max_abs() <= tol and not _in_set(core, (sq, 0.5 * sq), tol):
        try:
            W = w_parameter(s, convention)
        except Exception:
            W = None
        if W is not None and is_constant(W, tol)[0]:
            wm = float(W.values.mean())
            if wm != 0.0:
                n = -1.0 / (4.0 * wm)
                cond2 = abs(n - round(n)) <= 1e-9 * max(1.0, abs(n)) and round(n) != 0
    out["proportionality_condition"] = cond1
    out["power_law_condition"] = bool(cond2)
    out = {k: bool(v) for k, v in out.items()}
    out["criteria_met"] = all(v for k, v in out.items()
                              if k not in ("proportionality_condition", "power_law_condition")) \
        and (cond1 or cond2)
    return out
