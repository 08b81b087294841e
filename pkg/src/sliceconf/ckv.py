"""Conformal Killing vectors along the axis of a slice.

A vector ``X = gamma e`` along the unit axial direction is conformal
Killing with factor ``phi_conf`` when ``hat(gamma) = phi_conf`` and
``phi_sheet gamma = 2 phi_conf``.  Eliminating ``phi_conf`` gives the
linear law ``hat(gamma) = phi_sheet gamma / 2``, solved by quadrature.

In a locally rotationally symmetric spacetime the same vector can be
written through matter or kinematic scalars: the inverse shear, a power of
the enthalpy ``rho + p``, or a power of the sheet expansion when the
propagation law of ``phi`` takes the form ``hat(phi) = -W phi^2`` with
constant ``W``.  Each builder returns the candidate vector, its factor,
whether the factor is proper, and the residual of the transport law it
relies on.
"""

from dataclasses import dataclass, field

import numpy as np

from .conformal import ConformalFactor, classify
from .errors import ConstructionError, GridMismatchError, NotProperError
from .profiles import Profile, derivative, hat, integrate_from, is_constant

__all__ = [
    "CKVCandidate",
    "SheetCurvatures",
    "W_CONVENTIONS",
    "build_sheet_ckv",
    "build_shear_ckv",
    "build_energy_ckv",
    "w_parameter",
    "w_propagation_residual",
    "build_wconst_ckv",
    "ckv_constraint_residuals",
    "curvatures_from_sheet",
    "proportional",
]

W_CONVENTIONS = ("derived", "printed")


@dataclass(frozen=True, eq=False)
class CKVCandidate:
    """A conformal Killing vector candidate ``X = gamma e``.

    Attributes
    ----------
    kind : {"sheet", "shear", "energy", "wconst"}
    gamma : Profile
        Length of the vector along the unit axis.
    factor : ConformalFactor
        Conformal factor ``phi_conf`` of the vector.
    proper : bool
        Whether ``phi_conf`` is non-constant.
    consistent : bool
        Whether the transport law behind the construction holds within the
        residual tolerance.
    residuals : dict of str -> Profile
    notes : dict
        Scalar diagnostics.
    """

    kind: str
    gamma: Profile
    factor: ConformalFactor
    proper: bool
    consistent: bool
    residuals: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    @property
    def phi_conf(self):
        return self.factor.phi


def proportional(a, b, tol):
    """Whether ``a / b`` is constant within ``tol``; ``b`` must not vanish."""
    return is_constant(a / b, tol)[0]


def _nowhere_zero(p, tol):
    return float(np.abs(p.values).min()) > tol


def _factor(phi_conf):
    return ConformalFactor.from_profile(phi_conf)


def _sheet_polys(ph):
    """``P_k`` with ``hat^k(phi gamma / 2) = gamma P_k / 2`` when ``hat(gamma) = phi gamma / 2``.

    Written in derivatives of ``phi`` so that quadrature noise in ``gamma``
    is never differenced and closed-form derivatives are used when known.
    """
    d1, d2, d3 = derivative(ph, 1), derivative(ph, 2), derivative(ph, 3)
    sq = ph * ph
    return (
        ph,
        d1 + 0.5 * sq,
        d2 + 1.5 * ph * d1 + 0.25 * sq * ph,
        d3 + 2.0 * ph * d2 + 1.5 * d1 * d1 + 1.5 * sq * d1 + 0.125 * sq * sq,
    )


def build_sheet_ckv(phi_sheet, chi0=None, gamma0=1.0, tol=1e-10, residual_tol=1e-6):
    """Vector fixed by the sheet expansion alone.

    ``gamma = gamma0 exp(int_{chi0} phi/2)`` and ``phi_conf = phi gamma / 2``.

    Parameters
    ----------
    phi_sheet : Profile
    chi0 : float, optional
        Anchor of the quadrature, the grid midpoint by default.
    gamma0 : float
        Value of ``gamma`` at the anchor.
    tol : float
        Threshold below which ``phi_sheet`` counts as identically zero.
    residual_tol : float
        Tolerance of the transport check; also the constancy tolerance
        used to call the factor proper, since ``gamma`` carries
        quadrature error.

    Raises
    ------
    ConstructionError
        If ``phi_sheet`` vanishes identically (the vector is Killing and
        the factor carries no information) or ``gamma0 == 0``.

    Examples
    --------
    On the unit three-sphere ``phi = 2 cot(chi)``; anchoring at the equator
    gives ``gamma = sin(chi)`` and ``phi_conf = cos(chi)``.
    """
    g = phi_sheet.grid
    if phi_sheet.max_abs() <= tol:
        raise ConstructionError("sheet expansion vanishes identically")
    if gamma0 == 0:
        raise ConstructionError("gamma0 must be nonzero")
    if chi0 is None:
        chi0 = 0.5 * (g.chi_min + g.chi_max)
    gamma = gamma0 * integrate_from(phi_sheet, chi0).map(lambda v: np.exp(0.5 * v))
    cf = ConformalFactor(*[0.5 * gamma * q for q in _sheet_polys(phi_sheet)])
    ode = hat(gamma) - 0.5 * phi_sheet * gamma
    return CKVCandidate(
        "sheet", gamma, cf, classify(cf, residual_tol) == "proper",
        ode.max_abs() <= residual_tol * (1.0 + gamma.max_abs()),
        {"gamma_transport": ode}, {"chi0": float(chi0), "gamma0": float(gamma0)})


def build_shear_ckv(state, tol=1e-10, residual_tol=1e-6):
    """Vector built from the inverse shear, ``gamma = 1 / Sigma``.

    The factor is ``phi / (2 Sigma)``; it is proper unless ``phi`` and
    ``Sigma`` are proportional.  The shear must obey
    ``hat(Sigma) + phi Sigma / 2 = 0``; that residual is attached.

    Raises
    ------
    ConstructionError
        If the shear vanishes somewhere on the grid.
    """
    s = state
    if not _nowhere_zero(s.Sigma, tol):
        raise ConstructionError("shear must be nowhere zero")
    gamma = 1.0 / s.Sigma
    phi_conf = 0.5 * s.phi / s.Sigma
    res = hat(s.Sigma) + 0.5 * s.phi * s.Sigma
    return CKVCandidate(
        "shear", gamma, _factor(phi_conf), not proportional(s.phi, s.Sigma, tol),
        res.max_abs() <= residual_tol, {"shear_transport": res})


def build_energy_ckv(state, tol=1e-10, residual_tol=1e-6):
    """Vector built from the enthalpy, ``gamma = (rho + p)^{-1/3}``.

    Requires constant ``rho``.  The factor is ``phi / (2 (rho + p)^{1/3})``
    and is proper unless ``phi`` is proportional to ``(rho + p)^{1/3}``.
    The enthalpy must obey ``hat(rho + p) + (3/2) phi (rho + p) = 0``; that
    residual is attached.

    Raises
    ------
    ConstructionError
        If ``rho`` is not constant or ``rho + p`` vanishes somewhere.
    """
    s = state
    const, dev = is_constant(s.rho, tol)
    if not const:
        raise ConstructionError(f"energy density must be constant (deviation {dev:.3g})")
    w = s.rho + s.p
    if not _nowhere_zero(w, tol):
        raise ConstructionError("rho + p must be nowhere zero")
    root = w.map(np.cbrt)
    gamma = 1.0 / root
    phi_conf = 0.5 * s.phi / root
    res = hat(w) + 1.5 * s.phi * w
    return CKVCandidate(
        "energy", gamma, _factor(phi_conf), not proportional(s.phi, root, tol),
        res.max_abs() <= residual_tol, {"enthalpy_transport": res})


def w_parameter(state, convention="derived"):
    """Coefficient ``W`` in ``hat(phi) = -W phi^2``.

    ``derived``: ``W = 1/2 + (5 rho / 3 + p) / phi^2``, which follows from
    the propagation law of the sheet expansion once the admission
    constraints hold.  ``printed``: ``W = -1/2 - (5 rho / 3 + p) / phi^2``,
    the opposite overall sign.
    """
    if convention not in W_CONVENTIONS:
        raise ConstructionError(f"convention must be one of {W_CONVENTIONS}")
    s = state
    if not _nowhere_zero(s.phi, 0.0):
        raise ConstructionError("sheet expansion must be nowhere zero")
    core = (5.0 / 3.0) * s.rho + s.p
    w = 0.5 + core / (s.phi * s.phi)
    return w if convention == "derived" else -w


def w_propagation_residual(state, convention="derived"):
    """Residual ``hat(phi) + W phi^2`` of the propagation law."""
    s = state
    return hat(s.phi) + w_parameter(state, convention) * s.phi * s.phi


def build_wconst_ckv(state, convention="derived", tol=1e-8, residual_tol=1e-6):
    """Vector built from a power of the sheet expansion.

    With constant ``W``, ``gamma = phi^{-1/(2W)}`` and
    ``phi_conf = phi^{1 - 1/(2W)} / 2``.

    Raises
    ------
    ConstructionError
        If ``W`` is not constant or a fractional power of a non-positive
        sheet expansion would be needed.
    NotProperError
        If ``W = 1/2`` or ``hat(phi)`` vanishes: the factor is then constant.
        ``details`` holds ``W`` and the propagation residual.
    """
    s = state
    w = w_parameter(state, convention)
    const, dev = is_constant(w, tol)
    if not const:
        raise ConstructionError(f"W is not constant (deviation {dev:.3g})")
    W = float(w.values.mean())
    res = w_propagation_residual(state, convention)
    if abs(W - 0.5) <= tol or hat(s.phi).max_abs() <= tol:
        raise NotProperError(
            "W = 1/2 or constant sheet expansion gives a homothety",
            W=W, residual=res, convention=convention)
    expo = -1.0 / (2.0 * W)
    if np.any(s.phi.values <= 0):
        raise ConstructionError("sheet expansion must be positive for real powers")
    gamma = s.phi.map(lambda v: v**expo)
    phi_conf = 0.5 * s.phi * gamma
    cf = _factor(phi_conf)
    return CKVCandidate(
        "wconst", gamma, cf, classify(cf, tol) == "proper",
        res.max_abs() <= residual_tol, {"w_propagation": res},
        {"W": W, "convention": convention})


def ckv_constraint_residuals(c, state):
    """Admission constraints of an axial conformal Killing vector.

    Returns
    -------
    dict of str -> Profile
        ``acceleration_link`` A gamma - phi_conf,
        ``gamma_slope`` hat(gamma) - phi_conf,
        ``sheet_link`` phi gamma - 2 phi_conf,
        ``sheet_acceleration`` phi - 2 A,
        ``shear_expansion`` Theta / 3 + Sigma.
    """
    s = state
    if c.gamma.grid != s.grid:
        raise GridMismatchError("candidate and state live on different grids")
    pc = c.phi_conf
    return {
        "acceleration_link": s.A * c.gamma - pc,
        "gamma_slope": hat(c.gamma) - pc,
        "sheet_link": s.phi * c.gamma - 2.0 * pc,
        "sheet_acceleration": s.phi - 2.0 * s.A,
        "shear_expansion": s.Theta / 3.0 + s.Sigma,
    }


@dataclass(frozen=True, eq=False)
class SheetCurvatures:
    """Closed-form curvatures when the factor has vanishing third derivative.

    Attributes
    ----------
    rprime : Profile
        Original scalar curvature.
    rtilde : Profile
        Rescaled scalar curvature.
    gate : Profile
        ``hat2(phi) + (3/2) phi hat(phi) + phi^3 / 4``; the rescaled curvature
        is non-negative exactly where it is non-positive.
    """

    rprime: Profile
    rtilde: Profile
    gate: Profile


def curvatures_from_sheet(phi_sheet, chi0=None, variant="derived"):
    """Scalar curvatures implied by the sheet vector with ``hat3(phi_conf) = 0``.

    With ``E = exp(int phi / 2)`` and
    ``Q = hat(phi)^2 + phi^2 hat(phi) + phi^4 / 4``:

    ``derived``     R = E gate + E^2 Q / 2,  R~ = -gate E exp(-phi E)
    ``as_printed``  R = 2 E gate + E^2 Q,    R~ = -gate E exp(+phi E)

    The derived pair is the composition of the compact rescaling law with
    ``phi_conf = phi E / 2``.
    """
    if variant not in ("derived", "as_printed"):
        raise ConstructionError("variant must be 'derived' or 'as_printed'")
    g = phi_sheet.grid
    if chi0 is None:
        chi0 = 0.5 * (g.chi_min + g.chi_max)
    E = integrate_from(phi_sheet, chi0).map(lambda v: np.exp(0.5 * v))
    ph = phi_sheet
    p1 = _sheet_polys(ph)[1]
    gate = _sheet_polys(ph)[2]
    Q = p1 * p1
    if variant == "derived":
        rprime = E * gate + 0.5 * E * E * Q
        rtilde = -gate * E * (-ph * E).map(np.exp)
    else:
        rprime = (Q * E + 2.0 * gate) * E
        rtilde = -gate * E * (ph * E).map(np.exp)
    return SheetCurvatures(rprime, rtilde, gate)
