"""Conformal rescalings ``h -> e^{2 phi} h`` of an axially reduced slice.

A conformal factor depending on the axial coordinate only is described by
its samples and its first three axial derivatives.  The module transforms
scalar and Ricci curvature, evaluates the integral criterion built from
the trace-free Ricci tensor, and checks the sign conditions ("gates") that
appear when the rescaled scalar curvature is required to be constant or to
coincide with the original one.

Two variants of the transformation laws are offered.  ``"derived"`` is the
standard three-dimensional rescaling law, validated against the oracle.
``"as_printed"`` keeps a commonly quoted compact form that omits the
sheet-expansion coupling of the Laplacian; it agrees with ``"derived"``
only when ``phi_sheet * hat(phi) = 0``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import BranchError, DomainError, GridMismatchError
from .profiles import Profile, definite_integral, derivative, is_constant

__all__ = [
    "ConformalFactor",
    "GData",
    "CriterionResult",
    "GateResult",
    "PremiseVerdict",
    "VARIANTS",
    "classify",
    "rescaled_frame",
    "laplacian",
    "transformed_scalar",
    "transformed_ricci",
    "g_tensor",
    "criterion_scalar",
    "criterion_integral",
    "gate_checks",
    "required_scalar_for_constant_rtilde",
    "constant_rtilde_residuals",
    "theorem_premises",
]

VARIANTS = ("derived", "as_printed")


def _same_grid(*ps):
    g = ps[0].grid
    for p in ps[1:]:
        if p.grid != g:
            raise GridMismatchError("profiles live on different grids")


@dataclass(frozen=True, eq=False)
class ConformalFactor:
    """Conformal factor ``phi`` with its axial derivatives.

    Attributes
    ----------
    phi, hat1, hat2, hat3 : Profile
        The factor and its first three derivatives along the axis.
    nu : Profile
        ``exp(-phi)``, the potential used in the criterion identity.

    Notes
    -----
    The derivatives may be supplied directly, which is useful for checking
    pointwise sign conditions; :meth:`from_profile` differentiates instead.
    """

    phi: Profile
    hat1: Profile
    hat2: Profile
    hat3: Profile
    nu: Profile = field(default=None)

    def __post_init__(self):
        _same_grid(self.phi, self.hat1, self.hat2, self.hat3)
        if self.nu is None:
            object.__setattr__(self, "nu", self.phi.map(lambda v: np.exp(-v)))

    @property
    def grid(self):
        return self.phi.grid

    @classmethod
    def from_profile(cls, phi):
        """Differentiate ``phi`` (exactly when it has a closed form)."""
        return cls(phi, derivative(phi, 1), derivative(phi, 2), derivative(phi, 3))

    @classmethod
    def from_expr(cls, grid, source, derivs=()):
        return cls.from_profile(Profile.from_expr(grid, source, derivs))

    @classmethod
    def constant(cls, grid, c):
        z = Profile.zeros(grid)
        return cls(Profile.constant(grid, c), z, z, z)


def classify(cf, tol=1e-10):
    """Isometry, homothety or proper conformal map.

    Returns
    -------
    str
        ``"isometry"`` when ``phi`` vanishes, ``"homothety"`` when it is a
        nonzero constant, ``"proper"`` otherwise.
    """
    const, _ = is_constant(cf.phi, tol)
    if const:
        return "isometry" if cf.phi.max_abs() <= tol else "homothety"
    return "proper"


def rescaled_frame(cf, phi_sheet):
    """Express the inverse rescaling in the rescaled geometry.

    The axial derivative of the rescaled metric is ``e^{-phi} hat`` and its
    sheet expansion is ``e^{-phi} (phi_sheet + 2 hat(phi))``.

    Returns
    -------
    (ConformalFactor, Profile)
        Factor ``-phi`` with derivatives taken along the rescaled axis, and
        the rescaled sheet expansion.
    """
    _same_grid(cf.phi, phi_sheet)
    w = cf.nu
    h1, h2, h3 = cf.hat1, cf.hat2, cf.hat3
    t1 = -w * h1
    t2 = -(w * w) * (h2 - h1 * h1)
    t3 = -(w * w * w) * (h3 - 3.0 * h1 * h2 + 2.0 * h1 * h1 * h1)
    inv = ConformalFactor(-cf.phi, t1, t2, t3)
    return inv, w * (phi_sheet + 2.0 * h1)


def laplacian(cf, phi_sheet):
    """Laplacian of the factor, ``hat2 + phi_sheet hat1``."""
    _same_grid(cf.phi, phi_sheet)
    return cf.hat2 + phi_sheet * cf.hat1


def _variant(variant):
    if variant not in VARIANTS:
        raise DomainError(f"variant must be one of {VARIANTS}")


def transformed_scalar(cf, phi_sheet, rprime, variant="derived"):
    """Scalar curvature of ``e^{2 phi} h``.

    Parameters
    ----------
    cf : ConformalFactor
    phi_sheet : Profile
        Sheet expansion of ``h``.
    rprime : Profile
        Scalar curvature of ``h``.
    variant : {"derived", "as_printed"}
        ``derived``: ``e^{-2phi} [R - 4 hat2 - 4 phi_sheet hat1 - 2 hat1^2]``.
        ``as_printed``: ``e^{-2phi} [R - 2 hat1^2 - 4 hat2]``.

    Returns
    -------
    Profile
    """
    _variant(variant)
    _same_grid(cf.phi, phi_sheet, rprime)
    inner = rprime - 2.0 * cf.hat1 * cf.hat1 - 4.0 * cf.hat2
    if variant == "derived":
        inner = inner - 4.0 * phi_sheet * cf.hat1
    return cf.nu * cf.nu * inner


def transformed_ricci(cf, phi_sheet, r, variant="derived"):
    """Ricci components of ``e^{2 phi} h`` in the orthonormal frame of ``h``.

    Returns
    -------
    (Profile, Profile)
        Axial component ``ee`` and the component ``NN`` along each sheet
        direction.

    Notes
    -----
    ``derived`` gives ``ee = alpha - 2 hat2 - phi_sheet hat1`` and
    ``NN = beta - hat2 - (3/2) phi_sheet hat1 - hat1^2``.  ``as_printed``
    gives ``ee = beta - 2 hat2`` and
    ``NN = alpha - hat2 - hat1^2 - phi_sheet hat1 / 2``; it exchanges the
    roles of ``alpha`` and ``beta`` and drops part of the sheet coupling.
    """
    _variant(variant)
    _same_grid(cf.phi, phi_sheet, r.alpha)
    h1, h2 = cf.hat1, cf.hat2
    if variant == "derived":
        ee = r.alpha - 2.0 * h2 - phi_sheet * h1
        nn = r.beta - h2 - 1.5 * phi_sheet * h1 - h1 * h1
    else:
        ee = -(2.0 * h2 - r.beta)
        nn = -(h2 + h1 * h1 + 0.5 * phi_sheet * h1 - r.alpha)
    return ee, nn


@dataclass(frozen=True, eq=False)
class GData:
    """Trace-free Ricci tensor ``G = (alpha - beta)/3 (2 e e - N)``."""

    g_ee: Profile
    g_NN: Profile

    @property
    def trace(self):
        return self.g_ee + 2.0 * self.g_NN


def g_tensor(r):
    """Frame components of the trace-free Ricci tensor."""
    d = r.difference
    return GData((2.0 / 3.0) * d, (-1.0 / 3.0) * d)


def criterion_scalar(r, cf):
    """Contraction ``G(grad phi, grad phi) = (2/3)(alpha - beta) hat1^2``.

    The same quantity equals ``nu^{-2} G(grad nu, grad nu)`` with
    ``nu = e^{-phi}``; both forms are evaluated and must agree.
    """
    _same_grid(r.alpha, cf.phi)
    g = g_tensor(r)
    direct = g.g_ee * cf.hat1 * cf.hat1
    dnu = -cf.nu * cf.hat1
    via_nu = g.g_ee * dnu * dnu / (cf.nu * cf.nu)
    scale = 1.0 + direct.max_abs()
    if (direct - via_nu).max_abs() > 1e-12 * scale:
        raise ArithmeticError("potential form of the criterion disagrees")
    return direct


@dataclass(frozen=True)
class CriterionResult:
    """Volume integral of the criterion scalar.

    Attributes
    ----------
    value : float
    vanishes : bool
        ``|value| <= tol``; an Einstein slice always passes.
    nonnegative : bool
        ``value >= -tol``.
    warning : str or None
        Set when the sheet area is not that of a round sphere.
    """

    value: float
    vanishes: bool
    nonnegative: bool
    warning: str = None


def criterion_integral(r, cf, metric, tol=1e-10, chi_range=None):
    """Integrate the criterion scalar over the slice volume.

    The volume element is ``B F^2 dchi`` times the sheet area, ``4 pi`` for
    round sheets.  For flat or hyperbolic sheets the integral is taken per
    unit coordinate area of the sheet and a warning is attached.

    Parameters
    ----------
    chi_range : (float, float), optional
        Restrict to the nodes inside this closed interval.
    """
    _same_grid(r.alpha, cf.phi, metric.B)
    s = criterion_scalar(r, cf)
    dens = s * metric.B * metric.F * metric.F
    warning = None
    area = 4.0 * np.pi
    if metric.k != 1:
        area = 1.0
        warning = "sheets are not round; integral taken per unit sheet area"
    if chi_range is not None:
        chi = s.grid.chi
        sel = (chi >= chi_range[0] - 1e-12) & (chi <= chi_range[1] + 1e-12)
        idx = np.nonzero(sel)[0]
        if idx.size < 16:
            raise DomainError("integration window holds fewer than 16 nodes")
        from .profiles import Grid

        sub = Grid(chi[idx[0]], chi[idx[-1]], idx.size, "interval", s.grid.fd_order)
        dens = Profile(sub, dens.values[idx])
    val = area * definite_integral(dens)
    return CriterionResult(val, abs(val) <= tol, val >= -tol, warning)


@dataclass(frozen=True, eq=False)
class GateResult:
    """Pointwise sign condition.

    Attributes
    ----------
    margin : Profile
        Positive where the condition holds (non-strict gates allow zero).
    worst : float
        Smallest margin over the applicable nodes.
    holds : bool
    strict : bool
    applicable : ndarray of bool
        Nodes where the condition is defined.
    """

    margin: Profile
    worst: float
    holds: bool
    strict: bool
    applicable: np.ndarray


def _gate(margin, strict, applicable=None):
    v = margin.values
    if applicable is None:
        applicable = np.ones(v.size, dtype=bool)
    worst = float(v[applicable].min()) if applicable.any() else float("inf")
    holds = worst > 0 if strict else worst >= 0
    return GateResult(margin, worst, bool(holds), strict, applicable)


def gate_checks(cf, rprime=None, rtilde=None, zero_tol=1e-12):
    """Evaluate every pointwise sign condition on a conformal factor.

    Returns
    -------
    dict of str -> GateResult
        ``yamabe_positivity``       hat1^2 + 2 hat2 > 0
        ``constant_rtilde_sign``    (hat3 - hat1 hat2 - hat1^3) / hat1 < 0,
                                    only where hat1 != 0
        ``reduced_positivity``      hat2 + hat1^2 > 0
        ``nonpositive_second``      hat2 <= 0
        ``slope_dominates``         hat1^2 > |hat2|
        ``negative_factor``         1 - e^{2 phi} > 0
        ``three_quarter_positivity``  hat2 + (3/4) hat1^2 > 0
        ``three_quarter_dominance``   (3/4) hat1^2 > |hat2|
        ``rprime_positive`` and ``rtilde_nonnegative`` when the
        curvatures are given.
    """
    h1, h2, h3 = cf.hat1, cf.hat2, cf.hat3
    sq = h1 * h1
    nz = np.abs(h1.values) > zero_tol
    safe = Profile(cf.grid, np.where(nz, h1.values, 1.0))
    ratio = (h3 - h1 * h2 - sq * h1) / safe
    out = {
        "yamabe_positivity": _gate(sq + 2.0 * h2, True),
        "constant_rtilde_sign": _gate(Profile(cf.grid, np.where(nz, -ratio.values, 0.0)), True, nz),
        "reduced_positivity": _gate(h2 + sq, True),
        "nonpositive_second": _gate(-h2, False),
        "slope_dominates": _gate(sq - abs(h2), True),
        "negative_factor": _gate(cf.phi.map(lambda v: 1.0 - np.exp(2.0 * v)), True),
        "three_quarter_positivity": _gate(h2 + 0.75 * sq, True),
        "three_quarter_dominance": _gate(0.75 * sq - abs(h2), True),
    }
    if rprime is not None:
        out["rprime_positive"] = _gate(rprime, True)
    if rtilde is not None:
        out["rtilde_nonnegative"] = _gate(rtilde, False)
    return out


def required_scalar_for_constant_rtilde(cf, zero_tol=1e-12):
    """Scalar curvature that keeps the rescaled one constant.

    ``R = -2 (hat3 - hat1 hat2 - hat1^3) / hat1``, obtained from the compact
    rescaling law with constant original scalar curvature.

    Raises
    ------
    BranchError
        Where ``hat1`` vanishes; that branch is the homothety.
    """
    h1 = cf.hat1
    if np.any(np.abs(h1.values) <= zero_tol):
        raise BranchError("hat(phi) vanishes on the grid; formula undefined there")
    return -2.0 * (cf.hat3 - h1 * cf.hat2 - h1 * h1 * h1) / h1


def constant_rtilde_residuals(cf, rprime):
    """Diagnostics for a rescaling with constant rescaled scalar curvature.

    Returns
    -------
    dict of str -> Profile
        ``gradient_law``: ``-2 [hat1 (R - 2 (2 hat2 - hat1^2)) + 2 (hat3 + hat1 hat2)]``,
        the compact form of ``hat(R)`` required for constant ``R~``.
        ``gradient_law_derived``: ``2 hat1 (R - 2 hat1^2 - 4 hat2) + 4 hat1 hat2
        + 4 hat3``, the same requirement obtained by differentiating the
        compact rescaling law.
        ``reduced_rtilde``: ``-2 e^{-2 phi} hat2``, the rescaled scalar once
        the original scalar takes its required value.
        ``equal_curvature``: ``hat2 + hat1^2 / (1 + e^{-2 phi})``, zero when
        the rescaled and original curvatures coincide.
    """
    _same_grid(cf.phi, rprime)
    h1, h2, h3 = cf.hat1, cf.hat2, cf.hat3
    w2 = cf.nu * cf.nu
    return {
        "gradient_law": -2.0 * (h1 * (rprime - 2.0 * (2.0 * h2 - h1 * h1)) + 2.0 * (h3 + h1 * h2)),
        "gradient_law_derived": 2.0 * h1 * (rprime - 2.0 * h1 * h1 - 4.0 * h2) + 4.0 * h1 * h2 + 4.0 * h3,
        "reduced_rtilde": -2.0 * w2 * h2,
        "equal_curvature": h2 + h1 * h1 / (1.0 + w2),
    }


@dataclass(frozen=True)
class PremiseVerdict:
    """Which hypotheses of a rigidity statement hold for a scenario.

    Attributes
    ----------
    kind : str
    conditions : dict of str -> bool
    margins : dict of str -> float
        Worst margins or deviations behind each condition.
    criteria_met : bool
        All conditions hold.
    """

    kind: str
    conditions: dict
    margins: dict
    criteria_met: bool


THEOREM_KINDS = ("einstein_sphere", "negative_factor", "constant_rtilde")


def theorem_premises(kind, *, ricci, cf, phi_sheet, compact, tol=1e-8, tol_eq=1e-6,
                     variant="derived"):
    """Evaluate the hypotheses of a rigidity statement.

    Parameters
    ----------
    kind : {"einstein_sphere", "negative_factor", "constant_rtilde"}
        ``einstein_sphere``: compact, Einstein, proper factor, rescaled
        scalar curvature non-negative.
        ``negative_factor``: compact, nowhere vanishing sheet expansion,
        proper factor, non-negative rescaled curvature equal to the
        original one, negative factor, Yamabe-type positivity.
        ``constant_rtilde``: compact, nowhere vanishing sheet expansion,
        proper factor, constant rescaled curvature, Yamabe-type
        positivity, vanishing third derivative, negative second
        derivative, the equal-curvature balance and the three-quarter
        positivity.
    ricci : RicciData
    cf : ConformalFactor
    phi_sheet : Profile
    compact : bool
    tol : float
        Pointwise tolerance.
    tol_eq : float
        Relative tolerance for equalities between curvature profiles.
    variant : str
        Rescaling law used for the rescaled scalar curvature.

    Returns
    -------
    PremiseVerdict
    """
    if kind not in THEOREM_KINDS:
        raise DomainError(f"kind must be one of {THEOREM_KINDS}")
    rp = ricci.scalar
    rt = transformed_scalar(cf, phi_sheet, rp, variant)
    gates = gate_checks(cf)
    cond, marg = {"compact": bool(compact)}, {}
    proper = classify(cf, tol) == "proper"
    marg["factor_deviation"] = is_constant(cf.phi, tol)[1]
    rt_min = float(rt.values.min())

    if kind == "einstein_sphere":
        d = ricci.difference.max_abs()
        cond["einstein"] = d <= tol
        marg["einstein"] = d
        cond["proper"] = proper
        cond["rtilde_nonnegative"] = rt_min >= -tol
        marg["rtilde_nonnegative"] = rt_min
    else:
        sheet_min = float(np.abs(phi_sheet.values).min())
        cond["sheet_expansion_nowhere_zero"] = sheet_min > tol
        marg["sheet_expansion_nowhere_zero"] = sheet_min
        cond["proper"] = proper
        yam = gates["yamabe_positivity"]
        if kind == "negative_factor":
            cond["rtilde_nonnegative"] = rt_min >= -tol
            marg["rtilde_nonnegative"] = rt_min
            dev = float(np.max(np.abs((rt - rp).values)) / (1.0 + rp.max_abs()))
            cond["rtilde_equals_rprime"] = dev <= tol_eq
            marg["rtilde_equals_rprime"] = dev
            cond["factor_negative"] = float(cf.phi.values.max()) < 0
            marg["factor_negative"] = -float(cf.phi.values.max())
            cond["yamabe_positivity"] = yam.holds
            marg["yamabe_positivity"] = yam.worst
        else:
            const, dev = is_constant(rt, tol_eq)
            cond["rtilde_constant"] = const
            marg["rtilde_constant"] = dev
            cond["yamabe_positivity"] = yam.holds
            marg["yamabe_positivity"] = yam.worst
            h3 = cf.hat3.max_abs()
            cond["third_derivative_vanishes"] = h3 <= tol
            marg["third_derivative_vanishes"] = h3
            h2max = float(cf.hat2.values.max())
            cond["second_derivative_negative"] = h2max < 0
            marg["second_derivative_negative"] = -h2max
            bal = constant_rtilde_residuals(cf, rp)["equal_curvature"].max_abs()
            cond["equal_curvature_balance"] = bal <= tol
            marg["equal_curvature_balance"] = bal
            tq = gates["three_quarter_positivity"]
            cond["three_quarter_positivity"] = tq.holds
            marg["three_quarter_positivity"] = tq.worst
    cond = {k: bool(v) for k, v in cond.items()}
    marg = {k: float(v) for k, v in marg.items()}
    return PremiseVerdict(kind, cond, marg, all(cond.values()))
