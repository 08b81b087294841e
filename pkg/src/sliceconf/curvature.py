"""Curvature of a slice whose Ricci tensor has the axial form.

The three-dimensional Ricci tensor of an axially reduced slice is fixed by
two scalars,

    R_ab = alpha e_a e_b + beta N_ab,

where ``e`` is the unit axial direction and ``N`` projects onto the
two-dimensional sheets.  The scalar curvature is ``alpha + 2 beta``.
``alpha - beta`` measures the departure from an Einstein slice, and the
contracted Bianchi identity turns into a first-order transport law for it
along the sheet expansion ``phi``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GridMismatchError
from .profiles import Profile, hat, integrate_from, is_constant

__all__ = [
    "RicciData",
    "RiemannTable",
    "alpha_beta_of",
    "riemann_components",
    "bianchi_residual",
    "difference_propagation_residual",
    "identity_divergence_residual",
    "solve_alpha_minus_beta",
    "cotton_twist_residual",
]


@dataclass(frozen=True, eq=False)
class RicciData:
    """The two Ricci scalars of an axially symmetric slice.

    Attributes
    ----------
    alpha : Profile
        Axial-axial component ``R(e, e)``.
    beta : Profile
        Component along each sheet direction.
    """

    alpha: Profile
    beta: Profile

    def __post_init__(self):
        if self.alpha.grid != self.beta.grid:
            raise GridMismatchError("alpha and beta live on different grids")

    @property
    def grid(self):
        return self.alpha.grid

    @property
    def scalar(self):
        """Scalar curvature ``alpha + 2 beta``."""
        return self.alpha + 2.0 * self.beta

    @property
    def difference(self):
        """Trace-free part ``alpha - beta``."""
        return self.alpha - self.beta

    def is_einstein(self, tol):
        return (self.alpha - self.beta).max_abs() <= tol


def alpha_beta_of(state):
    """Ricci scalars of the slice from its covariant state.

    Parameters
    ----------
    state : SliceState

    Returns
    -------
    RicciData

    Examples
    --------
    A static slice with ``rho = 3`` and nothing else is the unit round
    three-sphere: ``alpha = beta = 2`` and the scalar curvature is 6.
    """
    s = state
    a = s.Theta / 3.0 + s.Sigma
    b = 2.0 * s.Theta / 3.0 - s.Sigma
    c = 2.0 * s.Theta / 3.0 + s.Sigma / 2.0
    weyl = s.E + s.Pi / 2.0
    alpha = (2.0 / 3.0) * (s.rho + s.Lambda) + weyl - a * b
    beta = (2.0 / 3.0) * s.rho - 0.5 * weyl - 0.5 * b * c + 2.0 * s.Omega * s.Omega
    return RicciData(alpha, beta)


@dataclass(frozen=True, eq=False)
class RiemannTable:
    """Frame components of the Riemann tensor.

    Attributes
    ----------
    tensor : ndarray, shape (n, 3, 3, 3, 3)
        ``R_{abcd}`` in the orthonormal frame (axial, sheet, sheet).
    e_sheet : Profile
        Sectional curvature of a plane spanned by the axis and a sheet
        direction.
    sheet_sheet : Profile
        Sectional curvature of the sheet plane.
    """

    tensor: np.ndarray
    e_sheet: Profile
    sheet_sheet: Profile


_E = np.array([1.0, 0.0, 0.0])
_N = np.diag([0.0, 1.0, 1.0])
_EE = np.einsum("a,b->ab", _E, _E)
_H = _N + _EE


def riemann_components(r):
    """Riemann tensor of a three-metric with axial Ricci form.

    In three dimensions the Riemann tensor is fixed by the Ricci tensor.
    The tensor is assembled pointwise in the orthonormal frame, and the two
    independent sectional curvatures are read off.

    Returns
    -------
    RiemannTable
        ``e_sheet = alpha/2`` and ``sheet_sheet = beta - alpha/2``.
    """
    al = r.alpha.values[:, None, None]
    be = r.beta.values[:, None, None]
    # X_{gm} = alpha/2 N + (beta - alpha/2) e e,  Y_{gn} = beta N + alpha e e
    X = 0.5 * al * _N + (be - 0.5 * al) * _EE
    Y = be * _N + al * _EE
    t = (np.einsum("dn,kgm->kmndg", _H, X)
         - np.einsum("gn,kdm->kmndg", _H, X)
         + np.einsum("dm,kgn->kmndg", _H, Y)
         - np.einsum("gm,kdn->kmndg", _H, Y))
    g = r.grid
    return RiemannTable(t, Profile(g, t[:, 0, 1, 0, 1]), Profile(g, t[:, 1, 2, 1, 2]))


def _check(*profiles):
    g = profiles[0].grid
    for p in profiles[1:]:
        if p.grid != g:
            raise GridMismatchError("profiles live on different grids")


def bianchi_residual(r, phi_sheet):
    """Residual of the contracted Bianchi identity along the axis.

    ``hat(alpha) + (alpha - beta) phi - hat(R)/2``, which vanishes for any
    smooth metric of the axial form.
    """
    _check(r.alpha, phi_sheet)
    return hat(r.alpha) + r.difference * phi_sheet - 0.5 * hat(r.scalar)


def difference_propagation_residual(r, phi_sheet):
    """Transport law of ``alpha - beta`` with the scalar-gradient term dropped.

    ``hat(alpha - beta) + (3/2) phi (alpha - beta)``.  It vanishes only
    when the scalar curvature is constant along the axis; elsewhere it
    equals ``hat(R)/4``.
    """
    _check(r.alpha, phi_sheet)
    d = r.difference
    return hat(d) + 1.5 * phi_sheet * d


def identity_divergence_residual(r, phi_sheet):
    """Divergence identity of the trace-free Ricci tensor.

    ``(2/3) hat(alpha - beta) + (alpha - beta) phi - hat(R)/6``.  This is an
    algebraic rearrangement of :func:`bianchi_residual` and vanishes for
    every smooth slice.
    """
    _check(r.alpha, phi_sheet)
    d = r.difference
    return (2.0 / 3.0) * hat(d) + d * phi_sheet - hat(r.scalar) / 6.0


def solve_alpha_minus_beta(phi_sheet, chi0, c0, tol=1e-12):
    """Solve ``hat(y) = -(3/2) phi y`` with ``y(chi0) = c0``.

    Returns ``c0 exp(-(3/2) int_{chi0} phi)``.  A positive constant stays
    positive, so a non-Einstein slice with constant scalar curvature has
    ``alpha > beta`` everywhere.

    Raises
    ------
    DomainError
        If ``c0 <= 0`` while ``phi`` is not identically zero.
    """
    if phi_sheet.max_abs() > tol and c0 <= 0:
        raise DomainError("the initial value of alpha - beta must be positive")
    return c0 * integrate_from(phi_sheet, chi0).map(lambda v: np.exp(-1.5 * v))


def cotton_twist_residual(r, xi):
    """Twist part of the Cotton tensor, ``(alpha - beta) xi``.

    Conformal flatness of a twisting slice forces it to be Einstein.
    """
    _check(r.alpha, xi)
    return r.difference * xi


def scalar_is_constant(r, tol):
    """Whether the scalar curvature is constant along the axis."""
    return is_constant(r.scalar, tol)
