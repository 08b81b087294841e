"""Independent curvature oracle for warped three-metrics.

The oracle works with the coordinate metric

    ds^2 = B(chi)^2 dchi^2 + F(chi)^2 (dy^2 + D(y)^2 dz^2),

with ``D = sin y, y, sinh y`` for sheet curvature ``k = 1, 0, -1``, and
computes everything by finite differences of ``B`` and ``F``.  It serves as
ground truth for the covariant formulas of the other modules, so it shares
no code with them beyond the stencil tables.

Two routes are provided.  The frame route uses the textbook curvature of a
warped product.  The coordinate route builds Christoffel symbols and the
Ricci and Riemann tensors by brute force at a fixed sheet coordinate
``y0`` and projects them on the orthonormal frame.

When ``B`` and ``F`` carry closed forms, samples (including ghost nodes
just outside the grid) are taken at extended precision and only centered
stencils are used.  This keeps the discretisation error far above the
float64 rounding floor, so convergence orders can be measured cleanly.
Without closed forms, float64 samples and one-sided end stencils are used.
"""

from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .errors import DomainError, ExpressionError
from .expressions import Expr
from .profiles import Analytic, Profile, derivative
from .stencils import apply_derivative, centered_offsets, fd_weights

__all__ = [
    "WarpedMetric3",
    "FrameGeometry",
    "RicciComponents",
    "sample_derivatives",
    "frame_geometry",
    "ricci_from_metric",
    "riemann_from_metric",
    "lie_residual",
    "conformal_recompute",
]

Y0 = 1.0
MP_DIGITS = 40


@dataclass(frozen=True, eq=False)
class WarpedMetric3:
    """Warped three-metric ``B^2 dchi^2 + F^2 (dy^2 + D_k(y)^2 dz^2)``.

    Parameters
    ----------
    B, F : Profile
        Positive warp functions on the same grid.
    k : {-1, 0, 1}
        Curvature of the unit sheet.
    compact : bool
        Whether the slice closes smoothly at both ends of the axis.
    """

    B: Profile
    F: Profile
    k: int = 1
    compact: bool = False

    def __post_init__(self):
        if self.B.grid != self.F.grid:
            raise DomainError("B and F live on different grids")
        if self.k not in (-1, 0, 1):
            raise DomainError("sheet curvature k must be -1, 0 or 1")
        if np.any(self.B.values <= 0) or np.any(self.F.values <= 0):
            raise DomainError("B and F must be positive on the grid")

    @property
    def grid(self):
        return self.B.grid


@dataclass(frozen=True, eq=False)
class FrameGeometry:
    """Curvature read off in the orthonormal frame.

    Attributes
    ----------
    alpha, beta, scalar : Profile
        Ricci scalars and scalar curvature.
    phi_sheet : Profile
        Sheet expansion ``2 hat(F) / F`` with ``hat = B^{-1} d/dchi``.
    accel : Profile
        Axial component of the acceleration of the axial unit vector; zero
        up to discretisation error.
    path_discrepancy : float
        Largest difference between the frame and coordinate routes for
        ``alpha`` and ``beta``.
    """

    alpha: Profile
    beta: Profile
    scalar: Profile
    phi_sheet: Profile
    accel: Profile
    path_discrepancy: float


@dataclass(frozen=True, eq=False)
class RicciComponents:
    """Orthonormal-frame Ricci components from the coordinate route."""

    ee: Profile
    yy: Profile
    zz: Profile
    offdiag: Profile

    @property
    def scalar(self):
        return self.ee + self.yy + self.zz


@lru_cache(maxsize=128)
def _mp_table(source, grid, m_max):
    """Extended-precision samples and centered derivatives as object arrays."""
    expr = Expr(source)
    acc = grid.fd_order
    offs = {m: centered_offsets(m, acc) for m in range(1, m_max + 1)}
    ghost = max(o[-1] for o in offs.values()) if offs else 0
    n = grid.n
    with mpmath.workdps(MP_DIGITS):
        lo, hi = mpmath.mpf(grid.chi_min), mpmath.mpf(grid.chi_max)
        h = (hi - lo) / (n if grid.periodic else n - 1)
        vals = []
        for i in range(-ghost, n + ghost):
            v = expr.mp(lo + i * h)
            if not mpmath.isfinite(v):
                raise ExpressionError(f"{source!r} is not finite near the grid")
            vals.append(v)
        out = [np.array(vals[ghost:ghost + n], dtype=object)]
        for m in range(1, m_max + 1):
            w = [mpmath.mpf(f.numerator) / f.denominator for f in fd_weights(offs[m], m)]
            scale = h ** m
            row = [mpmath.fsum(wk * vals[i + ghost + o] for wk, o in zip(w, offs[m])) / scale
                   for i in range(n)]
            out.append(np.array(row, dtype=object))
    return tuple(out)


def _to_float(a):
    out = np.array([float(v) for v in a])
    out.setflags(write=False)
    return out


@lru_cache(maxsize=128)
def _mp_derivatives(source, grid, m_max):
    return tuple(_to_float(a) for a in _mp_table(source, grid, m_max))


def _mp_samples(p, m_max):
    """Object arrays at extended precision, or None without a usable closed form."""
    if p.expr is None:
        return None
    try:
        return _mp_table(p.expr.source, p.grid, m_max)
    except (ExpressionError, ValueError, ZeroDivisionError, TypeError):
        return None


def sample_derivatives(p, m_max):
    """Samples of a profile and of its first ``m_max`` derivatives.

    Closed forms are differentiated at extended precision with centered
    stencils on ghost nodes.  Otherwise the float64 samples are
    differentiated with one-sided stencils near the ends.  Known analytic
    derivatives are deliberately ignored: the oracle must be independent
    of hand-derived formulas.

    Returns
    -------
    list of ndarray
    """
    g = p.grid
    if p.expr is not None:
        try:
            return list(_mp_derivatives(p.expr.source, g, m_max))
        except (ExpressionError, ValueError, ZeroDivisionError, TypeError):
            pass
    out = [p.values]
    for m in range(1, m_max + 1):
        out.append(apply_derivative(p.values, g.h, m, g.fd_order, g.periodic))
    return out


def _composite(grid, template, values, *parts):
    """Profile with values and a closed form assembled from ``parts``."""
    exprs = [q.expr for q in parts]
    if any(e is None for e in exprs):
        return Profile(grid, values)
    return Profile(grid, values, Analytic((template.format(*[e.source for e in exprs]),)))


def _sheet_profile(k):
    """``D, D', D''`` at the reference sheet coordinate."""
    if k == 1:
        return np.sin(Y0), np.cos(Y0), -np.sin(Y0)
    if k == 0:
        return Y0, 1.0, 0.0
    return np.sinh(Y0), np.cosh(Y0), np.sinh(Y0)


def _frame_formulas(B, dB, F, dF, ddF, k):
    hF = dF / B
    hhF = (ddF * B - dF * dB) / (B * B * B)
    alpha = -2 * hhF / F
    beta = -hhF / F - (hF / F) ** 2 + k / (F * F)
    return alpha, beta, 2 * hF / F


def _frame(m):
    """Frame-route alpha, beta and sheet expansion as float arrays.

    With closed forms for both warp functions the formulas are evaluated at
    extended precision, avoiding cancellation near the poles.
    """
    tb, tf = _mp_samples(m.B, 2), _mp_samples(m.F, 2)
    if tb is not None and tf is not None:
        with mpmath.workdps(MP_DIGITS):
            res = _frame_formulas(tb[0], tb[1], tf[0], tf[1], tf[2], mpmath.mpf(m.k))
        return tuple(np.array([float(v) for v in a]) for a in res)
    B, dB, _ = sample_derivatives(m.B, 2)
    F, dF, ddF = sample_derivatives(m.F, 2)
    return _frame_formulas(B, dB, F, dF, ddF, m.k)


def _coordinate_tables(m):
    """Metric, Christoffel symbols and their derivatives at ``y = y0``."""
    grid = m.grid
    n = grid.n
    g2 = _composite(grid, "({0})**2", m.B.values**2, m.B)
    f2 = _composite(grid, "({0})**2", m.F.values**2, m.F)
    b2, db2, ddb2 = sample_derivatives(g2, 2)
    ff, dff, ddff = sample_derivatives(f2, 2)
    D, dD, ddD = _sheet_profile(m.k)
    g = np.zeros((n, 3, 3))
    g[:, 0, 0], g[:, 1, 1], g[:, 2, 2] = b2, ff, ff * D**2
    dg = np.zeros((n, 3, 3, 3))  # dg[k, c, a, b] = d_c g_ab
    dg[:, 0, 0, 0] = db2
    dg[:, 0, 1, 1] = dff
    dg[:, 0, 2, 2] = dff * D**2
    dg[:, 1, 2, 2] = ff * 2 * D * dD
    ddg = np.zeros((n, 3, 3, 3, 3))  # ddg[k, e, c, a, b] = d_e d_c g_ab
    ddg[:, 0, 0, 0, 0] = ddb2
    ddg[:, 0, 0, 1, 1] = ddff
    ddg[:, 0, 0, 2, 2] = ddff * D**2
    ddg[:, 0, 1, 2, 2] = ddg[:, 1, 0, 2, 2] = dff * 2 * D * dD
    ddg[:, 1, 1, 2, 2] = ff * 2 * (dD**2 + D * ddD)
    gi = np.linalg.inv(g)
    dgi = -np.einsum("kaf,kefh,khd->kead", gi, dg, gi)
    # lowered symbols Gamma_{d b c}
    low = 0.5 * (np.einsum("kbdc->kdbc", dg) + np.einsum("kcdb->kdbc", dg) - dg)
    dlow = 0.5 * (np.einsum("kebdc->kedbc", ddg) + np.einsum("kecdb->kedbc", ddg) - ddg)
    gam = np.einsum("kad,kdbc->kabc", gi, low)
    dgam = np.einsum("kead,kdbc->keabc", dgi, low) + np.einsum("kad,kedbc->keabc", gi, dlow)
    return g, dg, gam, dgam


def ricci_from_metric(m):
    """Ricci tensor by brute-force Christoffel contraction.

    Returns
    -------
    RicciComponents
        Orthonormal-frame components and the largest off-diagonal one.
    """
    g, _, gam, dgam = _coordinate_tables(m)
    ric = (np.einsum("kaabc->kbc", dgam)
           - np.einsum("kcaba->kbc", dgam)
           + np.einsum("kaad,kdbc->kbc", gam, gam)
           - np.einsum("kacd,kdba->kbc", gam, gam))
    diag = np.sqrt(np.einsum("kaa->ka", g))
    frame = ric / (diag[:, :, None] * diag[:, None, :])
    off = np.abs(frame - np.einsum("kaa->ka", frame)[:, :, None] * np.eye(3)).max(axis=(1, 2))
    grid = m.grid
    return RicciComponents(Profile(grid, frame[:, 0, 0]), Profile(grid, frame[:, 1, 1]),
                           Profile(grid, frame[:, 2, 2]), Profile(grid, off))


def riemann_from_metric(m):
    """Orthonormal-frame Riemann tensor ``R_{abcd}`` from Christoffel symbols.

    Returns
    -------
    ndarray, shape (n, 3, 3, 3, 3)
        With ``R_{abab}`` the sectional curvature of the plane ``(a, b)``.
    """
    g, _, gam, dgam = _coordinate_tables(m)
    # R^a_{bcd} = d_c G^a_{db} - d_d G^a_{cb} + G^a_{ce} G^e_{db} - G^a_{de} G^e_{cb}
    up = (np.einsum("kcadb->kabcd", dgam) - np.einsum("kdacb->kabcd", dgam)
          + np.einsum("kace,kedb->kabcd", gam, gam) - np.einsum("kade,kecb->kabcd", gam, gam))
    low = np.einsum("kae,kebcd->kabcd", g, up)
    s = np.sqrt(np.einsum("kaa->ka", g))
    return low / np.einsum("ka,kb,kc,kd->kabcd", s, s, s, s)


def frame_geometry(m):
    """Ricci scalars, sheet expansion and acceleration of a warped metric.

    Returns
    -------
    FrameGeometry

    Examples
    --------
    ``B = 1, F = sin(chi), k = 1`` is the unit three-sphere with
    ``alpha = beta = 2``, scalar curvature 6 and ``phi = 2 cot(chi)``.
    """
    grid = m.grid
    alpha, beta, phi = _frame(m)
    ric = ricci_from_metric(m)
    disc = max(float(np.max(np.abs(alpha - ric.ee.values))),
               float(np.max(np.abs(beta - ric.yy.values))),
               float(np.max(np.abs(beta - ric.zz.values))))
    g, _, gam, _ = _coordinate_tables(m)
    B, dB = sample_derivatives(m.B, 1)
    # axial component of nabla_e e in the orthonormal frame
    accel = B * (-dB / B**3 + gam[:, 0, 0, 0] / B**2)
    return FrameGeometry(Profile(grid, alpha), Profile(grid, beta),
                         Profile(grid, alpha + 2 * beta), Profile(grid, phi),
                         Profile(grid, accel), disc)


def lie_residual(m, gamma, phi_conf):
    """Residual of the conformal Killing equation for ``X = gamma B^{-1} d/dchi``.

    Computes ``L_X g - 2 phi_conf g`` component by component from the
    coordinate metric and normalises by the largest metric component.

    Returns
    -------
    Profile
        Pointwise largest absolute component of the normalised residual.
    """
    g, dg, _, _ = _coordinate_tables(m)
    B, dB = sample_derivatives(m.B, 1)
    gv = gamma.values
    dgam = derivative(gamma).values
    n = m.grid.n
    X = np.zeros((n, 3))
    X[:, 0] = gv / B
    dX = np.zeros((n, 3, 3))  # dX[k, c, a] = d_c X^a
    dX[:, 0, 0] = (dgam * B - gv * dB) / B**2
    lie = (np.einsum("kc,kcab->kab", X, dg)
           + np.einsum("kcb,kac->kab", g, dX)
           + np.einsum("kac,kbc->kab", g, dX))
    res = lie - 2.0 * phi_conf.values[:, None, None] * g
    scale = np.abs(g).max()
    return Profile(m.grid, np.abs(res).max(axis=(1, 2)) / scale)


def conformal_recompute(m, cf):
    """Curvature of the rescaled metric ``e^{2 phi} g`` computed from scratch.

    The warp functions become ``e^phi B`` and ``e^phi F`` and the oracle is
    rerun on them.

    Returns
    -------
    (Profile, RicciComponents)
        Scalar curvature of the rescaled metric and its Ricci components in
        the rescaled orthonormal frame.  Multiply by ``e^{2 phi}`` to obtain
        components in the original frame.
    """
    phi = cf.phi
    grid = m.grid
    w = np.exp(phi.values)
    Bt = _composite(grid, "exp({0})*({1})", w * m.B.values, phi, m.B)
    Ft = _composite(grid, "exp({0})*({1})", w * m.F.values, phi, m.F)
    mt = WarpedMetric3(Bt, Ft, m.k, m.compact)
    alpha, beta, _ = _frame(mt)
    ric = ricci_from_metric(mt)
    return Profile(grid, alpha + 2 * beta), ric
