import numpy as np
import pytest

from conftest import converges
from sliceconf.conformal import ConformalFactor
from sliceconf.curvature import RicciData, riemann_components
from sliceconf.errors import DomainError
from sliceconf.oracle import (WarpedMetric3, conformal_recompute, frame_geometry, lie_residual,
                              ricci_from_metric, riemann_from_metric)
from sliceconf.profiles import Grid, Profile


def _metric(a, b, n, B, F, k=1):
    g = Grid(a, b, n)
    return WarpedMetric3(Profile.from_expr(g, B), Profile.from_expr(g, F), k)


def _err(p, want):
    return float(np.abs(p.values - want).max())


def test_unit_sphere_alpha_beta_and_sheet_expansion():
    m = _metric(0.05, np.pi - 0.05, 401, "1", "sin(chi)")
    fg = frame_geometry(m)
    chi = m.grid.chi
    errs = (_err(fg.alpha, 2), _err(fg.beta, 2), _err(fg.scalar, 6),
            _err(fg.phi_sheet, 2 / np.tan(chi)))
    print("errors", errs, "paths", fg.path_discrepancy, "accel", fg.accel.max_abs())
    assert max(errs) < 1e-6
    assert fg.path_discrepancy < 1e-5 and fg.accel.max_abs() < 1e-8


def test_hyperbolic_sheets_of_negative_curvature():
    # B = 1: alpha = -2 F''/F, beta = -F''/F + (k - F'^2)/F^2
    m = _metric(0.5, 2.5, 401, "1", "sinh(chi)", k=-1)
    fg = frame_geometry(m)
    chi = m.grid.chi
    want_b = -1 + (-1 - np.cosh(chi) ** 2) / np.sinh(chi) ** 2
    print("alpha", _err(fg.alpha, -2), "beta", _err(fg.beta, want_b))
    assert _err(fg.alpha, -2) < 1e-7 and _err(fg.beta, want_b) < 1e-7
    assert np.allclose(want_b, -2 / np.tanh(chi) ** 2)


def test_axial_reparametrisation_is_invisible():
    # B = 2, F = sin(2 chi) is the unit sphere in a stretched coordinate
    m = _metric(0.05, np.pi / 2 - 0.05, 401, "2", "sin(2*chi)")
    fg = frame_geometry(m)
    print("alpha", _err(fg.alpha, 2), "beta", _err(fg.beta, 2))
    assert _err(fg.alpha, 2) < 1e-6 and _err(fg.beta, 2) < 1e-6
    assert _err(fg.phi_sheet, 2 / np.tan(2 * m.grid.chi)) < 1e-8


def test_nonconstant_b_against_closed_form():
    # B = 1 + chi^2/4, F = chi: compare with the generic warped formula
    m = _metric(0.5, 2.0, 801, "1 + chi^2/4", "chi")
    fg = frame_geometry(m)
    x = m.grid.chi
    B, dB, F, dF, ddF = 1 + x * x / 4, x / 2, x, 1.0, 0.0
    alpha = -2 * (ddF / F - dB * dF / (B * F)) / B**2
    beta = -(ddF / F - dB * dF / (B * F)) / B**2 + (1 - (dF / B) ** 2) / F**2
    print("alpha", _err(fg.alpha, alpha), "beta", _err(fg.beta, beta))
    assert _err(fg.alpha, alpha) < 1e-7 and _err(fg.beta, beta) < 1e-7


def test_sphere_converges_at_fourth_order():
    e = []
    for n in (201, 401):
        fg = frame_geometry(_metric(0.05, np.pi - 0.05, n, "1", "sin(chi)"))
        e.append(max(_err(fg.alpha, 2), _err(fg.beta, 2)))
    print("errors", e, "ratio", e[0] / e[1])
    assert converges(e[0], e[1], 4)


def test_riemann_table_matches_metric_route():
    m = _metric(0.6, 2.6, 401, "1", "chi + 0.3*sin(chi)")
    fg = frame_geometry(m)
    table = riemann_components(RicciData(fg.alpha, fg.beta))
    R = riemann_from_metric(m)
    err = np.abs(table.tensor - R).max()
    print("riemann mismatch", err, "sheet-sheet", table.sheet_sheet.values[:2])
    assert err < 1e-6
    ric = ricci_from_metric(m)
    assert ric.offdiag.max_abs() < 1e-10
    assert np.abs(ric.scalar.values - fg.scalar.values).max() < 1e-6


def test_lie_residual_separates_conformal_from_other_fields():
    m = _metric(0.05, np.pi - 0.05, 401, "1", "sin(chi)")
    g = m.grid
    ckv = lie_residual(m, Profile.from_expr(g, "sin(chi)"), Profile.from_expr(g, "cos(chi)")).max_abs()
    not_ckv = lie_residual(m, Profile(g, 1.0), Profile(g, 0.0)).max_abs()
    print("ckv", ckv, "translation", not_ckv)
    assert ckv < 1e-6 and not_ckv > 0.1
    flat = _metric(0.1, 2.0, 201, "1", "chi")
    dil = lie_residual(flat, Profile.from_expr(flat.grid, "chi"), Profile(flat.grid, 1.0)).max_abs()
    planar = _metric(0.1, 2.0, 201, "1", "1", k=0)
    kill = lie_residual(planar, Profile(planar.grid, 1.0), Profile(planar.grid, 0.0)).max_abs()
    print("dilation", dil, "killing", kill)
    assert dil < 1e-12 and kill < 1e-14


def test_recompute_of_homothety():
    m = _metric(0.05, np.pi - 0.05, 201, "1", "sin(chi)")
    rt, ric = conformal_recompute(m, ConformalFactor.constant(m.grid, 0.7))
    print("homothety error", _err(rt, 6 * np.exp(-1.4)))
    assert _err(rt, 6 * np.exp(-1.4)) < 1e-6
    # the coordinate route differences the metric twice, so it is looser
    assert _err(ric.ee, 2 * np.exp(-1.4)) < 1e-4


def test_samples_without_closed_form_fall_back_to_differences():
    g = Grid(0.05, np.pi - 0.05, 401)
    m = WarpedMetric3(Profile(g, 1.0), Profile(g, np.sin(g.chi)), 1)
    fg = frame_geometry(m)
    print("array-backed alpha error", _err(fg.alpha, 2))
    assert _err(fg.alpha, 2) < 1e-4


def test_metric_validation():
    g = Grid(0.0, 1.0, 32)
    with pytest.raises(DomainError):
        WarpedMetric3(Profile(g, 1.0), Profile(g, g.chi), 1)
    with pytest.raises(DomainError):
        WarpedMetric3(Profile(g, 1.0), Profile(g, 1.0), 2)
    with pytest.raises(DomainError):
        WarpedMetric3(Profile(g, 1.0), Profile(g.with_n(33), 1.0), 1)
