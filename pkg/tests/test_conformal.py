import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sliceconf.conformal import (ConformalFactor, classify, constant_rtilde_residuals, criterion_integral,
                                 criterion_scalar, g_tensor, gate_checks, required_scalar_for_constant_rtilde,
                                 rescaled_frame, theorem_premises, transformed_ricci, transformed_scalar)
from sliceconf.curvature import RicciData
from sliceconf.errors import BranchError, DomainError
from sliceconf.oracle import WarpedMetric3, conformal_recompute
from sliceconf.presets import load_preset
from sliceconf.profiles import Grid, Profile, hat

G = Grid(0.3, 2.7, 201)
CHI = G.chi
CF_COS = ConformalFactor.from_expr(G, "cos(chi)", ("-sin(chi)", "-cos(chi)", "sin(chi)"))


def _sphere(n):
    g = Grid(0.05, np.pi - 0.05, n)
    m = WarpedMetric3(Profile.from_expr(g, "1"), Profile.from_expr(g, "sin(chi)"), 1, True)
    ph = Profile.from_expr(g, "2*cos(chi)/sin(chi)")
    cf = ConformalFactor.from_expr(g, "cos(chi)", ("-sin(chi)", "-cos(chi)", "sin(chi)"))
    return g, m, ph, cf


@settings(max_examples=60, deadline=None)
@given(c=st.floats(-3, 3), a=st.floats(-5, 5), b=st.floats(-5, 5), s=st.floats(-3, 3))
def test_homothety_scales_scalar_exactly(c, a, b, s):
    r = RicciData(Profile(G, a + np.sin(CHI)), Profile(G, b * CHI))
    ph = Profile(G, s / CHI)
    cf = ConformalFactor.constant(G, c)
    want = np.exp(-2 * c) * r.scalar.values
    for v in ("derived", "as_printed"):
        got = transformed_scalar(cf, ph, r.scalar, v).values
        assert np.all(np.abs(got - want) <= 1e-12 * np.maximum(np.abs(want), 1e-300) + 1e-300)


def test_variants_differ_by_sheet_coupling():
    ph = Profile(G, 2 * np.cos(CHI) / np.sin(CHI))
    rp = Profile(G, 6.0)
    gap = transformed_scalar(CF_COS, ph, rp, "as_printed") - transformed_scalar(CF_COS, ph, rp, "derived")
    want = 4 * ph.values * CF_COS.hat1.values * np.exp(-2 * CF_COS.phi.values)
    print("gap error", np.abs(gap.values - want).max())
    assert np.abs(gap.values - want).max() < 1e-13


def test_ricci_components_trace_to_scalar():
    ph = Profile(G, 1.0 / CHI)
    r = RicciData(Profile(G, 1 + CHI), Profile(G, np.cos(CHI)))
    ee, nn = transformed_ricci(CF_COS, ph, r)
    rt = transformed_scalar(CF_COS, ph, r.scalar)
    err = np.abs((CF_COS.nu * CF_COS.nu * (ee + 2.0 * nn) - rt).values).max()
    print("trace mismatch", err)
    assert err < 1e-13
    with pytest.raises(DomainError):
        transformed_ricci(CF_COS, ph, r, "other")


def test_derived_scalar_and_ricci_match_oracle():
    g, m, ph, cf = _sphere(801)
    r = RicciData(Profile(g, 2.0), Profile(g, 2.0))
    rt_oracle, ric = conformal_recompute(m, cf)
    e2 = np.exp(2 * cf.phi.values)
    err_s = np.abs(transformed_scalar(cf, ph, r.scalar).values - rt_oracle.values).max()
    ee, nn = transformed_ricci(cf, ph, r)
    err_ee = np.abs(ee.values - e2 * ric.ee.values).max()
    err_nn = np.abs(nn.values - e2 * ric.yy.values).max()
    pe, pn = transformed_ricci(cf, ph, r, "as_printed")
    bad = np.abs(pe.values - e2 * ric.ee.values).max()
    print(f"scalar {err_s:.2e} ee {err_ee:.2e} nn {err_nn:.2e} printed ee {bad:.2e}")
    assert err_s < 1e-6 and max(err_ee, err_nn) < 1e-5
    assert bad > 1.0


def test_inverse_rescaling_round_trip():
    g, _, ph, _ = _sphere(401)
    cf = ConformalFactor.from_expr(g, "0.3*sin(2*chi)", ("0.6*cos(2*chi)", "-1.2*sin(2*chi)",
                                                         "-2.4*cos(2*chi)"))
    rp = Profile(g, 6.0)
    rt = transformed_scalar(cf, ph, rp)
    inv, ph_t = rescaled_frame(cf, ph)
    back = transformed_scalar(inv, ph_t, rt)
    err = np.abs(back.values - 6.0).max()
    printed = transformed_scalar(inv, ph_t, transformed_scalar(cf, ph, rp, "as_printed"), "as_printed")
    print("round trip", err, "printed", np.abs(printed.values - 6).max())
    assert err < 1e-12
    # the printed law is not self-inverse: it loses 8 hat1^2
    assert np.allclose(printed.values - 6.0, -8 * cf.hat1.values**2, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(a=st.floats(-10, 10), b=st.floats(-10, 10))
def test_trace_free_ricci_is_trace_free(a, b):
    gd = g_tensor(RicciData(Profile(G, a), Profile(G, b)))
    assert np.abs(gd.trace.values).max() <= 1e-12 * (1 + abs(a) + abs(b))
    assert np.allclose(gd.g_ee.values, 2 * (a - b) / 3)


def test_criterion_scalar_closed_form():
    r = RicciData(Profile(G, 3.0), Profile(G, 1.0))
    s = criterion_scalar(r, CF_COS)
    assert np.allclose(s.values, (2 / 3) * 2 * np.sin(CHI) ** 2, atol=1e-14)


@settings(max_examples=25, deadline=None)
@given(split=st.floats(0.9, 2.1))
def test_criterion_integral_is_additive(split):
    g = Grid(0.3, 2.7, 1201)
    m = WarpedMetric3(Profile(g, 1.0), Profile.from_expr(g, "sin(chi)"), 1)
    cf = ConformalFactor.from_expr(g, "cos(chi)", ("-sin(chi)", "-cos(chi)", "sin(chi)"))
    r = RicciData(Profile(g, 1.0 + g.chi), Profile(g, 0.5))
    k = int(np.argmin(np.abs(g.chi - split)))
    mid = g.chi[k]
    whole = criterion_integral(r, cf, m).value
    left = criterion_integral(r, cf, m, chi_range=(g.chi_min, mid)).value
    right = criterion_integral(r, cf, m, chi_range=(mid, g.chi_max)).value
    assert abs(whole - left - right) < 1e-10 * (1 + abs(whole))


def test_criterion_integral_warns_for_flat_sheets():
    g = Grid(0.3, 2.7, 201)
    m = WarpedMetric3(Profile(g, 1.0), Profile(g, 1.0), 0)
    cf = ConformalFactor.from_expr(g, "chi", ("1", "0", "0"))
    r = RicciData(Profile(g, 1.0), Profile(g, 0.0))
    res = criterion_integral(r, cf, m)
    print(res)
    assert res.warning and abs(res.value - (2 / 3) * 2.4) < 1e-12 and res.nonnegative


def test_classify():
    assert classify(ConformalFactor.constant(G, 0.0)) == "isometry"
    assert classify(ConformalFactor.constant(G, 0.4)) == "homothety"
    assert classify(CF_COS) == "proper"


def test_gate_margins_for_cosine_factor():
    gates = gate_checks(CF_COS, rprime=Profile(G, 6.0))
    s, c = np.sin(CHI), np.cos(CHI)
    assert np.allclose(gates["yamabe_positivity"].margin.values, s * s - 2 * c)
    assert np.allclose(gates["reduced_positivity"].margin.values, s * s - c)
    assert np.allclose(gates["negative_factor"].margin.values, 1 - np.exp(2 * c))
    assert gates["rprime_positive"].holds
    # hat3 - hat1 hat2 - hat1^3 = s - s c + s^3, divided by hat1 = -s
    assert np.allclose(gates["constant_rtilde_sign"].margin.values, 1 - c + s * s)
    assert not gates["nonpositive_second"].holds


def test_required_scalar_for_quadratic_factor():
    cf = ConformalFactor.from_expr(G, "0.2 + 0.5*chi - 0.3*chi^2", ("0.5 - 0.6*chi", "-0.6", "0"))
    req = required_scalar_for_constant_rtilde(cf)
    assert np.allclose(req.values, 2 * cf.hat2.values + 2 * cf.hat1.values**2)
    rt = transformed_scalar(cf, Profile(G, 0.0), req, "as_printed")
    red = constant_rtilde_residuals(cf, req)["reduced_rtilde"]
    assert np.allclose(rt.values, red.values, atol=1e-13)
    flat = ConformalFactor.from_expr(G, "(chi - 1.5)^2", ("2*(chi - 1.5)", "2", "0"))
    g2 = Grid(0.5, 2.5, 201)  # node at chi = 1.5
    flat = ConformalFactor.from_expr(g2, "(chi - 1.5)^2", ("2*(chi - 1.5)", "2", "0"))
    with pytest.raises(BranchError):
        required_scalar_for_constant_rtilde(flat)


def test_gradient_law_matches_differentiated_rescaling():
    g = Grid(0.3, 2.7, 801)
    cf = ConformalFactor.from_expr(g, "0.3*sin(chi)", ("0.3*cos(chi)", "-0.3*sin(chi)", "-0.3*cos(chi)"))
    rp = Profile(g, 4.0)
    rt = transformed_scalar(cf, Profile(g, 0.0), rp, "as_printed")
    res = constant_rtilde_residuals(cf, rp)
    lhs = np.exp(2 * cf.phi.values) * hat(rt).values
    err = np.abs(lhs + res["gradient_law_derived"].values).max()
    printed = np.abs(lhs + res["gradient_law"].values).max()
    print("derived", err, "printed", printed)
    assert err < 1e-8
    assert printed > 1e-2


def test_sphere_premises_depend_on_rescaling_law():
    p = load_preset("unit_s3", n=401)
    kw = dict(ricci=p.ricci(), cf=p.factor, phi_sheet=p.phi_sheet(), compact=True)
    d = theorem_premises("einstein_sphere", **kw)
    a = theorem_premises("einstein_sphere", variant="as_printed", **kw)
    print(d.conditions, d.margins["rtilde_nonnegative"])
    assert d.conditions["einstein"] and d.conditions["proper"] and d.conditions["compact"]
    assert not d.conditions["rtilde_nonnegative"] and not d.criteria_met
    assert a.criteria_met
    for kind in ("negative_factor", "constant_rtilde"):
        v = theorem_premises(kind, **kw)
        # 2 cot(chi) vanishes at the equator
        assert not v.criteria_met and not v.conditions["sheet_expansion_nowhere_zero"]
    with pytest.raises(DomainError):
        theorem_premises("other", **kw)
