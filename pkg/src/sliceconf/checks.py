"""Registry of named checks run by the command line driver.

A check takes a loaded scenario and returns report entries.  Entries with
a tolerance pass when the largest residual is within it; informational
entries report verdicts and margins and never fail a run.
"""

import math

import numpy as np

from . import ckv as ckv_mod
from .conformal import (ConformalFactor, THEOREM_KINDS, criterion_integral, gate_checks,
                        theorem_premises, transformed_scalar)
from .curvature import (RicciData, bianchi_residual, cotton_twist_residual,
                        difference_propagation_residual, identity_divergence_residual,
                        riemann_components)
from .errors import ConfigError, NotProperError, SliceconfError
from .lrs import ckv_admission_consequences, einstein_type_check, slice_constraint_residuals
from .oracle import conformal_recompute, frame_geometry, lie_residual, riemann_from_metric
from .profiles import hat

__all__ = ["DEFAULT_TOLERANCES", "CHECKS", "run_check"]

DEFAULT_TOLERANCES = {
    "alpha_beta": 1e-6,
    "frame_consistency": 1e-6,
    "bianchi_residual": 1e-5,
    "riemann_components": 1e-6,
    "criterion_integral": 1e-10,
    "lie_residual": 1e-6,
    "transformed_scalar": 1e-4,
    "homothety_scaling": 1e-12,
    "slice_constraints": 1e-10,
    "sheet_ckv": 1e-6,
    "premises": 1e-8,
    "premises_equality": 1e-6,
    "algebraic": 1e-10,
    "w_propagation": 1e-8,
}


def _num(x):
    """JSON-safe float."""
    x = float(x)
    return x if math.isfinite(x) else None


def _entry(name, max_residual=None, tol=None, notes=None):
    if tol is None:
        status, ok = "info", None
    else:
        ok = bool(max_residual is not None and math.isfinite(max_residual) and max_residual <= tol)
        status = "pass" if ok else "fail"
    return {
        "name": name,
        "status": status,
        "pass": ok,
        "max_residual": None if max_residual is None else _num(max_residual),
        "tolerance": tol,
        "notes": notes or {},
    }


class Context:
    """Scenario data shared by the checks of one run."""

    def __init__(self, preset, tolerances, csv=None):
        self.preset = preset
        self.tol = tolerances
        self.csv = csv if csv is not None else (lambda name, columns: None)
        self._fg = None

    def need_metric(self):
        if self.preset.metric is None:
            raise ConfigError("this check needs a metric")
        return self.preset.metric

    def need_state(self):
        if self.preset.state is None:
            raise ConfigError("this check needs a covariant state")
        return self.preset.state

    def need_factor(self):
        if self.preset.factor is None:
            raise ConfigError("this check needs a conformal factor")
        return self.preset.factor

    def geometry(self):
        if self._fg is None:
            self._fg = frame_geometry(self.need_metric())
        return self._fg

    def ricci(self):
        if self.preset.state is not None:
            from .curvature import alpha_beta_of

            return alpha_beta_of(self.preset.state)
        fg = self.geometry()
        return RicciData(fg.alpha, fg.beta)

    def phi_sheet(self):
        if self.preset.state is not None:
            return self.preset.state.phi
        return self.geometry().phi_sheet


def check_alpha_beta(ctx, params):
    p = ctx.preset
    if p.state is None or p.metric is None:
        r = ctx.ricci()
        return [_entry("alpha_beta", notes={
            "alpha_range": [_num(r.alpha.values.min()), _num(r.alpha.values.max())],
            "beta_range": [_num(r.beta.values.min()), _num(r.beta.values.max())]})]
    r = ctx.ricci()
    fg = ctx.geometry()
    err = max((r.alpha - fg.alpha).max_abs(), (r.beta - fg.beta).max_abs(),
              (p.state.phi - fg.phi_sheet).max_abs())
    ctx.csv("alpha_beta", {"alpha": r.alpha, "beta": r.beta})
    return [_entry("alpha_beta", err, ctx.tol["alpha_beta"],
                   {"compared": "state formulas against oracle of the metric"})]


def check_frame_consistency(ctx, params):
    fg = ctx.geometry()
    return [_entry("frame_consistency", fg.path_discrepancy, ctx.tol["frame_consistency"],
                   {"accel_max": _num(fg.accel.max_abs())})]


def check_bianchi(ctx, params):
    if ctx.preset.metric is not None:
        fg = ctx.geometry()
        r, ph, src = RicciData(fg.alpha, fg.beta), fg.phi_sheet, "oracle"
    else:
        r, ph, src = ctx.ricci(), ctx.phi_sheet(), "state"
    res = bianchi_residual(r, ph)
    dp = difference_propagation_residual(r, ph)
    idr = identity_divergence_residual(r, ph)
    grad = hat(r.scalar).max_abs()
    ctx.csv("bianchi_residual", {"value": res})
    tol = ctx.tol["bianchi_residual"]
    return [
        _entry("bianchi_residual", res.max_abs(), tol, {"source": src}),
        _entry("difference_propagation", dp.max_abs(), None, {
            "identity_divergence_residual": _num(idr.max_abs()),
            "scalar_gradient_max": _num(grad),
            "scalar_curvature_constant": bool(grad <= tol),
        }),
    ]


def check_riemann(ctx, params):
    fg = ctx.geometry()
    table = riemann_components(RicciData(fg.alpha, fg.beta))
    R = riemann_from_metric(ctx.need_metric())
    err = max(float(np.max(np.abs(table.e_sheet.values - R[:, 0, 1, 0, 1]))),
              float(np.max(np.abs(table.sheet_sheet.values - R[:, 1, 2, 1, 2]))),
              float(np.max(np.abs(table.tensor - R))))
    return [_entry("riemann_components", err, ctx.tol["riemann_components"], {
        "e_sheet_range": [_num(table.e_sheet.values.min()), _num(table.e_sheet.values.max())],
        "sheet_sheet_range": [_num(table.sheet_sheet.values.min()),
                              _num(table.sheet_sheet.values.max())]})]


def check_cotton(ctx, params):
    s = ctx.need_state()
    res = cotton_twist_residual(ctx.ricci(), s.xi)
    return [_entry("cotton_twist_residual", res.max_abs(), None,
                   {"conformally_flat_compatible": bool(res.max_abs() <= ctx.tol["algebraic"])})]


def check_criterion(ctx, params):
    m = ctx.need_metric()
    cf = ctx.need_factor()
    r = ctx.ricci()
    tol = ctx.tol["criterion_integral"]
    res = criterion_integral(r, cf, m, tol)
    einstein = r.difference.max_abs() <= ctx.tol["algebraic"]
    notes = {"value": _num(res.value), "vanishes": res.vanishes, "nonnegative": res.nonnegative,
             "einstein": bool(einstein)}
    if res.warning:
        notes["warning"] = res.warning
    return [_entry("criterion_integral", abs(res.value) if einstein else None,
                   tol if einstein else None, notes)]


def check_lie(ctx, params):
    m = ctx.need_metric()
    c = ckv_mod.build_sheet_ckv(ctx.phi_sheet(), params.get("chi0"))
    res = lie_residual(m, c.gamma, c.phi_conf)
    ctx.csv("lie_residual", {"value": res})
    return [_entry("lie_residual", res.max_abs(), ctx.tol["lie_residual"],
                   {"proper": c.proper})]


def check_transformed_scalar(ctx, params):
    m = ctx.need_metric()
    cf = ctx.need_factor()
    r = ctx.ricci()
    ph = ctx.phi_sheet()
    oracle, _ = conformal_recompute(m, cf)
    d = transformed_scalar(cf, ph, r.scalar, "derived")
    p = transformed_scalar(cf, ph, r.scalar, "as_printed")
    gap = 4.0 * ph * cf.hat1 * cf.nu * cf.nu
    ctx.csv("transformed_scalar", {"derived": d, "as_printed": p, "oracle": oracle})
    return [
        _entry("transformed_scalar.derived", (d - oracle).max_abs(), ctx.tol["transformed_scalar"]),
        _entry("transformed_scalar.as_printed", (p - oracle).max_abs(), None, {
            "deviation_minus_sheet_term": _num(((p - oracle) - gap).max_abs())}),
    ]


def check_homothety(ctx, params):
    c = float(params.get("c", 0.3))
    r = ctx.ricci()
    ph = ctx.phi_sheet()
    cf = ConformalFactor.constant(r.grid, c)
    want = math.exp(-2.0 * c) * r.scalar
    scale = max(want.max_abs(), 1e-300)
    out = []
    for v in ("derived", "as_printed"):
        got = transformed_scalar(cf, ph, r.scalar, v)
        out.append(_entry(f"homothety_scaling.{v}", (got - want).max_abs() / scale,
                          ctx.tol["homothety_scaling"], {"c": c}))
    return out


def check_gates(ctx, params):
    cf = ctx.need_factor()
    gates = gate_checks(cf)
    return [_entry("gate_checks", None, None,
                   {k: {"holds": g.holds, "worst_margin": _num(g.worst)} for k, g in gates.items()})]


def check_premises(ctx, params):
    kind = params.get("kind", "einstein_sphere")
    if kind not in THEOREM_KINDS:
        raise ConfigError(f"theorem kind must be one of {THEOREM_KINDS}")
    variant = params.get("variant", "derived")
    cf = ctx.need_factor()
    compact = ctx.preset.metric is not None and ctx.preset.metric.compact
    v = theorem_premises(kind, ricci=ctx.ricci(), cf=cf, phi_sheet=ctx.phi_sheet(),
                         compact=compact, tol=ctx.tol["premises"],
                         tol_eq=ctx.tol["premises_equality"],
                         variant=variant)
    suffix = "" if variant == "derived" else f".{variant}"
    return [_entry(f"theorem_premises.{kind}{suffix}", None, None, {
        "conditions": v.conditions, "margins": {k: _num(x) for k, x in v.margins.items()},
        "criteria_met": v.criteria_met, "variant": variant})]


def check_slice(ctx, params):
    s = ctx.need_state()
    res = slice_constraint_residuals(s, params.get("acceleration_law", "standard"))
    worst = max(v.max_abs() for v in res.values())
    for k, v in res.items():
        ctx.csv(f"slice_constraints_{k}", {"value": v})
    physical = "physical" in ctx.preset.tags or params.get("enforce", False)
    return [_entry("slice_constraints", worst, ctx.tol["slice_constraints"] if physical else None,
                   {k: _num(v.max_abs()) for k, v in res.items()})]


def check_einstein(ctx, params):
    v = einstein_type_check(ctx.need_state(), ctx.tol["algebraic"])
    return [_entry("einstein_type", None, None, {
        "einstein_type": v.einstein_type, "consequences_hold": v.consequences_hold,
        "improper_sheet_vector": v.improper_sheet_vector,
        "residuals": {k: _num(r.max_abs()) for k, r in v.residuals.items()}})]


def check_admission(ctx, params):
    v = ckv_admission_consequences(ctx.need_state(), ctx.tol["algebraic"])
    return [_entry("ckv_admission", None, None, {
        "lemma_ok": v.lemma_ok, "time_symmetric": v.time_symmetric,
        "conformally_flat": v.conformally_flat, "einstein_type": v.einstein_type,
        "branch": v.proper_branch, **v.notes,
        "residuals": {k: _num(r.max_abs()) for k, r in v.residuals.items()}})]


def check_sheet_ckv(ctx, params):
    c = ckv_mod.build_sheet_ckv(ctx.phi_sheet(), params.get("chi0"), params.get("gamma0", 1.0))
    ctx.csv("sheet_ckv", {"gamma": c.gamma, "phi_conf": c.phi_conf})
    res = c.residuals["gamma_transport"].max_abs()
    notes = {"proper": c.proper}
    if ctx.preset.state is not None:
        cons = ckv_mod.ckv_constraint_residuals(c, ctx.preset.state)
        notes["constraints"] = {k: _num(v.max_abs()) for k, v in cons.items()}
    return [_entry("sheet_ckv", res, ctx.tol["sheet_ckv"], notes)]


def _state_ckv(kind, builder):
    def run(ctx, params):
        c = builder(ctx.need_state())
        ctx.csv(f"{kind}_ckv", {"gamma": c.gamma, "phi_conf": c.phi_conf})
        (name, res), = c.residuals.items()
        return [_entry(f"{kind}_ckv", res.max_abs(), None, {
            "proper": c.proper, "consistent": c.consistent, "residual": name})]
    return run


def check_wconst(ctx, params):
    s = ctx.need_state()
    out = []
    for conv in ckv_mod.W_CONVENTIONS:
        notes = {"convention": conv}
        try:
            w = ckv_mod.w_parameter(s, conv)
            res = ckv_mod.w_propagation_residual(s, conv)
            notes["W_mean"] = _num(w.values.mean())
            notes["W_range"] = [_num(w.values.min()), _num(w.values.max())]
            notes["propagation_residual"] = _num(res.max_abs())
            try:
                c = ckv_mod.build_wconst_ckv(s, conv, ctx.tol["w_propagation"])
                notes["outcome"] = "built"
                notes["proper"] = c.proper
                notes["consistent"] = c.consistent
            except NotProperError as exc:
                notes["outcome"] = "rejected_not_proper"
                notes["message"] = str(exc)
            except SliceconfError as exc:
                notes["outcome"] = "rejected"
                notes["message"] = str(exc)
        except SliceconfError as exc:
            notes["outcome"] = "undefined"
            notes["message"] = str(exc)
        out.append(_entry(f"wconst_ckv.{conv}", None, None, notes))
    return out


CHECKS = {
    "alpha_beta": check_alpha_beta,
    "frame_consistency": check_frame_consistency,
    "bianchi_residual": check_bianchi,
    "riemann_components": check_riemann,
    "cotton_twist_residual": check_cotton,
    "criterion_integral": check_criterion,
    "lie_residual": check_lie,
    "transformed_scalar": check_transformed_scalar,
    "homothety_scaling": check_homothety,
    "gate_checks": check_gates,
    "theorem_premises": check_premises,
    "slice_constraints": check_slice,
    "einstein_type": check_einstein,
    "ckv_admission": check_admission,
    "sheet_ckv": check_sheet_ckv,
    "shear_ckv": _state_ckv("shear", ckv_mod.build_shear_ckv),
    "energy_ckv": _state_ckv("energy", ckv_mod.build_energy_ckv),
    "wconst_ckv": check_wconst,
}


def run_check(name, ctx, params=None):
    """Run one check; module errors become an ``error`` entry."""
    try:
        return CHECKS[name](ctx, params or {})
    except (SliceconfError, ArithmeticError) as exc:
        return [{"name": name, "status": "error", "pass": False, "max_residual": None,
                 "tolerance": None, "notes": {"error": type(exc).__name__, "message": str(exc)}}]
