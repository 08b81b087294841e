"""Named reference slices with closed-form metrics and states.

Each preset bundles a grid, optionally a warped metric for the oracle, a
covariant state, a conformal factor and a set of tags.  Tags are
re-derived from the data when a preset is loaded, and a mismatch with the
declared tags is reported as a catalog error.
"""

import os
from dataclasses import dataclass

import numpy as np

from .conformal import ConformalFactor
from .curvature import alpha_beta_of
from .errors import CatalogError, ConfigError
from .lrs import slice_constraint_residuals
from .oracle import WarpedMetric3, frame_geometry
from .profiles import Grid, Profile, SliceState, as_profile

__all__ = ["Preset", "DEFAULT_N", "DEFAULT_EPS", "TAGS", "pole_margin", "list_presets",
           "describe_preset", "load_preset", "build_scenario"]

DEFAULT_N = 2001
DEFAULT_EPS = 0.05
TAGS = ("einstein", "compact", "physical", "time_symmetric")
TAG_TOL = 1e-8

_COT = {"expr": "2*cos(chi)/sin(chi)",
        "derivs": ["-2/sin(chi)**2", "4*cos(chi)/sin(chi)**3", "-(8*cos(chi)**2 + 4)/sin(chi)**4"]}
_COTH = {"expr": "2*cosh(chi)/sinh(chi)",
         "derivs": ["-2/sinh(chi)**2", "4*cosh(chi)/sinh(chi)**3",
                    "-(8*cosh(chi)**2 - 4)/sinh(chi)**4"]}
_INV = {"expr": "2/chi", "derivs": ["-2/chi**2", "4/chi**3", "-12/chi**4"]}

_CATALOG = {
    "unit_s3": {
        "description": "unit round three-sphere, static slice with rho = 3",
        "domain": "poles",
        "metric": {"B": "1", "F": "sin(chi)", "k": 1, "compact": True},
        "state": {"rho": 3.0, "p": -1.0, "phi": _COT},
        "factor": {"expr": "cos(chi)", "derivs": ["-sin(chi)", "-cos(chi)", "sin(chi)"]},
        "tags": ("einstein", "compact", "physical", "time_symmetric"),
    },
    "flat": {
        "description": "flat space in spherical coordinates, vacuum static slice",
        "domain": "poles",
        "metric": {"B": "1", "F": "chi", "k": 1, "compact": False},
        "state": {"phi": _INV},
        "factor": 1.0,
        "tags": ("einstein", "physical", "time_symmetric"),
    },
    "hyperbolic": {
        "description": "hyperbolic space with round sheets, static slice with rho = -3",
        "domain": "poles",
        "metric": {"B": "1", "F": "sinh(chi)", "k": 1, "compact": False},
        "state": {"rho": -3.0, "p": 1.0, "phi": _COTH},
        "tags": ("einstein", "physical", "time_symmetric"),
    },
    "de_sitter_slice": {
        "description": "flat slice of de Sitter space in planar coordinates",
        "domain": "poles",
        "metric": {"B": "1", "F": "1", "k": 0, "compact": False},
        "state": {"Theta": 3.0, "rho": 3.0, "p": -3.0},
        "tags": ("einstein", "physical"),
    },
    "einstein_negrho": {
        "description": "Einstein slice with negative energy density and constant sheet expansion",
        "domain": "poles",
        "metric": {"B": "1", "F": "exp(chi)", "k": 0, "compact": False},
        "state": {"rho": -3.0, "p": 3.0, "phi": 2.0, "A": 1.0},
        "tags": ("einstein", "physical", "time_symmetric"),
    },
    "lemma_slice": {
        "description": "algebraic state satisfying every consequence of an axial conformal Killing vector",
        "domain": "poles",
        "state": {"rho": 1.0, "p": 0.0, "Pi": 2.0, "A": 1.0, "phi": 2.0},
        "tags": ("time_symmetric",),
    },
    "ltb_like": {
        "description": "inhomogeneous non-Einstein warped slice, kept away from its conical tip",
        "domain": (0.5, 3.0),
        "metric": {"B": "1", "F": "chi + 0.1*sin(chi)", "k": 1, "compact": False},
        "tags": (),
    },
}


def pole_margin(eps=None):
    """Distance kept from the poles, from the argument or ``SLICECONF_EPS``."""
    if eps is not None:
        return float(eps)
    raw = os.environ.get("SLICECONF_EPS")
    if raw is None or raw == "":
        return DEFAULT_EPS
    try:
        val = float(raw)
    except ValueError:
        raise ConfigError(f"SLICECONF_EPS must be a number, got {raw!r}") from None
    if not 0 < val < 1:
        raise ConfigError("SLICECONF_EPS must lie in (0, 1)")
    return val


@dataclass(frozen=True, eq=False)
class Preset:
    """A reference slice ready for the checks.

    Attributes
    ----------
    name : str
    grid : Grid
    metric : WarpedMetric3 or None
    state : SliceState or None
    factor : ConformalFactor or None
    tags : frozenset of str
    description : str
    """

    name: str
    grid: Grid
    metric: object
    state: object
    factor: object
    tags: frozenset
    description: str = ""

    def ricci(self):
        """Ricci scalars from the state if present, else from the oracle."""
        if self.state is not None:
            return alpha_beta_of(self.state)
        from .curvature import RicciData

        fg = frame_geometry(self.metric)
        return RicciData(fg.alpha, fg.beta)

    def phi_sheet(self):
        """Sheet expansion from the state if present, else from the oracle."""
        if self.state is not None:
            return self.state.phi
        return frame_geometry(self.metric).phi_sheet


def list_presets():
    return sorted(_CATALOG)


def describe_preset(name):
    """Catalog entry as plain data."""
    if name not in _CATALOG:
        raise CatalogError(f"unknown preset {name!r}; known: {', '.join(list_presets())}")
    entry = dict(_CATALOG[name])
    entry["tags"] = sorted(entry["tags"])
    entry["domain"] = list(entry["domain"]) if isinstance(entry["domain"], tuple) else entry["domain"]
    return {"name": name, **entry}


def _grid(domain, n, fd_order, eps):
    if isinstance(domain, (tuple, list)):
        a, b = domain
    else:
        a, b = eps, np.pi - eps
    return Grid(a, b, n, "interval", fd_order)


def _metric(entry, grid, eps):
    B = as_profile(grid, entry.get("B", "1"))
    F = as_profile(grid, entry["F"])
    k = int(entry.get("k", 1))
    compact = bool(entry.get("compact", False))
    if compact:
        if F.expr is None:
            raise CatalogError("a compact metric needs a closed-form F")
        ends = F.expr(np.array([grid.chi_min - eps, grid.chi_max + eps]))
        if np.max(np.abs(ends)) > 1e-9 or k != 1:
            raise CatalogError("compact metric must close with round sheets at both poles")
    return WarpedMetric3(B, F, k, compact)


def _derive_tags(metric, state):
    tags = set()
    if state is not None:
        r = alpha_beta_of(state)
        if r.difference.max_abs() <= TAG_TOL:
            tags.add("einstein")
        res = slice_constraint_residuals(state)
        if max(v.max_abs() for v in res.values()) <= TAG_TOL:
            tags.add("physical")
        if state.Theta.max_abs() <= TAG_TOL and state.Sigma.max_abs() <= TAG_TOL:
            tags.add("time_symmetric")
    elif metric is not None:
        fg = frame_geometry(metric)
        if (fg.alpha - fg.beta).max_abs() <= 1e-6:
            tags.add("einstein")
    if metric is not None and metric.compact:
        tags.add("compact")
    return frozenset(tags)


def build_scenario(name, entry, n=DEFAULT_N, fd_order=4, eps=None, grid=None):
    """Assemble a preset-like bundle from a plain mapping.

    ``entry`` may hold ``domain`` (``"poles"`` or ``[a, b]``), ``metric``
    (``B``, ``F``, ``k``, ``compact``), ``state`` (field -> number,
    expression or ``{"expr", "derivs"}``), ``factor`` and ``Lambda``.
    """
    eps = pole_margin(eps)
    if grid is None:
        grid = _grid(entry.get("domain", "poles"), n, fd_order, eps)
    metric = _metric(entry["metric"], grid, eps) if entry.get("metric") else None
    state = None
    if entry.get("state") is not None:
        state = SliceState.build(grid, Lambda=entry.get("Lambda", 0.0), **entry["state"])
    if metric is None and state is None:
        raise CatalogError(f"{name}: a scenario needs a metric or a state")
    factor = None
    if entry.get("factor") is not None:
        factor = ConformalFactor.from_profile(as_profile(grid, entry["factor"]))
    tags = _derive_tags(metric, state)
    return Preset(name, grid, metric, state, factor, tags, entry.get("description", ""))


def _merge(base, overrides):
    out = dict(base)
    for key, val in overrides.items():
        if key in ("metric", "state") and isinstance(val, dict) and isinstance(out.get(key), dict):
            merged = dict(out[key])
            merged.update(val)
            out[key] = merged
        else:
            out[key] = val
    return out


def load_preset(name, n=None, fd_order=4, eps=None, overrides=None):
    """Load a named preset on a fresh grid.

    Parameters
    ----------
    name : str
    n : int, optional
        Number of grid nodes, 2001 by default.
    fd_order : {2, 4}
    eps : float, optional
        Pole margin; falls back to ``SLICECONF_EPS`` and then 0.05.
    overrides : dict, optional
        Field-by-field replacements of the catalog entry.  Tags are then
        re-derived instead of validated.

    Raises
    ------
    CatalogError
        Unknown name, or declared tags contradicting the data.
    """
    if name not in _CATALOG:
        raise CatalogError(f"unknown preset {name!r}; known: {', '.join(list_presets())}")
    base = _CATALOG[name]
    entry = _merge(base, overrides) if overrides else base
    p = build_scenario(name, entry, n or DEFAULT_N, fd_order, eps)
    if not overrides:
        declared = frozenset(base["tags"])
        if declared != p.tags:
            raise CatalogError(
                f"{name}: declared tags {sorted(declared)} but data gives {sorted(p.tags)}")
    return p

