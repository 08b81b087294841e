"""Sampled scalar profiles along the axial coordinate.

Every covariant scalar of an axially reduced slice depends on the single
coordinate ``chi`` only, so a scalar is stored as its samples on a uniform
:class:`Grid`.  The axial derivative ``hat`` is a finite difference of
configurable order, or the exact derivative when the profile was built
from a closed form with known derivatives.  Cumulative integrals use
per-cell Lagrange rules two orders above the differentiation order so the
quadrature never limits the derivative accuracy.
"""

import csv
import math
from dataclasses import dataclass, field, fields

import numpy as np
from scipy.interpolate import BarycentricInterpolator

from .errors import DomainError, GridMismatchError, InvalidProfileError
from .expressions import Expr
from .stencils import apply_derivative, interval_weights

__all__ = [
    "Grid",
    "Analytic",
    "Profile",
    "SliceState",
    "STATE_FIELDS",
    "as_profile",
    "hat",
    "derivative",
    "integrate_from",
    "definite_integral",
    "is_constant",
    "write_csv",
    "read_csv",
]


@dataclass(frozen=True)
class Grid:
    """Uniform sampling of ``chi``.

    Parameters
    ----------
    chi_min, chi_max : float
        End points.  For an ``"interval"`` both are samples; for
        ``"periodic"`` the right end is identified with the left one and is
        not sampled.
    n : int
        Number of samples, at least 16.
    topology : {"interval", "periodic"}
    fd_order : {2, 4}
        Formal order of the finite differences behind :func:`hat`.
    """

    chi_min: float
    chi_max: float
    n: int
    topology: str = "interval"
    fd_order: int = 4

    def __post_init__(self):
        if self.topology not in ("interval", "periodic"):
            raise InvalidProfileError(f"unknown topology {self.topology!r}")
        if self.fd_order not in (2, 4):
            raise InvalidProfileError("fd_order must be 2 or 4")
        if not isinstance(self.n, (int, np.integer)) or self.n < 16:
            raise InvalidProfileError("a grid needs at least 16 samples")
        if not (math.isfinite(self.chi_min) and math.isfinite(self.chi_max)):
            raise InvalidProfileError("grid end points must be finite")
        if not self.chi_max > self.chi_min:
            raise InvalidProfileError("chi_max must exceed chi_min")
        object.__setattr__(self, "chi_min", float(self.chi_min))
        object.__setattr__(self, "chi_max", float(self.chi_max))
        object.__setattr__(self, "n", int(self.n))

    @property
    def periodic(self):
        return self.topology == "periodic"

    @property
    def h(self):
        span = self.chi_max - self.chi_min
        return span / self.n if self.periodic else span / (self.n - 1)

    @property
    def chi(self):
        if self.periodic:
            return self.chi_min + self.h * np.arange(self.n)
        return np.linspace(self.chi_min, self.chi_max, self.n)

    @property
    def quad_order(self):
        """Order of the cumulative quadrature rule."""
        return self.fd_order + 2

    def with_n(self, n):
        return Grid(self.chi_min, self.chi_max, n, self.topology, self.fd_order)

    def with_fd_order(self, fd_order):
        return Grid(self.chi_min, self.chi_max, self.n, self.topology, fd_order)

    def as_dict(self):
        return {
            "chi_min": self.chi_min,
            "chi_max": self.chi_max,
            "n": self.n,
            "topology": self.topology,
            "fd_order": self.fd_order,
        }


@dataclass(frozen=True)
class Analytic:
    """Closed form of a profile and of its first few derivatives.

    ``derivs[k]`` is the ``k``-th derivative with respect to ``chi``;
    ``derivs[0]`` is the function itself.
    """

    derivs: tuple

    def __post_init__(self):
        object.__setattr__(self, "derivs", tuple(Expr(d) for d in self.derivs))
        if not self.derivs:
            raise InvalidProfileError("an analytic profile needs its own expression")

    @property
    def expr(self):
        return self.derivs[0]

    def shifted(self):
        """Closed form of the derivative, or None when it is unknown."""
        return Analytic(self.derivs[1:]) if len(self.derivs) > 1 else None


def _readonly(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Profile:
    """A scalar sampled on a grid.

    Parameters
    ----------
    grid : Grid
    values : array_like
        Finite samples, one per grid node.
    analytic : Analytic, optional
        Closed form used for exact derivatives and for extended-precision
        resampling by the curvature oracle.

    Notes
    -----
    Arithmetic between profiles is pointwise and requires identical
    grids.  Closed forms do not survive arithmetic.
    """

    grid: Grid
    values: np.ndarray
    analytic: Analytic = field(default=None)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim == 0:
            v = np.full(self.grid.n, float(v))
        if v.shape != (self.grid.n,):
            raise InvalidProfileError(
                f"expected {self.grid.n} samples, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise InvalidProfileError("profile samples must be finite")
        object.__setattr__(self, "values", _readonly(v))

    # constructors -----------------------------------------------------
    @classmethod
    def from_expr(cls, grid, source, derivs=()):
        """Sample a closed form; optional ``derivs`` are its derivatives."""
        an = Analytic((source, *derivs))
        return cls(grid, an.expr(grid.chi), an)

    @classmethod
    def constant(cls, grid, c):
        c = float(c)
        return cls(grid, np.full(grid.n, c), Analytic((repr(c), "0", "0", "0")))

    @classmethod
    def zeros(cls, grid):
        return cls.constant(grid, 0.0)

    # helpers ----------------------------------------------------------
    @property
    def chi(self):
        return self.grid.chi

    @property
    def expr(self):
        return None if self.analytic is None else self.analytic.expr

    def max_abs(self):
        return float(np.max(np.abs(self.values)))

    def map(self, fn):
        """Apply an elementwise numpy function, dropping the closed form."""
        return Profile(self.grid, fn(self.values))

    def _other(self, other):
        if isinstance(other, Profile):
            if other.grid != self.grid:
                raise GridMismatchError("profiles live on different grids")
            return other.values
        return other

    def _binary(self, other, op):
        if not isinstance(other, (Profile, int, float, np.floating, np.integer)):
            return NotImplemented
        with np.errstate(all="ignore"):
            out = op(self.values, self._other(other))
        return Profile(self.grid, out)

    def __add__(self, o):
        return self._binary(o, np.add)

    def __radd__(self, o):
        return self._binary(o, lambda a, b: b + a)

    def __sub__(self, o):
        return self._binary(o, np.subtract)

    def __rsub__(self, o):
        return self._binary(o, lambda a, b: b - a)

    def __mul__(self, o):
        return self._binary(o, np.multiply)

    def __rmul__(self, o):
        return self._binary(o, lambda a, b: b * a)

    def __truediv__(self, o):
        return self._binary(o, np.divide)

    def __rtruediv__(self, o):
        return self._binary(o, lambda a, b: b / a)

    def __pow__(self, o):
        return self._binary(o, np.power)

    def __neg__(self):
        return Profile(self.grid, -self.values)

    def __abs__(self):
        return Profile(self.grid, np.abs(self.values))

    def __len__(self):
        return self.grid.n

    def __repr__(self):
        tag = f", expr={self.expr.source!r}" if self.expr is not None else ""
        return f"Profile(n={self.grid.n}, max|v|={self.max_abs():.6g}{tag})"


def as_profile(grid, value):
    """Coerce a number, expression string, mapping or profile to a Profile.

    A mapping has the form ``{"expr": "...", "derivs": ["...", ...]}``.
    """
    if isinstance(value, Profile):
        if value.grid != grid:
            raise GridMismatchError("profile lives on a different grid")
        return value
    if isinstance(value, (int, float, np.integer, np.floating)) and not isinstance(value, bool):
        return Profile.constant(grid, value)
    if isinstance(value, str):
        return Profile.from_expr(grid, value)
    if isinstance(value, dict) and "expr" in value:
        return Profile.from_expr(grid, value["expr"], tuple(value.get("derivs", ())))
    if isinstance(value, (list, tuple, np.ndarray)):
        return Profile(grid, np.asarray(value, dtype=float))
    raise InvalidProfileError(f"cannot interpret {value!r} as a profile")


def derivative(p, m=1):
    """``m``-th axial derivative of a profile.

    Closed-form derivatives are used when available.  Samples that are
    exactly constant differentiate to exact zeros.
    """
    an = p.analytic
    for _ in range(m):
        if an is None:
            break
        an = an.shifted()
    if an is not None:
        return Profile(p.grid, an.expr(p.grid.chi), an)
    v = p.values
    if np.all(v == v[0]):
        return Profile(p.grid, np.zeros_like(v))
    g = p.grid
    return Profile(g, apply_derivative(v, g.h, m, g.fd_order, g.periodic))


def hat(p):
    """Axial derivative ``d/dchi`` of a profile.

    Examples
    --------
    >>> g = Grid(0.1, 3.0, 2001)
    >>> err = hat(Profile(g, np.sin(g.chi))).values - np.cos(g.chi)
    >>> bool(abs(err).max() < 1e-11)
    True
    """
    return derivative(p, 1)


def _cumulative(values, grid):
    """Integral from the first node to every node."""
    n, h = grid.n, grid.h
    q = grid.quad_order
    shift = q // 2 - 1
    cells = n if grid.periodic else n - 1
    inc = np.zeros(cells)
    if grid.periodic:
        for k in range(q):
            inc += float(interval_weights(q, shift)[k]) * np.roll(values, shift - k)
    else:
        starts = np.clip(np.arange(cells) - shift, 0, n - q)
        rows = np.arange(cells) - starts
        for row in np.unique(rows):
            w = np.array([float(x) for x in interval_weights(q, int(row))])
            sel = np.nonzero(rows == row)[0]
            idx = starts[sel][:, None] + np.arange(q)[None, :]
            inc[sel] = values[idx] @ w
    out = np.concatenate([[0.0], np.cumsum(inc * h)])
    return out


def integrate_from(p, chi0):
    """Antiderivative of ``p`` that vanishes at ``chi0``.

    Parameters
    ----------
    p : Profile
    chi0 : float
        Anchor inside the grid.  Off-node anchors are handled by local
        polynomial interpolation of the cumulative integral.

    Returns
    -------
    Profile
    """
    g = p.grid
    hi = g.chi_max
    if not (g.chi_min <= chi0 <= hi):
        raise DomainError(f"anchor {chi0} lies outside [{g.chi_min}, {hi}]")
    cum = _cumulative(p.values, g)
    chi = g.chi
    if g.periodic:
        total = cum[-1]
        # a nonzero period total makes the antiderivative multivalued; the
        # branch continuing from chi_min is returned
        cum = cum[:-1]
        chi_ext = np.concatenate([chi, [hi]])
        cum_ext = np.concatenate([cum, [total]])
    else:
        chi_ext, cum_ext = chi, cum
    pos = (chi0 - g.chi_min) / g.h
    k = int(round(pos))
    if abs(pos - k) < 1e-9:
        anchor = cum_ext[k]
    else:
        m = g.quad_order + 1
        lo = int(np.clip(int(np.floor(pos)) - m // 2 + 1, 0, chi_ext.size - m))
        anchor = float(BarycentricInterpolator(chi_ext[lo:lo + m], cum_ext[lo:lo + m])(chi0))
    return Profile(g, cum - anchor)


def definite_integral(p, weight=None):
    """Integral of ``p`` (times an optional weight profile) over the grid."""
    v = p.values if weight is None else (p * weight).values
    g = p.grid
    if g.periodic:
        return float(g.h * v.sum())
    return float(_cumulative(v, g)[-1])


def is_constant(p, tol):
    """Test whether a profile is constant.

    The deviation is ``max|p - mean(p)| / (1 + |mean(p)|)``.

    Returns
    -------
    (bool, float)
        Verdict and deviation.
    """
    v = p.values
    mean = float(v.mean())
    dev = float(np.max(np.abs(v - mean)) / (1.0 + abs(mean)))
    return dev <= tol, dev


_FMT = "{:.17g}"


def write_csv(path, grid, columns):
    """Write columns sharing a grid as CSV with a ``chi`` first column.

    Parameters
    ----------
    path : str or Path
    grid : Grid
    columns : dict of str -> Profile or ndarray
        Written in insertion order.  A single column is conventionally
        named ``value``.
    """
    names = list(columns)
    data = [np.asarray(c.values if isinstance(c, Profile) else c, dtype=float)
            for c in columns.values()]
    chi = grid.chi
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["chi", *names])
        for i in range(grid.n):
            w.writerow([_FMT.format(chi[i]), *(_FMT.format(d[i]) for d in data)])


def read_csv(path, grid=None, topology="interval", fd_order=4):
    """Read a CSV written by :func:`write_csv`.

    Returns
    -------
    (Grid, dict of str -> Profile)
    """
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    if not header or header[0] != "chi":
        raise InvalidProfileError("first CSV column must be chi")
    arr = np.array([[float(x) for x in r] for r in body])
    chi = arr[:, 0]
    if grid is None:
        if topology == "periodic":
            h = chi[1] - chi[0]
            grid = Grid(chi[0], chi[-1] + h, chi.size, topology, fd_order)
        else:
            grid = Grid(chi[0], chi[-1], chi.size, topology, fd_order)
    if chi.size != grid.n or not np.allclose(chi, grid.chi, rtol=0, atol=1e-12 * (1 + abs(grid.chi_max))):
        raise GridMismatchError("CSV abscissae do not match the grid")
    return grid, {name: Profile(grid, arr[:, j + 1]) for j, name in enumerate(header[1:])}


STATE_FIELDS = ("A", "Theta", "phi", "Sigma", "E", "H", "rho", "p", "Pi", "Q", "Omega", "xi")


@dataclass(frozen=True, eq=False)
class SliceState:
    """Covariant scalars of a locally rotationally symmetric slice.

    Attributes
    ----------
    A : acceleration of the fluid flow along the axial direction
    Theta : expansion of the flow
    phi : expansion of the two-dimensional sheets (sheet expansion)
    Sigma : shear scalar
    E, H : electric and magnetic Weyl scalars
    rho, p : energy density and isotropic pressure
    Pi : anisotropic stress
    Q : heat flux
    Omega : vorticity
    xi : twist of the sheets
    Lambda : cosmological constant (a number)
    """

    A: Profile
    Theta: Profile
    phi: Profile
    Sigma: Profile
    E: Profile
    H: Profile
    rho: Profile
    p: Profile
    Pi: Profile
    Q: Profile
    Omega: Profile
    xi: Profile
    Lambda: float = 0.0

    def __post_init__(self):
        grid = self.A.grid
        for f in STATE_FIELDS:
            v = getattr(self, f)
            if not isinstance(v, Profile):
                raise InvalidProfileError(f"state field {f} must be a Profile")
            if v.grid != grid:
                raise GridMismatchError(f"state field {f} lives on a different grid")
        object.__setattr__(self, "Lambda", float(self.Lambda))

    @property
    def grid(self):
        return self.A.grid

    @classmethod
    def build(cls, grid, Lambda=0.0, **scalars):
        """Build a state from numbers, expressions or profiles; omitted fields are zero."""
        unknown = set(scalars) - set(STATE_FIELDS)
        if unknown:
            raise InvalidProfileError(f"unknown state fields {sorted(unknown)}")
        kw = {f: as_profile(grid, scalars.get(f, 0.0)) for f in STATE_FIELDS}
        return cls(Lambda=Lambda, **kw)

    def replace(self, **changes):
        kw = {f.name: getattr(self, f.name) for f in fields(self)}
        for k, v in changes.items():
            if k == "Lambda":
                kw[k] = float(v)
            elif k in STATE_FIELDS:
                kw[k] = as_profile(self.grid, v)
            else:
                raise InvalidProfileError(f"unknown state field {k}")
        return SliceState(**kw)

    def items(self):
        return [(f, getattr(self, f)) for f in STATE_FIELDS]
