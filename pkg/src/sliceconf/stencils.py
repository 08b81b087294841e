"""Exact finite-difference and quadrature weights.

Weights are generated with Fornberg's recursion in rational arithmetic and
cached, then handed out as float64 arrays (or as exact fractions for the
extended-precision path).
"""

from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "fd_weights",
    "centered_offsets",
    "one_sided_width",
    "interval_weights",
    "apply_derivative",
]


@lru_cache(maxsize=None)
def fd_weights(offsets, m):
    """Weights for the ``m``-th derivative at 0 from samples at ``offsets``.

    Parameters
    ----------
    offsets : tuple of int
        Stencil node positions in units of the spacing.
    m : int
        Derivative order.

    Returns
    -------
    tuple of Fraction
        One weight per node; divide the weighted sum by ``h**m``.
    """
    x = [Fraction(o) for o in offsets]
    n = len(x)
    if m >= n:
        raise ValueError("stencil too short for the requested derivative")
    c = [[Fraction(0)] * (m + 1) for _ in range(n)]
    c[0][0] = Fraction(1)
    c1 = Fraction(1)
    c4 = x[0]
    for i in range(1, n):
        mn = min(i, m)
        c2 = Fraction(1)
        c5 = c4
        c4 = x[i]
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2
            for k in range(mn, 0, -1):
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3
            c[j][0] = c4 * c[j][0] / c3
        c1 = c2
    return tuple(c[j][m] for j in range(n))


def centered_offsets(m, accuracy):
    """Symmetric stencil reaching ``accuracy`` for derivative ``m``."""
    half = (m + 1) // 2 + accuracy // 2 - 1
    return tuple(range(-half, half + 1))


def one_sided_width(m, accuracy):
    """Number of nodes of the boundary stencils."""
    return m + accuracy


@lru_cache(maxsize=None)
def interval_weights(points, row):
    """Integral over one cell of the Lagrange interpolant through ``points`` nodes.

    The nodes sit at ``0..points-1`` and the cell is ``[row, row+1]`` in
    units of the spacing.  Integrating the interpolant gives a cell rule of
    order ``points``.

    Returns
    -------
    tuple of Fraction
    """
    nodes = list(range(points))
    out = []
    for j in nodes:
        # basis polynomial coefficients, lowest order first
        poly = [Fraction(1)]
        denom = Fraction(1)
        for i in nodes:
            if i == j:
                continue
            poly = [Fraction(0)] + poly
            for k in range(len(poly) - 1):
                poly[k] -= i * poly[k + 1]
            denom *= j - i
        total = sum(
            coef * (Fraction(row + 1) ** (k + 1) - Fraction(row) ** (k + 1)) / (k + 1)
            for k, coef in enumerate(poly)
        )
        out.append(total / denom)
    return tuple(out)


def _float(weights):
    return np.array([float(w) for w in weights])


def apply_derivative(values, h, m, accuracy, periodic=False):
    """``m``-th derivative of uniformly spaced float samples.

    Interior nodes use the centered stencil; nodes too close to an end of a
    non-periodic grid use one-sided stencils of the same formal accuracy.

    Parameters
    ----------
    values : ndarray
        Samples, shape ``(n,)``.
    h : float
        Grid spacing.
    m : int
        Derivative order (1, 2 or 3 in practice).
    accuracy : int
        Formal order of the truncation error.
    periodic : bool
        Wrap the stencil around the ends.
    """
    v = np.asarray(values, dtype=float)
    n = v.size
    offs = centered_offsets(m, accuracy)
    w = _float(fd_weights(offs, m))
    half = offs[-1]
    out = np.zeros(n)
    if periodic:
        for o, wk in zip(offs, w):
            out += wk * np.roll(v, -o)
        return out / h**m
    width = one_sided_width(m, accuracy)
    if n < max(width, 2 * half + 1):
        raise ValueError("grid too small for the stencil")
    for o, wk in zip(offs, w):
        out[half:n - half] += wk * v[half + o:n - half + o]
    for i in range(half):
        wl = _float(fd_weights(tuple(j - i for j in range(width)), m))
        out[i] = wl @ v[:width]
        wr = _float(fd_weights(tuple(j - (width - 1 - i) for j in range(width)), m))
        out[n - 1 - i] = wr @ v[n - width:]
    return out / h**m
