"""Scalar interpolation on a uniform periodic grid ``s_i = i / N``.

Used componentwise by the baseline schemes and for flow-map composition.
Values may carry trailing axes: ``y`` has shape ``(N, ...)``.
"""

import numpy as np


def locate(x, n):
    """Cell index ``j`` and local coordinate ``lam`` in ``[0, 1]`` of points ``x``.

    ``x`` is taken modulo 1. A point that rounds onto ``s_N == 1`` is placed
    at ``lam = 1`` of the last cell instead of wrapping.
    """
    xn = np.mod(np.asarray(x, dtype=float), 1.0) * n
    j = np.minimum(np.floor(xn).astype(np.int64), n - 1)
    return j, xn - j


def linear(y, x):
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    j, lam = locate(x, n)
    lam = lam.reshape(lam.shape + (1,) * (y.ndim - 1))
    return (1.0 - lam) * y[j] + lam * y[(j + 1) % n]


def pchip_slopes(y):
    """Shape-preserving node slopes (harmonic mean of adjacent secants).

    Slopes are per unit index (multiply by ``N`` for d/ds). Periodic data.
    """
    y = np.asarray(y, dtype=float)
    delta = np.roll(y, -1, axis=0) - y  # secant of cell i
    prev = np.roll(delta, 1, axis=0)
    same = prev * delta > 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        hm = 2.0 * prev * delta / (prev + delta)
    return np.where(same, hm, 0.0)


def hermite(y, d, x):
    """Cubic Hermite interpolant with node values ``y`` and index slopes ``d``."""
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    j, lam = locate(x, n)
    lam = lam.reshape(lam.shape + (1,) * (y.ndim - 1))
    j1 = (j + 1) % n
    l2 = lam * lam
    l3 = l2 * lam
    h00 = 2 * l3 - 3 * l2 + 1
    h10 = l3 - 2 * l2 + lam
    h01 = -2 * l3 + 3 * l2
    h11 = l3 - l2
    return h00 * y[j] + h10 * d[j] + h01 * y[j1] + h11 * d[j1]


def monotone_cubic(y, x):
    """Periodic shape-preserving piecewise cubic (pchip-style)."""
    return hermite(y, pchip_slopes(y), x)


def cubic(y, x):
    """Periodic four-point Lagrange cubic on nodes ``j-1 .. j+2``."""
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    j, lam = locate(x, n)
    lam = lam.reshape(lam.shape + (1,) * (y.ndim - 1))
    w0 = -lam * (lam - 1) * (lam - 2) / 6
    w1 = (lam + 1) * (lam - 1) * (lam - 2) / 2
    w2 = -(lam + 1) * lam * (lam - 2) / 2
    w3 = (lam + 1) * lam * (lam - 1) / 6
    return w0 * y[(j - 1) % n] + w1 * y[j] + w2 * y[(j + 1) % n] + w3 * y[(j + 2) % n]
