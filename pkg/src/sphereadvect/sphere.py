"""Geodesic interpolation of ordered points on the unit sphere.

Two layers live here:

* scalar reference functions (``slerp``, ``sider2``, ``sider3``,
  ``seno2_eval``, ``seno3_eval``) written directly on top of the quaternion
  algebra, one stencil at a time;
* ``seno_batch`` / ``slerp_batch``, which evaluate many queries on a periodic
  curve at once and dispatch to the compiled kernel or its numpy fallback.

SIDER parameters are fixed to ``t1 = 0, t3 = 1`` (quadratic) and
``t1 = 0, t4 = 1`` (cubic). SENO picks, among the candidates covering the
target cell, the one with the smallest discrete arc length over that cell.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from . import _backend
from .exceptions import DomainError
from .quaternion import Quaternion, hamilton_product, inverse, power_map

ANTIPODAL_TOL = 1e-9
COINCIDENT_TOL = 1e-12
TIE_TOL = 1e-14
DEFAULT_SAMPLES = 16

# candidate preference used to break variation ties: most centred first
_TIE_ORDER = {2: (0, 1), 3: (1, 0, 2)}


def _vec(p) -> np.ndarray:
    return np.asarray(p, dtype=float).reshape(3)


def geodesic_distance(pa, pb) -> float:
    """Great-circle angle between two unit vectors, in ``[0, pi]``."""
    pa, pb = _vec(pa), _vec(pb)
    return math.atan2(float(np.linalg.norm(np.cross(pa, pb))), float(pa @ pb))


def slerp(pa, pb, t: float) -> np.ndarray:
    """Vector part of ``q_a (q_a^-1 q_b)^t`` with ``q = (0, p)``.

    ``t`` outside ``[0, 1]`` extrapolates along the same great circle.
    """
    pa, pb = _vec(pa), _vec(pb)
    if pa @ pb < -1.0 + ANTIPODAL_TOL:
        raise DomainError("antipodal pair, geodesic not unique")
    if t == 0.0 or geodesic_distance(pa, pb) < COINCIDENT_TOL:
        return pa.copy()
    if t == 1.0:
        return pb.copy()
    qa, qb = Quaternion.pure(pa), Quaternion.pure(pb)
    out = hamilton_product(qa, power_map(hamilton_product(inverse(qa), qb), t)).vec
    return out / np.linalg.norm(out)


def sider2_controls(p1, p2, p3) -> tuple[np.ndarray, np.ndarray]:
    """Extrapolated control points ``(c2a, c2b)`` of the quadratic curve."""
    try:
        c2a = slerp(p3, p2, 2.0)
    except DomainError as exc:
        raise DomainError("SIDER2 control c2a: p3 and p2 are antipodal") from exc
    try:
        c2b = slerp(p1, p2, 2.0)
    except DomainError as exc:
        raise DomainError("SIDER2 control c2b: p1 and p2 are antipodal") from exc
    return c2a, c2b


def sider2(p1, p2, p3, t: float) -> np.ndarray:
    """Quadratic spherical curve through ``p1, p2, p3`` at ``t = 0, 1/2, 1``."""
    c2a, c2b = sider2_controls(p1, p2, p3)
    try:
        left = slerp(p1, c2a, t)
    except DomainError as exc:
        raise DomainError("SIDER2: p1 and c2a are antipodal") from exc
    try:
        right = slerp(c2b, p3, t)
    except DomainError as exc:
        raise DomainError("SIDER2: c2b and p3 are antipodal") from exc
    try:
        return slerp(left, right, t)
    except DomainError as exc:
        raise DomainError(f"SIDER2: inner curves antipodal at t={t}") from exc


def sider3(p1, p2, p3, p4, t: float) -> np.ndarray:
    """Cubic spherical curve through four points at ``t = 0, 1/3, 2/3, 1``."""
    a = sider2(p1, p2, p3, 1.5 * t)
    b = sider2(p2, p3, p4, 0.5 * (3.0 * t - 1.0))
    try:
        return slerp(a, b, t)
    except DomainError as exc:
        raise DomainError(f"SIDER3: sub-curves antipodal at t={t}") from exc


def curve_variation(
    candidate: Callable[[float], np.ndarray],
    r_lo: float,
    r_hi: float,
    samples: int = DEFAULT_SAMPLES,
) -> float:
    """Discrete arc length of ``candidate`` over ``[r_lo, r_hi]``."""
    if samples < 2:
        raise ValueError("need at least two samples")
    if not r_lo < r_hi:
        raise ValueError("empty parameter interval")
    pts = [candidate(r) for r in np.linspace(r_lo, r_hi, samples)]
    return float(sum(geodesic_distance(a, b) for a, b in zip(pts[:-1], pts[1:])))


def _candidates(stencil: np.ndarray, order: int):
    """(curve, r_offset) pairs for the cell between the two middle points."""
    if order == 2:
        return [
            (lambda r, s=stencil[m : m + 3]: sider2(*s, r), (1 - m) / 2) for m in range(2)
        ]
    return [(lambda r, s=stencil[m : m + 4]: sider3(*s, r), (2 - m) / 3) for m in range(3)]


def seno_select(stencil, order: int, samples: int = DEFAULT_SAMPLES) -> int:
    """Index of the least-variation candidate (0 = leftmost stencil)."""
    stencil = np.asarray(stencil, dtype=float)
    if stencil.shape != (2 * order, 3):
        raise ValueError(f"SENO{order} needs {2 * order} stencil points")
    var = [
        curve_variation(curve, off, off + 1.0 / order, samples)
        for curve, off in _candidates(stencil, order)
    ]
    best = min(var)
    for m in _TIE_ORDER[order]:
        if var[m] <= best + TIE_TOL:
            return m
    raise AssertionError("unreachable")


def _seno_eval(stencil, lam: float, order: int, samples: int) -> np.ndarray:
    stencil = np.asarray(stencil, dtype=float)
    m = seno_select(stencil, order, samples)
    curve, off = _candidates(stencil, order)[m]
    return curve(off + lam / order)


def seno2_eval(stencil, lam: float, samples: int = DEFAULT_SAMPLES) -> np.ndarray:
    """SENO2 value at local coordinate ``lam`` in the cell ``[p_j, p_{j+1}]``.

    ``stencil`` holds ``p_{j-1} .. p_{j+2}``.
    """
    return _seno_eval(stencil, lam, 2, samples)


def seno3_eval(stencil, lam: float, samples: int = DEFAULT_SAMPLES) -> np.ndarray:
    """SENO3 value at ``lam``; ``stencil`` holds ``p_{j-2} .. p_{j+3}``."""
    return _seno_eval(stencil, lam, 3, samples)


# batched evaluation on periodic curves


def slerp_batch(a, b, t) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    t = np.ascontiguousarray(np.broadcast_to(t, a.shape[:1]), dtype=float)
    return _backend.impl.slerp_batch(a, b, t)


def seno_batch(points, cells, lam, order: int, samples: int = DEFAULT_SAMPLES):
    """Evaluate SENO``order`` on a periodic curve for many queries at once.

    Query ``k`` sits in cell ``cells[k]`` (between points ``j`` and ``j+1``,
    indices mod N) at local coordinate ``lam[k]``. ``order`` 1 means plain
    SLERP. Returns ``(values, choice)``; ``choice[k]`` is the selected
    candidate (always 0 for ``order == 1``).
    """
    if order not in (1, 2, 3):
        raise ValueError(f"unsupported SENO order {order}")
    if samples < 2:
        raise ValueError("need at least two variation samples")
    points = np.ascontiguousarray(points, dtype=float)
    n = points.shape[0]
    if n < 2 * order:
        raise ValueError(f"curve too short for SENO{order}: {n} points")
    cells = np.ascontiguousarray(np.mod(cells, n), dtype=np.int64)
    lam = np.ascontiguousarray(lam, dtype=float)
    return _backend.impl.seno_batch(points, cells, lam, order, samples)
