"""Discrete error norms, convergence orders and jump smearing widths."""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError

log = logging.getLogger(__name__)

# errors at or below this are treated as exact and left out of order estimates
ZERO_ERROR = 1e-13


def _pair(curve, exact):
    a = getattr(curve, "points", curve)
    b = getattr(exact, "points", exact)
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"mesh mismatch: {a.shape} vs {b.shape}")
    return a, b


def error_l1(curve, exact) -> float:
    """``ds * sum_i |p_i - q_i|_1`` (left Riemann sum of the L1 error)."""
    a, b = _pair(curve, exact)
    return float(np.abs(a - b).sum() / a.shape[0])


def error_l2(curve, exact) -> float:
    a, b = _pair(curve, exact)
    return float(math.sqrt(((a - b) ** 2).sum() / a.shape[0]))


def z_above(threshold=0.5):
    return lambda exact: exact[:, 2] > threshold


def masked_error(curve, exact, mask=None, norm: str = "l1") -> float:
    """Error restricted to nodes selected by ``mask``.

    ``mask`` is a boolean array or a predicate on the exact ``(N, 3)``
    points; by default nodes whose exact ``z`` exceeds 0.5. The weight per
    node stays ``1/N``.
    """
    a, b = _pair(curve, exact)
    if mask is None:
        mask = z_above(0.5)
    sel = np.asarray(mask(b) if callable(mask) else mask, dtype=bool)
    if not sel.any():
        raise DomainError("error mask selects no grid points")
    d = a[sel] - b[sel]
    if norm == "l1":
        return float(np.abs(d).sum() / a.shape[0])
    if norm == "l2":
        return float(math.sqrt((d**2).sum() / a.shape[0]))
    raise ValueError(f"unknown norm {norm!r}")


def mask_bands(sel) -> int:
    """Number of maximal runs of True in a periodic boolean array."""
    sel = np.asarray(sel, dtype=bool)
    if sel.all():
        return 1
    return int(np.count_nonzero(sel & ~np.roll(sel, 1)))


@dataclass
class OrderEstimate:
    orders: list  # between consecutive rows; None where a row is excluded
    slope: float | None
    excluded: list  # mesh sizes dropped as (numerically) exact


def convergence_order(rows, zero: float = ZERO_ERROR) -> OrderEstimate:
    """Pairwise orders ``log(E_a / E_b) / log(N_b / N_a)`` and the fitted slope.

    ``rows`` is a sequence of ``(N, E)``. The slope is minus the least-squares
    slope of ``log E`` against ``log N``.
    """
    rows = sorted((int(n), float(e)) for n, e in rows)
    if len(rows) < 2:
        raise ValueError("need at least two mesh sizes")
    excluded = [n for n, e in rows if not e > zero]
    if excluded:
        log.info("excluding exact rows from the order estimate: N=%s", excluded)
    orders = []
    for (n0, e0), (n1, e1) in zip(rows[:-1], rows[1:]):
        if e0 > zero and e1 > zero:
            orders.append(math.log(e0 / e1) / math.log(n1 / n0))
        else:
            orders.append(None)
    kept = [(n, e) for n, e in rows if e > zero]
    slope = None
    if len(kept) >= 2:
        x = np.log([n for n, _ in kept])
        y = np.log([e for _, e in kept])
        slope = float(-np.polyfit(x, y, 1)[0])
    return OrderEstimate(orders, slope, excluded)


@dataclass
class ErrorReport:
    ns: list
    e1: list
    e2: list

    def __post_init__(self):
        order = np.argsort(self.ns)
        self.ns = [int(self.ns[i]) for i in order]
        self.e1 = [float(self.e1[i]) for i in order]
        self.e2 = [float(self.e2[i]) for i in order]

    @property
    def l1(self) -> OrderEstimate:
        return convergence_order(zip(self.ns, self.e1))

    @property
    def l2(self) -> OrderEstimate:
        return convergence_order(zip(self.ns, self.e2))

    def to_csv(self, digits: int = 17) -> str:
        fmt = f"{{:.{digits}g}}".format
        o1, o2 = self.l1.orders, self.l2.orders
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["N", "E1", "order1", "E2", "order2"])
        for i, n in enumerate(self.ns):
            a = "" if i == 0 or o1[i - 1] is None else fmt(o1[i - 1])
            b = "" if i == 0 or o2[i - 1] is None else fmt(o2[i - 1])
            w.writerow([n, fmt(self.e1[i]), a, fmt(self.e2[i]), b])
        return buf.getvalue()

    def summary(self) -> str:
        def f(x):
            return "excluded" if x is None else f"{x:.3f}"

        return f"fitted slope L1={f(self.l1.slope)} L2={f(self.l2.slope)}"


def find_jumps(exact, jump_factor: float = 10.0) -> np.ndarray:
    """Indices ``i`` where ``exact[i] -> exact[i+1]`` (periodic) is a jump.

    A jump is a neighbour distance larger than ``jump_factor`` times the
    median neighbour distance.
    """
    b = np.asarray(getattr(exact, "points", exact), dtype=float)
    gaps = np.linalg.norm(np.roll(b, -1, axis=0) - b, axis=1)
    med = np.median(gaps)
    return np.nonzero(gaps > jump_factor * med)[0]


def transition_width(curve, exact, threshold: float = 0.1, jump_factor: float = 10.0) -> list:
    """Per jump of ``exact``: number of consecutive nodes next to it whose
    error exceeds ``threshold`` times the jump size.
    """
    a, b = _pair(curve, exact)
    n = a.shape[0]
    jumps = find_jumps(b, jump_factor)
    if jumps.size == 0:
        raise DomainError("exact solution has no jumps")
    err = np.linalg.norm(a - b, axis=1)
    widths = []
    for i in jumps:
        cut = threshold * np.linalg.norm(b[(i + 1) % n] - b[i])
        w = 0
        for k in range(n // 2):  # walk left from the node before the jump
            if err[(i - k) % n] <= cut:
                break
            w += 1
        for k in range(n // 2):  # and right from the node after it
            if err[(i + 1 + k) % n] <= cut:
                break
            w += 1
        widths.append(w)
    return widths
