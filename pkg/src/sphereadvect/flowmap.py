"""Backward flow maps of the characteristic ODE ``s'(t) = c(s, t)``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import periodic


@dataclass(frozen=True)
class VelocityField:
    """Advection speed ``c(s, t)`` on the periodic unit interval.

    ``kind`` is ``"constant"``, ``"cosine-space"`` (``cos(2 pi s / T)``),
    ``"cosine-time"`` (``cos(2 pi t / T)``) or ``"custom"``. Positions are
    reduced modulo 1 before a spatial profile is evaluated.
    """

    kind: str = "constant"
    c0: float = 1.0
    period: float = 4.0
    func: Callable | None = field(default=None, compare=False)
    autonomous: bool = True

    KINDS = ("constant", "cosine-space", "cosine-time", "custom")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown velocity kind {self.kind!r}")
        if self.kind == "custom" and self.func is None:
            raise ValueError("custom velocity needs a callable")
        if self.kind == "cosine-time":
            object.__setattr__(self, "autonomous", False)
        elif self.kind != "custom":
            object.__setattr__(self, "autonomous", True)

    @classmethod
    def constant(cls, c0: float = 1.0) -> VelocityField:
        return cls("constant", c0=c0)

    @classmethod
    def reversible_cosine(cls, period: float = 4.0, mode: str = "time") -> VelocityField:
        if mode not in ("space", "time"):
            raise ValueError("mode must be 'space' or 'time'")
        return cls(f"cosine-{mode}", period=period)

    @classmethod
    def custom(cls, func, autonomous: bool = False) -> VelocityField:
        """``func(s, t)`` must accept arrays of positions and a scalar time."""
        return cls("custom", func=func, autonomous=autonomous)

    @property
    def is_zero(self) -> bool:
        return self.kind == "constant" and self.c0 == 0.0

    def __call__(self, s, t):
        s = np.asarray(s, dtype=float)
        if self.kind == "constant":
            return np.full_like(s, self.c0)
        if self.kind == "cosine-space":
            return np.cos(2 * np.pi * np.mod(s, 1.0) / self.period)
        if self.kind == "cosine-time":
            return np.full_like(s, math.cos(2 * math.pi * t / self.period))
        return np.asarray(self.func(s, t), dtype=float) * np.ones_like(s)


def wrap(s):
    """Reduce positions into ``[0, 1)``."""
    out = np.mod(s, 1.0)
    # mod of a tiny negative number rounds to exactly 1.0
    return np.where(out >= 1.0, 0.0, out)


def rk4_integrate(s, velocity, t_start: float, t_end: float, substep: float):
    """Classical RK4 for ``s' = c(s, t)`` from ``t_start`` to ``t_end``.

    Works forward or backward in time and vectorises over ``s``. Steps have
    size ``substep`` except the last, which is shortened to land on
    ``t_end``. The result is not wrapped.
    """
    if not substep > 0:
        raise ValueError("substep must be positive")
    s = np.array(s, dtype=float)
    span = t_end - t_start
    if span == 0.0:
        return s
    nsteps = max(1, math.ceil(abs(span) / substep - 1e-9))
    h = math.copysign(substep, span)
    for k in range(nsteps):
        t = t_start + k * h
        dt = h if k < nsteps - 1 else t_end - t
        k1 = velocity(s, t)
        k2 = velocity(s + 0.5 * dt * k1, t + 0.5 * dt)
        k3 = velocity(s + 0.5 * dt * k2, t + 0.5 * dt)
        k4 = velocity(s + dt * k3, t + dt)
        s = s + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(s)):
            raise FloatingPointError(f"non-finite characteristic at t={t + dt}")
    return s


@dataclass(frozen=True)
class FlowMap:
    """Takeoff locations ``Psi_{t_from}^{t_to}(s_i)`` on the grid ``s_i = i/N``."""

    takeoff: np.ndarray
    t_from: float
    t_to: float

    def __post_init__(self):
        takeoff = np.asarray(self.takeoff, dtype=float)
        if takeoff.ndim != 1:
            raise ValueError("takeoff must be one-dimensional")
        if np.any((takeoff < 0.0) | (takeoff >= 1.0)):
            raise ValueError("takeoff values must lie in [0, 1)")
        takeoff.setflags(write=False)
        object.__setattr__(self, "takeoff", takeoff)

    @property
    def n(self) -> int:
        return self.takeoff.shape[0]

    @classmethod
    def identity(cls, n: int, t: float = 0.0) -> FlowMap:
        return cls(np.arange(n) / n, t, t)

    def displacement(self) -> np.ndarray:
        """Continuous branch of ``takeoff(s) - s``."""
        grid = np.arange(self.n) / self.n
        return np.unwrap(self.takeoff - grid, period=1.0)


def build_backward_flow_map(
    n: int, velocity: VelocityField, t_new: float, dt_macro: float, substep: float = 1e-3
) -> FlowMap:
    if not dt_macro > 0:
        raise ValueError("dt_macro must be positive")
    if substep > dt_macro:
        raise ValueError("substep larger than the macro step")
    grid = np.arange(n) / n
    t_old = t_new - dt_macro
    if velocity.is_zero:
        return FlowMap(grid, t_new, t_old)
    return FlowMap(wrap(rk4_integrate(grid, velocity, t_new, t_old, substep)), t_new, t_old)


def compose_flow_maps(outer: FlowMap, inner: FlowMap, method: str = "cubic") -> FlowMap:
    """``outer o inner``: trace back with ``inner`` first, then with ``outer``.

    ``inner`` maps ``t2 -> t1`` and ``outer`` maps ``t1 -> t0``. The outer
    map is evaluated off-grid by interpolating its displacement field
    (``method`` is ``"cubic"``, four-point Lagrange, or ``"monotone"``).
    """
    if outer.n != inner.n:
        raise ValueError(f"mesh mismatch: {outer.n} vs {inner.n}")
    if abs(outer.t_from - inner.t_to) > 1e-12:
        raise ValueError(
            f"time levels do not chain: inner ends at {inner.t_to}, outer starts at {outer.t_from}"
        )
    interp = {"cubic": periodic.cubic, "monotone": periodic.monotone_cubic}[method]
    x = inner.takeoff
    d = interp(outer.displacement(), x)
    return FlowMap(wrap(x + d), inner.t_from, outer.t_to)


def double_flow_map(fmap: FlowMap, times: int = 1, method: str = "cubic") -> FlowMap:
    """Compose an autonomous map with itself ``times`` times (covers ``2**times`` steps)."""
    span = fmap.t_from - fmap.t_to
    for _ in range(times):
        # autonomous: shift the outer copy's time labels so the chain matches
        outer = FlowMap(fmap.takeoff, fmap.t_to, fmap.t_to - span)
        fmap = compose_flow_maps(outer, fmap, method)
        span *= 2
    return fmap
