"""Quaternion algebra.

Quaternions are stored as a scalar part ``a`` and a vector part ``u`` of
length three, with the Hamilton convention ``ij = k, jk = i, ki = j``.
Everything here is a pure function on small immutable values; the batched
kernels used by the solver do not go through this module, it serves as the
readable reference path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError

UNIT_TOL = 1e-9


@dataclass(frozen=True)
class Quaternion:
    a: float
    u: tuple[float, float, float]

    def __post_init__(self):
        u = tuple(float(x) for x in self.u)
        if len(u) != 3:
            raise ValueError("vector part must have three components")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "u", u)
        if not all(math.isfinite(x) for x in (self.a, *u)):
            raise ValueError(f"non-finite quaternion {self.as_array()}")

    @classmethod
    def from_array(cls, q) -> Quaternion:
        q = np.asarray(q, dtype=float)
        return cls(q[0], q[1:4])

    @classmethod
    def pure(cls, v) -> Quaternion:
        """Embed a 3-vector as ``(0, v)``."""
        return cls(0.0, v)

    @classmethod
    def identity(cls) -> Quaternion:
        return cls(1.0, (0.0, 0.0, 0.0))

    @classmethod
    def rotation(cls, axis, angle: float) -> Quaternion:
        """Unit quaternion ``(cos(angle/2), sin(angle/2) * axis)``.

        The axis is normalised here; a zero axis is only accepted together
        with a zero angle.
        """
        axis = np.asarray(axis, dtype=float)
        n = np.linalg.norm(axis)
        if n == 0.0:
            if angle % (2 * math.pi) != 0.0:
                raise DomainError("rotation axis is the zero vector")
            return cls.identity()
        half = 0.5 * angle
        return cls(math.cos(half), math.sin(half) * axis / n)

    @property
    def vec(self) -> np.ndarray:
        return np.array(self.u)

    def as_array(self) -> np.ndarray:
        return np.array((self.a, *self.u))

    def norm(self) -> float:
        return math.sqrt(self.a * self.a + sum(x * x for x in self.u))

    def normalized(self) -> Quaternion:
        n = self.norm()
        if n == 0.0:
            raise DomainError("cannot normalise the zero quaternion")
        return Quaternion(self.a / n, tuple(x / n for x in self.u))

    def __mul__(self, other: Quaternion) -> Quaternion:
        return hamilton_product(self, other)

    def __rmul__(self, f):
        return Quaternion(f * self.a, tuple(f * x for x in self.u))


def hamilton_product(q1: Quaternion, q2: Quaternion) -> Quaternion:
    u1, u2 = np.array(q1.u), np.array(q2.u)
    return Quaternion(
        q1.a * q2.a - float(u1 @ u2),
        q1.a * u2 + q2.a * u1 + np.cross(u1, u2),
    )


def inverse(q: Quaternion) -> Quaternion:
    n2 = q.a * q.a + sum(x * x for x in q.u)
    if n2 == 0.0:
        raise DomainError("the zero quaternion has no inverse")
    return Quaternion(q.a / n2, tuple(-x / n2 for x in q.u))


def exp_map(q: Quaternion) -> Quaternion:
    u = np.array(q.u)
    un = float(np.linalg.norm(u))
    scale = math.exp(q.a)
    # np.sinc(x / pi) == sin(x) / x, with the removable singularity filled in
    return Quaternion(scale * math.cos(un), scale * np.sinc(un / math.pi) * u)


def log_map(q: Quaternion) -> Quaternion:
    """Principal logarithm; the vector part has norm in ``[0, pi]``.

    A negative real quaternion has no distinguished axis for its logarithm,
    so it is rejected rather than assigned an arbitrary one.
    """
    u = np.array(q.u)
    un = float(np.linalg.norm(u))
    qn = math.hypot(q.a, un)
    if qn == 0.0:
        raise DomainError("logarithm of the zero quaternion")
    if un == 0.0:
        if q.a < 0.0:
            raise DomainError("logarithm of a negative real quaternion is branch-ambiguous")
        return Quaternion(math.log(q.a), (0.0, 0.0, 0.0))
    # atan2 equals arccos(a / |q|) but stays accurate when |u| << |a|
    angle = math.atan2(un, q.a)
    return Quaternion(math.log(qn), (angle / un) * u)


def power_map(q: Quaternion, f: float) -> Quaternion:
    """``q ** f = exp(f * log(q))``; any finite real exponent is allowed."""
    lq = log_map(q)
    return exp_map(Quaternion(f * lq.a, tuple(f * x for x in lq.u)))


def rotate(p, r: Quaternion) -> np.ndarray:
    """Rotate the 3-vector ``p`` by the unit quaternion ``r``: ``r (0,p) r^-1``."""
    if abs(r.norm() - 1.0) > UNIT_TOL:
        raise DomainError(f"rotation quaternion is not unit (norm {r.norm()!r})")
    out = hamilton_product(hamilton_product(r, Quaternion.pure(p)), inverse(r))
    return out.vec
