"""Vectorised numpy implementation of the batched interpolation kernels.

Mirrors ``_kernels.pyx`` function for function. All arrays carry the query
index on their leading axis so that a degenerate stencil can be reported
against the query that produced it.
"""

import numpy as np

from .exceptions import DomainError

ANTIPODAL_TOL = 1e-9
COINCIDENT_TOL = 1e-12
TIE_TOL = 1e-14
TIE_ORDER = {2: (0, 1), 3: (1, 0, 2)}


def _first_bad(bad):
    return int(np.nonzero(bad.reshape(bad.shape[0], -1).any(axis=1))[0][0])


def _slerp(a, b, t, what="slerp"):
    t = np.asarray(t, dtype=float)
    shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1], t.shape)
    a = np.broadcast_to(a, shape + (3,))
    b = np.broadcast_to(b, shape + (3,))
    t = np.broadcast_to(t, shape)
    dot = np.einsum("...i,...i->...", a, b)
    bad = dot < -1.0 + ANTIPODAL_TOL
    if bad.any():
        k = _first_bad(bad)
        raise DomainError(f"{what}: antipodal pair, geodesic not unique (query {k})", index=k)
    sin_theta = np.linalg.norm(np.cross(a, b), axis=-1)
    theta = np.arctan2(sin_theta, dot)
    w = b - dot[..., None] * a
    wn = np.linalg.norm(w, axis=-1)
    near = theta < COINCIDENT_TOL
    u = w / np.where(near, 1.0, wn)[..., None]
    tt = t * theta
    out = np.cos(tt)[..., None] * a + np.sin(tt)[..., None] * u
    out /= np.linalg.norm(out, axis=-1, keepdims=True)
    out = np.where((near | (t == 0.0))[..., None], a, out)
    return np.where((~near & (t == 1.0))[..., None], b, out)


def slerp_batch(a, b, t):
    return _slerp(a, b, t)


class _Stencils:
    """Per-query SIDER evaluation with lazily computed control points."""

    def __init__(self, stencil):
        self.s = stencil  # (K, 2n, 3)
        self._controls = {}

    def controls(self, m):
        if m not in self._controls:
            s = self.s
            c2a = _slerp(s[:, m + 2], s[:, m + 1], 2.0, "SIDER2 control c2a")
            c2b = _slerp(s[:, m], s[:, m + 1], 2.0, "SIDER2 control c2b")
            self._controls[m] = (c2a, c2b)
        return self._controls[m]

    def sider2(self, m, t):
        # t has shape (K, M)
        s = self.s
        c2a, c2b = self.controls(m)
        left = _slerp(s[:, m, None], c2a[:, None], t, "SIDER2 left arc")
        right = _slerp(c2b[:, None], s[:, m + 2, None], t, "SIDER2 right arc")
        return _slerp(left, right, t, "SIDER2 blend")

    def sider3(self, m, t):
        a = self.sider2(m, 1.5 * t)
        b = self.sider2(m + 1, 0.5 * (3.0 * t - 1.0))
        return _slerp(a, b, t, "SIDER3 blend")

    def candidate(self, order, m, r):
        return self.sider2(m, r) if order == 2 else self.sider3(m, r)


def seno_batch(points, cells, lam, order, samples):
    n = points.shape[0]
    k = cells.shape[0]
    if order == 1:
        out = _slerp(points[cells], points[(cells + 1) % n], lam)
        return out, np.zeros(k, dtype=np.int64)

    offsets = np.arange(-order + 1, order + 1)
    st = _Stencils(points[(cells[:, None] + offsets) % n])
    ncand = order
    width = 1.0 / order

    var = np.empty((k, ncand))
    for m in range(ncand):
        lo = (order - 1 - m) * width
        r = np.broadcast_to(np.linspace(lo, lo + width, samples), (k, samples))
        c = st.candidate(order, m, r)
        dot = np.einsum("kmi,kmi->km", c[:, :-1], c[:, 1:])
        cr = np.linalg.norm(np.cross(c[:, :-1], c[:, 1:]), axis=-1)
        ang = np.arctan2(cr, dot)
        # sequential accumulation, same order as the compiled kernel
        v = np.zeros(k)
        for q in range(samples - 1):
            v += ang[:, q]
        var[:, m] = v

    best = var.min(axis=1)
    choice = np.full(k, -1, dtype=np.int64)
    for m in TIE_ORDER[order]:
        take = (choice < 0) & (var[:, m] <= best + TIE_TOL)
        choice[take] = m

    out = np.empty((k, 3))
    for m in range(ncand):
        sel = np.nonzero(choice == m)[0]
        if sel.size == 0:
            continue
        sub = _Stencils(st.s[sel])
        r = ((order - 1 - m) * width + lam[sel] * width)[:, None]
        try:
            out[sel] = sub.candidate(order, m, r)[:, 0]
        except DomainError as exc:
            q = int(sel[exc.index])
            raise DomainError(str(exc).replace(f"query {exc.index}", f"query {q}"), index=q) from None
    return out, choice
