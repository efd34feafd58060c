"""Force on a weakly magnetic (diamagnetic) cuboid in an external field.

Two equivalent forms are provided:

* volume:  F_i = chi / (2 mu0) * integral_V  d|B|^2/dx_i dV
* surface: F_i = chi / (2 mu0) * closed-integral_S |B|^2 n_i dS

They are the same integral by the divergence theorem, so each serves as
the other's check.  ``source`` is any callable mapping points (..., 3) to
flux densities (..., 3), e.g. a :class:`~magrobot.magnetostatics.FieldSource`.
"""

import numpy as np

from .magnetostatics import FD_STEP, FieldSource, OverlapError
from .model import MU0, DiamagneticBody
from .numerics import NumericalError, gauss_legendre, grad_central


def _b2(source, p):
    b = source(p)
    return np.einsum("...i,...i->...", b, b)


def _check_exterior(body: DiamagneticBody, source):
    if not isinstance(source, FieldSource):
        return
    for m in source.magnets:
        if _box_cylinder_overlap(body, m):
            raise OverlapError("diamagnetic body overlaps a source magnet")


def _box_cylinder_overlap(body, m) -> bool:
    a = np.abs(m.axis)
    rel = m.center - body.center
    k = int(np.argmax(a))
    if a[k] > 1 - 1e-12:
        # axis along coordinate k: interval test along k, circle-rectangle across
        if abs(rel[k]) >= body.half_extents[k] + 0.5 * m.height:
            return False
        others = [i for i in range(3) if i != k]
        near = np.clip(rel[others], -body.half_extents[others], body.half_extents[others])
        return float(np.sum((rel[others] - near) ** 2)) < m.radius**2
    ext = 0.5 * m.height * a + m.radius * np.sqrt(np.clip(1 - a**2, 0, None))
    return bool(np.all(np.abs(rel) < body.half_extents + ext))


def _box_points(body: DiamagneticBody, order: int):
    rule = gauss_legendre(order)
    axes = [rule.scaled(c - h, c + h) for c, h in zip(body.center, body.half_extents)]
    (x, wx), (y, wy), (z, wz) = axes
    X, Y, Z = np.meshgrid(x, y, z, indexing="ij")
    W = wx[:, None, None] * wy[None, :, None] * wz[None, None, :]
    return np.stack([X, Y, Z], axis=-1).reshape(-1, 3), W.reshape(-1)


def dia_force_volume(body: DiamagneticBody, source, quad_order: int = 8,
                     h: float = FD_STEP) -> np.ndarray:
    """Diamagnetic force from the volume integral of grad |B|^2."""
    _check_exterior(body, source)
    if body.susceptibility == 0:
        return np.zeros(3)
    pts, w = _box_points(body, quad_order)
    grad = grad_central(lambda p: _b2(source, p), pts, h)
    force = body.susceptibility / (2 * MU0) * (w @ grad)
    if not np.all(np.isfinite(force)):
        raise NumericalError("non-finite diamagnetic force")
    return force


def dia_force_surface(body: DiamagneticBody, source, quad_order: int = 8) -> np.ndarray:
    """Diamagnetic force from the flux of |B|^2 through the six faces."""
    _check_exterior(body, source)
    if body.susceptibility == 0:
        return np.zeros(3)
    rule = gauss_legendre(quad_order)
    c, he = body.center, body.half_extents
    force = np.zeros(3)
    for k in range(3):
        i, j = [a for a in range(3) if a != k]
        u, wu = rule.scaled(c[i] - he[i], c[i] + he[i])
        v, wv = rule.scaled(c[j] - he[j], c[j] + he[j])
        U, V = np.meshgrid(u, v, indexing="ij")
        W = np.outer(wu, wv)
        pts = np.empty(U.shape + (3,))
        pts[..., i] = U
        pts[..., j] = V
        pts[..., k] = c[k] + he[k]
        top = np.sum(W * _b2(source, pts))
        pts[..., k] = c[k] - he[k]
        bottom = np.sum(W * _b2(source, pts))
        force[k] = top - bottom
    force *= body.susceptibility / (2 * MU0)
    if not np.all(np.isfinite(force)):
        raise NumericalError("non-finite diamagnetic force")
    return force
