"""Fields of cylindrical permanent magnets and magnet-magnet forces.

The exact field of a uniformly, axially magnetised cylinder is that of a
finite solenoid carrying surface current M; it is evaluated in closed form
with Bulirsch's complete elliptic integral (Derby & Olbert, Am. J. Phys.
78, 229 (2010)).  Forces use the rigid hard-magnet model

    F = mu0 * integral_V grad(M . H_source) dV,   H_source = B_source / mu0

integrated by tensor Gauss-Legendre quadrature over the target cylinder,
with the gradient taken by central differences.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import MU0, CylMagnet, Scene, check_scene
from .numerics import NumericalError, cel, gauss_legendre, grad_central

FD_STEP = 1e-6  # m
DEFAULT_QUAD_ORDER = 8
RIM_TOL = 1e-12  # m


class FieldModel(Enum):
    EXACT = "exact"
    DIPOLE = "dipole"


class SingularityError(NumericalError):
    pass


class OverlapError(ValueError):
    pass


@dataclass(frozen=True)
class FieldSource:
    magnets: tuple
    model: FieldModel = FieldModel.EXACT

    def __post_init__(self):
        object.__setattr__(self, "magnets", tuple(self.magnets))
        object.__setattr__(self, "model", FieldModel(self.model))
        if not self.magnets:
            raise ValueError("a field source needs at least one magnet")

    def __call__(self, p):
        return b_total(self, p)


def b_dipole(magnet: CylMagnet, p) -> np.ndarray:
    """Point-dipole flux density, moment = M * volume along the axis."""
    r = np.asarray(p, dtype=float) - magnet.center
    r2 = np.einsum("...i,...i->...", r, r)
    if np.any(r2 == 0.0):
        raise SingularityError("dipole field evaluated at the dipole centre")
    m = magnet.moment
    rn = np.sqrt(r2)
    mr = np.einsum("...i,i->...", r, m)
    return MU0 / (4 * np.pi) * (3.0 * r * (mr / rn**5)[..., None] - m / (rn**3)[..., None])


def b_cylinder_exact(magnet: CylMagnet, p) -> np.ndarray:
    """Flux density of a uniformly axially magnetised cylinder.

    Valid inside and outside the magnet; raises SingularityError within
    RIM_TOL of either edge circle.
    """
    p = np.asarray(p, dtype=float)
    axis = magnet.axis
    rel = p - magnet.center
    z = np.einsum("...i,i->...", rel, axis)
    radial = rel - z[..., None] * axis
    rho = np.sqrt(np.einsum("...i,...i->...", radial, radial))
    a = magnet.radius
    b = 0.5 * magnet.height

    zp = z + b
    zm = z - b
    if np.any((np.abs(rho - a) < RIM_TOL) & ((np.abs(zp) < RIM_TOL) | (np.abs(zm) < RIM_TOL))):
        raise SingularityError("field evaluated on the magnet rim")

    apr = a + rho
    amr = a - rho
    gamma = amr / apr
    g2 = gamma * gamma
    one = np.ones_like(rho)

    def end_terms(zs):
        den = np.sqrt(zs * zs + apr * apr)
        alpha = a / den
        beta = zs / den
        kc = np.sqrt((zs * zs + amr * amr)) / den
        b_rho = alpha * cel(kc, one, one, -one)
        b_z = beta * cel(kc, g2, one, gamma)
        return b_rho, b_z

    br_p, bz_p = end_terms(zp)
    br_m, bz_m = end_terms(zm)
    b0 = MU0 * magnet.magnetization / np.pi
    b_rho = b0 * (br_p - br_m)
    b_z = b0 * a / apr * (bz_p - bz_m)

    with np.errstate(invalid="ignore", divide="ignore"):
        unit_r = np.where(rho[..., None] > 0, radial / rho[..., None], 0.0)
    return b_z[..., None] * axis + b_rho[..., None] * unit_r


_FIELD_FUNCS = {FieldModel.EXACT: b_cylinder_exact, FieldModel.DIPOLE: b_dipole}


def b_total(source: FieldSource, p) -> np.ndarray:
    """Superposed flux density of every magnet in ``source``."""
    fn = _FIELD_FUNCS[source.model]
    out = fn(source.magnets[0], p)
    for m in source.magnets[1:]:
        out = out + fn(m, p)
    return out


def cylinder_quadrature(magnet: CylMagnet, order: int):
    """Quadrature points (n, 3) and volume weights (n,) over a cylinder.

    Radius and axial coordinate use Gauss-Legendre rules of ``order``
    nodes (radial weights carry the Jacobian rho).  The angle uses the
    midpoint trapezoid rule with ``order`` nodes: it is the Gaussian rule
    for periodic integrands and, unlike Legendre nodes on [0, 2pi], its
    node set is mirror symmetric about both transverse planes, so
    symmetric configurations cancel to rounding.
    """
    rule = gauss_legendre(order)
    r, wr = rule.scaled(0.0, magnet.radius)
    phi = (np.arange(order) + 0.5) * (2 * np.pi / order)
    wp = np.full(order, 2 * np.pi / order)
    z, wz = rule.scaled(-0.5 * magnet.height, 0.5 * magnet.height)
    u, v = _perpendicular_basis(magnet.axis)
    R, P, Z = np.meshgrid(r, phi, z, indexing="ij")
    W = (wr * r)[:, None, None] * wp[None, :, None] * wz[None, None, :]
    pts = (magnet.center
           + (R * np.cos(P))[..., None] * u
           + (R * np.sin(P))[..., None] * v
           + Z[..., None] * magnet.axis)
    return pts.reshape(-1, 3), W.reshape(-1)


def _perpendicular_basis(axis):
    axis = np.asarray(axis, dtype=float)
    helper = np.array([1.0, 0.0, 0.0]) if abs(axis[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = np.cross(axis, helper)
    u /= np.linalg.norm(u)
    v = np.cross(axis, u)
    return u, v


def _point_in_cylinder(m: CylMagnet, p) -> np.ndarray:
    rel = np.asarray(p, dtype=float) - m.center
    z = rel @ m.axis
    rho2 = np.einsum("...i,...i->...", rel, rel) - z * z
    return (np.abs(z) < 0.5 * m.height) & (rho2 < m.radius**2)


def magnets_overlap(a: CylMagnet, b: CylMagnet) -> bool:
    if abs(abs(float(a.axis @ b.axis)) - 1.0) < 1e-12:
        d = b.center - a.center
        dz = abs(float(d @ a.axis))
        rho = float(np.linalg.norm(d - (d @ a.axis) * a.axis))
        return dz < 0.5 * (a.height + b.height) and rho < a.radius + b.radius
    # skew axes: sample each volume against the other
    pa, _ = cylinder_quadrature(a, 6)
    pb, _ = cylinder_quadrature(b, 6)
    return bool(np.any(_point_in_cylinder(b, pa)) or np.any(_point_in_cylinder(a, pb)))


def magnet_forces(targets, source: FieldSource, quad_order: int = DEFAULT_QUAD_ORDER,
                  h: float = FD_STEP) -> np.ndarray:
    """Force (n_targets, 3) exerted by ``source`` on each target magnet."""
    targets = tuple(targets)
    for t in targets:
        for s in source.magnets:
            if magnets_overlap(t, s):
                raise OverlapError("target magnet overlaps a source magnet")
    pts, wts = zip(*(cylinder_quadrature(t, quad_order) for t in targets))
    pts = np.stack(pts)  # (nt, q, 3)
    wts = np.stack(wts)  # (nt, q)
    mvec = np.stack([t.magnetization * t.axis for t in targets])  # (nt, 3)

    def m_dot_b(x):
        # x: (nt, q, 6, 3)
        return np.einsum("tqsi,ti->tqs", b_total(source, x), mvec)

    grad = grad_central(m_dot_b, pts, h)  # (nt, q, 3)
    forces = np.einsum("tqi,tq->ti", grad, wts)
    if not np.all(np.isfinite(forces)):
        raise NumericalError("non-finite magnetic force")
    return forces


def force_on_magnet(target: CylMagnet, source: FieldSource,
                    quad_order: int = DEFAULT_QUAD_ORDER, h: float = FD_STEP) -> np.ndarray:
    return magnet_forces([target], source, quad_order, h)[0]


def robot_sources(scene: Scene, model=FieldModel.EXACT):
    """(targets on the wounding robot, field source of the base robot)."""
    return scene.wounding_magnets(), FieldSource(scene.base_magnets(), model)


def force_between_robots(scene: Scene, quad_order: int = DEFAULT_QUAD_ORDER,
                         model=FieldModel.EXACT) -> np.ndarray:
    """Magnetic force of the base robot on the wounding robot."""
    check_scene(scene)
    targets, source = robot_sources(scene, model)
    return magnet_forces(targets, source, quad_order).sum(axis=0)


def force_on_base(scene: Scene, quad_order: int = DEFAULT_QUAD_ORDER,
                  model=FieldModel.EXACT) -> np.ndarray:
    """Reaction: force of the wounding robot on the base robot."""
    check_scene(scene)
    source = FieldSource(scene.wounding_magnets(), model)
    return magnet_forces(scene.base_magnets(), source, quad_order).sum(axis=0)


def pitch_moment(scene: Scene, quad_order: int = DEFAULT_QUAD_ORDER,
                 model=FieldModel.EXACT) -> float:
    """Moment about the y axis through the wounding robot's centroid.

    Each magnet's resultant force is applied at its centre.
    """
    check_scene(scene)
    targets, source = robot_sources(scene, model)
    forces = magnet_forces(targets, source, quad_order)
    arms = np.stack([t.center for t in targets]) - scene.wounding_origin()
    return float(np.cross(arms, forces).sum(axis=0)[1])
