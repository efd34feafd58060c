"""Numerical kernels used by the field and force modules.

Everything here is vectorised over numpy arrays where it matters (the
elliptic integrals and gradients are evaluated on tens of thousands of
quadrature points per force call).
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np


class NumericalError(ArithmeticError):
    """A kernel produced or received a non-finite value."""


class NoBracketError(ValueError):
    """Root finder was given an interval without a sign change."""


# AGM / Landen iterations converge quadratically; 40 rounds is far beyond
# what double precision can use, it only guards against a stuck loop.
_MAX_AGM_ITER = 40


def _agm_ke(m):
    m = np.asarray(m, dtype=float)
    a = np.ones_like(m)
    b = np.sqrt(1.0 - m)
    c2 = m.copy()
    acc = 0.5 * c2
    power = 0.5
    for _ in range(_MAX_AGM_ITER):
        a_next = 0.5 * (a + b)
        c = 0.5 * (a - b)
        b = np.sqrt(a * b)
        a = a_next
        power *= 2.0
        acc = acc + power * c * c
        if np.all(np.abs(c) <= 1e-17 * a):
            break
    K = np.pi / (2.0 * a)
    E = K * (1.0 - acc)
    return K, E


def elliptic_ke(m):
    """Complete elliptic integrals K(m) and E(m), parameter convention m = k**2.

    Evaluated with the arithmetic-geometric mean, which stays accurate as
    m -> 1.  Accepts scalars or arrays.
    """
    arr = np.asarray(m, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr >= 1.0):
        raise ValueError("elliptic_ke requires 0 <= m < 1")
    K, E = _agm_ke(arr)
    if arr.ndim == 0:
        return float(K), float(E)
    return K, E


def cel(kc, p, c, s):
    """Bulirsch's generalised complete elliptic integral.

    cel(kc, p, c, s) = int_0^{pi/2} (c cos^2 + s sin^2) /
                       ((cos^2 + p sin^2) sqrt(cos^2 + kc^2 sin^2)) dphi

    Same AGM-type iteration as :func:`elliptic_ke`, extended so the third
    kind is available too.  Vectorised; kc must be nonzero.
    """
    kc, p, c, s = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (kc, p, c, s)))
    if np.any(kc == 0.0):
        raise NumericalError("cel is singular at kc = 0")
    k = np.abs(kc)
    pp = p.copy()
    cc = c.copy()
    ss = s.copy()
    em = np.ones_like(k)

    pos = p > 0.0
    # p > 0 branch
    pp_pos = np.sqrt(np.where(pos, p, 1.0))
    ss_pos = s / pp_pos
    # p <= 0 branch
    f = kc * kc
    q = 1.0 - f
    g = np.where(pos, 1.0, 1.0 - p)
    f = np.where(pos, 1.0, f - p)
    q = q * (s - c * p)
    pp_neg = np.sqrt(f / g)
    cc_neg = (c - s) / g
    ss_neg = -q / (g * g * pp_neg) + cc_neg * pp_neg

    pp = np.where(pos, pp_pos, pp_neg)
    ss = np.where(pos, ss_pos, ss_neg)
    cc = np.where(pos, c, cc_neg)

    f = cc
    cc = cc + ss / pp
    g = k / pp
    ss = 2.0 * (ss + f * g)
    pp = g + pp
    g = em
    em = k + em
    kk = k
    for _ in range(_MAX_AGM_ITER):
        if np.all(np.abs(g - k) <= g * 1e-8):
            break
        k = 2.0 * np.sqrt(kk)
        kk = k * em
        f = cc
        cc = cc + ss / pp
        g = kk / pp
        ss = 2.0 * (ss + f * g)
        pp = g + pp
        g = em
        em = k + em
    return 0.5 * np.pi * (ss + cc * em) / (em * (em + pp))


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def scaled(self, lo: float, hi: float):
        """Nodes and weights mapped onto [lo, hi]."""
        half = 0.5 * (hi - lo)
        return lo + half * (self.nodes + 1.0), half * self.weights


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> QuadratureRule:
    """Gauss-Legendre rule on [-1, 1], exact up to degree 2*order - 1."""
    if order < 1:
        raise ValueError("quadrature order must be >= 1")
    nodes, weights = np.polynomial.legendre.leggauss(order)
    # enforce exact symmetry so mirrored configurations cancel bit-for-bit
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes, weights, order)


_AXES = np.eye(3)


def grad_central(f: Callable, p, h: float) -> np.ndarray:
    """Second-order central-difference gradient of a scalar field.

    ``f`` maps an array of points shaped (..., 3) to values shaped (...);
    ``p`` may be a single point or a batch.  All six stencil points are
    evaluated in one call of ``f``.
    """
    if not h > 0:
        raise ValueError("step h must be positive")
    p = np.asarray(p, dtype=float)
    offsets = np.concatenate([_AXES, -_AXES]) * h  # (6, 3)
    stencil = p[..., None, :] + offsets
    vals = np.asarray(f(stencil), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise NumericalError("non-finite field value inside the difference stencil")
    return (vals[..., :3] - vals[..., 3:]) / (2.0 * h)


def find_root(f: Callable[[float], float], lo: float, hi: float, tol: float,
              maxiter: int = 200) -> float:
    """Root of ``f`` on [lo, hi] to a bracket width of ``tol``.

    Bisection safeguarded false position (Illinois variant): an
    interpolation step is kept only while it shrinks the bracket at least
    as fast as halving would over two steps, otherwise we bisect.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    a, b = float(lo), float(hi)
    fa, fb = float(f(a)), float(f(b))
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise NoBracketError(f"no sign change on [{a}, {b}]: f(lo)={fa}, f(hi)={fb}")
    side = 0
    width = abs(b - a)
    for _ in range(maxiter):
        if abs(b - a) <= tol:
            break
        x = (a * fb - b * fa) / (fb - fa)
        mid = 0.5 * (a + b)
        if not (min(a, b) < x < max(a, b)):
            x = mid
        fx = float(f(x))
        if not np.isfinite(fx):
            raise NumericalError(f"non-finite function value at x={x}")
        if fx == 0.0:
            return x
        if fx * fb < 0.0:
            a, fa = b, fb
            b, fb = x, fx
            side = 0
        else:
            b, fb = x, fx
            if side == -1:
                fa *= 0.5
            side = -1
        new_width = abs(b - a)
        if new_width > 0.5 * width:
            # interpolation stalled: force a bisection step
            m = 0.5 * (a + b)
            fm = float(f(m))
            if fm == 0.0:
                return m
            if fm * fb < 0.0:
                a, fa = b, fb
            b, fb = m, fm
            side = 0
        width = abs(b - a)
    return 0.5 * (a + b)
