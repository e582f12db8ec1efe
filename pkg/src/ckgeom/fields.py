"""Vector fields of the conformal generators in the three geodesic charts.

Components are returned as ``(X^1, X^2)`` along ``(d/du1, d/du2)``.  The
sign convention makes the field of a generator M equal to minus the
velocity of its one-parameter flow, so P1 = -d/da in the first parallel
chart while exp(t P1) translates a -> a + t.  With this convention the
map M -> X_M preserves Lie brackets.
"""
from __future__ import annotations

import numpy as np

from .errors import PoleError
from .space import Chart, ChartPoint, KappaPair, check_domain, to_weierstrass, weierstrass_jacobian
from .trig import POLE_TOL, ck, sk, tk, vk

MOTION_GENERATORS = ("P1", "P2", "J12")
CONFORMAL_GENERATORS = ("P1", "P2", "J12", "L1", "L2", "D", "G1", "G2", "R1", "R2")


def _nonzero(value: float, what: str) -> float:
    if abs(value) < POLE_TOL:
        raise PoleError(f"{what} vanishes")
    return value


def _parallel_i(kp: KappaPair, gen: str, a: float, y: float):
    k1, k2, k12 = kp.k1, kp.k2, kp.k12
    ca, sa, va = ck(k1, a), sk(k1, a), vk(k1, a)
    cy = _nonzero(ck(k12, y), "ck(k1 k2, y)")
    sy, vy = sk(k12, y), vk(k12, y)
    ty = sy / cy
    table = {
        "P1": lambda: (-1.0, 0.0),
        "P2": lambda: (-k12 * sa * ty, -ca),
        "J12": lambda: (k2 * ca * ty, -sa),
        "D": lambda: (-sa / cy, -ca * sy),
        "L1": lambda: (-ca / cy, k1 * sa * sy),
        "L2": lambda: (0.0, -cy),
        "G1": lambda: ((va - k2 * vy) / cy, sa * sy),
        "G2": lambda: (k2 * sa * ty, -(va - k2 * vy)),
        "R1": lambda: (-0.5 * (1.0 + ca / cy), 0.5 * k1 * sa * sy),
        "R2": lambda: (-0.5 * k12 * sa * ty, -0.5 * (ca + cy)),
    }
    return table[gen]()


def _parallel_ii(kp: KappaPair, gen: str, x: float, b: float):
    k1, k2, k12 = kp.k1, kp.k2, kp.k12
    cx = _nonzero(ck(k1, x), "ck(k1, x)")
    sx, vx = sk(k1, x), vk(k1, x)
    tx = sx / cx
    cb, sb, vb = ck(k12, b), sk(k12, b), vk(k12, b)
    table = {
        "P1": lambda: (-cb, -k1 * tx * sb),
        "P2": lambda: (0.0, -1.0),
        "J12": lambda: (k2 * sb, -tx * cb),
        "D": lambda: (-sx * cb, -sb / cx),
        "L1": lambda: (-cx, 0.0),
        "L2": lambda: (k12 * sx * sb, -cb / cx),
        "G1": lambda: (vx - k2 * vb, tx * sb),
        "G2": lambda: (k2 * sx * sb, -(vx - k2 * vb) / cx),
        "R1": lambda: (-0.5 * (cx + cb), -0.5 * k1 * tx * sb),
        "R2": lambda: (0.5 * k12 * sx * sb, -0.5 * (1.0 + cb / cx)),
    }
    return table[gen]()


def _polar(kp: KappaPair, gen: str, r: float, phi: float):
    k1, k2 = kp.k1, kp.k2
    cp, sp = ck(k2, phi), sk(k2, phi)
    if gen == "J12":
        return 0.0, -1.0
    cr, sr, vr = ck(k1, r), sk(k1, r), vk(k1, r)
    if gen == "D":
        return -sr, 0.0
    if gen in ("G1", "G2"):
        th = tk(k1, r / 2.0)
        return (cp * vr, sp * th) if gen == "G1" else (k2 * sp * vr, -cp * th)
    sr = _nonzero(sr, "sk(k1, r)")
    if gen in ("P1", "P2"):
        inv_t = cr / sr
        return (-cp, sp * inv_t) if gen == "P1" else (-k2 * sp, -cp * inv_t)
    if gen in ("L1", "L2"):
        return (-cp * cr, sp / sr) if gen == "L1" else (-k2 * sp * cr, -cp / sr)
    half = -0.5 / _nonzero(tk(k1, r / 2.0), "tk(k1, r/2)")
    if gen == "R1":
        return half * cp * sr, -half * sp
    if gen == "R2":
        return half * k2 * sp * sr, half * cp
    raise KeyError(gen)


def field(kp: KappaPair, gen: str, p: ChartPoint) -> np.ndarray:
    """Components of the generator ``gen`` at ``p`` in p's chart."""
    if gen == "J":
        gen = "J12"
    if gen not in CONFORMAL_GENERATORS:
        raise KeyError(f"unknown generator {gen!r}")
    check_domain(kp, p)
    if p.chart is Chart.PARALLEL_I:
        comps = _parallel_i(kp, gen, p.u1, p.u2)
    elif p.chart is Chart.PARALLEL_II:
        comps = _parallel_ii(kp, gen, p.u1, p.u2)
    else:
        comps = _polar(kp, gen, p.u1, p.u2)
    return np.array(comps, dtype=float)


def field_from_matrix(kp: KappaPair, matrix: np.ndarray, p: ChartPoint) -> np.ndarray:
    """Chart field induced by a 3x3 algebra matrix: -J^+ (M w), J the ambient Jacobian."""
    w = to_weierstrass(kp, p).as_array()
    jac = weierstrass_jacobian(kp, p)
    sol, *_ = np.linalg.lstsq(jac, -(matrix @ w), rcond=None)
    return sol
