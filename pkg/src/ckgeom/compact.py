"""Conformal completion: the 3x3 and 4x4 conformal groups, the cone and its compact section.

Cone coordinates are ordered (s_plus, s_minus, s1, s2) and the invariant form
is diag(1, -1, 1, k2).  A CK point with regular coordinates (xi, x1, x2),
xi = (1 - x0)/k1, sits on the cone at

    s_plus  =  1 - (1 + k) xi / (2 l^2)
    s_minus = -1 - (1 - k) xi / (2 l^2)
    s1, s2  =  x1 / l, x2 / l                with k = k1 l^2,

and its compact image is -(s_plus, s1, s2) / s_minus.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .errors import (BranchError, ChartCoverageError, InfinityError,
                     PoleProjectionError, ZeroLengthError)
from .space import (Chart, ChartPoint, KappaPair, WeierstrassPoint, check_domain,
                    from_weierstrass, regular_coordinates)
from .trig import ck, sk, tk, vk

CONF_GENERATORS = ("P1", "P2", "J12", "G1", "G2", "D")
ORIGIN_1D = np.array([1.0, -1.0, 0.0])
ORIGIN_2D = np.array([1.0, -1.0, 0.0, 0.0])
INFINITY_TOL = 1e-12


def _check_ell(ell: float) -> float:
    ell = float(ell)
    if ell == 0 or not math.isfinite(ell):
        raise ZeroLengthError("scale length must be finite and non-zero")
    return ell


def upsilon(kp: KappaPair) -> np.ndarray:
    return np.diag([1.0, -1.0, 1.0, kp.k2])


def upsilon_1d() -> np.ndarray:
    return np.diag([1.0, -1.0, 1.0])


# ------------------------------------------------------------------- 1D group

def conf_generator_matrix_1d(k1: float, ell: float, which: str) -> np.ndarray:
    """3x3 generators P1, G1, D of the conformal group of the CK line."""
    ell = _check_ell(ell)
    k = k1 * ell * ell
    if which == "P1":
        return np.array([[0.0, 0.0, -1.0 - k],
                         [0.0, 0.0, -1.0 + k],
                         [1.0 + k, -1.0 + k, 0.0]]) / (2.0 * ell)
    if which == "G1":
        return ell * np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0], [-1.0, -1.0, 0.0]])
    if which == "D":
        return np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    raise KeyError(f"unknown 1D conformal generator {which!r}")


def _translation_block(kappa: float, k: float, ell: float, t: float, weight: float) -> np.ndarray:
    """3x3 block of exp(t P) on (s_plus, s_minus, s_i); ``weight`` is 1 for P1 and k2 for P2."""
    c, s, v = ck(kappa, t), sk(kappa, t), vk(kappa, t)
    q = v / (4.0 * ell * ell)
    h = s / (2.0 * ell)
    return np.array([
        [1.0 - weight * (1.0 + k) ** 2 * q, weight * (1.0 - k * k) * q, -weight * (1.0 + k) * h],
        [-weight * (1.0 - k * k) * q, 1.0 + weight * (1.0 - k) ** 2 * q, -weight * (1.0 - k) * h],
        [(1.0 + k) * h, -(1.0 - k) * h, c],
    ])


def _special_block(ell: float, nu: float, weight: float) -> np.ndarray:
    """3x3 block of exp(nu G) on (s_plus, s_minus, s_i)."""
    a = weight * nu * nu * ell * ell / 2.0
    return np.array([[1.0 - a, -a, weight * nu * ell],
                     [a, 1.0 + a, -weight * nu * ell],
                     [-nu * ell, -nu * ell, 1.0]])


def _boost(xi: float, n: int) -> np.ndarray:
    m = np.eye(n)
    m[0, 0] = m[1, 1] = math.cosh(xi)
    m[0, 1] = m[1, 0] = math.sinh(xi)
    return m


def conf_subgroup_1d(k1: float, ell: float, which: str, param: float) -> np.ndarray:
    """Closed-form exp(param * generator) for P1, G1, D."""
    ell = _check_ell(ell)
    t = float(param)
    if which == "P1":
        return _translation_block(k1, k1 * ell * ell, ell, t, 1.0)
    if which == "G1":
        return _special_block(ell, t, 1.0)
    if which == "D":
        return _boost(t, 3)
    raise KeyError(f"unknown 1D conformal generator {which!r}")


def orbit_1d(k1: float, ell: float, a: float) -> np.ndarray:
    """exp(a P1) applied to the origin ray (1, -1, 0)."""
    ell = _check_ell(ell)
    k = k1 * ell * ell
    v = vk(k1, a)
    return np.array([1.0 - (1.0 + k) * v / (2 * ell * ell),
                     -1.0 - (1.0 - k) * v / (2 * ell * ell),
                     sk(k1, a) / ell])


def embed_1d(k1: float, ell: float, a: float) -> tuple[float, float, float]:
    """Compact image (ts_plus, ts1) of the line point ``a`` and its angle A."""
    ell = _check_ell(ell)
    if k1 > 0 and abs(abs(a) * math.sqrt(k1) - math.pi) < 1e-12:
        raise BranchError("antipode of the origin maps to the projection pole")
    t = tk(k1, a / 2.0)
    den = ell * ell + t * t
    return (ell * ell - t * t) / den, 2.0 * ell * t / den, 2.0 * math.atan2(t, ell)


# ------------------------------------------------------------------- 2D group

def conf_generator_matrix(kp: KappaPair, ell: float, gen: str) -> np.ndarray:
    """4x4 generators of the conformal group of the CK plane."""
    ell = _check_ell(ell)
    k, k2 = kp.k1 * ell * ell, kp.k2
    m = np.zeros((4, 4))
    if gen == "J":
        gen = "J12"
    if gen == "P1":
        m[:3, :3] = conf_generator_matrix_1d(kp.k1, ell, "P1")
    elif gen == "P2":
        m[0, 3] = -k2 * (1.0 + k)
        m[1, 3] = -k2 * (1.0 - k)
        m[3, 0] = 1.0 + k
        m[3, 1] = -1.0 + k
        m /= 2.0 * ell
    elif gen == "J12":
        m[2, 3] = -k2
        m[3, 2] = 1.0
    elif gen == "D":
        m[0, 1] = m[1, 0] = 1.0
    elif gen == "G1":
        m[:3, :3] = conf_generator_matrix_1d(kp.k1, ell, "G1")
    elif gen == "G2":
        m[0, 3] = k2 * ell
        m[1, 3] = -k2 * ell
        m[3, 0] = m[3, 1] = -ell
    elif gen in ("L1", "L2", "R1", "R2"):
        idx = gen[1]
        p = conf_generator_matrix(kp, ell, "P" + idx)
        g = conf_generator_matrix(kp, ell, "G" + idx)
        return p + (kp.k1 if gen[0] == "L" else kp.k1 / 2.0) * g
    else:
        raise KeyError(f"unknown conformal generator {gen!r}")
    return m


@dataclass(frozen=True)
class ConfElement4:
    kp: KappaPair
    ell: float
    m: np.ndarray

    def defect(self) -> float:
        ups = upsilon(self.kp)
        return float(np.max(np.abs(self.m.T @ ups @ self.m - ups)))

    def __matmul__(self, other: "ConfElement4") -> "ConfElement4":
        return ConfElement4(self.kp, self.ell, self.m @ other.m)


def conf_subgroup(kp: KappaPair, ell: float, gen: str, param: float) -> ConfElement4:
    """Closed-form exp(param * generator) in the 4x4 realisation."""
    ell = _check_ell(ell)
    t = float(param)
    m = np.eye(4)
    idx13 = np.ix_([0, 1, 2], [0, 1, 2])
    idx23 = np.ix_([0, 1, 3], [0, 1, 3])
    if gen == "J":
        gen = "J12"
    if gen == "P1":
        m[idx13] = _translation_block(kp.k1, kp.k1 * ell * ell, ell, t, 1.0)
    elif gen == "P2":
        m[idx23] = _translation_block(kp.k12, kp.k1 * ell * ell, ell, t, kp.k2)
    elif gen == "J12":
        c, s = ck(kp.k2, t), sk(kp.k2, t)
        m[2, 2], m[2, 3], m[3, 2], m[3, 3] = c, -kp.k2 * s, s, c
    elif gen == "D":
        m = _boost(t, 4)
    elif gen == "G1":
        m[idx13] = _special_block(ell, t, 1.0)
    elif gen == "G2":
        m[idx23] = _special_block(ell, t, kp.k2)
    else:
        raise KeyError(f"unknown conformal generator {gen!r}")
    return ConfElement4(kp, ell, m)


# ------------------------------------------------------------- points on cone

@dataclass(frozen=True)
class ConePoint:
    s_plus: float
    s_minus: float
    s1: float
    s2: float

    def as_array(self) -> np.ndarray:
        return np.array([self.s_plus, self.s_minus, self.s1, self.s2])

    @classmethod
    def from_array(cls, v) -> "ConePoint":
        return cls(*(float(c) for c in v))


@dataclass(frozen=True)
class CompactPoint:
    ts_plus: float
    ts1: float
    ts2: float
    at_infinity: bool = False

    def as_array(self) -> np.ndarray:
        return np.array([self.ts_plus, self.ts1, self.ts2])


def cone_residual(kp: KappaPair, s) -> float:
    s = np.asarray(s.as_array() if isinstance(s, ConePoint) else s, dtype=float)
    return float(s[0] ** 2 - s[1] ** 2 + s[2] ** 2 + kp.k2 * s[3] ** 2)


def compact_residual(kp: KappaPair, q: CompactPoint) -> float:
    return q.ts_plus ** 2 + q.ts1 ** 2 + kp.k2 * q.ts2 ** 2 - 1.0


def cone_from_regular(kp: KappaPair, ell: float, xi, x1, x2) -> np.ndarray:
    ell = _check_ell(ell)
    k = kp.k1 * ell * ell
    l2 = 2.0 * ell * ell
    return np.array([1.0 - (1.0 + k) * xi / l2, -1.0 - (1.0 - k) * xi / l2, np.divide(x1, ell), np.divide(x2, ell)])


def compact_from_cone(s) -> CompactPoint:
    s = np.asarray(s.as_array() if isinstance(s, ConePoint) else s, dtype=float)
    if abs(s[1]) < INFINITY_TOL * max(1.0, float(np.max(np.abs(s)))):
        # ray at infinity: report the direction, normalised, with the flag set
        v = np.array([s[0], s[2], s[3]])
        n = np.linalg.norm(v)
        v = v / n if n > 0 else v
        return CompactPoint(float(v[0]), float(v[1]), float(v[2]), True)
    return CompactPoint(float(-s[0] / s[1]), float(-s[2] / s[1]), float(-s[3] / s[1]))


def embed_2d(kp: KappaPair, ell: float, p: ChartPoint) -> tuple[ConePoint, CompactPoint]:
    """Cone representative and compact image of a chart point."""
    xi, x1, x2 = regular_coordinates(kp, p)
    s = cone_from_regular(kp, ell, xi, x1, x2)
    return ConePoint.from_array(s), compact_from_cone(s)


def regular_jacobian(kp: KappaPair, p: ChartPoint) -> np.ndarray:
    """3x2 Jacobian of (xi, x1, x2) in chart coordinates."""
    check_domain(kp, p)
    u, v = p.u1, p.u2
    k1, k2, k12 = kp.k1, kp.k2, kp.k12
    if p.chart is Chart.PARALLEL_I:
        ca, sa, cy, sy = ck(k1, u), sk(k1, u), ck(k12, v), sk(k12, v)
        return np.array([[sa * cy, k2 * ca * sy], [ca * cy, -k12 * sa * sy], [0.0, cy]])
    if p.chart is Chart.PARALLEL_II:
        cx, sx, cb, sb = ck(k1, u), sk(k1, u), ck(k12, v), sk(k12, v)
        return np.array([[sx * cb, k2 * cx * sb], [cx, 0.0], [-k1 * sx * sb, cx * cb]])
    cr, sr, cp, sp = ck(k1, u), sk(k1, u), ck(k2, v), sk(k2, v)
    return np.array([[sr, 0.0], [cr * cp, -k2 * sr * sp], [cr * sp, sr * cp]])


def cone_jacobian(kp: KappaPair, ell: float, p: ChartPoint) -> np.ndarray:
    ell = _check_ell(ell)
    k = kp.k1 * ell * ell
    jr = regular_jacobian(kp, p)
    l2 = 2.0 * ell * ell
    return np.vstack([-(1.0 + k) / l2 * jr[0], -(1.0 - k) / l2 * jr[0], jr[1] / ell, jr[2] / ell])


def field_from_matrix4(kp: KappaPair, ell: float, matrix: np.ndarray, p: ChartPoint) -> np.ndarray:
    """Chart field of a 4x4 generator acting on rays: solve M s = J v + lam s, return -v."""
    s = embed_2d(kp, ell, p)[0].as_array()
    jac = cone_jacobian(kp, ell, p)
    system = np.column_stack([jac, s])
    sol, *_ = np.linalg.lstsq(system, matrix @ s, rcond=None)
    return -sol[:2]


# ------------------------------------------------------ stereographic picture

def stereographic(kp: KappaPair, ell: float, w: WeierstrassPoint) -> CompactPoint:
    """Projection of an ambient point from the pole (-1, 0, 0)."""
    ell = _check_ell(ell)
    x0, x1, x2 = w.x0, w.x1, w.x2
    if abs(1.0 + x0) < 1e-14:
        raise PoleProjectionError("cannot project the pole")
    q = x1 * x1 + kp.k2 * x2 * x2
    xi = q / (1.0 + x0)
    s = cone_from_regular(kp, ell, xi, x1, x2)
    return compact_from_cone(s)


def inverse_stereographic(kp: KappaPair, ell: float, q: CompactPoint) -> WeierstrassPoint:
    ell = _check_ell(ell)
    if q.at_infinity:
        raise InfinityError("point at infinity has no ambient preimage")
    k = kp.k1 * ell * ell
    den = (1.0 + q.ts_plus) + k * (1.0 - q.ts_plus)
    if abs(den) < 1e-14:
        raise InfinityError("compact point is the image of infinity")
    return WeierstrassPoint(((1.0 + q.ts_plus) - k * (1.0 - q.ts_plus)) / den,
                            2.0 * ell * q.ts1 / den, 2.0 * ell * q.ts2 / den)


def compact_chart(k2: float, q: CompactPoint, chart) -> ChartPoint:
    """Capital coordinates (A, Y), (X, B) or (R, Phi) of the compact model S^2_{[+], k2}."""
    if q.at_infinity:
        raise InfinityError("points at infinity have no compact-chart coordinates")
    return from_weierstrass(KappaPair(1.0, k2), WeierstrassPoint(q.ts_plus, q.ts1, q.ts2), chart)


# ---------------------------------------------------------------- census

HYPERBOLIC_SPAN = 12.0
COVERAGE_WINDOW = 3.0


def _stretched(n: int, label: float) -> np.ndarray:
    """Grid for one chart coordinate.

    A full period for a positive label; a uniform grid over
    sqrt|label| |u| <= HYPERBOLIC_SPAN for a negative one; a tangent-stretched
    real line (reaching ever further out as n grows) for a zero label.
    """
    theta = (np.arange(n) + 0.5) / n * math.pi - math.pi / 2
    if label > 0:
        return 2.0 * theta / math.sqrt(label)
    if label < 0:
        return theta * (2.0 * HYPERBOLIC_SPAN / math.pi) / math.sqrt(-label)
    return np.tan(theta)


def ts2_half_range(k2: float) -> float:
    return 1.0 / math.sqrt(k2) if k2 > 0 else COVERAGE_WINDOW


def _model_point(k2: float, angle, height):
    radius = np.sqrt(np.maximum(1.0 - k2 * height * height, 0.0))
    return np.cos(angle) * radius, np.sin(angle) * radius, height


def _compact_params(k2: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """(A, ts2) parameter grid of S^2_{[+],k2}; ts2 is windowed when unbounded."""
    a = np.linspace(-math.pi, math.pi, n, endpoint=False) + math.pi / n
    half = ts2_half_range(k2)
    ts2 = (np.arange(n) + 0.5) / n * 2.0 * half - half
    return np.meshgrid(a, ts2, indexing="ij")


def _forward_images(kp: KappaPair, ell: float, n: int):
    """Compact images of a chart grid; de Sitter uses a global ambient parametrisation."""
    if kp.k1 < 0 and kp.k2 < 0:
        # one-sheeted quadric x0^2 + k1 x1^2 + k12 x2^2 = 1, covered by (tau, theta)
        r1, r12 = math.sqrt(-kp.k1), math.sqrt(kp.k12)
        tau = _stretched(n, -1.0)
        theta = np.linspace(-math.pi, math.pi, n, endpoint=False)
        tt, th = np.meshgrid(tau, theta, indexing="ij")
        x1 = np.sinh(tt) / r1
        x0 = np.cosh(tt) * np.cos(th)
        x2 = np.cosh(tt) * np.sin(th) / r12
        with np.errstate(divide="ignore", invalid="ignore"):
            xi = (x1 * x1 + kp.k2 * x2 * x2) / (1.0 + x0)
        s = cone_from_regular(kp, ell, xi, x1, x2)
    else:
        u = _stretched(n, kp.k1)
        v = _stretched(n, kp.k12)
        uu, vv = np.meshgrid(u, v, indexing="ij")
        cy = ck(kp.k12, vv)
        xi = vk(kp.k1, uu) + kp.k2 * ck(kp.k1, uu) * vk(kp.k12, vv)
        s = cone_from_regular(kp, ell, xi, sk(kp.k1, uu) * cy, sk(kp.k12, vv))
    s = s.reshape(4, -1)
    finite = np.all(np.isfinite(s), axis=0)
    s = s[:, finite]
    scale = np.max(np.abs(s), axis=0)
    at_inf = np.abs(s[1]) < INFINITY_TOL * np.maximum(scale, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ts = -s[[0, 2, 3]] / s[1]
    return ts[:, ~at_inf], int(at_inf.sum())


def _preimage_ok(kp: KappaPair, ell: float, tsp, ts1, ts2):
    k = kp.k1 * ell * ell
    den = (1.0 + tsp) + k * (1.0 - tsp)
    with np.errstate(divide="ignore", invalid="ignore"):
        x0 = ((1.0 + tsp) - k * (1.0 - tsp)) / den
    ok = np.abs(den) > 1e-12
    if kp.k1 < 0 and kp.k2 >= 0:
        ok &= x0 > 0
    return ok, den


def _denominator(kp: KappaPair, ell: float, tsp):
    k = kp.k1 * ell * ell
    return (1.0 + tsp) + k * (1.0 - tsp)


def _refine_zero(kp: KappaPair, ell: float, p, q, steps: int = 60) -> np.ndarray:
    """Bisect between (A, ts2) parameters p and q for a sign change of the projection denominator."""
    lo, hi = np.array(p, dtype=float), np.array(q, dtype=float)

    def den(par):
        return _denominator(kp, ell, _model_point(kp.k2, par[0], par[1])[0])

    d_lo = den(lo)
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if np.sign(den(mid)) == np.sign(d_lo):
            lo = mid
        else:
            hi = mid
    mid = 0.5 * (lo + hi)
    return np.array(_model_point(kp.k2, mid[0], mid[1]))


def _coverage(k2: float, ts: np.ndarray, n: int) -> dict:
    """Which points of an (A, ts2) sample of the compact model lie near a forward image.

    A sample point counts as hit when its nearest image is within twice the
    sample spacing.  For k2 <= 0 only |ts2| <= COVERAGE_WINDOW is sampled.
    """
    aa, zz = _compact_params(k2, n)
    sample = np.stack(_model_point(k2, aa, zz), axis=-1).reshape(-1, 3)
    spacing = max(2.0 * math.pi / n, 2.0 * ts2_half_range(k2) / n)
    dist, _ = cKDTree(ts.T).query(sample, k=1)
    hit = dist <= 2.0 * spacing
    unhit = sample[~hit]
    pole = np.array([-1.0, 0.0, 0.0])
    return {
        "samples": int(hit.size),
        "pole_gap": float(np.min(np.linalg.norm(ts.T - pole, axis=1))),
        "largest_gap": float(np.max(dist)),
        "hit_fraction": float(hit.mean()),
        "unhit_max_distance_to_pole": float(np.max(np.linalg.norm(unhit - pole, axis=1))) if len(unhit) else 0.0,
        "unhit_ts_plus_max": float(unhit[:, 0].max()) if len(unhit) else math.nan,
    }


def completion_census(kp: KappaPair, ell: float = 1.0, grid: int = 200) -> dict:
    """Coverage statistics of the conformal embedding on a ``grid`` x ``grid`` sample.

    ``forward`` summarises the compact images of a chart grid.  ``inverse``
    samples the compact model itself and reports which points have a finite
    preimage on the chosen sheet; ``coverage`` measures how close the forward
    images come to an (A, ts2) sample of the model, with ``pole_gap`` the
    distance from the pole to the nearest image.  ``boundary`` lists model
    points where the projection denominator changes sign, refined by
    bisection in (A, ts2); these are images of the points at infinity.
    """
    ell = _check_ell(ell)
    ts, n_inf = _forward_images(kp, ell, grid)
    aa, zz = _compact_params(kp.k2, grid)
    tsp, ts1, ts2 = _model_point(kp.k2, aa, zz)
    ok, den = _preimage_ok(kp, ell, tsp, ts1, ts2)
    missing_pts = np.stack([tsp[~ok], ts1[~ok], ts2[~ok]], axis=1)
    pole = np.array([-1.0, 0.0, 0.0])
    sign = np.sign(den)
    boundary = []
    for step in ((1, 0), (0, 1)):
        if step == (1, 0):
            change = np.argwhere(sign[:-1, :] * sign[1:, :] < 0)
        else:
            change = np.argwhere(sign[:, :-1] * sign[:, 1:] < 0)
        for i, j in change:
            i2, j2 = i + step[0], j + step[1]
            boundary.append(_refine_zero(kp, ell, (aa[i, j], zz[i, j]), (aa[i2, j2], zz[i2, j2])))
    norm2 = np.maximum(1.0, np.sum(ts * ts, axis=0)) if ts.size else np.ones(0)
    return {
        "k1": kp.k1, "k2": kp.k2, "ell": ell, "grid": grid,
        "forward": {
            "count": int(ts.shape[1]) + n_inf,
            "at_infinity": n_inf,
            "ts_plus_min": float(ts[0].min()) if ts.size else math.nan,
            "ts_plus_max": float(ts[0].max()) if ts.size else math.nan,
            "sphere_residual": float(np.max(np.abs(ts[0] ** 2 + ts[1] ** 2 + kp.k2 * ts[2] ** 2 - 1.0) / norm2)) if ts.size else 0.0,
        },
        "inverse": {
            "count": int(ok.size),
            "covered": int(ok.sum()),
            "missing_fraction": float((~ok).sum() / ok.size),
            "max_missing_distance_to_pole": float(np.max(np.linalg.norm(missing_pts - pole, axis=1))) if len(missing_pts) else 0.0,
            "missing_ts_plus_max": float(missing_pts[:, 0].max()) if len(missing_pts) else math.nan,
        },
        "coverage": _coverage(kp.k2, ts, max(8, grid // 4)),
        "boundary": np.array(boundary).reshape(-1, 3),
        "forward_points": ts,
    }
