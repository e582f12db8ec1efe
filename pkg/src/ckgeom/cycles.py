"""Cycles: curves of constant geodesic curvature, as linear sections of the ambient quadric.

A cycle is stored through coefficients that stay meaningful when k1 -> 0:

    c_xi * xi + alpha1 * x1 + alpha2 * x2 = c0,     xi = (1 - x0)/k1.

For k1 != 0 this is the ambient equation alpha0 x0 + alpha1 x1 + alpha2 x2 = alpha
with alpha0 = -c_xi/k1 and alpha = c0 - c_xi/k1.  In the flat case the xi
term carries the quadratic part, so Euclidean circles are cycles too.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (CausalityError, ChartDomainError, DegenerateError,
                     DegenerateMetricError, DomainError, ImaginaryCurvatureError,
                     IsotropicBaseError)
from .motion import GroupElement3, inverse
from .space import (Chart, ChartPoint, KappaPair, christoffel, convert,
                    metric_at, regular_coordinates, to_weierstrass)
from .trig import arc_tk, arc_vk, ck, lambda_fn, sk, tk, vk

HOROCYCLE_RTOL = 1e-9


class CycleKind(str, Enum):
    GEODESIC = "geodesic"
    EQUIDISTANT = "equidistant"
    HOROCYCLE = "horocycle"
    CIRCLE = "circle"
    NON_GENERIC_LINE = "non_generic_line"


@dataclass(frozen=True)
class Cycle:
    """Projective coefficient vector (c_xi, alpha1, alpha2, c0), unit norm, first nonzero entry positive."""

    c_xi: float
    alpha1: float
    alpha2: float
    c0: float

    def __post_init__(self):
        v = np.array([self.c_xi, self.alpha1, self.alpha2, self.c0], dtype=float)
        n = np.linalg.norm(v)
        if not np.isfinite(n) or n == 0:
            raise DegenerateError("cycle coefficients must be finite and not all zero")
        v = v / n
        lead = v[np.flatnonzero(np.abs(v) > 1e-15)[0]]
        v = v if lead > 0 else -v
        for name, value in zip(("c_xi", "alpha1", "alpha2", "c0"), v):
            object.__setattr__(self, name, float(value))

    def as_array(self) -> np.ndarray:
        return np.array([self.c_xi, self.alpha1, self.alpha2, self.c0])

    @classmethod
    def from_alphas(cls, k1: float, alpha0: float, alpha1: float, alpha2: float, alpha: float) -> "Cycle":
        """Build from the ambient equation alpha0 x0 + alpha1 x1 + alpha2 x2 = alpha."""
        return cls(-k1 * alpha0, alpha1, alpha2, alpha - alpha0)

    def alphas(self, k1: float) -> tuple[float, float, float, float]:
        """(alpha0, alpha1, alpha2, alpha) of the ambient equation; needs k1 != 0."""
        if k1 == 0:
            raise DomainError("ambient coefficients are undefined for k1 = 0 when c_xi != 0")
        a0 = -self.c_xi / k1
        return a0, self.alpha1, self.alpha2, self.c0 + a0

    def same_as(self, other: "Cycle", tol: float = 1e-9) -> bool:
        return bool(np.max(np.abs(self.as_array() - other.as_array())) < tol)


def kappa_alpha(c: Cycle, kp: KappaPair) -> float:
    """k1 * alpha, regular at k1 = 0; vanishes exactly for geodesics."""
    return kp.k1 * c.c0 - c.c_xi


def curvature_denominator(c: Cycle, kp: KappaPair) -> float:
    """alpha2^2 + k2 alpha1^2 + k1 k2 (alpha0^2 - alpha^2) in regular form."""
    return c.alpha2 ** 2 + kp.k2 * c.alpha1 ** 2 + kp.k2 * c.c0 * (2.0 * c.c_xi - kp.k1 * c.c0)


# ------------------------------------------------------------- constructors

def geodesic_from_betas(kp: KappaPair, beta0: float, beta1: float) -> Cycle:
    """Geodesic tk(k1 k2, y) = beta0 ck(k1, a) + beta1 sk(k1, a)."""
    return Cycle(kp.k1 * beta0, -beta1, 1.0, beta0)


def geodesic_type(kp: KappaPair, beta0: float, beta1: float) -> str:
    """'timelike', 'spacelike' or 'isotropic' by the sign of 1 + k1 k2 beta0^2 + k2 beta1^2."""
    value = 1.0 + kp.k12 * beta0 ** 2 + kp.k2 * beta1 ** 2
    if abs(value) < 1e-12:
        return "isotropic"
    return "timelike" if value > 0 else "spacelike"


def circle(kp: KappaPair, center: ChartPoint, rho: float) -> Cycle:
    """Locus at distance ``rho`` from ``center``: ck(k1, rho) = <center, x>."""
    if not (rho > 0 and math.isfinite(rho)):
        raise ChartDomainError("radius must be positive")
    if kp.k1 > 0 and rho * math.sqrt(kp.k1) >= math.pi:
        raise ChartDomainError("radius beyond the antipode")
    xi_c, x1_c, x2_c = regular_coordinates(kp, center)
    x0_c = 1.0 - kp.k1 * xi_c
    return Cycle(-x0_c, x1_c, kp.k2 * x2_c, xi_c - vk(kp.k1, rho))


def equidistant(kp: KappaPair, beta0: float, beta1: float, d: float,
                timelike_base: bool = False) -> tuple[Cycle, Cycle]:
    """The two branches at distance ``d`` from the geodesic (beta0, beta1).

    With ``timelike_base`` the base geodesic is time-like and ``d`` is a
    separation measured along the space-like normal, which swaps
    sk(k1, d)/sqrt(k2) for sk(k1 k2, d).
    """
    if kp.k2 == 0:
        raise DegenerateMetricError("equidistants need a non-degenerate main metric")
    value = 1.0 + kp.k2 * beta1 ** 2 + kp.k12 * beta0 ** 2
    if abs(value) < 1e-12:
        raise IsotropicBaseError("base geodesic is isotropic")
    if timelike_base:
        if value < 0:
            raise DomainError("base geodesic is not time-like")
        e = sk(kp.k12, d) * math.sqrt(value)
    else:
        radicand = value / kp.k2
        if radicand < 0:
            raise DomainError("base geodesic is time-like; pass timelike_base=True")
        e = sk(kp.k1, d) * math.sqrt(radicand)
    branches = []
    for sign in (1.0, -1.0):
        alpha = sign * e
        branches.append(Cycle(kp.k1 * beta0, -beta1, 1.0, alpha + beta0))
    return branches[0], branches[1]


# -------------------------------------------------------------- curvature

def _require_main_metric(kp: KappaPair) -> None:
    if kp.k2 == 0:
        raise DegenerateMetricError("geodesic curvature needs a non-degenerate main metric (k2 != 0)")


def geodesic_curvature_squared(c: Cycle, kp: KappaPair) -> float:
    _require_main_metric(kp)
    den = curvature_denominator(c, kp)
    num = kp.k2 * kappa_alpha(c, kp) ** 2
    if abs(den) < 1e-14:
        if abs(num) < 1e-14:
            raise IsotropicBaseError("isotropic line: curvature undefined")
        raise DegenerateError("curvature denominator vanishes")
    return num / den


def geodesic_curvature(c: Cycle, kp: KappaPair) -> float:
    """kg = |k1 alpha| sqrt(k2 / (alpha2^2 + k2 alpha1^2 + k1 k2 (alpha0^2 - alpha^2)))."""
    _require_main_metric(kp)
    if abs(kappa_alpha(c, kp)) < 1e-14:
        if abs(curvature_denominator(c, kp)) < 1e-14:
            raise IsotropicBaseError("isotropic geodesic: curvature undefined")
        return 0.0
    kg2 = geodesic_curvature_squared(c, kp)
    if kg2 < 0:
        raise ImaginaryCurvatureError(f"kg^2 = {kg2:.6g} < 0")
    return math.sqrt(kg2)


def cycle_with_curvature(kp: KappaPair, kg: float) -> Cycle:
    """A representative cycle of geodesic curvature ``kg`` in a Riemannian plane (k2 > 0).

    kg = 0 gives a geodesic; below sqrt(-k1) an equidistant; exactly sqrt(-k1)
    a horocycle; above it (or for any kg > 0 when k1 >= 0) a circle.
    """
    if kp.k2 <= 0:
        raise DegenerateMetricError("curvature galleries need a Riemannian plane")
    if kg < 0 or not math.isfinite(kg):
        raise DomainError("kg must be finite and non-negative")
    if kg == 0:
        return geodesic_from_betas(kp, 0.2, 0.3)
    edge = math.sqrt(-kp.k1) if kp.k1 < 0 else 0.0
    if kp.k1 < 0 and abs(kg - edge) <= HOROCYCLE_RTOL * edge:
        # x0 + sqrt(-k1) x1 = alpha has a null normal
        return Cycle.from_alphas(kp.k1, 1.0, edge, 0.0, 1.5)
    if kg < edge:
        return equidistant(kp, 0.2, 0.3, arc_tk(kp.k1, kg / -kp.k1))[0]
    return circle(kp, ChartPoint(Chart.PARALLEL_I, 0.2, 0.1), arc_tk(kp.k1, 1.0 / kg))


def classify(c: Cycle, kp: KappaPair) -> CycleKind:
    if abs(curvature_denominator(c, kp)) < 1e-14:
        return CycleKind.NON_GENERIC_LINE
    kg = geodesic_curvature(c, kp)
    if kg == 0.0:
        return CycleKind.GEODESIC
    if kp.k1 >= 0:
        return CycleKind.CIRCLE
    edge = math.sqrt(-kp.k1)
    if abs(kg - edge) <= HOROCYCLE_RTOL * edge:
        return CycleKind.HOROCYCLE
    return CycleKind.EQUIDISTANT if kg < edge else CycleKind.CIRCLE


# ------------------------------------------------------------- evaluation

FORMS = ("ambient", "parallel1", "lambda", "parallel2", "polar", "polar_half_angle", "polar_quadratic")


def evaluate(c: Cycle, kp: KappaPair, p: ChartPoint, form: str = "ambient") -> float:
    """Residual of the cycle equation at ``p``; zero exactly on the cycle.

    ``form`` selects one of the equivalent chart forms; they share the zero
    set but differ by non-vanishing factors.
    """
    if form == "ambient":
        xi, x1, x2 = regular_coordinates(kp, p)
        return c.c_xi * xi + c.alpha1 * x1 + c.alpha2 * x2 - c.c0
    if form in ("parallel1", "lambda"):
        a, y = convert(kp, p, Chart.PARALLEL_I).as_array()
        a0, a1, a2, al = c.alphas(kp.k1)
        lhs = a0 * ck(kp.k1, a) + a1 * sk(kp.k1, a)
        if form == "parallel1":
            return lhs - al / ck(kp.k12, y) + a2 * tk(kp.k12, y)
        yh = lambda_fn(kp.k12, y)
        return lhs - al * ck(-kp.k12, yh) + a2 * sk(-kp.k12, yh)
    if form == "parallel2":
        x, b = convert(kp, p, Chart.PARALLEL_II).as_array()
        a0, a1, a2, al = c.alphas(kp.k1)
        return a0 * ck(kp.k12, b) + a2 * sk(kp.k12, b) - al / ck(kp.k1, x) + a1 * tk(kp.k1, x)
    if form in ("polar", "polar_half_angle", "polar_quadratic"):
        r, phi = convert(kp, p, Chart.POLAR).as_array()
        lhs = c.alpha1 * ck(kp.k2, phi) + c.alpha2 * sk(kp.k2, phi)
        m = kappa_alpha(c, kp) - c.c_xi  # k1 (alpha + alpha0)
        if form == "polar":
            a0, _, _, al = c.alphas(kp.k1)
            return lhs - al / sk(kp.k1, r) + a0 / tk(kp.k1, r)
        t = tk(kp.k1, r / 2.0)
        if form == "polar_half_angle":
            return lhs - (m / 2.0 * t + c.c0 / (2.0 * t))
        return t * t - 2.0 / m * lhs * t + c.c0 / m
    raise KeyError(f"unknown cycle form {form!r}")


def power_of_origin(c: Cycle, kp: KappaPair) -> float:
    """(1/k1)(alpha - alpha0)/(alpha + alpha0), regular at k1 = 0.

    A geodesic through the origin gives 0/0; every ray meets it at r = 0,
    so its power is taken to be 0.
    """
    m = kappa_alpha(c, kp) - c.c_xi
    if abs(m) < 1e-14 and abs(c.c0) < 1e-14:
        return 0.0
    if abs(m) < 1e-14:
        raise DegenerateError("alpha + alpha0 = 0: power undefined")
    return c.c0 / m


def ray_intersections(c: Cycle, kp: KappaPair, phi: float) -> tuple[float, float]:
    """Signed radii where the line through the origin at angle ``phi`` meets the cycle.

    The half-angle tangents solve m t^2 - 2 lin t + c0 = 0.  A root whose
    tangent lies outside the model (|t| >= 1/sqrt(-k1)), or a missing root
    when the equation is linear, comes back as NaN.
    """
    m = kappa_alpha(c, kp) - c.c_xi
    lin = c.alpha1 * ck(kp.k2, phi) + c.alpha2 * sk(kp.k2, phi)
    if abs(m) < 1e-14:
        if abs(lin) < 1e-14:
            raise DomainError("the ray misses the cycle")
        tangents = (c.c0 / (2.0 * lin), math.nan)
    else:
        b = -2.0 * lin / m
        disc = b * b - 4.0 * c.c0 / m
        if disc < 0:
            raise DomainError("the ray misses the cycle")
        root = math.sqrt(disc)
        tangents = ((-b + root) / 2.0, (-b - root) / 2.0)
    radii = []
    for t in tangents:
        try:
            radii.append(2.0 * arc_tk(kp.k1, t))
        except DomainError:
            radii.append(math.nan)
    if all(math.isnan(r) for r in radii):
        raise DomainError("the ray meets the cycle only outside the model")
    return radii[0], radii[1]


# --------------------------------------------------------------- motions

def transform(c: Cycle, kp: KappaPair, g: GroupElement3) -> Cycle:
    """Image of the cycle under the motion ``g`` (k1 != 0)."""
    a0, a1, a2, al = c.alphas(kp.k1)
    # points satisfy n . x = al; images y = g x satisfy (n g^-1) . y = al
    n = np.array([a0, a1, a2]) @ inverse(g).m
    return Cycle.from_alphas(kp.k1, n[0], n[1], n[2], al)


def transform_conformal(c: Cycle, kp: KappaPair, ell: float, m4: np.ndarray) -> Cycle:
    """Image of the cycle under a 4x4 conformal matrix acting on cone rays."""
    k = kp.k1 * ell * ell
    # the cycle as a covector on cone coordinates:
    # xi = -l^2 (s+ + s-), x_i = l s_i, 1 = ((1 - k) s+ - (1 + k) s-) / 2
    cov = np.array([
        -c.c_xi * ell * ell - c.c0 * (1.0 - k) / 2.0,
        -c.c_xi * ell * ell + c.c0 * (1.0 + k) / 2.0,
        c.alpha1 * ell,
        c.alpha2 * ell,
    ])
    new = cov @ np.linalg.inv(m4)
    # back to (c_xi, alpha1, alpha2, c0): solve the same linear relations
    basis = np.array([
        [-ell * ell, -ell * ell, 0.0, 0.0],            # c_xi
        [0.0, 0.0, ell, 0.0],                           # alpha1
        [0.0, 0.0, 0.0, ell],                           # alpha2
        [-(1.0 - k) / 2.0, (1.0 + k) / 2.0, 0.0, 0.0],  # c0
    ])
    coeffs = np.linalg.solve(basis.T, new)
    return Cycle(*coeffs)


# -------------------------------------------------------------- distances

def distance(kp: KappaPair, p: ChartPoint, q: ChartPoint, subsidiary: bool = False) -> float:
    """Geodesic distance; ck(k1, s) equals the ambient bilinear form of the two points."""
    xi_p, x1_p, x2_p = regular_coordinates(kp, p)
    xi_q, x1_q, x2_q = regular_coordinates(kp, q)
    dxi, dx1, dx2 = xi_p - xi_q, x1_p - x1_q, x2_p - x2_q
    v = 0.5 * (kp.k1 * dxi * dxi + dx1 * dx1 + kp.k2 * dx2 * dx2)
    if subsidiary:
        if kp.k2 != 0:
            raise DegenerateMetricError("the leaf metric exists only for k2 = 0")
        if abs(v) > 1e-12:
            raise DegenerateMetricError("points lie on different leaves")
        _, yp = convert(kp, p, Chart.PARALLEL_I).as_array()
        _, yq = convert(kp, q, Chart.PARALLEL_I).as_array()
        return abs(yp - yq)
    scale = max(1.0, abs(x1_p), abs(x1_q), abs(x2_p), abs(x2_q))
    if v < -1e-15 * scale * scale:
        raise CausalityError("points are space-like separated")
    if kp.k1 > 0 and kp.k1 * v > 2.0 * (1 + 1e-12):
        raise CausalityError("no geodesic joins these points")
    v = max(v, 0.0)
    if kp.k1 > 0:
        v = min(v, 2.0 / kp.k1)
    return arc_vk(kp.k1, v)


def arc_and_sector(kp: KappaPair, rho: float, psi: float) -> tuple[float, float]:
    """Length sk(k1, rho) psi of a circular arc and area vk(k1, rho) psi of its sector."""
    return sk(kp.k1, rho) * psi, vk(kp.k1, rho) * psi


# --------------------------------------------------- curvature by the geodesic equation

def _tangent(c: Cycle, kp: KappaPair, a: float, y: float) -> np.ndarray:
    """Unit tangent (da/ds, dy/ds) of the cycle through (a, y) in the first parallel chart."""
    k1, k2, k12 = kp.k1, kp.k2, kp.k12
    ka = kappa_alpha(c, kp)
    cy = ck(k12, y)
    f = (c.c_xi * sk(k1, a) + c.alpha1 * ck(k1, a)) * cy / (ka * k2 * sk(k12, y) - c.alpha2)
    norm = 1.0 + k2 * f * f
    if norm <= 0:
        raise ImaginaryCurvatureError("cycle is not time-like at this point")
    scale = 1.0 / math.sqrt(norm)
    return np.array([scale / cy, f * scale])


def kg_numeric_squared(c: Cycle, kp: KappaPair, p: ChartPoint, h: float = 1e-5) -> float:
    """Squared curvature from the unit tangent u' and v = u'' + Gamma u' u', measured with g1."""
    if kp.k2 == 0:
        raise DegenerateMetricError("the curvature pipeline needs k2 != 0")
    q = convert(kp, p, Chart.PARALLEL_I)
    u = q.as_array()
    du = _tangent(c, kp, *u)
    # u'' is the derivative of the tangent field along itself
    fwd = _tangent(c, kp, *(u + h * du))
    bwd = _tangent(c, kp, *(u - h * du))
    fwd2 = _tangent(c, kp, *(u + 2 * h * du))
    bwd2 = _tangent(c, kp, *(u - 2 * h * du))
    ddu = (8.0 * (fwd - bwd) - (fwd2 - bwd2)) / (12.0 * h)
    gamma = christoffel(kp, q)
    v = ddu + np.einsum("ijk,j,k->i", gamma, du, du)
    g = metric_at(kp, q)
    return g.g11 * v[0] ** 2 + g.g22 * v[1] ** 2


def kg_numeric(c: Cycle, kp: KappaPair, p: ChartPoint) -> float:
    kg2 = kg_numeric_squared(c, kp, p)
    if kg2 < -1e-10:
        raise ImaginaryCurvatureError(f"kg^2 = {kg2:.6g} < 0")
    return math.sqrt(max(kg2, 0.0))


# ------------------------------------------------------------ sampling and fitting

def sample_zero_set(c: Cycle, kp: KappaPair, n: int = 50, phi_span: float = 1.0) -> list[ChartPoint]:
    """Polar points on the cycle, taken from ray intersections over a fan of angles.

    Rays that miss the cycle, or meet it at a chart pole, are skipped, so
    fewer than ``n`` points may come back.
    """
    out: list[ChartPoint] = []
    for phi in np.linspace(-phi_span, phi_span, n):
        try:
            r1, r2 = ray_intersections(c, kp, float(phi))
        except (DomainError, ArithmeticError):
            continue
        for r in (r1, r2):
            if math.isfinite(r) and abs(r) > 1e-6:
                out.append(ChartPoint(Chart.POLAR, float(r), float(phi)))
    return out


def _design_row(kp: KappaPair, p: ChartPoint) -> np.ndarray:
    xi, x1, x2 = regular_coordinates(kp, p)
    return np.array([xi, x1, x2, -1.0])


def fit_cycle(kp: KappaPair, points: list[ChartPoint]) -> Cycle:
    """Least-squares cycle through the points: right singular vector of the smallest singular value."""
    if len(points) < 3:
        raise DegenerateError("at least three points are needed")
    rows = np.array([_design_row(kp, p) for p in points])
    _, _, vt = np.linalg.svd(rows)
    return Cycle(*vt[-1])


def fit_residual(c: Cycle, kp: KappaPair, points: list[ChartPoint]) -> float:
    """Largest |cycle equation| over the points, for the unit-norm coefficient vector."""
    return max(abs(evaluate(c, kp, p)) for p in points)
