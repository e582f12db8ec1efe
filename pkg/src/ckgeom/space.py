"""The nine Cayley-Klein planes: labels, ambient points, geodesic charts and metrics."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (ChartCoverageError, ChartDomainError, DomainError,
                     PoleError, UnknownSpaceError)
from .trig import POLE_TOL, ck, sk, tk, vk


@dataclass(frozen=True)
class KappaPair:
    """Curvature ``k1`` and signature label ``k2`` of a CK plane."""

    k1: float
    k2: float

    def __post_init__(self):
        for name in ("k1", "k2"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite")
            object.__setattr__(self, name, value)

    @property
    def k12(self) -> float:
        return self.k1 * self.k2

    @property
    def bilinear(self) -> np.ndarray:
        """Diagonal of the invariant ambient form, (1, k1, k1 k2)."""
        return np.array([1.0, self.k1, self.k1 * self.k2])


# name -> (k1, k2); several aliases per space
_NINE = {
    "S2": (1.0, 1.0), "E2": (0.0, 1.0), "H2": (-1.0, 1.0),
    "NH+": (1.0, 0.0), "G": (0.0, 0.0), "NH-": (-1.0, 0.0),
    "AdS": (1.0, -1.0), "M": (0.0, -1.0), "dS": (-1.0, -1.0),
}
_ALIASES = {
    "sphere": "S2", "elliptic": "S2", "euclidean": "E2", "hyperbolic": "H2",
    "nh+": "NH+", "oscillating-nh": "NH+", "galilei": "G", "galilean": "G",
    "nh-": "NH-", "nh−": "NH-", "expanding-nh": "NH-",
    "ads": "AdS", "anti-de-sitter": "AdS", "minkowski": "M",
    "ds": "dS", "de-sitter": "dS", "s2": "S2", "e2": "E2", "h2": "H2", "g": "G", "m": "M",
}
SPACE_NAMES = tuple(_NINE)


def canonical_name(name: str) -> str:
    if name in _NINE:
        return name
    key = _ALIASES.get(name.strip().lower().replace(" ", "-"))
    if key is None:
        raise UnknownSpaceError(name)
    return key


def the_nine(name: str) -> KappaPair:
    """Normalised labels of one of the nine CK planes, by name or alias."""
    return KappaPair(*_NINE[canonical_name(name)])


class Chart(str, Enum):
    PARALLEL_I = "parallel1"
    PARALLEL_II = "parallel2"
    POLAR = "polar"

    @classmethod
    def parse(cls, value) -> "Chart":
        if isinstance(value, Chart):
            return value
        text = str(value).strip().lower().replace("-", "").replace("_", "")
        table = {"parallel1": cls.PARALLEL_I, "paralleli": cls.PARALLEL_I, "p1": cls.PARALLEL_I,
                 "parallel2": cls.PARALLEL_II, "parallelii": cls.PARALLEL_II, "p2": cls.PARALLEL_II,
                 "polar": cls.POLAR}
        if text not in table:
            raise ChartDomainError(f"unknown chart {value!r}")
        return table[text]


@dataclass(frozen=True)
class ChartPoint:
    """Coordinates (a, y), (x, b) or (r, phi) tagged with their chart."""

    chart: Chart
    u1: float
    u2: float

    def __post_init__(self):
        object.__setattr__(self, "chart", Chart.parse(self.chart))
        object.__setattr__(self, "u1", float(self.u1))
        object.__setattr__(self, "u2", float(self.u2))

    def as_array(self) -> np.ndarray:
        return np.array([self.u1, self.u2])


@dataclass(frozen=True)
class WeierstrassPoint:
    x0: float
    x1: float
    x2: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x0, self.x1, self.x2])

    @classmethod
    def from_array(cls, v) -> "WeierstrassPoint":
        return cls(float(v[0]), float(v[1]), float(v[2]))


@dataclass(frozen=True)
class MetricAtPoint:
    """Main metric components; ``subsidiary`` is the in-leaf coefficient when k2 == 0."""

    g11: float
    g12: float
    g22: float
    subsidiary: float | None = None

    def matrix(self) -> np.ndarray:
        return np.array([[self.g11, self.g12], [self.g12, self.g22]])


def sigma_residual(kp: KappaPair, w: WeierstrassPoint) -> float:
    """Deviation of ``w`` from the quadric x0^2 + k1 x1^2 + k1 k2 x2^2 = 1."""
    return w.x0 ** 2 + kp.k1 * w.x1 ** 2 + kp.k12 * w.x2 ** 2 - 1.0


def chart_labels(kp: KappaPair, chart) -> tuple[float, float]:
    """Trig labels carried by the two coordinates of ``chart``."""
    chart = Chart.parse(chart)
    if chart is Chart.PARALLEL_I:
        return kp.k1, kp.k12
    if chart is Chart.PARALLEL_II:
        return kp.k1, kp.k12
    return kp.k1, kp.k2


def check_domain(kp: KappaPair, p: ChartPoint) -> None:
    """Raise ChartDomainError unless ``p`` lies inside its chart's declared domain.

    Coordinates with a positive label live on one period (-pi/sqrt k, pi/sqrt k];
    the rest may be any finite real.
    """
    for value, label in zip((p.u1, p.u2), chart_labels(kp, p.chart)):
        if not math.isfinite(value):
            raise ChartDomainError(f"non-finite coordinate in {p}")
        if label > 0 and abs(value) * math.sqrt(label) > math.pi * (1 + 1e-12):
            raise ChartDomainError(f"{p} outside one period for label {label}")


def to_weierstrass(kp: KappaPair, p: ChartPoint) -> WeierstrassPoint:
    check_domain(kp, p)
    u, v = p.u1, p.u2
    if p.chart is Chart.PARALLEL_I:
        cy = ck(kp.k12, v)
        return WeierstrassPoint(ck(kp.k1, u) * cy, sk(kp.k1, u) * cy, sk(kp.k12, v))
    if p.chart is Chart.PARALLEL_II:
        cx = ck(kp.k1, u)
        return WeierstrassPoint(cx * ck(kp.k12, v), sk(kp.k1, u), cx * sk(kp.k12, v))
    sr = sk(kp.k1, u)
    return WeierstrassPoint(ck(kp.k1, u), sr * ck(kp.k2, v), sr * sk(kp.k2, v))


def regular_coordinates(kp: KappaPair, p: ChartPoint) -> tuple[float, float, float]:
    """(xi, x1, x2) with xi = (1 - x0)/k1 written so that it survives k1 -> 0."""
    check_domain(kp, p)
    u, v = p.u1, p.u2
    if p.chart is Chart.PARALLEL_I:
        cy = ck(kp.k12, v)
        xi = vk(kp.k1, u) + kp.k2 * ck(kp.k1, u) * vk(kp.k12, v)
        return xi, sk(kp.k1, u) * cy, sk(kp.k12, v)
    if p.chart is Chart.PARALLEL_II:
        cx = ck(kp.k1, u)
        xi = vk(kp.k1, u) + kp.k2 * cx * vk(kp.k12, v)
        return xi, sk(kp.k1, u), cx * sk(kp.k12, v)
    sr = sk(kp.k1, u)
    return vk(kp.k1, u), sr * ck(kp.k2, v), sr * sk(kp.k2, v)


def angle_from(kappa: float, c: float, s: float) -> float:
    """Coordinate t with (ck(kappa, t), sk(kappa, t)) proportional to (c, s), c > 0 if kappa <= 0."""
    if kappa > 0:
        r = math.sqrt(kappa)
        return math.atan2(r * s, c) / r
    if c <= 0:
        raise ChartCoverageError("cosine factor must be positive for a non-positive label")
    if kappa == 0:
        return s / c
    r = math.sqrt(-kappa)
    return math.atanh(max(-1.0, min(1.0, r * s / c))) / r


def from_weierstrass(kp: KappaPair, w: WeierstrassPoint, chart) -> ChartPoint:
    """Chart coordinates of an ambient point, principal representative."""
    chart = Chart.parse(chart)
    x0, x1, x2 = w.x0, w.x1, w.x2
    if kp.k1 < 0 and kp.k2 >= 0 and x0 <= 0:
        raise ChartCoverageError("point on the sheet x0 < 0")
    if chart is Chart.PARALLEL_I:
        return ChartPoint(chart, *_split(kp.k1, kp.k12, x0, x1, x2))
    if chart is Chart.PARALLEL_II:
        b, x = _split(kp.k12, kp.k1, x0, x2, x1)
        return ChartPoint(chart, x, b)
    return _polar_from(kp, x0, x1, x2)


def _split(k_in: float, k_out: float, x0: float, x_in: float, x_out: float) -> tuple[float, float]:
    """Invert (x0, x_in, x_out) = (C(u) C'(v), S(u) C'(v), S'(v)) with labels k_in, k_out."""
    if k_out > 0:
        r = math.sqrt(k_out)
        t = r * x_out
        if abs(t) >= 1.0:
            raise ChartCoverageError("point outside the chart image (|sqrt(k) S| >= 1)")
        v = math.asin(t) / r
    elif k_out < 0:
        r = math.sqrt(-k_out)
        v = math.asinh(r * x_out) / r
    else:
        v = x_out
    cv = ck(k_out, v)
    if abs(cv) < POLE_TOL:
        raise ChartCoverageError("point on the chart boundary")
    c, s = x0 / cv, x_in / cv
    if k_in < 0 and c <= 0:
        if k_out > 0:
            # the other half of the double wedge: C'(v) < 0 branch
            v = math.copysign(math.pi / math.sqrt(k_out), v if v != 0 else 1.0) - v
            c, s = -c, -s
        else:
            raise ChartCoverageError("point outside the chart image")
    return angle_from(k_in, c, s), v


def _polar_from(kp: KappaPair, x0: float, x1: float, x2: float) -> ChartPoint:
    scale = max(1.0, abs(x0), abs(x1), abs(x2))
    if abs(x1) + abs(x2) < 1e-15 * scale:
        # origin (or its antipode when k1 > 0); phi = 0 by convention
        r = 0.0 if x0 > 0 else math.pi / math.sqrt(kp.k1) if kp.k1 > 0 else 0.0
        return ChartPoint(Chart.POLAR, r, 0.0)
    q = x1 * x1 + kp.k2 * x2 * x2
    if kp.k2 < 0 and q <= 1e-14 * scale * scale:
        raise ChartCoverageError("point outside the time-like cone of the origin")
    s = math.sqrt(max(q, 0.0))
    if kp.k2 <= 0 and x1 < 0:
        # past cone: signed radius
        s = -s
    r = s if kp.k1 == 0 else angle_from(kp.k1, x0, s)
    return ChartPoint(Chart.POLAR, r, angle_from(kp.k2, x1 / s, x2 / s))


def convert(kp: KappaPair, p: ChartPoint, target) -> ChartPoint:
    target = Chart.parse(target)
    if p.chart is target:
        return p
    return from_weierstrass(kp, to_weierstrass(kp, p), target)


def weierstrass_jacobian(kp: KappaPair, p: ChartPoint) -> np.ndarray:
    """3x2 matrix of partial derivatives of the ambient point in chart coordinates."""
    check_domain(kp, p)
    u, v = p.u1, p.u2
    if p.chart is Chart.PARALLEL_I:
        ka, ky = kp.k1, kp.k12
    elif p.chart is Chart.PARALLEL_II:
        ka, ky = kp.k1, kp.k12
    else:
        ka, ky = kp.k1, kp.k2
    cu, su, cv, sv = ck(ka, u), sk(ka, u), ck(ky, v), sk(ky, v)
    if p.chart is Chart.PARALLEL_I:
        return np.array([[-ka * su * cv, -ky * cu * sv],
                         [cu * cv, -ky * su * sv],
                         [0.0, cv]])
    if p.chart is Chart.PARALLEL_II:
        return np.array([[-ka * su * cv, -ky * cu * sv],
                         [cu, 0.0],
                         [-ka * su * sv, cu * cv]])
    return np.array([[-ka * su, 0.0],
                     [cu * cv, -ky * su * sv],
                     [cu * sv, su * cv]])


def metric_at(kp: KappaPair, p: ChartPoint) -> MetricAtPoint:
    """Main metric (ds^2)_1 in the chart, plus the leaf metric when k2 == 0."""
    check_domain(kp, p)
    u, v = p.u1, p.u2
    if p.chart is Chart.PARALLEL_I:
        c = ck(kp.k12, v)
        g11, g22, leaf = c * c, kp.k2, 1.0
    elif p.chart is Chart.PARALLEL_II:
        c = ck(kp.k1, u)
        g11, g22, leaf = 1.0, kp.k2 * c * c, c * c
    else:
        s = sk(kp.k1, u)
        g11, g22, leaf = 1.0, kp.k2 * s * s, s * s
    return MetricAtPoint(g11, 0.0, g22, leaf if kp.k2 == 0 else None)


def christoffel(kp: KappaPair, p: ChartPoint) -> np.ndarray:
    """Levi-Civita symbols gamma[i, j, k] = Gamma^i_{jk} of the main metric."""
    check_domain(kp, p)
    u, v = p.u1, p.u2
    gamma = np.zeros((2, 2, 2))
    if p.chart is Chart.PARALLEL_I:
        gamma[1, 0, 0] = kp.k1 * sk(kp.k12, v) * ck(kp.k12, v)
        gamma[0, 0, 1] = gamma[0, 1, 0] = -kp.k12 * tk(kp.k12, v)
    elif p.chart is Chart.PARALLEL_II:
        gamma[0, 1, 1] = kp.k12 * sk(kp.k1, u) * ck(kp.k1, u)
        gamma[1, 1, 0] = gamma[1, 0, 1] = -kp.k1 * tk(kp.k1, u)
    else:
        s = sk(kp.k1, u)
        if abs(s) < POLE_TOL:
            raise PoleError("polar Christoffel symbols are singular at r = 0")
        gamma[0, 1, 1] = -kp.k2 * s * ck(kp.k1, u)
        gamma[1, 1, 0] = gamma[1, 0, 1] = ck(kp.k1, u) / s
    return gamma


def area_element(kp: KappaPair, p: ChartPoint) -> float:
    """Density of the area form sqrt(det g / k2) in the chart."""
    check_domain(kp, p)
    if p.chart is Chart.PARALLEL_I:
        return ck(kp.k12, p.u2)
    if p.chart is Chart.PARALLEL_II:
        return ck(kp.k1, p.u1)
    return sk(kp.k1, p.u1)
