"""Property suites with a deterministic text report.

Every suite returns a list of :class:`Check` rows.  A row records the largest
residual seen for one property, its tolerance and whether it passed.  All
randomness flows from the seed, so reports are byte-identical across runs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np
from scipy.linalg import expm
from scipy.optimize import brentq

from . import compact as cp
from . import conformal as cf
from . import cycles as cy
from . import motion as mo
from .errors import CKGeomError
from .fields import CONFORMAL_GENERATORS, field, field_from_matrix
from .space import (SPACE_NAMES, Chart, ChartPoint, KappaPair, christoffel, metric_at,
                    regular_coordinates, the_nine, to_weierstrass)
from .trig import (arc_sk, arc_tk, arc_vk, ck, lambda_fn, sk, tk, vk)


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.tol)


class _Recorder:
    """Collects the worst residual per property name, in first-seen order."""

    def __init__(self, suite: str, scale: float = 1.0):
        self.suite = suite
        self.scale = scale
        self._rows: dict[str, list[float]] = {}

    def add(self, name: str, residual: float, tol: float) -> None:
        row = self._rows.setdefault(name, [0.0, tol * self.scale])
        residual = float(residual)
        if not np.isfinite(residual):
            row[0] = math.inf
        else:
            row[0] = max(row[0], residual)

    def checks(self) -> list[Check]:
        return [Check(self.suite, name, r, t) for name, (r, t) in self._rows.items()]


def random_pair(rng: np.random.Generator, zero_prob: float = 0.15) -> KappaPair:
    """Random (k1, k2) in [-2, 2]^2, each exactly zero with probability ``zero_prob``."""
    vals = [0.0 if rng.random() < zero_prob else float(rng.uniform(-2.0, 2.0)) for _ in range(2)]
    return KappaPair(*vals)


def _rel(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b)) / max(1.0, float(np.max(np.abs(b)))))


# ------------------------------------------------------------------ brackets

MOTION_BRACKETS = {
    ("J12", "P1"): lambda kp: {"P2": 1.0},
    ("J12", "P2"): lambda kp: {"P1": -kp.k2},
    ("P1", "P2"): lambda kp: {"J12": kp.k1},
}
LINE_BRACKETS = {
    ("D", "P1"): lambda k1: {"P1": 1.0, "G1": k1},
    ("D", "G1"): lambda k1: {"G1": -1.0},
    ("P1", "G1"): lambda k1: {"D": 1.0},
}


def _commutator_residual(mats: dict, table: dict) -> float:
    worst = 0.0
    for (x, y), rhs in table.items():
        lhs = mats[x] @ mats[y] - mats[y] @ mats[x]
        expected = sum((c * mats[z] for z, c in rhs.items()), np.zeros_like(lhs))
        worst = max(worst, float(np.max(np.abs(lhs - expected))))
    return worst


def _casimir_matrix(mats: dict, terms) -> np.ndarray:
    return sum(c * mats[x] @ mats[y] for c, x, y in terms)


def suite_brackets(seed: int, spaces: Iterable[str]) -> list[Check]:
    rng = np.random.default_rng(seed)
    rec = _Recorder("brackets")
    for _ in range(100):
        kp = random_pair(rng)
        ell = float(rng.uniform(0.5, 2.0))
        mats = {g: mo.generator_matrix(kp, g) for g in mo.MOTION_GENERATORS}
        table = {k: v(kp) for k, v in MOTION_BRACKETS.items()}
        rec.add("motion 3x3 brackets", _commutator_residual(mats, table), 1e-12)
        cas = mo.casimir_matrix(kp)
        rec.add("motion Casimir commutes", max(float(np.max(np.abs(cas @ m - m @ cas))) for m in mats.values()), 1e-12)
        line = {g: cp.conf_generator_matrix_1d(kp.k1, ell, g) for g in ("P1", "G1", "D")}
        rec.add("line conformal 3x3 brackets",
                _commutator_residual(line, {k: v(kp.k1) for k, v in LINE_BRACKETS.items()}), 1e-12)
        for basis, gens in cf.BASES.items():
            four = {g: cp.conf_generator_matrix(kp, ell, g) for g in gens}
            rec.add(f"plane conformal 4x4 brackets {basis}", cf.matrix_bracket_residual(kp, basis, four), 1e-12)
            for k, terms in enumerate(cf.casimirs(kp, basis), start=1):
                c = _casimir_matrix(four, terms)
                rec.add(f"4x4 Casimir C{k} commutes {basis}",
                        max(float(np.max(np.abs(c @ m - m @ c))) for m in four.values()), 1e-12)
    for name in spaces:
        kp = the_nine(name)
        pts = cf.interior_points(kp, 50, seed)
        for basis in cf.BASES:
            rec.add(f"field brackets {basis} {name}", cf.bracket_check(kp, basis, pts), 1e-5)
            c1, c2 = cf.casimir_residual(kp, basis, pts[:20])
            rec.add(f"field Casimirs {basis} {name}", max(c1, c2), 1e-5)
        dual = cf.dual_structure_constants(kp)
        ref = cf.structure_constants(KappaPair(-kp.k1, kp.k2), "PL")
        gap = 0.0
        for key, rhs in ref.items():
            for z in set(rhs) | set(dual[key]):
                gap = max(gap, abs(rhs.get(z, 0.0) - dual[key].get(z, 0.0)))
        rec.add(f"P<->L duality {name}", gap, 0.0)
        worst3 = worst4 = 0.0
        for p in pts[:10]:
            for g in mo.MOTION_GENERATORS:
                worst3 = max(worst3, float(np.max(np.abs(
                    field(kp, g, p) - field_from_matrix(kp, mo.generator_matrix(kp, g), p)))))
            for g in CONFORMAL_GENERATORS:
                worst4 = max(worst4, float(np.max(np.abs(
                    field(kp, g, p) - cp.field_from_matrix4(kp, 1.0, cp.conf_generator_matrix(kp, 1.0, g), p)))))
        rec.add(f"fields vs 3x3 action {name}", worst3, 1e-10)
        rec.add(f"fields vs 4x4 action {name}", worst4, 1e-10)
    return rec.checks()


# ------------------------------------------------------- isometry and cone

def _random_chart_point(kp: KappaPair, rng: np.random.Generator) -> ChartPoint:
    span = 0.6 / max(1.0, math.sqrt(max(abs(kp.k1), abs(kp.k12))))
    return ChartPoint(Chart.PARALLEL_I, float(rng.uniform(-span, span)), float(rng.uniform(-span, span)))


def suite_isometry(seed: int, spaces: Iterable[str], trials: int = 10_000) -> list[Check]:
    rng = np.random.default_rng(seed)
    rec = _Recorder("isometry")
    spaces = list(spaces)
    for trial in range(trials):
        kp = the_nine(spaces[trial % len(spaces)]) if trial % 2 == 0 else random_pair(rng)
        gens = rng.integers(0, 3, size=10)
        params = rng.uniform(-1.0, 1.0, size=10)
        m = np.eye(3)
        for g, t in zip(gens, params):
            m = m @ mo.one_param(kp, mo.MOTION_GENERATORS[g], t).m
        lam = np.diag(kp.bilinear)
        rec.add("motion words preserve the bilinear form", _rel(m.T @ lam @ m, lam) / max(1.0, float(np.max(np.abs(m)))) ** 2, 1e-9)
        ell = float(rng.uniform(0.5, 2.0))
        gens = rng.integers(0, 6, size=10)
        params = rng.uniform(-1.0, 1.0, size=10)
        m4 = np.eye(4)
        for g, t in zip(gens, params):
            m4 = m4 @ cp.conf_subgroup(kp, ell, cp.CONF_GENERATORS[g], t).m
        ups = cp.upsilon(kp)
        size = max(1.0, float(np.max(np.abs(m4))))
        rec.add("conformal words preserve the cone form", float(np.max(np.abs(m4.T @ ups @ m4 - ups))) / size ** 2, 1e-9)
        s = cp.embed_2d(kp, ell, _random_chart_point(kp, rng))[0].as_array()
        image = m4 @ s
        rec.add("cone points stay on the cone", abs(cp.cone_residual(kp, image)) / max(1.0, float(image @ image)), 1e-9)
    return rec.checks()


# ------------------------------------------------------------- expm oracle

def _one_param_families():
    fams = []
    for g in mo.MOTION_GENERATORS:
        fams.append(("motion " + g, lambda kp, ell, g=g: mo.generator_matrix(kp, g),
                     lambda kp, ell, t, g=g: mo.one_param(kp, g, t).m))
    for g in ("P1", "G1", "D"):
        fams.append(("line " + g, lambda kp, ell, g=g: cp.conf_generator_matrix_1d(kp.k1, ell, g),
                     lambda kp, ell, t, g=g: cp.conf_subgroup_1d(kp.k1, ell, g, t)))
    for g in cp.CONF_GENERATORS:
        fams.append(("plane " + g, lambda kp, ell, g=g: cp.conf_generator_matrix(kp, ell, g),
                     lambda kp, ell, t, g=g: cp.conf_subgroup(kp, ell, g, t).m))
    return fams


def suite_expm(seed: int, spaces: Iterable[str], draws: int = 1000) -> list[Check]:
    rng = np.random.default_rng(seed)
    rec = _Recorder("expm")
    fams = _one_param_families()
    spaces = list(spaces)
    for i in range(draws):
        kp = the_nine(spaces[i % len(spaces)]) if i % 2 == 0 else random_pair(rng)
        ell = float(rng.uniform(0.5, 2.0))
        label, gen, closed = fams[int(rng.integers(len(fams)))]
        t = float(rng.uniform(-2.0, 2.0))
        rec.add("closed forms equal expm", _rel(closed(kp, ell, t), expm(t * gen(kp, ell))), 1e-9)
    h = 1e-3
    for i in range(60):
        kp = random_pair(rng)
        ell = float(rng.uniform(0.5, 2.0))
        for label, gen, closed in fams:
            deriv = (8 * (closed(kp, ell, h) - closed(kp, ell, -h))
                     - (closed(kp, ell, 2 * h) - closed(kp, ell, -2 * h))) / (12 * h)
            rec.add("derivative at 0 equals generator", _rel(deriv, gen(kp, ell)), 1e-10)
    return rec.checks()


# --------------------------------------------------------------- curvature

def _cycle_through(kp: KappaPair, p: ChartPoint, rng: np.random.Generator) -> cy.Cycle:
    c_xi, a1, a2 = rng.uniform(-1.0, 1.0, size=3)
    xi, x1, x2 = regular_coordinates(kp, p)
    return cy.Cycle(c_xi, a1, a2, c_xi * xi + a1 * x1 + a2 * x2)


def suite_curvature(seed: int, spaces: Iterable[str], count: int = 200) -> list[Check]:
    rng = np.random.default_rng(seed)
    rec = _Recorder("curvature")
    curved = [s for s in spaces if the_nine(s).k2 != 0]
    done = attempts = 0
    while curved and done < count and attempts < 50 * count:
        attempts += 1
        kp = the_nine(curved[done % len(curved)])
        p = _random_chart_point(kp, rng)
        c = _cycle_through(kp, p, rng)
        try:
            closed = cy.geodesic_curvature_squared(c, kp)
            numeric = cy.kg_numeric_squared(c, kp, p)
        except (CKGeomError, ArithmeticError):
            continue
        rec.add("pipeline equals closed form (kg^2, relative)", abs(numeric - closed) / max(1.0, abs(closed)), 1e-6)
        done += 1
    rec.add("random cycles tested", count - done, 0.0)
    for name in curved:
        kp = the_nine(name)
        for rho in (0.1, 0.4, 0.9):
            kg = cy.geodesic_curvature(cy.circle(kp, ChartPoint(Chart.PARALLEL_I, 0.2, -0.1), rho), kp)
            rec.add(f"circle kg = |1/tk(rho)| {name}", abs(kg - abs(1.0 / tk(kp.k1, rho))), 1e-12)
            if kp.k1 == 0:
                continue
            if kp.k2 > 0:
                for c in cy.equidistant(kp, 0.3, -0.2, rho):
                    kg = cy.geodesic_curvature(c, kp)
                    rec.add(f"equidistant kg = |k1 tk(d)| {name}", abs(kg - abs(kp.k1 * tk(kp.k1, rho))), 1e-12)
            else:
                # time-like base: the equidistants are space-like and kg^2 flips sign
                for c in cy.equidistant(kp, 0.3, -0.2, rho, timelike_base=True):
                    kg2 = cy.geodesic_curvature_squared(c, kp)
                    rec.add(f"equidistant kg^2 = -(k1 tk(k1 k2, d))^2 {name}",
                            abs(kg2 + (kp.k1 * tk(kp.k12, rho)) ** 2), 1e-12)
    return rec.checks()


# ------------------------------------------------------------------- power

def _ray_roots(c: cy.Cycle, kp: KappaPair, phi: float) -> list[float]:
    """Signed radii on the line at angle phi where the cycle equation vanishes, by bracketing."""
    limit = (math.pi / math.sqrt(kp.k1)) * 0.999 if kp.k1 > 0 else 8.0 / math.sqrt(max(abs(kp.k1), 1e-12))
    grid = np.linspace(-limit, limit, 161)

    def g(r: float) -> float:
        return cy.evaluate(c, kp, ChartPoint(Chart.POLAR, float(r), phi))

    vals = [g(r) for r in grid]
    roots = []
    for r0, r1, v0, v1 in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if v0 == 0.0:
            roots.append(float(r0))
        elif v0 * v1 < 0:
            roots.append(brentq(g, r0, r1, xtol=1e-15, rtol=1e-15))
    return roots


def suite_power(seed: int, spaces: Iterable[str], per_space: int = 50) -> list[Check]:
    rng = np.random.default_rng(seed)
    rec = _Recorder("power")
    for name in spaces:
        kp = the_nine(name)
        if kp.k1 == 0:
            continue
        tested = 0
        for _ in range(per_space * 20):
            if tested >= per_space:
                break
            centre = ChartPoint(Chart.PARALLEL_I, float(rng.uniform(-0.2, 0.2)), float(rng.uniform(-0.2, 0.2)))
            c = cy.circle(kp, centre, float(rng.uniform(0.4, 0.9)))
            a0, _, _, alpha = c.alphas(kp.k1)
            predicted = (alpha - a0) / (alpha + a0) / kp.k1
            products = []
            for phi in np.linspace(-0.5, 0.5, 7):
                roots = _ray_roots(c, kp, float(phi))
                if len(roots) == 2:
                    products.append(tk(kp.k1, roots[0] / 2) * tk(kp.k1, roots[1] / 2))
            if len(products) < 2:
                continue
            products = np.array(products)
            rec.add(f"ray independence {name}", float(np.ptp(products)), 1e-9)
            rec.add(f"equals (a - a0)/(k1 (a + a0)) {name}", float(np.max(np.abs(products - predicted))), 1e-9)
            rec.add(f"matches power_of_origin {name}", abs(cy.power_of_origin(c, kp) - predicted), 1e-12)
            tested += 1
        rec.add(f"cycles tested {name}", per_space - tested, 0.0)
    return rec.checks()


# ------------------------------------------------------------------ lambda

def suite_lambda(seed: int, spaces: Iterable[str], samples: int = 10_000) -> list[Check]:
    rng = np.random.default_rng(seed)
    rec = _Recorder("lambda")
    for _ in range(samples):
        kappa = 0.0 if rng.random() < 0.05 else float(rng.uniform(-3.0, 3.0))
        bound = 1.45 / math.sqrt(kappa) if kappa > 0 else 3.0 / math.sqrt(max(-kappa, 1.0))
        x = float(rng.uniform(-bound, bound))
        lam = lambda_fn(kappa, x)
        rec.add("Lambda_{-k}(Lambda_k(x)) = x", abs(lambda_fn(-kappa, lam) - x), 1e-10)
        rec.add("ck(-k, Lambda) = 1/ck(k, x)", _rel(np.array(ck(-kappa, lam)), np.array(1.0 / ck(kappa, x))), 1e-10)
        rec.add("sk(-k, Lambda) = tk(k, x)", _rel(np.array(sk(-kappa, lam)), np.array(tk(kappa, x))), 1e-10)
        rec.add("tk(-k, Lambda) = sk(k, x)", abs(tk(-kappa, lam) - sk(kappa, x)), 1e-10)
        c, s = ck(-kappa, lam), sk(-kappa, lam)
        rec.add("ck^2 - k sk^2 = 1 on the image", abs(c * c - kappa * s * s - 1.0) / max(1.0, c * c), 1e-10)
        h = 1e-5 * max(1.0, abs(x))
        fd = (lambda_fn(kappa, x + h) - lambda_fn(kappa, x - h)) / (2 * h)
        rec.add("dLambda/dx = 1/ck(k, x) = ck(-k, Lambda)",
                max(abs(fd - 1.0 / ck(kappa, x)), abs(1.0 / ck(kappa, x) - c)) / max(1.0, abs(c)), 1e-6)
    return rec.checks()


# ----------------------------------------------------------------- killing

KILLING_GENERATORS = ("P1", "P2", "J12", "D", "G1", "G2")


def suite_killing(seed: int, spaces: Iterable[str]) -> list[Check]:
    rec = _Recorder("killing")
    for name in spaces:
        kp = the_nine(name)
        pts = cf.interior_points(kp, 50, seed)
        for gen in KILLING_GENERATORS:
            worst = max(cf.lie_derivative_check(kp, gen, p.chart, p) for p in pts)
            rec.add(f"L_X g - mu g, {gen} {name}", worst, 1e-5)
        iso = max(abs(cf.conformal_factor(kp, g, p.chart, p)) for g in ("P1", "P2", "J12") for p in pts)
        rec.add(f"isometries have mu = 0 {name}", iso, 0.0)
        if kp.k2 == 0:
            worst = 0.0
            for p in pts:
                if p.chart is not Chart.PARALLEL_I:
                    continue
                worst = max(worst, abs(cf.subsidiary_factor(kp, "D", p) + 2.0 * ck(kp.k1, p.u1)))
                worst = max(worst, cf.lie_derivative_check(kp, "D", p.chart, p, subsidiary=True))
            rec.add(f"leaf metric mu_D = -2 ck(k1, a) {name}", worst, 1e-5)
    return rec.checks()


# ----------------------------------------------------------------- laplace

OPERATOR_TAU, OPERATOR_C = 0.7, 1.3


def operator_closed_form(name: str, chart: Chart, u: float, v: float) -> tuple[float, ...]:
    """(A11, A12, A22, B1, B2) written out for kappa1 = sign/tau^2, kappa2 in {1, 0, -1/c^2}."""
    tau, c = OPERATOR_TAU, OPERATOR_C
    zero = 0.0
    if chart is Chart.PARALLEL_I:
        a, y = u, v
        table = {
            "S2": (1 / math.cos(y / tau) ** 2, zero, 1.0, zero, -math.tan(y / tau) / tau),
            "E2": (1.0, zero, 1.0, zero, zero),
            "H2": (1 / math.cosh(y / tau) ** 2, zero, 1.0, zero, math.tanh(y / tau) / tau),
            "NH+": (zero, zero, 1.0, zero, zero),
            "G": (zero, zero, 1.0, zero, zero),
            "NH-": (zero, zero, 1.0, zero, zero),
            "AdS": (-1 / (c * c * math.cosh(y / (c * tau)) ** 2), zero, 1.0, zero, math.tanh(y / (c * tau)) / (c * tau)),
            "M": (-1 / (c * c), zero, 1.0, zero, zero),
            "dS": (-1 / (c * c * math.cos(y / (c * tau)) ** 2), zero, 1.0, zero, -math.tan(y / (c * tau)) / (c * tau)),
        }
        return table[name]
    r = u
    table = {
        "S2": (1.0, zero, 1 / (tau * math.sin(r / tau)) ** 2, 1 / (tau * math.tan(r / tau)), zero),
        "E2": (1.0, zero, 1 / r ** 2, 1 / r, zero),
        "H2": (1.0, zero, 1 / (tau * math.sinh(r / tau)) ** 2, 1 / (tau * math.tanh(r / tau)), zero),
        "NH+": (zero, zero, 1 / (tau * math.sin(r / tau)) ** 2, zero, zero),
        "G": (zero, zero, 1 / r ** 2, zero, zero),
        "NH-": (zero, zero, 1 / (tau * math.sinh(r / tau)) ** 2, zero, zero),
        "AdS": (-1 / c ** 2, zero, 1 / (tau * math.sin(r / tau)) ** 2, -1 / (c * c * tau * math.tan(r / tau)), zero),
        "M": (-1 / c ** 2, zero, 1 / r ** 2, -1 / (c * c * r), zero),
        "dS": (-1 / c ** 2, zero, 1 / (tau * math.sinh(r / tau)) ** 2, -1 / (c * c * tau * math.tanh(r / tau)), zero),
    }
    return table[name]


def operator_pair(name: str) -> KappaPair:
    """The space with curvature radius OPERATOR_TAU and light speed OPERATOR_C."""
    base = the_nine(name)
    k1 = math.copysign(1.0 / OPERATOR_TAU ** 2, base.k1) if base.k1 else 0.0
    k2 = base.k2 if base.k2 >= 0 else -1.0 / OPERATOR_C ** 2
    return KappaPair(k1, k2)


def suite_laplace(seed: int, spaces: Iterable[str]) -> list[Check]:
    rng = np.random.default_rng(seed)
    rec = _Recorder("laplace")
    for name in spaces:
        kp = the_nine(name)
        pts = cf.interior_points(kp, 20, seed)
        for gen in KILLING_GENERATORS:
            worst = max(cf.symmetry_commutator_check(kp, gen, f, pts) for f in cf.TEST_FUNCTIONS)
            rec.add(f"[C, X] f - mu_X C f, {gen} {name}", worst, 1e-4)
        kp_op = operator_pair(name)
        worst = 0.0
        for _ in range(20):
            for chart in (Chart.PARALLEL_I, Chart.POLAR):
                u = float(rng.uniform(0.1, 0.5)) if chart is Chart.POLAR else float(rng.uniform(-0.5, 0.5))
                v = float(rng.uniform(-0.4, 0.4))
                got = np.array(cf.laplace_operator(kp_op, chart).coefficients(ChartPoint(chart, u, v)))
                want = np.array(operator_closed_form(name, chart, u, v))
                worst = max(worst, _rel(got, want))
        rec.add(f"operator coefficients closed form {name}", worst, 1e-13)
    return rec.checks()


# ------------------------------------------------------------------ census

def embedding_closed_form(name: str, a: float, y: float, ell: float, c: float) -> tuple[float, float, float]:
    """Compact image (ts+, ts1, ts2) of the parallel-I point (a, y), written out per space."""
    u, w = a / ell, y / ell
    if name == "S2":
        return math.cos(u) * math.cos(w), math.sin(u) * math.cos(w), math.sin(w)
    if name == "E2":
        q = u * u + w * w
        return (4 - q) / (4 + q), 4 * u / (4 + q), 4 * w / (4 + q)
    if name == "H2":
        return 1 / (math.cosh(u) * math.cosh(w)), math.tanh(u), math.tanh(w) / math.cosh(u)
    if name == "NH+":
        return math.cos(u), math.sin(u), w
    if name == "G":
        return (4 - u * u) / (4 + u * u), 4 * u / (4 + u * u), 4 * w / (4 + u * u)
    if name == "NH-":
        return 1 / math.cosh(u), math.tanh(u), w / math.cosh(u)
    wc = w / c
    if name == "AdS":
        return math.cos(u) * math.cosh(wc), math.sin(u) * math.cosh(wc), c * math.sinh(wc)
    if name == "M":
        q = u * u - wc * wc
        return (4 - q) / (4 + q), 4 * u / (4 + q), 4 * w / (4 + q)
    if name == "dS":
        return 1 / (math.cosh(u) * math.cos(wc)), math.tanh(u), c * math.tan(wc) / math.cosh(u)
    raise KeyError(name)


def embedding_pair(name: str, ell: float, c: float) -> KappaPair:
    base = the_nine(name)
    k1 = math.copysign(1.0 / ell ** 2, base.k1) if base.k1 else 0.0
    k2 = base.k2 if base.k2 >= 0 else -1.0 / c ** 2
    return KappaPair(k1, k2)


def suite_census(seed: int, spaces: Iterable[str], grid: int = 200) -> list[Check]:
    rng = np.random.default_rng(seed)
    rec = _Recorder("census")
    for name in spaces:
        kp = the_nine(name)
        rep = cp.completion_census(kp, 1.0, grid)
        fwd, inv, cov, bnd = rep["forward"], rep["inverse"], rep["coverage"], rep["boundary"]
        rec.add(f"images lie on the compact model {name}", fwd["sphere_residual"], 1e-9)
        if name == "S2":
            rec.add("S2 covers the whole sphere (missing fraction)", 1.0 - cov["hit_fraction"], 0.0)
            rec.add("S2 every model point has a preimage", inv["missing_fraction"], 0.0)
        if name == "E2":
            rec.add("E2 only the pole lacks a preimage (missing fraction)", inv["missing_fraction"], 0.0)
            rec.add("E2 forward images fill the sphere (missing fraction)", 1.0 - cov["hit_fraction"], 0.0)
            gaps = [cp.completion_census(kp, 1.0, n)["coverage"]["pole_gap"] for n in (grid // 4, grid // 2, grid)]
            shrink = max(gaps[1] / gaps[0], gaps[2] / gaps[1])
            rec.add("E2 pole gap shrinks as the grid refines (ratio per doubling)", shrink, 0.55)
            try:
                cp.inverse_stereographic(kp, 1.0, cp.CompactPoint(-1.0, 0.0, 0.0))
                rec.add("E2 pole has no preimage", 1.0, 0.0)
            except CKGeomError:
                rec.add("E2 pole has no preimage", 0.0, 0.0)
        if name in ("H2", "NH-"):
            rec.add(f"{name} image has ts+ > 0 (min ts+ negated)", max(0.0, -fwd["ts_plus_min"]), 0.0)
            rec.add(f"{name} model half ts+ < 0 has no preimage", abs(inv["missing_fraction"] - 0.5), 0.0)
        if name == "H2":
            rec.add("H2 boundary is the equator ts+ = 0", float(np.max(np.abs(bnd[:, 0]))) if len(bnd) else math.inf, 1e-12)
        if name == "M":
            c = 1.0 / math.sqrt(-kp.k2)
            on_lines = np.max(np.abs(np.abs(bnd[:, 2]) - c * np.abs(bnd[:, 1]))) if len(bnd) else math.inf
            through_pole = np.max(np.abs(bnd[:, 0] + 1.0)) if len(bnd) else math.inf
            rec.add("M infinity locus lies on ts2 = +-c ts1", float(on_lines), 1e-12)
            rec.add("M infinity locus passes through the pole (ts+ = -1)", float(through_pole), 1e-12)
        ell, c = float(rng.uniform(0.6, 1.6)), float(rng.uniform(0.6, 1.6))
        kp_embed = embedding_pair(name, ell, c)
        worst = 0.0
        for _ in range(50):
            a = float(rng.uniform(-0.5, 0.5)) * ell
            y = float(rng.uniform(-0.5, 0.5)) * ell * c
            got = cp.embed_2d(kp_embed, ell, ChartPoint(Chart.PARALLEL_I, a, y))[1].as_array()
            worst = max(worst, float(np.max(np.abs(got - embedding_closed_form(name, a, y, ell, c)))))
        rec.add(f"embedding closed form {name}", worst, 1e-12)
    return rec.checks()


# ------------------------------------------------------------------- flows

def _images(fn: Callable, points: list[ChartPoint]) -> list[ChartPoint]:
    out = []
    for p in points:
        try:
            out.append(fn(p))
        except (CKGeomError, ArithmeticError):
            continue
    return out


def _spread(points: list, k: int = 4) -> list:
    idx = np.linspace(0, len(points) - 1, k).round().astype(int)
    return [points[i] for i in idx]


def _pt_gap(kp: KappaPair, p: ChartPoint, q: ChartPoint) -> float:
    return float(np.max(np.abs(to_weierstrass(kp, p).as_array() - to_weierstrass(kp, q).as_array())))


def suite_flows(seed: int, spaces: Iterable[str]) -> list[Check]:
    rng = np.random.default_rng(seed)
    rec = _Recorder("flows")
    for name in spaces:
        kp = the_nine(name)
        flows = {
            "dilation": lambda p: cf.dilation_flow(kp, 0.3, p),
            "Lambda translation l1": lambda p: cf.lambda_translation_flow(kp, "l1", 0.2, p),
            "Lambda translation l2": lambda p: cf.lambda_translation_flow(kp, "l2", 0.2, p),
            "circle inversion": lambda p: cf.inversion_circle(kp, -0.3, p),
        }
        if kp.k1 != 0:
            wp = -cf.baseline_power(kp, sk(kp.k1, 0.4), 1.0)
            flows["equidistant inversion"] = lambda p: cf.inversion_equidistant(kp, wp, p)
        for label, fn in flows.items():
            tested = 0
            for _ in range(40):
                if tested >= 5:
                    break
                centre = ChartPoint(Chart.PARALLEL_I, float(rng.uniform(-0.2, 0.2)), float(rng.uniform(-0.2, 0.2)))
                c = cy.circle(kp, centre, float(rng.uniform(0.4, 0.7)))
                pts = cy.sample_zero_set(c, kp, 50, 0.6)
                images = _images(fn, pts)
                if len(images) < 8:
                    continue
                fitted = cy.fit_cycle(kp, _spread(images))
                rec.add(f"{label} preserves cycles {name}", cy.fit_residual(fitted, kp, images), 1e-8)
                tested += 1
            rec.add(f"{label} cycles tested {name}", 5 - tested, 0.0)
        # group laws, involutions and compositions on interior points
        pts = [p for p in cf.interior_points(kp, 30, seed) if p.chart is not Chart.POLAR]
        polar = [ChartPoint(Chart.POLAR, float(rng.uniform(0.2, 0.6)), float(rng.uniform(-0.5, 0.5))) for _ in range(20)]
        for axis in ("l1", "l2"):
            worst = 0.0
            for p in pts:
                try:
                    two = cf.lambda_translation_flow(kp, axis, 0.1, cf.lambda_translation_flow(kp, axis, 0.15, p))
                    one = cf.lambda_translation_flow(kp, axis, 0.25, p)
                except CKGeomError:
                    continue
                worst = max(worst, _pt_gap(kp, two, one))
            rec.add(f"Lambda translation {axis} group law {name}", worst, 1e-10)
        inv_gap = comp_gap = 0.0
        for p in polar:
            try:
                back = cf.inversion_circle(kp, -0.2, cf.inversion_circle(kp, -0.2, p))
                inv_gap = max(inv_gap, _pt_gap(kp, back, p))
                pair = cf.inversion_circle(kp, -0.1, cf.inversion_circle(kp, -0.2, p))
                dil = cf.dilation_flow(kp, math.log(0.1 / 0.2), p)
                comp_gap = max(comp_gap, _pt_gap(kp, pair, dil))
            except CKGeomError:
                continue
        rec.add(f"circle inversion is involutive {name}", inv_gap, 1e-10)
        rec.add(f"two circle inversions = dilation {name}", comp_gap, 1e-8)
        if kp.k1 != 0:
            w1 = -cf.baseline_power(kp, sk(kp.k1, 0.4), 1.0)
            w2 = -cf.baseline_power(kp, sk(kp.k1, 0.3), 1.0)
            shift = cf.equidistant_inversion_shift(kp, w1, w2)
            inv_gap = comp_gap = 0.0
            for p in pts:
                try:
                    back = cf.inversion_equidistant(kp, w1, cf.inversion_equidistant(kp, w1, p))
                    inv_gap = max(inv_gap, _pt_gap(kp, back, p))
                    pair = cf.inversion_equidistant(kp, w2, cf.inversion_equidistant(kp, w1, p))
                    trans = cf.lambda_translation_flow(kp, "l1", shift, p)
                    comp_gap = max(comp_gap, _pt_gap(kp, pair, trans))
                except CKGeomError:
                    continue
            rec.add(f"equidistant inversion is involutive {name}", inv_gap, 1e-10)
            rec.add(f"two equidistant inversions = Lambda translation {name}", comp_gap, 1e-8)
    return rec.checks()


# ------------------------------------------------------------- contraction

CONTRACTION_EPS = 1e-9


def suite_contraction(seed: int, spaces: Iterable[str]) -> list[Check]:
    rng = np.random.default_rng(seed)
    rec = _Recorder("contraction")
    xs = rng.uniform(-1.5, 1.5, size=40)
    for eps in (CONTRACTION_EPS, -CONTRACTION_EPS):
        for fn, label in ((ck, "ck"), (sk, "sk"), (vk, "vk"), (tk, "tk"), (lambda_fn, "Lambda")):
            rec.add(f"{label} at |k| = 1e-9", max(abs(fn(eps, x) - fn(0.0, x)) for x in xs), 1e-6)
        for fn, label in ((arc_sk, "arc_sk"), (arc_tk, "arc_tk")):
            rec.add(f"{label} at |k| = 1e-9", max(abs(fn(eps, x) - fn(0.0, x)) for x in xs), 1e-6)
        rec.add("arc_vk at |k| = 1e-9", max(abs(arc_vk(eps, abs(x)) - arc_vk(0.0, abs(x))) for x in xs), 1e-6)
    for name in spaces:
        base = the_nine(name)
        for which in ("k1", "k2"):
            if getattr(base, which) != 0:
                continue
            for eps in (CONTRACTION_EPS, -CONTRACTION_EPS):
                near = KappaPair(eps, base.k2) if which == "k1" else KappaPair(base.k1, eps)
                m_gap = f_gap = e_gap = g_gap = 0.0
                for p in cf.interior_points(base, 15, seed):
                    m_gap = max(m_gap, _rel(metric_at(near, p).matrix(), metric_at(base, p).matrix()))
                    g_gap = max(g_gap, _rel(christoffel(near, p), christoffel(base, p)))
                    for gen in CONFORMAL_GENERATORS:
                        f_gap = max(f_gap, _rel(field(near, gen, p), field(base, gen, p)))
                    e_gap = max(e_gap, _rel(cp.embed_2d(near, 1.0, p)[1].as_array(),
                                            cp.embed_2d(base, 1.0, p)[1].as_array()))
                tag = f"{which} -> 0 in {name}"
                rec.add(f"metric {tag}", m_gap, 1e-6)
                rec.add(f"Christoffel symbols {tag}", g_gap, 1e-6)
                rec.add(f"fields {tag}", f_gap, 1e-6)
                rec.add(f"embedding {tag}", e_gap, 1e-6)
    return rec.checks()


SUITES: dict[str, Callable[[int, Iterable[str]], list[Check]]] = {
    "brackets": suite_brackets,
    "isometry": suite_isometry,
    "expm": suite_expm,
    "curvature": suite_curvature,
    "power": suite_power,
    "lambda": suite_lambda,
    "killing": suite_killing,
    "laplace": suite_laplace,
    "census": suite_census,
    "flows": suite_flows,
    "contraction": suite_contraction,
}
SUITE_ALIASES = {"cone": "isometry"}


def run(suite: str, seed: int = 7, spaces: Iterable[str] | None = None) -> list[Check]:
    spaces = list(SPACE_NAMES if spaces is None else spaces)
    suite = SUITE_ALIASES.get(suite, suite)
    if suite == "all":
        out: list[Check] = []
        for fn in SUITES.values():
            out.extend(fn(seed, spaces))
        return out
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}")
    return SUITES[suite](seed, spaces)


def format_report(checks: list[Check]) -> str:
    lines = []
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        lines.append(f"{status}  {c.suite:<11}  {c.name:<62}  max={c.residual:.3e}  tol={c.tol:.1e}")
    failed = sum(not c.passed for c in checks)
    lines.append(f"{len(checks) - failed}/{len(checks)} properties passed")
    return "\n".join(lines) + "\n"
