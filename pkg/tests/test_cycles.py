import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ckgeom import cycles as cy
from ckgeom import motion as mo
from ckgeom import compact as cp
from ckgeom.errors import DegenerateMetricError, DomainError, IsotropicBaseError
from ckgeom.space import Chart, ChartPoint, KappaPair, SPACE_NAMES, from_weierstrass, the_nine
from ckgeom.trig import ck, sk, tk

from conftest import CURVED

H2 = the_nine("H2")
S2 = the_nine("S2")


def test_normalisation():
    c = cy.Cycle(-2.0, 0.0, 0.0, 4.0)
    assert np.linalg.norm(c.as_array()) == pytest.approx(1.0)
    assert c.c_xi < 0 or c.as_array()[np.flatnonzero(c.as_array())[0]] > 0
    assert cy.Cycle(0, -3, 4, 0).same_as(cy.Cycle(0, 3, -4, 0))


def test_flat_geodesic_is_a_line():
    c = cy.geodesic_from_betas(KappaPair(0, 1), 1.0, 2.0)
    for a in np.linspace(-2, 2, 9):
        assert cy.evaluate(c, KappaPair(0, 1), ChartPoint(Chart.PARALLEL_I, a, 1 + 2 * a)) == pytest.approx(0, abs=1e-14)


def test_zero_betas_give_the_first_axis(kp):
    c = cy.geodesic_from_betas(kp, 0.0, 0.0)
    assert cy.evaluate(c, kp, ChartPoint(Chart.PARALLEL_I, 0.37, 0.0)) == 0.0


def test_sphere_geodesic_samples():
    b0, b1 = 0.3, -0.7
    c = cy.geodesic_from_betas(S2, b0, b1)
    g = [mo.one_param(S2, "P1", a) for a in np.linspace(-1.2, 1.2, 100)]
    for a, _ in zip(np.linspace(-1.2, 1.2, 100), g):
        y = math.atan(b0 * math.cos(a) + b1 * math.sin(a))
        p = ChartPoint(Chart.PARALLEL_I, a, y)
        assert abs(cy.evaluate(c, S2, p)) < 1e-10


def test_flat_circle():
    kp = KappaPair(0, 1)
    c = cy.circle(kp, ChartPoint(Chart.PARALLEL_I, 0, 0), 2.0)
    for t in np.linspace(0, 2 * math.pi, 12):
        assert cy.evaluate(c, kp, ChartPoint(Chart.PARALLEL_I, 2 * math.cos(t), 2 * math.sin(t))) == pytest.approx(0, abs=1e-14)
    assert cy.evaluate(c, kp, ChartPoint(Chart.PARALLEL_I, 1, 1)) != pytest.approx(0)


def test_sphere_circle_about_origin_is_a_cap():
    rho = 0.6
    c = cy.circle(S2, ChartPoint(Chart.PARALLEL_I, 0, 0), rho)
    for phi in np.linspace(-3, 3, 7):
        assert cy.evaluate(c, S2, ChartPoint(Chart.POLAR, rho, phi)) == pytest.approx(0, abs=1e-14)


@pytest.mark.parametrize("name", CURVED)
def test_chart_forms_share_the_zero_set(name, rng):
    kp = the_nine(name)
    c = cy.circle(kp, ChartPoint(Chart.PARALLEL_I, 0.1, -0.05), 0.5)
    pts = cy.sample_zero_set(c, kp, 30, 0.6)
    assert len(pts) >= 20
    for form in cy.FORMS:
        assert max(abs(cy.evaluate(c, kp, p, form)) for p in pts) < 1e-10


@pytest.mark.parametrize("name", CURVED)
def test_parallel_and_lambda_forms_agree(name, rng):
    kp = the_nine(name)
    c = cy.Cycle(*rng.normal(size=4))
    for _ in range(20):
        p = ChartPoint(Chart.PARALLEL_I, rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        assert cy.evaluate(c, kp, p, "parallel1") == pytest.approx(cy.evaluate(c, kp, p, "lambda"), abs=1e-10)


def test_equidistant_branches():
    kp = H2
    near, far = cy.equidistant(kp, 0.0, 0.0, 0.0)
    assert near.same_as(far) and near.same_as(cy.geodesic_from_betas(kp, 0, 0))
    d = 0.4
    up, down = cy.equidistant(kp, 0.0, 0.0, d)
    for a in np.linspace(-1, 1, 5):
        assert cy.evaluate(up, kp, ChartPoint(Chart.PARALLEL_I, a, d)) == pytest.approx(0, abs=1e-14)
        assert cy.evaluate(down, kp, ChartPoint(Chart.PARALLEL_I, a, -d)) == pytest.approx(0, abs=1e-14)


def test_flat_equidistants_are_geodesics():
    up, down = cy.equidistant(KappaPair(0, 1), 0.2, 0.5, 0.7)
    assert cy.geodesic_curvature(up, KappaPair(0, 1)) == 0.0
    assert cy.geodesic_curvature(down, KappaPair(0, 1)) == 0.0


def test_curvature_closed_forms():
    assert cy.geodesic_curvature(cy.geodesic_from_betas(H2, 0.3, 0.1), H2) == 0.0
    for rho in (0.2, 0.9, 1.4):
        c = cy.circle(S2, ChartPoint(Chart.PARALLEL_I, 0.1, 0.2), rho)
        assert cy.geodesic_curvature(c, S2) == pytest.approx(abs(1 / math.tan(rho)), rel=1e-12)
    for d in (0.1, 0.8):
        up, _ = cy.equidistant(H2, 0.1, 0.2, d)
        assert cy.geodesic_curvature(up, H2) == pytest.approx(math.tanh(d), rel=1e-12)


@pytest.mark.parametrize("name, k1", [("AdS", 1.0), ("dS", -1.0)])
def test_timelike_base_equidistant_has_negative_square(name, k1):
    kp = the_nine(name)
    d = 0.3
    up, _ = cy.equidistant(kp, 0.0, 0.0, d, timelike_base=True)
    expected = -(k1 * tk(kp.k12, d)) ** 2
    assert cy.geodesic_curvature_squared(up, kp) == pytest.approx(expected, rel=1e-12)


def test_classification():
    assert cy.classify(cy.circle(H2, ChartPoint(Chart.PARALLEL_I, 0, 0), 0.1), H2) is cy.CycleKind.CIRCLE
    assert cy.classify(cy.equidistant(H2, 0, 0, 0.1)[0], H2) is cy.CycleKind.EQUIDISTANT
    assert cy.classify(cy.cycle_with_curvature(H2, 1.0), H2) is cy.CycleKind.HOROCYCLE
    assert cy.classify(cy.Cycle(0.3, 0.1, 0.2, 0.5), S2) is cy.CycleKind.CIRCLE
    assert cy.classify(cy.geodesic_from_betas(S2, 0.2, 0.1), S2) is cy.CycleKind.GEODESIC


@pytest.mark.parametrize("kg", [0.0, 0.5, 1.0, 2.0])
def test_cycle_with_curvature(kg):
    assert cy.geodesic_curvature(cy.cycle_with_curvature(H2, kg), H2) == pytest.approx(kg, abs=1e-12)


def test_isotropic_line_is_non_generic():
    m = the_nine("M")
    line = cy.Cycle(0.0, 1.0, 1.0, 0.0)  # x1 + x2 = 0 is null in Minkowski
    assert cy.classify(line, m) is cy.CycleKind.NON_GENERIC_LINE
    with pytest.raises(IsotropicBaseError):
        cy.geodesic_curvature(line, m)


@pytest.mark.parametrize("name", ["NH+", "G", "NH-"])
def test_curvature_needs_main_metric(name):
    kp = the_nine(name)
    c = cy.circle(kp, ChartPoint(Chart.PARALLEL_I, 0.2, 0.1), 0.5)
    with pytest.raises(DegenerateMetricError):
        cy.geodesic_curvature(c, kp)
    with pytest.raises(DegenerateMetricError):
        cy.geodesic_curvature_squared(c, kp)


def test_power_of_origin_spot_values():
    rho = 0.7
    c = cy.circle(S2, ChartPoint(Chart.PARALLEL_I, 0, 0), rho)
    assert cy.power_of_origin(c, S2) == pytest.approx(-math.tan(rho / 2) ** 2, rel=1e-12)
    r1, r2 = cy.ray_intersections(c, S2, 0.3)
    assert sorted([r1, r2]) == pytest.approx([-rho, rho])
    assert cy.power_of_origin(cy.geodesic_from_betas(S2, 0, 0.4), S2) == 0.0


@pytest.mark.parametrize("name", CURVED)
def test_power_is_ray_independent(name, rng):
    kp = the_nine(name)
    c = cy.circle(kp, ChartPoint(Chart.PARALLEL_I, 0.1, 0.15), 0.6)
    products = []
    for phi in np.linspace(-0.5, 0.5, 20):
        r1, r2 = cy.ray_intersections(c, kp, phi)
        products.append(tk(kp.k1, r1 / 2) * tk(kp.k1, r2 / 2))
    assert np.ptp(products) < 1e-9
    assert products[0] == pytest.approx(cy.power_of_origin(c, kp), abs=1e-9)


def test_ray_roots_outside_the_model_are_nan():
    geo = cy.geodesic_from_betas(H2, 0.2, 0.3)
    r1, r2 = cy.ray_intersections(geo, H2, 0.0)
    assert math.isnan(r1) != math.isnan(r2)


def test_distance_spot_values():
    e2 = KappaPair(0, 1)
    assert cy.distance(e2, ChartPoint(Chart.PARALLEL_I, 0, 0), ChartPoint(Chart.PARALLEL_I, 3, 4)) == pytest.approx(5)
    assert cy.distance(S2, ChartPoint(Chart.POLAR, 0.2, 0.4), ChartPoint(Chart.POLAR, 0.9, 0.4)) == pytest.approx(0.7)
    nh = the_nine("NH+")
    d = cy.distance(nh, ChartPoint(Chart.PARALLEL_I, 0.1, 0.3), ChartPoint(Chart.PARALLEL_I, 0.8, -0.2))
    assert d == pytest.approx(0.7)


def test_arc_and_sector():
    assert cy.arc_and_sector(KappaPair(0, 1), 2.0, 0.5) == pytest.approx((1.0, 1.0))
    assert cy.arc_and_sector(S2, math.pi / 2, 2 * math.pi)[0] == pytest.approx(2 * math.pi)
    assert cy.arc_and_sector(H2, 1.0, 1.0) == pytest.approx((math.sinh(1), math.cosh(1) - 1))


def test_numeric_curvature_pipeline():
    geo = cy.geodesic_from_betas(S2, 0.1, 0.2)
    p = ChartPoint(Chart.PARALLEL_I, 0.3, math.atan(0.1 * math.cos(0.3) + 0.2 * math.sin(0.3)))
    assert cy.kg_numeric(geo, S2, p) == pytest.approx(0.0, abs=1e-6)
    rho = 0.8
    c = cy.circle(S2, ChartPoint(Chart.PARALLEL_I, 0, 0), rho)
    assert cy.kg_numeric(c, S2, ChartPoint(Chart.POLAR, rho, 0.3)) == pytest.approx(1 / math.tan(rho), abs=1e-6)
    ds = the_nine("dS")
    c = cy.Cycle(0.2, 0.3, -0.5, 0.1)
    p = cy.sample_zero_set(c, ds, 20, 0.5)[3]
    assert cy.kg_numeric_squared(c, ds, p) == pytest.approx(cy.geodesic_curvature_squared(c, ds), abs=1e-6)


@pytest.mark.parametrize("name", CURVED)
def test_motions_preserve_curvature(name, rng):
    kp = the_nine(name)
    c = cy.circle(kp, ChartPoint(Chart.PARALLEL_I, 0.1, 0.2), 0.5)
    g = mo.one_param(kp, "P1", 0.3) @ mo.one_param(kp, "J12", 0.7) @ mo.one_param(kp, "P2", -0.2)
    moved = cy.transform(c, kp, g)
    if kp.k2 != 0:
        assert cy.geodesic_curvature_squared(moved, kp) == pytest.approx(cy.geodesic_curvature_squared(c, kp), rel=1e-10)
    m4 = (cp.conf_subgroup(kp, 1.0, "P1", 0.3).m @ cp.conf_subgroup(kp, 1.0, "J12", 0.7).m
          @ cp.conf_subgroup(kp, 1.0, "P2", -0.2).m)
    assert moved.same_as(cy.transform_conformal(c, kp, 1.0, m4), 1e-10)


@given(coeffs=st.lists(st.floats(-1, 1), min_size=4, max_size=4).filter(lambda v: np.linalg.norm(v) > 0.1),
       name=st.sampled_from(SPACE_NAMES))
def test_fit_recovers_cycle(coeffs, name):
    kp = the_nine(name)
    c = cy.Cycle(*coeffs)
    pts = cy.sample_zero_set(c, kp, 40, 1.0)
    if len(pts) < 8:
        return
    fitted = cy.fit_cycle(kp, pts)
    assert cy.fit_residual(fitted, kp, pts) < 1e-8


def test_circle_rejects_bad_radius():
    with pytest.raises(DomainError):
        cy.circle(S2, ChartPoint(Chart.PARALLEL_I, 0, 0), -1.0)
    with pytest.raises(DomainError):
        cy.circle(S2, ChartPoint(Chart.PARALLEL_I, 0, 0), 4.0)
