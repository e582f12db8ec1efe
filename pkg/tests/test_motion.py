import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from ckgeom import motion as mo
from ckgeom.fields import field
from ckgeom.space import Chart, ChartPoint, KappaPair, WeierstrassPoint, from_weierstrass, to_weierstrass

labels = st.floats(-3, 3)
params = st.floats(-1.5, 1.5)


def test_generator_matrices():
    p1 = mo.generator_matrix(KappaPair(0, 1), "P1")
    expected = np.zeros((3, 3))
    expected[1, 0] = 1
    assert np.array_equal(p1, expected)
    j = mo.generator_matrix(KappaPair(1, 1), "J12")
    assert np.array_equal(j, [[0, 0, 0], [0, 0, -1], [0, 1, 0]])


@given(k1=labels, k2=labels)
def test_motion_brackets(k1, k2):
    kp = KappaPair(k1, k2)
    p1, p2, j = (mo.generator_matrix(kp, w) for w in ("P1", "P2", "J12"))
    assert np.allclose(mo.bracket(p1, p2), k1 * j, atol=1e-12)
    assert np.allclose(mo.bracket(j, p1), p2, atol=1e-12)
    assert np.allclose(mo.bracket(j, p2), -k2 * p1, atol=1e-12)


@given(k1=labels, k2=labels)
def test_casimir_commutes(k1, k2):
    kp = KappaPair(k1, k2)
    c = mo.casimir_matrix(kp)
    for w in ("P1", "P2", "J12"):
        assert np.allclose(mo.bracket(c, mo.generator_matrix(kp, w)), 0, atol=1e-11)


def test_quarter_turn():
    g = mo.one_param(KappaPair(1, 1), "P1", math.pi / 2)
    assert np.allclose(g.m, [[0, -1, 0], [1, 0, 0], [0, 0, 1]], atol=1e-15)
    assert np.array_equal(mo.one_param(KappaPair(1, 1), "J12", 0.0).m, np.eye(3))


@given(k1=labels, k2=labels, t=params, which=st.sampled_from(["P1", "P2", "J12"]))
def test_closed_form_matches_expm(k1, k2, t, which):
    kp = KappaPair(k1, k2)
    oracle = scipy.linalg.expm(t * mo.generator_matrix(kp, which))
    assert np.allclose(mo.one_param(kp, which, t).m, oracle, atol=1e-10)


def test_rotation_fixes_origin(kp):
    w = mo.act(mo.one_param(kp, "J12", 0.83), WeierstrassPoint(1, 0, 0))
    assert np.allclose(w.as_array(), [1, 0, 0])


def test_parallel_chart_from_translations(kp):
    a, y = 0.4, -0.3
    g = mo.compose(mo.one_param(kp, "P1", a), mo.one_param(kp, "P2", y))
    w = mo.act(g, WeierstrassPoint(1, 0, 0))
    assert np.allclose(w.as_array(), to_weierstrass(kp, ChartPoint(Chart.PARALLEL_I, a, y)).as_array())


@given(k1=labels, k2=labels, a=params, b=params)
def test_translation_group_law(k1, k2, a, b):
    kp = KappaPair(k1, k2)
    two = mo.compose(mo.one_param(kp, "P1", a), mo.one_param(kp, "P1", b))
    assert np.allclose(two.m, mo.one_param(kp, "P1", a + b).m, atol=1e-11)


def test_inverse_and_invariants(kp, rng):
    for _ in range(20):
        g = mo.identity(kp)
        for _ in range(10):
            g = g @ mo.one_param(kp, str(rng.choice(["P1", "P2", "J12"])), float(rng.uniform(-0.5, 0.5)))
        assert np.allclose((g @ mo.inverse(g)).m, np.eye(3), atol=1e-10)
        assert g.validate(1e-9) < 1e-9


def test_validate_rejects_non_motions():
    with pytest.raises(ValueError):
        mo.GroupElement3(KappaPair(1, 1), 2 * np.eye(3)).validate()


def _flow_velocity(kp, which, p, h=1e-6):
    def moved(t):
        w = mo.act(mo.one_param(kp, which, t), to_weierstrass(kp, p))
        return from_weierstrass(kp, w, p.chart).as_array()
    return (moved(h) - moved(-h)) / (2 * h)


@pytest.mark.parametrize("which", ["P1", "P2", "J12"])
def test_fields_are_minus_flow_velocity(kp, which, rng):
    for chart in (Chart.PARALLEL_I, Chart.PARALLEL_II, Chart.POLAR):
        p = ChartPoint(chart, rng.uniform(0.2, 0.5), rng.uniform(-0.4, 0.4))
        assert np.allclose(mo.generator_field(kp, which, chart, p), -_flow_velocity(kp, which, p), atol=1e-6)


def test_field_spot_values():
    kp = KappaPair(-1, 1)
    assert np.allclose(field(kp, "P1", ChartPoint(Chart.PARALLEL_I, 0.3, 0.2)), [-1, 0])
    assert np.allclose(field(kp, "J12", ChartPoint(Chart.POLAR, 0.3, 0.2)), [0, -1])
