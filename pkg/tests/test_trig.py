import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ckgeom import trig
from ckgeom.errors import DomainError, PoleError

kappas = st.floats(-4.0, 4.0).filter(lambda k: abs(k) > 1e-6 or k == 0.0)
small_x = st.floats(-1.2, 1.2)


@pytest.mark.parametrize("fn, kappa, x, expected", [
    (trig.ck, 0.0, 7.3, 1.0),
    (trig.ck, 1.0, 0.0, 1.0),
    (trig.ck, -1.0, 1.0, math.cosh(1.0)),
    (trig.sk, 0.0, 7.3, 7.3),
    (trig.sk, 1.0, math.pi / 2, 1.0),
    (trig.sk, -4.0, 0.5, math.sinh(1.0) / 2.0),
    (trig.vk, 0.0, 3.0, 4.5),
    (trig.vk, 1.0, 0.0, 0.0),
    (trig.vk, 1.0, math.pi, 2.0),
    (trig.tk, 0.0, 2.5, 2.5),
    (trig.tk, 1.0, math.pi / 4, 1.0),
    (trig.tk, -1.0, 0.7, math.tanh(0.7)),
    (trig.arc_sk, 0.0, 5.0, 5.0),
    (trig.arc_tk, 1.0, 1.0, math.pi / 4),
    (trig.arc_vk, 1.0, 2.0, math.pi),
    (trig.d_ck, 1.0, 0.0, 0.0),
    (trig.lambda_fn, 0.0, 1.7, 1.7),
])
def test_spot_values(fn, kappa, x, expected):
    assert fn(kappa, x) == pytest.approx(expected, rel=1e-14, abs=1e-15)


def test_d_tk_against_central_difference():
    h = 1e-6
    fd = (trig.tk(1.0, math.pi / 4 + h) - trig.tk(1.0, math.pi / 4 - h)) / (2 * h)
    assert trig.d_tk(1.0, math.pi / 4) == pytest.approx(2.0, rel=1e-14)
    assert fd == pytest.approx(2.0, rel=1e-8)


@given(x=st.floats(-3, 3))
def test_versine_derivative_is_sine(x):
    assert trig.d_vk(-1.0, x) == pytest.approx(trig.sk(-1.0, x), rel=1e-14, abs=1e-15)


def test_lambda_is_gudermannian_for_negative_label():
    xs = np.linspace(-3, 3, 61)
    gd = trig.lambda_fn(-1.0, xs)
    assert np.allclose(np.tanh(xs / 2), np.tan(gd / 2), rtol=0, atol=1e-14)


def test_lambda_positive_label_frozen_oracle():
    # oracle: 2 atanh(tan(0.25)), frozen
    assert trig.lambda_fn(1.0, 0.5) == pytest.approx(0.5222381032784403, rel=1e-14)
    assert 2 * math.atanh(math.tan(0.25)) == pytest.approx(0.5222381032784403, rel=1e-15)


def test_lambda_rejects_beyond_principal_branch():
    with pytest.raises(DomainError):
        trig.lambda_fn(1.0, 2.0)


def test_lambda_extended_branches():
    value, branch = trig.lambda_extended(1.0, 0.3)
    assert branch == trig.PRINCIPAL and value == trig.lambda_fn(1.0, 0.3)
    value, branch = trig.lambda_extended(1.0, math.pi)
    assert branch == trig.SECOND_COPY and value == pytest.approx(0.0, abs=1e-12)
    value, branch = trig.lambda_extended(1.0, math.pi / 2 - 1e-9)
    assert branch == trig.PRINCIPAL and value > 20
    with pytest.raises(PoleError):
        trig.lambda_extended(1.0, math.pi / 2)


@pytest.mark.parametrize("side", [-1e-7, 1e-7])
def test_lambda_extended_continuous_at_second_copy_origin(side):
    value, branch = trig.lambda_extended(1.0, math.pi + side)
    assert branch == trig.SECOND_COPY
    assert abs(value) < 1e-6


@given(kappa=kappas, x=small_x)
def test_pythagorean_identity(kappa, x):
    c, s = trig.ck(kappa, x), trig.sk(kappa, x)
    assert c * c + kappa * s * s == pytest.approx(1.0, abs=1e-12)


@given(kappa=kappas, x=small_x, y=small_x)
def test_addition_law(kappa, x, y):
    lhs = trig.sk(kappa, x + y)
    rhs = trig.sk(kappa, x) * trig.ck(kappa, y) + trig.ck(kappa, x) * trig.sk(kappa, y)
    assert lhs == pytest.approx(rhs, abs=1e-12)


@given(kappa=kappas, x=st.floats(-0.7, 0.7))
def test_arc_functions_invert(kappa, x):
    assert trig.arc_sk(kappa, trig.sk(kappa, x)) == pytest.approx(x, abs=1e-10)
    assert trig.arc_tk(kappa, trig.tk(kappa, x)) == pytest.approx(x, abs=1e-10)


@given(x=st.floats(-2, 2))
def test_contraction_continuity(x):
    for fn in (trig.ck, trig.sk, trig.vk, trig.tk):
        for eps in (1e-9, -1e-9):
            assert fn(eps, x) == pytest.approx(fn(0.0, x), abs=1e-6)


def test_array_and_scalar_agree():
    xs = np.array([-0.4, 0.0, 0.9])
    for fn in (trig.ck, trig.sk, trig.vk, trig.tk):
        assert np.allclose(fn(-2.0, xs), [fn(-2.0, float(x)) for x in xs], rtol=1e-15, atol=0)
