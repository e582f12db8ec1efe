"""Kappa-labelled trigonometry.

Every function takes a real label ``kappa`` and interpolates between the
circular (kappa > 0), parabolic (kappa = 0) and hyperbolic (kappa < 0)
families.  Arguments may be Python floats or numpy arrays; the label is
always a scalar.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, PoleError

# below this value of |kappa| * x**2 the Taylor series is used
SERIES_THRESHOLD = 1e-8
POLE_TOL = 1e-13

PRINCIPAL = "principal"
SECOND_COPY = "second_copy"


def _check_kappa(kappa: float) -> float:
    kappa = float(kappa)
    if not math.isfinite(kappa):
        raise DomainError(f"kappa must be finite, got {kappa}")
    return kappa


def _is_scalar(x) -> bool:
    return np.ndim(x) == 0


# ---------------------------------------------------------------- scalar core

def _ck_scalar(kappa: float, x: float) -> float:
    z = kappa * x * x
    if abs(z) < SERIES_THRESHOLD:
        return 1.0 - z / 2.0 + z * z / 24.0 - z * z * z / 720.0
    if kappa > 0:
        return math.cos(math.sqrt(kappa) * x)
    return math.cosh(math.sqrt(-kappa) * x)


def _sk_scalar(kappa: float, x: float) -> float:
    z = kappa * x * x
    if abs(z) < SERIES_THRESHOLD:
        return x * (1.0 - z / 6.0 + z * z / 120.0 - z * z * z / 5040.0)
    if kappa > 0:
        r = math.sqrt(kappa)
        return math.sin(r * x) / r
    r = math.sqrt(-kappa)
    return math.sinh(r * x) / r


# ----------------------------------------------------------------- array core

def _ck_array(kappa: float, x: np.ndarray) -> np.ndarray:
    z = kappa * x * x
    series = 1.0 - z / 2.0 + z * z / 24.0 - z * z * z / 720.0
    if kappa > 0:
        exact = np.cos(math.sqrt(kappa) * x)
    elif kappa < 0:
        exact = np.cosh(math.sqrt(-kappa) * x)
    else:
        return np.ones_like(x)
    return np.where(np.abs(z) < SERIES_THRESHOLD, series, exact)


def _sk_array(kappa: float, x: np.ndarray) -> np.ndarray:
    z = kappa * x * x
    series = x * (1.0 - z / 6.0 + z * z / 120.0 - z * z * z / 5040.0)
    if kappa > 0:
        r = math.sqrt(kappa)
        exact = np.sin(r * x) / r
    elif kappa < 0:
        r = math.sqrt(-kappa)
        exact = np.sinh(r * x) / r
    else:
        return x.copy()
    return np.where(np.abs(z) < SERIES_THRESHOLD, series, exact)


# ------------------------------------------------------------------ forward

def ck(kappa: float, x):
    """Kappa-cosine: cos(sqrt(k) x), 1 or cosh(sqrt(-k) x)."""
    kappa = _check_kappa(kappa)
    if _is_scalar(x):
        return _ck_scalar(kappa, float(x))
    return _ck_array(kappa, np.asarray(x, dtype=float))


def sk(kappa: float, x):
    """Kappa-sine: sin(sqrt(k) x)/sqrt(k), x or sinh(sqrt(-k) x)/sqrt(-k)."""
    kappa = _check_kappa(kappa)
    if _is_scalar(x):
        return _sk_scalar(kappa, float(x))
    return _sk_array(kappa, np.asarray(x, dtype=float))


def vk(kappa: float, x):
    """Kappa-versine (1 - ck)/kappa, evaluated as 2 sk(x/2)**2."""
    half = sk(kappa, np.divide(x, 2.0))
    return 2.0 * half * half


def tk(kappa: float, x):
    """Kappa-tangent sk/ck.  Raises PoleError where ck vanishes."""
    c = ck(kappa, x)
    if np.any(np.abs(c) < POLE_TOL):
        raise PoleError(f"tk({kappa}, {x}) sits on a pole")
    return sk(kappa, x) / c


# ------------------------------------------------------------------ inverses

def _sqrt_abs(kappa: float) -> float:
    return math.sqrt(abs(kappa))


def arc_sk(kappa: float, y):
    """Principal inverse of sk."""
    kappa = _check_kappa(kappa)
    y_arr = np.asarray(y, dtype=float)
    if kappa == 0:
        out = y_arr
    elif kappa > 0:
        t = math.sqrt(kappa) * y_arr
        if np.any(np.abs(t) > 1.0 + 1e-15):
            raise DomainError(f"arc_sk({kappa}, {y}) needs 1 - kappa*y**2 >= 0")
        out = np.arcsin(np.clip(t, -1.0, 1.0)) / math.sqrt(kappa)
    else:
        r = _sqrt_abs(kappa)
        out = np.arcsinh(r * y_arr) / r
    return float(out) if _is_scalar(y) else out


def arc_tk(kappa: float, y):
    """Principal inverse of tk, into (-pi/(2 sqrt k), pi/(2 sqrt k)) for k > 0."""
    kappa = _check_kappa(kappa)
    y_arr = np.asarray(y, dtype=float)
    if kappa == 0:
        out = y_arr
    elif kappa > 0:
        r = math.sqrt(kappa)
        out = np.arctan(r * y_arr) / r
    else:
        r = _sqrt_abs(kappa)
        t = r * y_arr
        if np.any(np.abs(t) >= 1.0):
            raise DomainError(f"arc_tk({kappa}, {y}) needs |sqrt(-kappa) y| < 1")
        out = np.arctanh(t) / r
    return float(out) if _is_scalar(y) else out


def arc_vk(kappa: float, y):
    """Principal (non-negative) inverse of vk."""
    kappa = _check_kappa(kappa)
    y_arr = np.asarray(y, dtype=float)
    if np.any(y_arr < 0):
        raise DomainError(f"arc_vk({kappa}, {y}) needs y >= 0")
    if kappa > 0 and np.any(kappa * y_arr > 2.0 * (1.0 + 1e-15)):
        raise DomainError(f"arc_vk({kappa}, {y}) needs kappa*y <= 2")
    half = np.sqrt(y_arr / 2.0)
    if kappa > 0:
        half = np.minimum(half, 1.0 / math.sqrt(kappa))
    out = 2.0 * np.asarray(arc_sk(kappa, half))
    return float(out) if _is_scalar(y) else out


def arc_ck(kappa: float, y):
    """Principal inverse of ck: into [0, pi/sqrt k] or [0, inf)."""
    kappa = _check_kappa(kappa)
    if kappa == 0:
        raise DomainError("ck(0, x) == 1 is not invertible")
    y_arr = np.asarray(y, dtype=float)
    if kappa > 0:
        if np.any(np.abs(y_arr) > 1.0 + 1e-15):
            raise DomainError(f"arc_ck({kappa}, {y}) needs |y| <= 1")
    elif np.any(y_arr < 1.0 - 1e-15):
        raise DomainError(f"arc_ck({kappa}, {y}) needs y >= 1")
    # through the versine keeps precision close to y = 1
    v = np.clip((1.0 - y_arr) / kappa, 0.0, None)
    if kappa > 0:
        v = np.minimum(v, 2.0 / kappa)
    out = np.asarray(arc_vk(kappa, v))
    return float(out) if _is_scalar(y) else out


# -------------------------------------------------------------- derivatives

def d_ck(kappa: float, x):
    return -kappa * sk(kappa, x)


def d_sk(kappa: float, x):
    return ck(kappa, x)


def d_tk(kappa: float, x):
    c = ck(kappa, x)
    if np.any(np.abs(c) < POLE_TOL):
        raise PoleError(f"d_tk({kappa}, {x}) sits on a pole")
    return 1.0 / (c * c)


def d_vk(kappa: float, x):
    return sk(kappa, x)


def d_arc_sk(kappa: float, y):
    return 1.0 / np.sqrt(1.0 - kappa * np.asarray(y, dtype=float) ** 2)


def d_arc_tk(kappa: float, y):
    return 1.0 / (1.0 + kappa * np.asarray(y, dtype=float) ** 2)


def d_arc_vk(kappa: float, y):
    y = np.asarray(y, dtype=float)
    return 1.0 / np.sqrt(2.0 * y - kappa * y * y)


# ------------------------------------------------------------------- Lambda

def _lambda_series(kappa: float, x):
    z = kappa * x * x
    return x * (1.0 + z / 6.0 + z * z / 24.0 + 61.0 * z * z * z / 5040.0)


def lambda_fn(kappa: float, x):
    """Lambda function: integral of 1/ck(kappa, t) from 0 to x.

    The result carries the opposite label -kappa.  For kappa > 0 only the
    principal branch |sqrt(kappa) x| < pi/2 is accepted; for kappa < 0 this
    is the (scaled) Gudermannian.
    """
    kappa = _check_kappa(kappa)
    x_arr = np.asarray(x, dtype=float)
    if kappa == 0:
        return float(x_arr) if _is_scalar(x) else x_arr.copy()
    if kappa > 0 and np.any(math.sqrt(kappa) * np.abs(x_arr) >= math.pi / 2):
        raise DomainError(f"lambda_fn({kappa}, {x}) beyond the principal branch")
    z = kappa * x_arr * x_arr
    half_tan = np.asarray(tk(kappa, x_arr / 2.0))
    # T_{-k}(L/2) = T_k(x/2)
    exact = 2.0 * np.asarray(arc_tk(-kappa, half_tan))
    out = np.where(np.abs(z) < SERIES_THRESHOLD, _lambda_series(kappa, x_arr), exact)
    return float(out) if _is_scalar(x) else out


def d_lambda(kappa: float, x):
    c = ck(kappa, x)
    if np.any(np.abs(c) < POLE_TOL):
        raise PoleError(f"d_lambda({kappa}, {x}) sits on a pole")
    return 1.0 / c


def lambda_extended(kappa: float, x: float) -> tuple[float, str]:
    """Lambda continued past the pole at pi/(2 sqrt k), for kappa > 0.

    Returns ``(value, branch)``.  Inside the principal branch the value is
    ``lambda_fn``.  Beyond the pole the real part of the analytic
    continuation is used, which lands on a second copy of the hyperbolic
    line: there ck(-kappa, value) = -1/ck(kappa, x), and the value is 0 at
    x = pi/sqrt(kappa).
    """
    kappa = _check_kappa(kappa)
    if kappa <= 0:
        raise DomainError("lambda_extended needs kappa > 0")
    r = math.sqrt(kappa)
    period = 2.0 * math.pi / r
    x = float(x)
    # reduce into (-pi/r, pi/r]
    x = x - period * math.floor((x + math.pi / r) / period)
    if x <= -math.pi / r:
        x += period
    if r * abs(x) < math.pi / 2:
        return lambda_fn(kappa, x), PRINCIPAL
    if r * abs(x) == math.pi / 2:
        raise PoleError("lambda_extended at the gluing point")
    u = math.tan(r * x / 2.0)
    # atanh continued through 1 keeps the real part atanh(1/u)
    return 2.0 * math.atanh(1.0 / u) / r, SECOND_COPY
