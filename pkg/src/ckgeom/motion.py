"""The motion group SO_{k1,k2}(3) as 3x3 matrices."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import SingularMatrixError
from .fields import MOTION_GENERATORS, field
from .space import ChartPoint, KappaPair, WeierstrassPoint, convert
from .trig import ck, sk


def _unit(i: int, j: int, n: int = 3) -> np.ndarray:
    e = np.zeros((n, n))
    e[i, j] = 1.0
    return e


def _normalise_name(which: str) -> str:
    which = "J12" if which == "J" else which
    if which not in MOTION_GENERATORS:
        raise KeyError(f"unknown motion generator {which!r}")
    return which


def generator_matrix(kp: KappaPair, which: str) -> np.ndarray:
    """3x3 matrix of P1, P2 or J12."""
    which = _normalise_name(which)
    if which == "P1":
        return -kp.k1 * _unit(0, 1) + _unit(1, 0)
    if which == "P2":
        return -kp.k12 * _unit(0, 2) + _unit(2, 0)
    return -kp.k2 * _unit(1, 2) + _unit(2, 1)


@dataclass(frozen=True)
class AlgebraElement3:
    """c_P1 P1 + c_P2 P2 + c_J J12 in the 3x3 realisation."""

    kp: KappaPair
    c_p1: float = 0.0
    c_p2: float = 0.0
    c_j: float = 0.0

    @property
    def matrix(self) -> np.ndarray:
        return (self.c_p1 * generator_matrix(self.kp, "P1")
                + self.c_p2 * generator_matrix(self.kp, "P2")
                + self.c_j * generator_matrix(self.kp, "J12"))


def bracket(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def casimir_matrix(kp: KappaPair) -> np.ndarray:
    p1, p2, j = (generator_matrix(kp, w) for w in MOTION_GENERATORS)
    return kp.k2 * p1 @ p1 + p2 @ p2 + kp.k1 * j @ j


@dataclass(frozen=True)
class GroupElement3:
    """Element of SO_{k1,k2}(3).  Invariants are checked only by ``validate``."""

    kp: KappaPair
    m: np.ndarray = dc_field(repr=False)

    def validate(self, tol: float = 1e-10) -> float:
        """Return the largest invariant defect; raise ValueError above ``tol``."""
        lam = np.diag(self.kp.bilinear)
        defect = max(np.max(np.abs(self.m.T @ lam @ self.m - lam)), abs(np.linalg.det(self.m) - 1.0))
        if defect > tol:
            raise ValueError(f"not a CK motion: defect {defect:.3g}")
        return float(defect)

    def __matmul__(self, other: "GroupElement3") -> "GroupElement3":
        return compose(self, other)


def identity(kp: KappaPair) -> GroupElement3:
    return GroupElement3(kp, np.eye(3))


def one_param(kp: KappaPair, which: str, param: float) -> GroupElement3:
    """Closed-form exp(param * generator)."""
    which = _normalise_name(which)
    t = float(param)
    if which == "P1":
        c, s = ck(kp.k1, t), sk(kp.k1, t)
        m = np.array([[c, -kp.k1 * s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    elif which == "P2":
        c, s = ck(kp.k12, t), sk(kp.k12, t)
        m = np.array([[c, 0.0, -kp.k12 * s], [0.0, 1.0, 0.0], [s, 0.0, c]])
    else:
        c, s = ck(kp.k2, t), sk(kp.k2, t)
        m = np.array([[1.0, 0.0, 0.0], [0.0, c, -kp.k2 * s], [0.0, s, c]])
    return GroupElement3(kp, m)


def act(g: GroupElement3, w: WeierstrassPoint) -> WeierstrassPoint:
    return WeierstrassPoint.from_array(g.m @ w.as_array())


def compose(g: GroupElement3, h: GroupElement3) -> GroupElement3:
    return GroupElement3(g.kp, g.m @ h.m)


def inverse(g: GroupElement3) -> GroupElement3:
    """Inverse through the bilinear-form adjoint, or by elimination when that form degenerates."""
    kp = g.kp
    if abs(kp.k12) > 1e-12:
        lam = kp.bilinear
        return GroupElement3(kp, (g.m.T * lam) / lam[:, None])
    try:
        inv = np.linalg.solve(g.m, np.eye(3))
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(str(exc)) from exc
    if not np.all(np.isfinite(inv)):
        raise SingularMatrixError("non-finite inverse")
    return GroupElement3(kp, inv)


def generator_field(kp: KappaPair, which: str, chart, p: ChartPoint) -> np.ndarray:
    """Vector field of P1, P2 or J12 at ``p``, with components in ``chart``."""
    return field(kp, _normalise_name(which), convert(kp, p, chart))
