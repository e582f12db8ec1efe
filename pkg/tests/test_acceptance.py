"""Acceptance criteria 1-12, one PASS/FAIL line each.

Each criterion runs the matching ``verify`` suites (the same code the CLI
uses) under a stopwatch, plus a few independent spot checks.  The lines are
printed as the tests run (visible with ``-s``) and again in the terminal
summary; ``python3 tests/test_acceptance.py`` prints them standalone.
"""
from __future__ import annotations

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from ckgeom import compact as cp
from ckgeom import conformal as cf
from ckgeom import cycles as cy
from ckgeom import verify
from ckgeom.space import Chart, ChartPoint, KappaPair, the_nine
from ckgeom.trig import lambda_fn, sk, tk

RESULTS: dict[int, str] = {}


def _record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    RESULTS[number] = line
    print(line)


def _suites(*names: str) -> tuple[list[verify.Check], float]:
    start = time.perf_counter()
    checks = [c for name in names for c in verify.run(name, seed=7)]
    return checks, time.perf_counter() - start


def _summary(checks: list[verify.Check]) -> tuple[bool, str]:
    failed = [c for c in checks if not c.passed]
    worst = max((c.residual / c.tol for c in checks if c.tol > 0), default=0.0)
    text = f"{len(checks) - len(failed)}/{len(checks)} checks, worst residual/tol {worst:.1e}"
    if failed:
        text += "; failing: " + ", ".join(f"{c.suite}:{c.name}" for c in failed[:3])
    return not failed, text


def _criterion(number: int, title: str, suites: tuple[str, ...], budget: float | None, extra=None):
    checks, elapsed = _suites(*suites)
    ok, text = _summary(checks)
    text += f", {elapsed:.2f} s"
    if budget is not None:
        ok = ok and elapsed < budget
        text += f" (budget {budget:g} s)"
    if extra is not None:
        extra_ok, extra_text = extra()
        ok = ok and extra_ok
        text += f"; {extra_text}"
    _record(number, title, ok, text)
    assert ok, RESULTS[number]


# ------------------------------------------------------- independent checks

def _duality_spot():
    kp = KappaPair(0.7, -1.3)
    pg = cf.structure_constants(kp, "PG")
    pl = cf.structure_constants(kp, "PL")
    ok = pg[("D", "P1")] == {"P1": 1.0, "G1": 0.7} and pl[("L1", "L2")] == {"J12": -0.7}
    return ok, "[D,P1] and [L1,L2] spot values " + ("match" if ok else "differ")


def _cone_spot():
    kp = the_nine("M")
    word = np.eye(4)
    rng = np.random.default_rng(1)
    for gen in rng.choice(cp.CONF_GENERATORS, 10):
        word = word @ cp.conf_subgroup(kp, 1.0, str(gen), rng.uniform(-1, 1)).m
    ups = cp.upsilon(kp)
    gap = float(np.max(np.abs(word.T @ ups @ word - ups)))
    return gap < 1e-9, f"Minkowski 4x4 word defect {gap:.1e}"


def _curvature_spot():
    h2 = the_nine("H2")
    rho, d = 0.7, 0.4
    kg_circle = cy.geodesic_curvature(cy.circle(h2, ChartPoint(Chart.PARALLEL_I, 0.1, 0.2), rho), h2)
    kg_equi = cy.geodesic_curvature(cy.equidistant(h2, 0.2, 0.3, d)[0], h2)
    gap = max(abs(kg_circle - 1 / math.tanh(rho)), abs(kg_equi - math.tanh(d)))
    return gap < 1e-12, f"H2 circle/equidistant closed-form gap {gap:.1e}"


def _power_spot():
    s2 = the_nine("S2")
    c = cy.circle(s2, ChartPoint(Chart.PARALLEL_I, 0.3, -0.2), 0.5)
    values = []
    for phi in (0.1, 0.3, 0.45):
        r1, r2 = cy.ray_intersections(c, s2, phi)
        values.append(tk(1.0, r1 / 2) * tk(1.0, r2 / 2))
    spread = max(values) - min(values)
    return spread < 1e-9, f"S2 power spread over three rays {spread:.1e}"


def _lambda_spot():
    gap = abs(lambda_fn(1.0, 0.5) - 0.5222381032784403)
    return gap < 1e-12, f"Lambda_1(0.5) frozen oracle gap {gap:.1e}"


def _killing_spot():
    kp = the_nine("NH+")
    worst = max(abs(cf.subsidiary_factor(kp, "D", ChartPoint(Chart.PARALLEL_I, a, 0.3)) + 2 * math.cos(a))
                for a in (-0.5, 0.0, 0.6))
    return worst < 1e-6, f"NH+ leaf mu_D gap {worst:.1e}"


def _laplace_spot():
    coeffs = cf.laplace_operator(KappaPair(0, 1), Chart.PARALLEL_I).coefficients(ChartPoint(Chart.PARALLEL_I, 0.3, 0.4))
    ok = coeffs[:3] == (1.0, 0.0, 1.0) and coeffs[3] == 0 and coeffs[4] == 0
    return ok, "E2 operator is d_a^2 + d_y^2" if ok else f"E2 coefficients {coeffs}"


def _census_spot():
    ell, c = 1.0, 2.0
    kp = KappaPair(1.0, -1 / c ** 2)
    a, y = 0.3, 0.8
    _, q = cp.embed_2d(kp, ell, ChartPoint(Chart.PARALLEL_I, a, y))
    expected = (math.cos(a) * math.cosh(y / c), math.sin(a) * math.cosh(y / c), c * math.sinh(y / c))
    gap = float(np.max(np.abs(q.as_array() - expected)))
    census = cp.completion_census(the_nine("E2"), 1.0, 200)
    pole_only = census["inverse"]["max_missing_distance_to_pole"] < 1e-9
    return gap < 1e-12 and pole_only, f"AdS embedding gap {gap:.1e}, E2 misses only the pole: {pole_only}"


def _flows_spot():
    kp = KappaPair(1e-7, 1.0)
    wp = -cf.baseline_power(kp, sk(kp.k1, 0.4), 1.0)
    image = cf.inversion_equidistant(kp, wp, ChartPoint(Chart.PARALLEL_II, 0.1, 0.5))
    gap = abs(image.u1 - 0.7)
    return gap < 1e-6, f"near-flat equidistant inversion is x -> 2d - x (gap {gap:.1e})"


def _contraction_spot():
    gap = max(abs(tk(s * 1e-9, 0.8) - 0.8) for s in (1, -1))
    return gap < 1e-6, f"tk near zero curvature gap {gap:.1e}"


# ------------------------------------------------------------------ criteria

def test_criterion_01_structure_constants():
    _criterion(1, "structure constants", ("brackets",), 10.0, _duality_spot)


def test_criterion_02_isometry_invariants():
    _criterion(2, "isometry and cone invariants", ("isometry",), 5.0, _cone_spot)


def test_criterion_03_expm_oracle():
    _criterion(3, "closed forms vs expm", ("expm",), None)


def test_criterion_04_geodesic_curvature():
    _criterion(4, "geodesic curvature", ("curvature",), None, _curvature_spot)


def test_criterion_05_power_of_a_point():
    _criterion(5, "power of a point", ("power",), None, _power_spot)


def test_criterion_06_lambda_identities():
    _criterion(6, "Lambda identities", ("lambda",), None, _lambda_spot)


def test_criterion_07_conformal_killing():
    _criterion(7, "conformal Killing equation", ("killing",), None, _killing_spot)


def test_criterion_08_wave_operator():
    _criterion(8, "Laplace/wave symmetry", ("laplace",), None, _laplace_spot)


def test_criterion_09_compactification():
    _criterion(9, "compactification census", ("census",), 30.0, _census_spot)


def test_criterion_10_cycle_preservation():
    _criterion(10, "cycle preservation under conformal flows", ("flows",), None, _flows_spot)


def test_criterion_11_contraction():
    _criterion(11, "contraction continuity", ("contraction",), None, _contraction_spot)


def _verify_all() -> tuple[int, str, float]:
    start = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "ckgeom", "verify", "all", "--seed", "7"],
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, time.perf_counter() - start


@pytest.mark.slow
def test_criterion_12_cli_determinism():
    code_a, out_a, t_a = _verify_all()
    code_b, out_b, t_b = _verify_all()
    ok = code_a == 0 and code_b == 0 and out_a == out_b and max(t_a, t_b) < 120
    tail = out_a.strip().splitlines()[-1] if out_a.strip() else "no output"
    _record(12, "CLI determinism", ok,
            f"exit codes {code_a}/{code_b}, identical reports: {out_a == out_b}, {tail}, "
            f"{t_a:.1f} s and {t_b:.1f} s (budget 120 s)")
    assert ok, RESULTS[12]


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failures = 0
    for test in tests:
        try:
            test()
        except AssertionError:
            failures += 1
    sys.exit(1 if failures else 0)
