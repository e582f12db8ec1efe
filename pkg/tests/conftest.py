import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ckgeom.space import SPACE_NAMES, the_nine

settings.register_profile("ckgeom", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ckgeom")

RIEMANNIAN = ("S2", "E2", "H2")
LORENTZIAN = ("AdS", "M", "dS")
NEWTON_HOOKE = ("NH+", "G", "NH-")
CURVED = tuple(n for n in SPACE_NAMES if the_nine(n).k1 != 0)


@pytest.fixture(params=SPACE_NAMES)
def space_name(request):
    return request.param


@pytest.fixture
def kp(space_name):
    return the_nine(space_name)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: runs the full CLI verification twice")


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
