import math
import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from interp_couples import SpaceSpec, make_couple

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CONFIGS = os.path.join(ROOT, "configs")

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or rep.when not in ("setup", "call"):
        return
    if rep.when == "setup" and rep.passed:
        return
    number, title = marker.args
    detail = dict(item.user_properties).get("detail", "")
    status = "PASS" if rep.passed else "FAIL"
    ACCEPTANCE_LINES[str(number)] = f"{status}  [{number:>2}] {title}" + (f"  ({detail})" if detail else "")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=int):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


def random_weights(rng, N, spread=3.0):
    return np.exp(rng.uniform(-spread, spread, N))


def random_couple(rng, N, p, spread=3.0):
    """Random diagonal couple with the least valid embedding constant."""
    return make_couple(SpaceSpec(p, random_weights(rng, N, spread)), SpaceSpec(p, random_weights(rng, N, spread)))


def random_vector(rng, N, scale=1.0):
    return scale * (rng.standard_normal(N) + 1j * rng.standard_normal(N))


def rel_err(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def configs_dir():
    return CONFIGS


P_VALUES = (1, 2, math.inf)
