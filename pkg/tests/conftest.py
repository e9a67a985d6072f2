import numpy as np
import pytest
from hypothesis import settings

from timegov.environment import make_environment
from timegov.geometry import Polytope

# the first call of a jitted kernel includes compile time
settings.register_profile("timegov", deadline=None)
settings.load_profile("timegov")

SQUARE = [[0.0, 0.0], [10.0, 0.0], [10.0, 10.0], [0.0, 10.0]]


@pytest.fixture
def ref_env():
    """W = [0,10]^2 with the obstacle [4,6]^2 and robot radius 0.5."""
    obstacle = Polytope([[4.0, 4.0], [6.0, 4.0], [6.0, 6.0], [4.0, 6.0]])
    return make_environment(SQUARE, [obstacle], 0.5, 0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call":
                continue
            props = dict(getattr(rep, "user_properties", []))
            if "criterion" in props:
                lines.append((props["criterion"], outcome.upper()[:4], props.get("detail", "")))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for num, status, detail in sorted(lines):
        terminalreporter.write_line(f"criterion {num:2d}: {status}  {detail}")
