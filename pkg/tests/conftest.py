import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from pinchsem.geometry import Position3, SystemParams

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SIDE = 20.0


def ground_point(side=SIDE):
    return st.builds(
        lambda x, y: Position3(x, y, 0.0),
        st.floats(0.0, side, allow_nan=False),
        st.floats(-side / 2, side / 2, allow_nan=False),
    )


def random_users(rng, n, side=SIDE):
    u = rng.uniform(size=(n, 4))
    return [
        (Position3(a * side, (b - 0.5) * side, 0.0), Position3(c * side, (d - 0.5) * side, 0.0))
        for a, b, c, d in u
    ]


@pytest.fixture
def params():
    return SystemParams()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
