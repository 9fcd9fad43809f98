import numpy as np
import pytest

from spinrot import FieldConfig


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_field(rng, max_rot=3.0):
    return FieldConfig(rng.uniform(-2, 2), rng.uniform(0.05, 2), rng.uniform(-max_rot, max_rot))


def random_state(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def pytest_terminal_summary(terminalreporter):
    acceptance = __import__("sys").modules.get("test_acceptance")
    lines = getattr(acceptance, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
