import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from vqivp.ansatz import ParamVector

settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")


def random_params(rng: np.random.Generator, M: int, scale: float = 1.0) -> ParamVector:
    pos = scale * (rng.standard_normal(M + 1) + 1j * rng.standard_normal(M + 1))
    return ParamVector.from_positive(pos)


@st.composite
def param_vectors(draw, M: int):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_params(np.random.default_rng(seed), M)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES = []


def record_criterion(number: int, title: str, passed: bool, detail: str) -> str:
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d} {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
