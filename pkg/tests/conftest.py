import numpy as np
import pytest
from hypothesis import settings, strategies as st

from signedsbm import BlockParams

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

unit = st.floats(0.0, 1.0, allow_nan=False)


@st.composite
def block_params(draw, n=st.integers(2, 30).map(lambda k: 2 * k), zero_diagonal=st.booleans()):
    return BlockParams(
        n=draw(n),
        d_in=draw(unit),
        d_out=draw(unit),
        p_in_pos=draw(unit),
        p_out_pos=draw(unit),
        zero_diagonal=draw(zero_diagonal),
        seed=draw(st.integers(0, 2**64 - 1)),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def fig4_params():
    return BlockParams(n=100, d_in=0.7, d_out=0.7, p_in_pos=0.65, p_out_pos=0.35, seed=4)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[0][1:])):
            terminalreporter.write_line(line)
