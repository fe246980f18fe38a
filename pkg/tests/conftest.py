import numpy as np
import pytest
from hypothesis import strategies as st

from noisydiscord.qstate import XState

_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line[1])


@pytest.fixture
def acceptance_log(request):
    """Record one PASS/FAIL line per acceptance criterion for the summary."""
    lines = request.config.stash[_ACCEPTANCE]

    def log(number, name, ok, detail=""):
        line = f"[{number:>2}] {'PASS' if ok else 'FAIL'}  {name}  {detail}"
        lines.append((number, line))
        print(line)
        return ok

    return log


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@st.composite
def x_states(draw):
    """Valid X states: simplex populations, coherences inside the PSD bound."""
    w = np.array([draw(st.floats(1e-3, 1.0)) for _ in range(4)])
    p = w / w.sum()
    r14 = draw(st.floats(0.0, 1.0)) * np.sqrt(p[0] * p[3])
    r23 = draw(st.floats(0.0, 1.0)) * np.sqrt(p[1] * p[2])
    f14 = draw(st.floats(0.0, 2 * np.pi))
    f23 = draw(st.floats(0.0, 2 * np.pi))
    return XState(*p, r14 * np.exp(1j * f14), r23 * np.exp(1j * f23))
