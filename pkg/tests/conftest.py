import numpy as np
import pytest
from hypothesis import strategies as st

from tncode.composition import CodeTensor, build_network
from tncode.holographic import build_code
from tncode.pauli import PauliString
from tncode.stabilizer import steane


def paulis(n: int):
    return st.tuples(st.integers(0, 2**n - 1), st.integers(0, 2**n - 1)).map(lambda xz: PauliString(n, *xz))


@pytest.fixture(scope="session")
def steane_code():
    return steane()


@pytest.fixture(scope="session")
def net12():
    """Two Steane tensors joined on their first legs: the [[12,2,3]] code."""
    st_ = steane()
    return build_network([CodeTensor(st_), CodeTensor(st_)], [((0, 0), (1, 0))])


@pytest.fixture(scope="session")
def radius2():
    return build_code(2)[0]


@pytest.fixture(scope="session")
def radius3():
    return build_code(3)[0]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record the one-line verdict of an acceptance criterion."""

    def report(number: int, title: str, ok: bool, detail: str) -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title} -- {detail}"
        _ACCEPTANCE[number] = line
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[number])
