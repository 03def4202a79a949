import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("qspectral", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("qspectral")


def dense_generators(m_row: int, m_col: int, q: float):
    """Float oracle: alpha and beta on l2(N) (x) l2(Z) restricted to a window.

    alpha e_{n,t} = sqrt(1 - q^{2n}) e_{n-1,t},  beta e_{n,t} = q^n e_{n,t-1}.
    """
    cols = 2 * m_col + 1
    dim = (m_row + 1) * cols
    idx = lambda n, t: n * cols + t + m_col
    a = np.zeros((dim, dim))
    b = np.zeros((dim, dim))
    for n in range(m_row + 1):
        for t in range(-m_col, m_col + 1):
            if n >= 1:
                a[idx(n - 1, t), idx(n, t)] = np.sqrt(1 - q ** (2 * n))
            if t - 1 >= -m_col:
                b[idx(n, t - 1), idx(n, t)] = q ** n
    return a, b


def dense_monomial(i: int, j: int, k: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.eye(a.shape[0])
    head = a if i >= 0 else a.T
    for _ in range(abs(i)):
        out = out @ head
    for _ in range(j):
        out = out @ b
    for _ in range(k):
        out = out @ b.T
    return out


@pytest.fixture(scope="session")
def q_half():
    from fractions import Fraction
    return Fraction(1, 2)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record_criterion():
    """Print and remember one PASS/FAIL line per acceptance criterion."""
    def record(number: int, title: str, ok: bool, detail: str = ""):
        line = f"criterion {number:2d} [{'PASS' if ok else 'FAIL'}] {title}" + (f" ({detail})" if detail else "")
        print(line)
        ACCEPTANCE_LINES.append(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
