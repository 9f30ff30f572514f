import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_density_matrix(rng, d):
    """Random full-rank Hermitian trace-one matrix."""
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def random_amplitudes(rng, d, zeros=0):
    a = rng.normal(size=d) + 1j * rng.normal(size=d)
    if zeros:
        a[rng.choice(d, size=zeros, replace=False)] = 0.0
    return a / np.linalg.norm(a)


ACCEPTANCE_LINES = []


def record_criterion(label, passed, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {label}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
