import pytest

from qmpicard.orders import find_mu, polarization_gram, saturate_order, standard_order, verify_order
from qmpicard.periods import build_splitting
from qmpicard.quaternion import compute_invariants, parse_element
from qmpicard.symplectic import symplectic_basis

MAXIMAL_BASIS = ["1", "i", "j", "1/2+1/2*i+1/2*j+1/2*ij"]

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def alg():
    return compute_invariants(-1, 3)


@pytest.fixture(scope="session")
def order(alg):
    return verify_order([parse_element(s) for s in MAXIMAL_BASIS], alg)


@pytest.fixture(scope="session")
def mu(order, alg):
    return find_mu(order, alg)


@pytest.fixture(scope="session")
def pol(order, mu, alg):
    return polarization_gram(order, mu, alg)


@pytest.fixture(scope="session")
def sbasis(pol):
    return symplectic_basis(pol.gram)


@pytest.fixture(scope="session")
def splitting(alg):
    return build_splitting(alg)


@pytest.fixture(scope="session")
def saturated(alg):
    return saturate_order(standard_order(alg), alg)
