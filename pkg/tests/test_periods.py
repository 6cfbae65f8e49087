import math
import random

import numpy as np
import pytest

from qmpicard.errors import DefiniteAlgebra, DegeneratePeriods, StepTooLarge, StepTooSmall
from qmpicard.periods import (
    SiegelPoint,
    _ratio,
    build_splitting,
    complex_structure_comparison,
    elliptic_period_ratio,
    kodaira_spencer_rank,
    lattice_periods,
    period_matrix,
    qm_period_map,
)
from qmpicard.quaternion import QuaternionAlgebra, QuaternionElement, multiply, parse_element, reduced_norm, reduced_trace

q = parse_element


def grid_taus():
    return [complex(x, y) for y in np.linspace(0.4, 2.5, 10) for x in np.linspace(-0.9, 0.9, 10)]


def random_taus(n, seed=0):
    rng = random.Random(seed)
    return [complex(rng.uniform(-3, 3), rng.uniform(0.2, 3)) for _ in range(n)]


def test_split_branch_positive_a():
    sp = build_splitting(QuaternionAlgebra(1, 1))
    assert np.array_equal(sp.eta_i, np.diag([1.0, -1.0]))


def test_split_branch_negative_a(splitting):
    assert np.allclose(splitting.eta_j, np.diag([math.sqrt(3), -math.sqrt(3)]), atol=0)
    assert np.array_equal(splitting.eta_i, np.array([[0.0, -1.0], [1.0, 0.0]]))
    assert np.array_equal(splitting.eta_i @ splitting.eta_i, -np.eye(2))


@pytest.mark.parametrize("a,b", [(1, 1), (-1, 3), (2, 5), (-7, 11), (5, -2)])
def test_split_relations(a, b):
    sp = build_splitting(QuaternionAlgebra(a, b))
    assert all(v < 1e-12 for v in sp.residuals().values())


def test_split_rejects_definite():
    with pytest.raises(DefiniteAlgebra):
        build_splitting(QuaternionAlgebra(-1, -1))


def test_splitting_is_multiplicative(alg, splitting):
    rng = random.Random(1)
    for _ in range(200):
        x = QuaternionElement(*(rng.randint(-5, 5) for _ in range(4)))
        y = QuaternionElement(*(rng.randint(-5, 5) for _ in range(4)))
        lhs = splitting.image(multiply(x, y, alg))
        rhs = splitting.image(x) @ splitting.image(y)
        assert np.allclose(lhs, rhs, rtol=0, atol=1e-10 * (1 + np.abs(rhs).max()))
        assert math.isclose(np.linalg.det(splitting.image(x)), float(reduced_norm(x, alg)), abs_tol=1e-9)
        assert math.isclose(np.trace(splitting.image(x)), float(reduced_trace(x)), abs_tol=1e-12)


def test_lattice_is_eta_of_order(order, sbasis, splitting):
    # the conjugate identification still spans eta(O) (tau, 1)^T
    tau = 0.3 + 1.2j
    v = np.array([tau, 1])
    plain = np.column_stack([splitting.image(e) @ v for e in order.elements])
    pi = lattice_periods(tau, order, sbasis, splitting)
    real = lambda m: np.vstack([m.real, m.imag])
    coeffs = np.linalg.solve(real(plain), real(pi))
    assert np.allclose(coeffs, np.round(coeffs), atol=1e-9)
    assert math.isclose(abs(np.linalg.det(np.round(coeffs))), 1.0)


def test_period_matrix_at_i(order, sbasis, splitting):
    pt = period_matrix(1j, order, sbasis, splitting)
    assert np.linalg.norm(pt.omega - pt.omega.T) <= 1e-10
    assert np.linalg.eigvalsh(pt.omega.imag).min() > 0


def test_riemann_relations_grid(order, sbasis, splitting):
    for tau in grid_taus():
        pt = period_matrix(tau, order, sbasis, splitting)
        om = pt.omega
        assert np.linalg.norm(om - om.T) <= 1e-9 * np.linalg.norm(om)
        assert np.linalg.eigvalsh((om.imag + om.imag.T) / 2).min() > 0


def test_period_matrix_continuity(order, sbasis, splitting):
    tau, eps = 0.3 + 1.2j, 1e-6
    d = np.linalg.norm(period_matrix(tau + eps, order, sbasis, splitting).omega
                       - period_matrix(tau, order, sbasis, splitting).omega)
    ks = kodaira_spencer_rank(tau, qm_period_map(order, sbasis, splitting))
    assert d <= 4 * ks * eps


def test_elliptic_baseline():
    for tau in random_taus(5):
        assert elliptic_period_ratio(tau) == tau
    assert kodaira_spencer_rank(0.3 + 1.2j) == 1.0


def test_kodaira_spencer_qm(order, sbasis, splitting):
    f = qm_period_map(order, sbasis, splitting)
    assert kodaira_spencer_rank(0.3 + 1.2j, f) > 1e-6


def test_kodaira_spencer_step_order(order, sbasis, splitting):
    f = qm_period_map(order, sbasis, splitting)
    tau, h = 0.3 + 1.2j, 1e-4
    v1, v2 = kodaira_spencer_rank(tau, f, h), kodaira_spencer_rank(tau, f, h / 2)
    assert abs(v1 - v2) <= 10 * h * h * max(1.0, v1)


def test_kodaira_spencer_step_bounds():
    with pytest.raises(StepTooSmall):
        kodaira_spencer_rank(1j, h=1e-9)
    with pytest.raises(StepTooLarge):
        kodaira_spencer_rank(1j, h=1e-3)


def test_local_injectivity_grid(order, sbasis, splitting):
    f = qm_period_map(order, sbasis, splitting)
    assert all(kodaira_spencer_rank(t, f) > 1e-6 for t in grid_taus())


def test_complex_structure(order, sbasis, splitting):
    res, jq, jp = complex_structure_comparison(1j, order, sbasis, splitting, details=True)
    assert np.abs(jq @ jq + np.eye(4)).max() <= 1e-10
    assert np.abs(jp @ jp + np.eye(4)).max() <= 1e-10
    assert res <= 1e-9
    for tau in random_taus(20, seed=9):
        assert complex_structure_comparison(tau, order, sbasis, splitting) <= 1e-9


def test_tau_must_be_in_upper_half_plane(order, sbasis, splitting):
    with pytest.raises(ValueError):
        period_matrix(0.5 - 1j, order, sbasis, splitting)


def test_degenerate_periods():
    with pytest.raises(DegeneratePeriods):
        _ratio(np.eye(2, dtype=complex), np.array([[1, 2], [2, 4]], dtype=complex))


def test_siegel_point_from_matrix():
    pt = SiegelPoint.from_matrix(np.diag([1j, 2j]))
    assert pt.is_siegel
    assert not SiegelPoint.from_matrix(np.diag([1j, -2j])).is_siegel
