"""Real splitting, period lattices and period matrices in the Siegel space.

A point of the order is sent into C^2 by ``x -> eta(conj(x)) @ (tau, 1)``.
As a set this is the lattice ``eta(O) (tau, 1)^T`` (the order is stable
under conjugation); the conjugate is what makes the left-invariant form
``E(x, y) = trd(mu conj(x) y) / D`` compatible with the complex structure,
so the period matrix lands in the Siegel upper half-space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (
    DefiniteAlgebra,
    DegeneratePeriods,
    RiemannRelationViolation,
    StepTooLarge,
    StepTooSmall,
)
from .orders import OrderBasis
from .quaternion import QuaternionAlgebra, QuaternionElement, conjugate
from .symplectic import SymplecticBasis

RIEMANN_TOL = 1e-9
KS_THRESHOLD = 1e-6


@dataclass(frozen=True)
class SplittingMap:
    eta_i: np.ndarray
    eta_j: np.ndarray
    a: float
    b: float

    def image(self, x: QuaternionElement) -> np.ndarray:
        x0, x1, x2, x3 = (float(c) for c in x.coords)
        return x0 * np.eye(2) + x1 * self.eta_i + x2 * self.eta_j + x3 * (self.eta_i @ self.eta_j)

    def residuals(self) -> dict[str, float]:
        ei, ej = self.eta_i, self.eta_j
        scale = 1 + abs(self.a) + abs(self.b)
        return {
            "i_squared": float(np.linalg.norm(ei @ ei - self.a * np.eye(2)) / (1 + abs(self.a))),
            "j_squared": float(np.linalg.norm(ej @ ej - self.b * np.eye(2)) / (1 + abs(self.b))),
            "anticommute": float(np.linalg.norm(ei @ ej + ej @ ei) / scale),
        }


@dataclass(frozen=True)
class SiegelPoint:
    omega: np.ndarray
    riemann_residual: float = 0.0
    min_imag_eigenvalue: float = field(default=float("nan"))
    swapped: bool = False
    tol: float = RIEMANN_TOL

    @classmethod
    def from_matrix(cls, omega, tol: float = RIEMANN_TOL) -> SiegelPoint:
        omega = np.asarray(omega, dtype=complex)
        res = _symmetry_residual(omega)
        lam = float(np.linalg.eigvalsh(_sym(omega.imag)).min())
        return cls(omega, res, lam, False, tol)

    @property
    def is_siegel(self) -> bool:
        return self.riemann_residual <= self.tol and self.min_imag_eigenvalue > 0


def _sym(m):
    return (m + m.T) / 2


def _symmetry_residual(omega) -> float:
    return float(np.linalg.norm(omega - omega.T) / max(np.linalg.norm(omega), 1e-300))


def check_tau(tau) -> complex:
    tau = complex(tau)
    if not tau.imag > 0:
        raise ValueError(f"tau = {tau} is not in the upper half plane")
    return tau


def build_splitting(alg: QuaternionAlgebra) -> SplittingMap:
    """An explicit isomorphism B (x) R -> M_2(R), branching on the sign of a."""
    if not alg.indefinite:
        raise DefiniteAlgebra(f"({alg.a}, {alg.b}) does not split over R")
    a, b = float(alg.a), float(alg.b)
    if a > 0:
        ei = np.diag([math.sqrt(a), -math.sqrt(a)])
        ej = np.array([[0.0, b], [1.0, 0.0]])
    else:
        ej = np.diag([math.sqrt(b), -math.sqrt(b)])
        ei = np.array([[0.0, a], [1.0, 0.0]])
    sm = SplittingMap(ei, ej, a, b)
    bad = {k: v for k, v in sm.residuals().items() if v > 1e-12}
    if bad:
        raise RiemannRelationViolation(f"splitting relations fail: {bad}")
    return sm


def lattice_periods(tau, order: OrderBasis, basis: SymplecticBasis, splitting: SplittingMap) -> np.ndarray:
    """The 2x4 complex matrix whose columns are the images of f1..f4."""
    v = np.array([check_tau(tau), 1.0], dtype=complex)
    cols = [splitting.image(conjugate(f)) @ v for f in basis.elements(order)]
    return np.column_stack(cols)


def period_matrix(tau, order: OrderBasis, basis: SymplecticBasis, splitting: SplittingMap,
                  tol: float = RIEMANN_TOL) -> SiegelPoint:
    pi = lattice_periods(tau, order, basis, splitting)
    return _normalize(pi, tol)


def _normalize(pi: np.ndarray, tol: float) -> SiegelPoint:
    p1, p2 = pi[:, :2], pi[:, 2:]
    swapped = False
    omega = _ratio(p1, p2)
    lam = np.linalg.eigvalsh(_sym(omega.imag))
    if lam.max() < 0:
        # the polarization is -E; (f3, f4, f1, f2) is symplectic for it
        omega = _ratio(p2, p1)
        lam = np.linalg.eigvalsh(_sym(omega.imag))
        swapped = True
    res = _symmetry_residual(omega)
    if res > tol or lam.min() <= 0:
        raise RiemannRelationViolation(
            f"symmetry residual {res:.3e}, Im eigenvalues {lam.tolist()}")
    return SiegelPoint(omega, res, float(lam.min()), swapped, tol)


def _ratio(p1, p2):
    scale = float(np.linalg.norm(p2)) ** 2
    if abs(np.linalg.det(p2)) < 1e-12 * max(scale, 1e-300):
        raise DegeneratePeriods(f"|det| = {abs(np.linalg.det(p2)):.3e}")
    return np.linalg.solve(p2, p1)


def elliptic_period_ratio(tau) -> complex:
    """Period ratio of Z + Z tau in the basis (tau, 1): tau itself."""
    periods = np.array([check_tau(tau), 1.0])
    return complex(periods[0] / periods[1])


def qm_period_map(order: OrderBasis, basis: SymplecticBasis, splitting: SplittingMap,
                  tol: float = RIEMANN_TOL) -> Callable[[complex], np.ndarray]:
    return lambda t: period_matrix(t, order, basis, splitting, tol).omega


def kodaira_spencer_rank(tau, period_map: Callable | None = None, h: float = 1e-6) -> float:
    """Largest singular value of the central difference of ``period_map`` at ``tau``.

    Defaults to the elliptic family, where the answer is 1. The divisor is
    the step actually realized in floating point, so the identity map
    yields exactly 1.0.
    """
    if h < 1e-8:
        raise StepTooSmall(f"h = {h} < 1e-8")
    if h > 1e-4:
        raise StepTooLarge(f"h = {h} > 1e-4")
    tau = check_tau(tau)
    f = period_map or elliptic_period_ratio
    tp, tm = tau + h, tau - h
    step = tp - tm
    d = (np.atleast_2d(np.asarray(f(tp), dtype=complex))
         - np.atleast_2d(np.asarray(f(tm), dtype=complex))) / step
    return float(np.linalg.svd(d, compute_uv=False).max())


def complex_structure_comparison(tau, order: OrderBasis, basis: SymplecticBasis,
                                 splitting: SplittingMap, details: bool = False):
    """Compare the complex structure of the QM lattice with two elliptic copies.

    Both live on M_2(R) (row-major coordinates): a lattice point is the
    matrix X with ``X @ (tau, 1)`` its position in C^2, and each row of X
    is a point of ``Z + Z tau`` tensored with R. Returns the Frobenius
    norm of ``J_tau - (J_ell + J_ell)``.
    """
    tau = check_tau(tau)
    pi = lattice_periods(tau, order, basis, splitting)
    lam = np.vstack([pi.real, pi.imag])
    mult_i = np.block([[np.zeros((2, 2)), -np.eye(2)], [np.eye(2), np.zeros((2, 2))]])
    j_lattice = np.linalg.solve(lam, mult_i @ lam)
    t = np.column_stack([splitting.image(conjugate(f)).reshape(4) for f in basis.elements(order)])
    j_qm = t @ j_lattice @ np.linalg.inv(t)
    ell = np.array([[tau.real, 1.0], [tau.imag, 0.0]])
    j_ell = np.linalg.solve(ell, np.array([[0.0, -1.0], [1.0, 0.0]]) @ ell)
    j_pair = np.block([[j_ell, np.zeros((2, 2))], [np.zeros((2, 2)), j_ell]])
    residual = float(np.linalg.norm(j_qm - j_pair))
    if details:
        return residual, j_qm, j_pair
    return residual
