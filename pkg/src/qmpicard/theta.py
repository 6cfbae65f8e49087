"""Genus-two Riemann theta functions with characteristics and fiber classification.

Accuracy is stated relative to ``theta_scale(z, omega) = exp(pi y^T Y^-1 y)``
(``y = Im z``, ``Y = Im omega``), the size of the largest term of the series.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NotSiegel
from .periods import SiegelPoint

SMOOTH = "SmoothGenusTwo"
REDUCIBLE = "TwoEllipticCurves"


@dataclass(frozen=True)
class ThetaCharacteristic:
    a: tuple[Fraction, Fraction]
    b: tuple[Fraction, Fraction]

    @classmethod
    def from_bits(cls, bits) -> ThetaCharacteristic:
        """``bits = (a1, a2, b1, b2)`` in {0, 1}; the characteristic is bits / 2."""
        h = [Fraction(int(x), 2) for x in bits]
        return cls((h[0], h[1]), (h[2], h[3]))

    @property
    def bits(self) -> tuple[int, int, int, int]:
        return tuple(int(2 * x) for x in self.a + self.b)

    @property
    def parity(self) -> int:
        """0 for even, 1 for odd: ``4 a.b mod 2``."""
        return int(4 * sum(x * y for x, y in zip(self.a, self.b))) % 2

    @property
    def is_even(self) -> bool:
        return self.parity == 0

    def __str__(self):
        a1, a2, b1, b2 = self.bits
        return f"[{a1}{a2};{b1}{b2}]"


ZERO_CHAR = ThetaCharacteristic.from_bits((0, 0, 0, 0))


def all_characteristics() -> list[ThetaCharacteristic]:
    return [ThetaCharacteristic.from_bits(bits) for bits in itertools.product((0, 1), repeat=4)]


def even_characteristics() -> list[ThetaCharacteristic]:
    return [c for c in all_characteristics() if c.is_even]


def _omega_array(omega) -> np.ndarray:
    om = omega.omega if isinstance(omega, SiegelPoint) else np.asarray(omega, dtype=complex)
    if om.shape != (2, 2):
        raise NotSiegel(f"expected a 2x2 matrix, got shape {om.shape}")
    y = (om.imag + om.imag.T) / 2
    if np.linalg.eigvalsh(y).min() <= 0:
        raise NotSiegel("imaginary part is not positive definite")
    return om


def theta_scale(z, omega) -> float:
    om = _omega_array(omega)
    y = np.asarray(z, dtype=complex).imag
    return float(math.exp(math.pi * y @ np.linalg.solve(om.imag, y)))


def truncation_radius(z, omega, eps: float) -> int:
    om = _omega_array(omega)
    ym = (om.imag + om.imag.T) / 2
    lam = np.linalg.eigvalsh(ym).min()
    shift = np.linalg.norm(np.linalg.solve(ym, np.asarray(z, dtype=complex).imag))
    return int(math.ceil(math.sqrt(math.log(1 / eps) / (math.pi * lam)) + shift + 2))


def _terms(z, char, om, eps, extra=0):
    if not eps > 0:
        raise ValueError("eps must be positive")
    z = np.asarray(z, dtype=complex)
    r = truncation_radius(z, om, eps) + extra
    rng = np.arange(-r, r + 1)
    n = np.array(np.meshgrid(rng, rng, indexing="ij")).reshape(2, -1).T
    w = n + np.array([float(x) for x in char.a])
    zb = z + np.array([float(x) for x in char.b])
    quad = np.einsum("ki,ij,kj->k", w, om, w)
    lin = w @ zb
    return w, np.exp(1j * math.pi * quad + 2j * math.pi * lin)


def theta(z, char: ThetaCharacteristic, omega, eps: float = 1e-14) -> complex:
    """theta[a; b](z, omega), truncated so the tail is below ``eps * theta_scale``."""
    om = _omega_array(omega)
    _, terms = _terms(z, char, om, eps)
    return complex(terms.sum())


def theta_gradient(z, char: ThetaCharacteristic, omega, eps: float = 1e-14) -> np.ndarray:
    om = _omega_array(omega)
    # the extra radius absorbs the polynomial factor 2 pi |w|
    w, terms = _terms(z, char, om, eps, extra=1)
    return (2j * math.pi * w * terms[:, None]).sum(axis=0)


def theta_nulls(omega, eps: float = 1e-14) -> dict[ThetaCharacteristic, complex]:
    zero = np.zeros(2, dtype=complex)
    return {c: theta(zero, c, omega, eps) for c in even_characteristics()}


@dataclass(frozen=True)
class FiberClass:
    label: str
    witness: ThetaCharacteristic | None
    min_even_null: float
    nulls: tuple[float, ...] = ()


def classify_fiber(omega, threshold: float = 1e-8, eps: float = 1e-14) -> FiberClass:
    """Smooth genus-two curve versus two elliptic curves, by vanishing even theta nulls.

    ``min_even_null`` is the smallest ``|theta[m](0)|`` divided by the
    largest one.
    """
    nulls = theta_nulls(omega, eps)
    mags = {c: abs(v) for c, v in nulls.items()}
    top = max(mags.values())
    witness = min(mags, key=lambda c: (mags[c], c.bits))
    rel = mags[witness] / top
    label = REDUCIBLE if rel < threshold else SMOOTH
    return FiberClass(label, witness if label == REDUCIBLE else None, rel,
                      tuple(mags[c] / top for c in even_characteristics()))


def two_torsion_points(omega):
    """Pairs ``((m, n), z)`` with ``z = (omega m + n) / 2`` for m, n in {0, 1}^2."""
    om = _omega_array(omega)
    out = []
    for bits in itertools.product((0, 1), repeat=4):
        m, n = np.array(bits[:2]), np.array(bits[2:])
        out.append(((tuple(bits[:2]), tuple(bits[2:])), (om @ m + n) / 2))
    return out


def singular_points(omega, eps: float = 1e-8):
    """Two-torsion points where theta and its gradient both vanish.

    Both are measured against ``theta_scale`` at the point.
    """
    om = _omega_array(omega)
    found = []
    for key, z in two_torsion_points(om):
        scale = theta_scale(z, om)
        val = theta(z, ZERO_CHAR, om, eps * 1e-6)
        grad = theta_gradient(z, ZERO_CHAR, om, eps * 1e-6)
        if abs(val) < eps * scale and np.linalg.norm(grad) < eps * scale:
            found.append(key)
    return found
