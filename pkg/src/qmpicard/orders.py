"""Orders, maximality, the pure quaternion mu, and the polarization form.

The form used throughout is ``E(x, y) = trd(mu * conj(x) * y) / D``. It is
the expression that is invariant under left multiplication by norm-one
units, which is the action the symplectic embedding uses. The companion
expression ``-trd(mu * x * conj(y)) / D`` is kept as
:func:`polarization_form_right`; the two coincide only up to the involution
``x -> conj(x)`` (see :func:`expressions_agree`).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import isqrt, lcm

from sympy import factorint

from . import exact
from .errors import (
    NotClosed,
    NotIntegral,
    NotUnimodular,
    RankDeficient,
    SaturationStuck,
    SearchExhausted,
)
from .quaternion import (
    ONE,
    QuaternionAlgebra,
    QuaternionElement,
    conjugate,
    multiply,
    reduced_norm,
    reduced_trace,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class OrderBasis:
    elements: tuple[QuaternionElement, ...]
    reduced_discriminant: int
    maximal: bool
    saturation_rounds: int = field(default=0, compare=False)

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self):
        return hash((self.elements, self.reduced_discriminant))

    def coordinate_matrix(self):
        """Rows are the standard coordinates of the basis elements."""
        return [list(e.coords) for e in self.elements]

    @cached_property
    def _to_coords(self):
        # (integer matrix, denominator) so the hot path avoids Fraction products
        inv = exact.inverse(exact.transpose(self.coordinate_matrix()))
        d = lcm(*(x.denominator for row in inv for x in row))
        return [[int(x * d) for x in row] for row in inv], d

    def coordinates(self, x: QuaternionElement) -> list[Fraction]:
        """Coordinates of ``x`` in this basis (rational in general)."""
        m, d = self._to_coords
        xd = lcm(*(c.denominator for c in x.coords))
        xs = [c.numerator * (xd // c.denominator) for c in x.coords]
        return [Fraction(sum(a * b for a, b in zip(row, xs)), d * xd) for row in m]

    def contains(self, x: QuaternionElement) -> bool:
        return exact.is_integral(self.coordinates(x))

    def element(self, coeffs) -> QuaternionElement:
        out = QuaternionElement()
        for c, e in zip(coeffs, self.elements):
            out = out + e.scale(c)
        return out

    def left_matrix(self, u: QuaternionElement, alg: QuaternionAlgebra):
        """Matrix of ``x -> u x`` in order coordinates; column k is ``u e_k``."""
        cols = [self.coordinates(multiply(u, e, alg)) for e in self.elements]
        return exact.transpose(cols)


@dataclass(frozen=True)
class PolarizationData:
    mu: QuaternionElement
    gram: tuple[tuple[int, ...], ...]
    elementary_divisors: tuple[int, ...]
    pfaffian: int
    expressions_agree: bool = field(default=False)


def _trace_matrix(elements, alg):
    return [[reduced_trace(multiply(x, conjugate(y), alg)) for y in elements] for x in elements]


def _check_closed(elements, alg):
    basis_t = exact.transpose([list(e.coords) for e in elements])
    inv = exact.inverse(basis_t)
    for x in elements:
        for y in elements:
            c = exact.matvec(inv, list(multiply(x, y, alg).coords))
            if not exact.is_integral(c):
                return False, (x, y)
    if not exact.is_integral(exact.matvec(inv, list(ONE.coords))):
        return False, (ONE, ONE)
    return True, None


def verify_order(basis, alg: QuaternionAlgebra) -> OrderBasis:
    """Certify that four elements span an order and compute its discriminant."""
    elements = tuple(e if isinstance(e, QuaternionElement) else QuaternionElement(*e) for e in basis)
    if len(elements) != 4:
        raise RankDeficient(f"expected 4 basis elements, got {len(elements)}")
    if exact.det([list(e.coords) for e in elements]) == 0:
        raise RankDeficient("basis elements are linearly dependent")
    for e in elements:
        t, n = reduced_trace(e), reduced_norm(e, alg)
        if t.denominator != 1 or n.denominator != 1:
            raise NotIntegral(f"{e} has trd={t}, nrd={n}")
    ok, witness = _check_closed(elements, alg)
    if not ok:
        x, y = witness
        if x == ONE and y == ONE:
            raise NotClosed("1 is not in the lattice")
        raise NotClosed(f"product {x} * {y} leaves the lattice")
    d = abs(exact.det(_trace_matrix(elements, alg)))
    assert d.denominator == 1
    rd = isqrt(int(d))
    if rd * rd != d:
        raise NotIntegral(f"trace-pairing determinant {d} is not a square")
    return OrderBasis(elements, rd, rd == alg.discriminant)


def _lower_hermite(elements):
    """Hermite basis read from the ij end, so an order's basis starts with 1."""
    rev = [list(reversed(e.coords)) for e in elements]
    rows = exact.lattice_basis(rev)
    return [QuaternionElement(*reversed(r)) for r in reversed(rows)]


def _ring_closure(elements, alg, max_rounds=8):
    """Lattice basis of the ring generated by ``elements`` and 1, or None."""
    gens = [list(e.coords) for e in elements] + [list(ONE.coords)]
    basis = exact.lattice_basis(gens)
    for _ in range(max_rounds):
        elems = [QuaternionElement(*row) for row in basis]
        if len(elems) != 4:
            return None
        for e in elems:
            if reduced_trace(e).denominator != 1 or reduced_norm(e, alg).denominator != 1:
                return None
        prods = [list(multiply(x, y, alg).coords) for x in elems for y in elems]
        new = exact.lattice_basis(basis + prods)
        if new == basis:
            return _lower_hermite(elems)
        basis = new
    return None


def saturate_order(basis, alg: QuaternionAlgebra, max_rounds: int = 64) -> OrderBasis:
    """Enlarge an order prime by prime until its discriminant equals D.

    Each round tries the elements ``sum(c_k e_k) / p`` with ``c_k`` in
    ``0..p-1`` in lexicographic order and keeps the first one whose ring
    with the current order is still an order.
    """
    order = verify_order(basis, alg)
    rounds = 0
    while order.reduced_discriminant != alg.discriminant:
        excess, rem = divmod(order.reduced_discriminant, alg.discriminant)
        if rem or rounds >= max_rounds:
            raise SaturationStuck(
                f"discriminant {order.reduced_discriminant} not reducible to {alg.discriminant}"
            )
        enlarged = None
        for p in sorted(factorint(excess)):
            for coeffs in itertools.product(range(p), repeat=4):
                if not any(coeffs):
                    continue
                x = order.element(coeffs).scale(Fraction(1, p))
                if reduced_trace(x).denominator != 1 or reduced_norm(x, alg).denominator != 1:
                    continue
                ring = _ring_closure(order.elements + (x,), alg)
                if ring is None:
                    continue
                enlarged = verify_order(ring, alg)
                break
            if enlarged is not None:
                break
        if enlarged is None:
            raise SaturationStuck(
                f"no enlarging element found; discriminant stuck at {order.reduced_discriminant}"
            )
        log.debug("saturation round %d: %d -> %d", rounds + 1,
                  order.reduced_discriminant, enlarged.reduced_discriminant)
        order = enlarged
        rounds += 1
    return OrderBasis(order.elements, order.reduced_discriminant, order.maximal, rounds)


def standard_order(alg: QuaternionAlgebra):
    """The order Z<i, j> for integral a, b; a starting point for saturation."""
    if alg.a.denominator != 1 or alg.b.denominator != 1:
        raise NotIntegral("standard order needs integral a and b")
    return [QuaternionElement(1), QuaternionElement(0, 1), QuaternionElement(0, 0, 1),
            QuaternionElement(0, 0, 0, 1)]


def find_mu(order: OrderBasis, alg: QuaternionAlgebra, radius: int = 10) -> QuaternionElement:
    """Pure ``mu`` in the order with ``mu^2 = -D``.

    Candidates are ranked by the sup-norm of their 1, i, j, ij coordinates;
    among the smallest, the lexicographically largest coordinate vector
    wins. Solutions come in pairs ``+-mu``, so this is the negation of the
    lexicographically smallest one.
    """
    D = alg.discriminant
    den = _common_denominator(order)
    # x1, x2, x3 range over (1/den) Z; shells by sup-norm numerator s
    for s in range(1, radius * den + 1):
        sols = []
        rng = range(-s, s + 1)
        for n1, n2, n3 in itertools.product(rng, rng, rng):
            if max(abs(n1), abs(n2), abs(n3)) != s:
                continue
            x = QuaternionElement(0, Fraction(n1, den), Fraction(n2, den), Fraction(n3, den))
            if reduced_norm(x, alg) != D:
                continue
            if order.contains(x):
                sols.append(x)
        if sols:
            return max(sols, key=lambda x: x.coords)
    raise SearchExhausted(f"no pure mu with mu^2 = -{D} within sup-norm {radius}")


def _common_denominator(order: OrderBasis) -> int:
    # integer combinations of the basis never need a larger denominator
    d = 1
    for e in order.elements:
        for c in e.coords:
            d = lcm(d, c.denominator)
    return d


def polarization_form(alpha, beta, mu, alg: QuaternionAlgebra) -> Fraction:
    """``trd(mu * conj(alpha) * beta) / D``; invariant under ``x -> u x``."""
    return reduced_trace(multiply(multiply(mu, conjugate(alpha), alg), beta, alg)) / alg.discriminant


def polarization_form_right(alpha, beta, mu, alg: QuaternionAlgebra) -> Fraction:
    """``-trd(mu * alpha * conj(beta)) / D``; invariant under ``x -> x u``."""
    return -reduced_trace(multiply(multiply(mu, alpha, alg), conjugate(beta), alg)) / alg.discriminant


def expressions_agree(alpha, beta, mu, alg) -> bool:
    return polarization_form(alpha, beta, mu, alg) == polarization_form_right(alpha, beta, mu, alg)


def pfaffian4(g) -> int:
    return g[0][1] * g[2][3] - g[0][2] * g[1][3] + g[0][3] * g[1][2]


def polarization_gram(order: OrderBasis, mu: QuaternionElement, alg: QuaternionAlgebra) -> PolarizationData:
    if reduced_trace(mu) != 0 or multiply(mu, mu, alg) != ONE.scale(-alg.discriminant):
        raise ValueError(f"mu = {mu} is not pure with mu^2 = -{alg.discriminant}")
    els = order.elements
    raw = [[polarization_form(x, y, mu, alg) for y in els] for x in els]
    if not all(exact.is_integral(row) for row in raw):
        raise NotUnimodular("E is not integral on this order")
    gram = exact.as_int_matrix(raw)
    if any(gram[i][j] != -gram[j][i] for i in range(4) for j in range(4)):
        raise NotUnimodular("E is not alternating on this order")
    divisors = exact.elementary_divisors(gram)
    if divisors != [1, 1, 1, 1]:
        raise NotUnimodular(f"elementary divisors {divisors}, expected (1, 1, 1, 1)")
    pf = pfaffian4(gram)
    agree = all(expressions_agree(x, y, mu, alg) for x in els for y in els)
    return PolarizationData(mu, tuple(map(tuple, gram)), tuple(divisors), pf, agree)


def unit_invariance_check(order: OrderBasis, gram, units, alg: QuaternionAlgebra) -> bool:
    """True iff ``L_u^T G L_u = G`` for every supplied unit ``u``."""
    for u in units:
        if reduced_norm(u, alg) != 1:
            raise ValueError(f"{u} has reduced norm {reduced_norm(u, alg)}, expected 1")
    g = [list(r) for r in gram]
    for u in units:
        lm = order.left_matrix(u, alg)
        if exact.matmul(exact.matmul(exact.transpose(lm), g), lm) != g:
            return False
    return True
