"""Symplectic bases for (O, E) and the integral embedding of norm-one units.

All symplectic checks use ``J = [[0, I2], [-I2, 0]]``; units act on the
order by left multiplication.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from dataclasses import dataclass

from . import exact
from .errors import NotAUnit, NotInOrder, NotUnimodular
from .orders import OrderBasis
from .quaternion import QuaternionAlgebra, QuaternionElement, reduced_norm

J4 = ((0, 0, 1, 0), (0, 0, 0, 1), (-1, 0, 0, 0), (0, -1, 0, 0))


@dataclass(frozen=True)
class SymplecticBasis:
    """Columns of ``change_of_basis`` are the symplectic basis f1..f4 in order coordinates."""

    change_of_basis: tuple[tuple[int, ...], ...]

    @property
    def matrix(self):
        return [list(r) for r in self.change_of_basis]

    def elements(self, order: OrderBasis) -> list[QuaternionElement]:
        cols = exact.transpose(self.matrix)
        return [order.element(c) for c in cols]


@dataclass(frozen=True)
class UnitMatrix:
    unit: QuaternionElement
    matrix: tuple[tuple[int, ...], ...]


def _form(g, x, y):
    return sum(x[i] * g[i][j] * y[j] for i in range(len(x)) for j in range(len(y)))


def transport(gram, p):
    return exact.matmul(exact.matmul(exact.transpose(p), [list(r) for r in gram]), p)


def is_symplectic(m) -> bool:
    """``M^T J M == J`` for a 4x4 matrix, written out for speed."""
    for r in range(4):
        for c in range(4):
            v = m[0][r] * m[2][c] + m[1][r] * m[3][c] - m[2][r] * m[0][c] - m[3][r] * m[1][c]
            if v != J4[r][c]:
                return False
    return True


def symplectic_basis(gram) -> SymplecticBasis:
    """Integral symplectic reduction of an alternating unimodular Gram matrix.

    Repeatedly takes the smallest nonzero ``|G(v_p, v_q)|`` among the
    remaining vectors (row-major), reduces every other vector against the
    pair by integer division, and splits off the pair once the pivot
    divides everything.
    """
    g = [[int(x) for x in row] for row in gram]
    n = len(g)
    if n % 2 or any(g[i][j] != -g[j][i] for i in range(n) for j in range(n)):
        raise NotUnimodular("Gram matrix is not alternating")
    vecs = exact.identity(n)
    remaining = list(range(n))
    firsts, seconds = [], []
    while remaining:
        best = None
        for p in remaining:
            for q in remaining:
                if p == q:
                    continue
                val = _form(g, vecs[p], vecs[q])
                if val and (best is None or abs(val) < abs(best[2])):
                    best = (p, q, val)
        if best is None:
            raise NotUnimodular("Gram matrix is degenerate")
        p, q, d = best
        if d < 0:
            p, q, d = q, p, -d
        e, f = vecs[p], vecs[q]
        reduced = True
        for k in remaining:
            if k in (p, q):
                continue
            x = vecs[k]
            xf, xe = _form(g, x, f), _form(g, x, e)
            if xf % d or xe % d:
                # replace x by its remainder; the new pivot will be smaller
                vecs[k] = [xi - (xf // d) * ei + (xe // d) * fi for xi, ei, fi in zip(x, e, f)]
                reduced = False
                continue
            vecs[k] = [xi - (xf // d) * ei + (xe // d) * fi for xi, ei, fi in zip(x, e, f)]
        if not reduced:
            continue
        if d != 1:
            raise NotUnimodular(f"hyperbolic block with pairing {d}")
        firsts.append(e)
        seconds.append(f)
        remaining = [k for k in remaining if k not in (p, q)]
    cols = firsts + seconds
    change = exact.transpose(cols)
    if transport(g, change) != [list(r) for r in J4]:
        raise NotUnimodular("symplectic reduction failed to reach J")
    return SymplecticBasis(tuple(map(tuple, change)))


@lru_cache(maxsize=64)
def _basis_images(order: OrderBasis, basis: SymplecticBasis, alg: QuaternionAlgebra):
    # left multiplication is linear in u: M(sum c_k e_k) = sum c_k M(e_k)
    p = basis.matrix
    p_inv = exact.inverse(p)
    return [exact.as_int_matrix(exact.matmul(exact.matmul(p_inv, order.left_matrix(e, alg)), p))
            for e in order.elements]


def embed_unit(u: QuaternionElement, order: OrderBasis, basis: SymplecticBasis,
               alg: QuaternionAlgebra) -> UnitMatrix:
    """Left multiplication by ``u`` written in the symplectic basis."""
    if reduced_norm(u, alg) != 1:
        raise NotAUnit(f"{u} has reduced norm {reduced_norm(u, alg)}")
    coeffs = order.coordinates(u)
    if not exact.is_integral(coeffs):
        raise NotInOrder(f"{u} is not in the order")
    coeffs = [int(c) for c in coeffs]
    images = _basis_images(order, basis, alg)
    m = [[sum(c * img[r][s] for c, img in zip(coeffs, images)) for s in range(4)] for r in range(4)]
    if not is_symplectic(m):
        raise NotUnimodular(f"M^T J M != J for u = {u}")
    return UnitMatrix(u, tuple(map(tuple, m)))


def enumerate_units(order: OrderBasis, alg: QuaternionAlgebra, height: int) -> list[QuaternionElement]:
    """Norm-one elements with order coordinates bounded by ``height``.

    Returned in lexicographic order of their order coordinates.
    """
    if height < 1:
        raise ValueError("height must be at least 1")
    rng = range(-height, height + 1)
    units = []
    for c in itertools.product(rng, repeat=4):
        x = order.element(c)
        if reduced_norm(x, alg) == 1:
            units.append(x)
    return units


def reduce_mod_n(m: UnitMatrix, n: int):
    if n < 2:
        raise ValueError("n must be at least 2")
    return [[x % n for x in row] for row in m.matrix]


def is_in_Gn(u: QuaternionElement, order: OrderBasis, basis: SymplecticBasis,
             alg: QuaternionAlgebra, n: int) -> bool:
    red = reduce_mod_n(embed_unit(u, order, basis, alg), n)
    return red == [[int(i == j) for j in range(4)] for i in range(4)]
