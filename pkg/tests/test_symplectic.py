import random
from fractions import Fraction

import pytest

from qmpicard import exact
from qmpicard.errors import NotAUnit, NotInOrder, NotUnimodular
from qmpicard.quaternion import QuaternionElement, parse_element, reduced_norm
from qmpicard.symplectic import (
    J4,
    embed_unit,
    enumerate_units,
    is_in_Gn,
    is_symplectic,
    reduce_mod_n,
    symplectic_basis,
    transport,
)

from oracles import det_exact

q = parse_element
J = [list(r) for r in J4]
I4 = exact.identity(4)


def neg(m):
    return [[-x for x in r] for r in m]


def random_unimodular(rng, steps=12):
    m = exact.identity(4)
    for _ in range(steps):
        i, j = rng.sample(range(4), 2)
        c = rng.choice([-2, -1, 1, 2])
        for r in range(4):
            m[r][j] += c * m[r][i]
    return m


def test_basis_for_standard_form():
    assert symplectic_basis(J).matrix == I4


def test_basis_for_negated_form():
    p = symplectic_basis(neg(J)).matrix
    assert transport(neg(J), p) == J
    # a signed permutation
    assert all(sorted(abs(x) for x in row) == [0, 0, 0, 1] for row in p)


def test_basis_for_qm_gram(pol, sbasis):
    p = sbasis.matrix
    assert transport(pol.gram, p) == J
    assert abs(det_exact(p)) == 1


def test_random_congruent_forms_reduce_to_j():
    rng = random.Random(42)
    for _ in range(200):
        p = random_unimodular(rng)
        g = transport(J, p)
        out = symplectic_basis(g).matrix
        assert transport(g, out) == J
        assert abs(det_exact(out)) == 1


def test_non_unimodular_rejected():
    g = [[0, 2, 0, 0], [-2, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]
    with pytest.raises(NotUnimodular):
        symplectic_basis(g)
    with pytest.raises(NotUnimodular):
        symplectic_basis([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])


def test_embed_trivial_units(alg, order, sbasis):
    assert [list(r) for r in embed_unit(q("1"), order, sbasis, alg).matrix] == I4
    assert [list(r) for r in embed_unit(q("-1"), order, sbasis, alg).matrix] == neg(I4)


def test_embed_two_plus_j(alg, order, sbasis):
    m = [list(r) for r in embed_unit(q("2+j"), order, sbasis, alg).matrix]
    assert all(isinstance(x, int) for r in m for x in r)
    assert exact.matmul(exact.matmul(exact.transpose(m), J), m) == J


def test_embed_errors(alg, order, sbasis):
    with pytest.raises(NotAUnit):
        embed_unit(q("1+i"), order, sbasis, alg)
    # 3/5 + 4/5 i has reduced norm 1 but is not integral
    y = QuaternionElement(Fraction(3, 5), Fraction(4, 5))
    assert reduced_norm(y, alg) == 1
    with pytest.raises(NotInOrder):
        embed_unit(y, order, sbasis, alg)


def unit_oracle(height):
    """Norm-one elements c0 + c1 i + c2 j + c3 (1+i+j+ij)/2 by the norm form."""
    out = set()
    rng = range(-height, height + 1)
    for c0 in rng:
        for c1 in rng:
            for c2 in rng:
                for c3 in rng:
                    h = Fraction(c3, 2)
                    y = (c0 + h, c1 + h, c2 + h, h)
                    if y[0] ** 2 + y[1] ** 2 - 3 * y[2] ** 2 - 3 * y[3] ** 2 == 1:
                        out.add(y)
    return out


def test_enumerate_units(alg, order):
    assert {q("1"), q("-1")} <= set(enumerate_units(order, alg, 1))
    two = enumerate_units(order, alg, 2)
    assert q("2+j") in two and q("2-j") in two
    assert {u.coords for u in two} == unit_oracle(2)
    assert len(two) == len(set(two))
    with pytest.raises(ValueError):
        enumerate_units(order, alg, 0)


def test_homomorphism_and_inverse(alg, order, sbasis):
    units = enumerate_units(order, alg, 2)
    mats = {u: [list(r) for r in embed_unit(u, order, sbasis, alg).matrix] for u in units}
    for u in units:
        inv = alg.inverse(u)
        assert exact.matmul(mats[u], [list(r) for r in embed_unit(inv, order, sbasis, alg).matrix]) == I4
        assert is_symplectic(mats[u])
        for v in units:
            uv = [list(r) for r in embed_unit(alg.mul(u, v), order, sbasis, alg).matrix]
            assert uv == exact.matmul(mats[u], mats[v])


def test_gn_examples(alg, order, sbasis):
    assert is_in_Gn(q("-1"), order, sbasis, alg, 2)
    assert not is_in_Gn(q("-1"), order, sbasis, alg, 3)
    assert not is_in_Gn(q("2+j"), order, sbasis, alg, 2)
    # 2 + j = j mod 2O, so its reduction is left multiplication by j mod 2
    m = embed_unit(q("2+j"), order, sbasis, alg)
    p = sbasis.matrix
    mj = exact.matmul(exact.matmul(exact.inverse(p), order.left_matrix(q("j"), alg)), p)
    assert reduce_mod_n(m, 2) == [[int(x) % 2 for x in r] for r in mj]
    with pytest.raises(ValueError):
        reduce_mod_n(m, 1)


def _power_in_gn(alg, order, sbasis, u, n):
    v = u
    for _ in range(200):
        if is_in_Gn(v, order, sbasis, alg, n):
            return v
        v = alg.mul(v, u)
    raise AssertionError("no power found")


def test_gn_group_properties(alg, order, sbasis):
    units = [u for u in enumerate_units(order, alg, 2) if u not in (q("1"), q("-1"))][:8]
    for n in (2, 3, 4):
        members = [_power_in_gn(alg, order, sbasis, u, n) for u in units]
        for x in members:
            assert is_in_Gn(alg.inverse(x), order, sbasis, alg, n)
            for y in members[:4]:
                assert is_in_Gn(alg.mul(x, y), order, sbasis, alg, n)
    # G_m sits inside G_n when n | m
    for u in units:
        for n, m in ((2, 4), (2, 6), (3, 6)):
            x = _power_in_gn(alg, order, sbasis, u, m)
            assert is_in_Gn(x, order, sbasis, alg, n)
