"""Small exact linear algebra over the rationals.

Matrices are plain lists of rows holding ``int`` or ``Fraction`` entries.
The sizes here never exceed 5x4, so clarity wins over asymptotics.
"""

from fractions import Fraction
from math import gcd, lcm

from sympy import Matrix
from sympy.matrices.normalforms import invariant_factors


def to_fractions(rows):
    return [[Fraction(x) for x in row] for row in rows]


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m):
    return [list(col) for col in zip(*m)]


def matmul(a, b):
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def det(m):
    """Determinant by fraction-exact Gaussian elimination."""
    a = to_fractions(m)
    n = len(a)
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            sign = -sign
        p = a[col][col]
        result *= p
        for r in range(col + 1, n):
            f = a[r][col] / p
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return sign * result


def inverse(m):
    n = len(m)
    a = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(to_fractions(m))]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def solve(m, v):
    """Solve ``m @ x = v`` for square nonsingular ``m``."""
    return matvec(inverse(m), v)


def is_integral(values):
    return all(Fraction(x).denominator == 1 for x in values)


def as_int_matrix(m):
    out = []
    for row in m:
        if not is_integral(row):
            raise ValueError("matrix has non-integral entries")
        out.append([int(Fraction(x)) for x in row])
    return out


def _integer_hnf(rows):
    """Row Hermite normal form of an integer matrix; zero rows dropped."""
    a = [list(r) for r in rows]
    ncols = len(a[0]) if a else 0
    out = []
    r0 = 0
    for col in range(ncols):
        while True:
            nz = [r for r in range(r0, len(a)) if a[r][col] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda r: (abs(a[r][col]), r))
            a[r0], a[piv] = a[piv], a[r0]
            done = True
            for r in range(r0 + 1, len(a)):
                q = a[r][col] // a[r0][col]
                if q:
                    a[r] = [x - q * y for x, y in zip(a[r], a[r0])]
                if a[r][col]:
                    done = False
            if done:
                break
        if r0 < len(a) and a[r0][col] != 0:
            if a[r0][col] < 0:
                a[r0] = [-x for x in a[r0]]
            for r in range(r0):
                q = a[r][col] // a[r0][col]
                if q:
                    a[r] = [x - q * y for x, y in zip(a[r], a[r0])]
            r0 += 1
    for r in range(r0):
        out.append(a[r])
    return out


def lattice_basis(generators):
    """Canonical (Hermite) basis of the Z-span of rational vectors."""
    d = 1
    for v in generators:
        for x in v:
            d = lcm(d, Fraction(x).denominator)
    ints = [[int(Fraction(x) * d) for x in v] for v in generators]
    return [[Fraction(x, d) for x in row] for row in _integer_hnf(ints)]


def elementary_divisors(m):
    """Invariant factors of an integer matrix, as non-negative ints."""
    factors = invariant_factors(Matrix(m))
    return [abs(int(f)) for f in factors]


def content(values):
    g = 0
    for x in values:
        g = gcd(g, int(x))
    return g
