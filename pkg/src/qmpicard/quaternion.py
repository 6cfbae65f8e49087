"""Exact arithmetic in quaternion algebras (a, b | Q).

Elements are stored by their coordinates in the basis 1, i, j, ij with
i^2 = a, j^2 = b and ij = -ji. No floating point is used here.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm, prod

from sympy import factorint

from .errors import DefiniteAlgebra, SplitAlgebra

INFINITY = "inf"

_LABELS = ("", "i", "j", "ij")


def _frac(x) -> Fraction:
    if type(x) is Fraction:
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


@dataclass(frozen=True)
class QuaternionElement:
    """Coordinates ``(x0, x1, x2, x3)`` in the basis 1, i, j, ij."""

    coords: tuple[Fraction, Fraction, Fraction, Fraction]

    def __init__(self, x0=0, x1=0, x2=0, x3=0):
        object.__setattr__(self, "coords", tuple(_frac(x) for x in (x0, x1, x2, x3)))

    @classmethod
    def from_seq(cls, seq) -> QuaternionElement:
        return cls(*seq)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, k):
        return self.coords[k]

    def __add__(self, other):
        return QuaternionElement(*(x + y for x, y in zip(self, other)))

    def __sub__(self, other):
        return QuaternionElement(*(x - y for x, y in zip(self, other)))

    def __neg__(self):
        return QuaternionElement(*(-x for x in self))

    def scale(self, c) -> QuaternionElement:
        c = _frac(c)
        return QuaternionElement(*(c * x for x in self))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self):
        return format_element(self)

    @classmethod
    def parse(cls, text: str) -> QuaternionElement:
        return parse_element(text)


ONE = QuaternionElement(1)
I = QuaternionElement(0, 1)
J = QuaternionElement(0, 0, 1)
K = QuaternionElement(0, 0, 0, 1)


def format_element(x: QuaternionElement) -> str:
    """Render as e.g. ``2+j``, ``-3i-ij`` or ``1/2+1/2*i+1/2*j+1/2*ij``."""
    parts = []
    for c, label in zip(x.coords, _LABELS):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not label:
            body = str(mag)
        elif mag == 1:
            body = label
        elif mag.denominator == 1:
            body = f"{mag}{label}"
        else:
            body = f"{mag}*{label}"
        parts.append(sign + body)
    if not parts:
        return "0"
    s = "".join(parts)
    return s[1:] if s[0] == "+" else s


_TERM = re.compile(r"([+-])\s*(\d+(?:/\d+)?)?\s*\*?\s*(ij|i|j)?")


def parse_element(text: str) -> QuaternionElement:
    """Inverse of :func:`format_element`; also accepts spaces and ``k`` for ij."""
    s = text.replace(" ", "").replace("k", "ij")
    if not s:
        raise ValueError("empty quaternion string")
    if s[0] not in "+-":
        s = "+" + s
    coords = [Fraction(0)] * 4
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"cannot parse quaternion {text!r}")
        sign, num, label = m.groups()
        c = Fraction(num) if num else Fraction(1)
        if sign == "-":
            c = -c
        coords[_LABELS.index(label or "")] += c
        pos = m.end()
    return QuaternionElement(*coords)


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _legendre(u: int, p: int) -> int:
    r = pow(u % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def _as_square_class_int(x: Fraction) -> int:
    # x and num*den differ by the square den^2
    return x.numerator * x.denominator


def hilbert_symbol(a, b, p) -> int:
    """Local Hilbert symbol (a, b)_p for nonzero rationals; ``p`` may be ``"inf"``."""
    a, b = _frac(a), _frac(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    if p == INFINITY or p == float("inf"):
        return -1 if (a < 0 and b < 0) else 1
    p = int(p)
    a, b = _as_square_class_int(a), _as_square_class_int(b)
    alpha, beta = _valuation(a, p), _valuation(b, p)
    u, v = a // p**alpha, b // p**beta
    if p == 2:
        eps_u = ((u - 1) // 2) % 2
        eps_v = ((v - 1) // 2) % 2
        om_u = ((u * u - 1) // 8) % 2
        om_v = ((v * v - 1) // 8) % 2
        e = eps_u * eps_v + alpha * om_v + beta * om_u
        return -1 if e % 2 else 1
    e = alpha * beta * ((p - 1) // 2)
    s = -1 if e % 2 else 1
    if beta % 2:
        s *= _legendre(u, p)
    if alpha % 2:
        s *= _legendre(v, p)
    return s


def candidate_primes(a, b) -> list[int]:
    a, b = _frac(a), _frac(b)
    primes = {2}
    for n in (a.numerator, a.denominator, b.numerator, b.denominator):
        primes.update(factorint(abs(n)))
    primes.discard(1)
    return sorted(primes)


@dataclass(frozen=True)
class QuaternionAlgebra:
    """The algebra (a, b | Q) together with its local invariants.

    Construction never refuses an algebra; use :func:`compute_invariants`
    to enforce the indefinite-division-algebra hypothesis.
    """

    a: Fraction
    b: Fraction
    ramified_primes: tuple[int, ...] = field(init=False)
    discriminant: int = field(init=False)
    indefinite: bool = field(init=False)

    def __init__(self, a, b):
        a, b = _frac(a), _frac(b)
        if a == 0 or b == 0:
            raise ValueError("a and b must be nonzero")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        ram = tuple(p for p in candidate_primes(a, b) if hilbert_symbol(a, b, p) == -1)
        object.__setattr__(self, "ramified_primes", ram)
        object.__setattr__(self, "discriminant", prod(ram))
        object.__setattr__(self, "indefinite", hilbert_symbol(a, b, INFINITY) == 1)

    @property
    def is_division(self) -> bool:
        return self.discriminant != 1 or not self.indefinite

    def mul(self, x: QuaternionElement, y: QuaternionElement) -> QuaternionElement:
        return multiply(x, y, self)

    def nrd(self, x: QuaternionElement) -> Fraction:
        return reduced_norm(x, self)

    def power(self, x: QuaternionElement, n: int) -> QuaternionElement:
        out = ONE
        for _ in range(n):
            out = multiply(out, x, self)
        return out

    def inverse(self, x: QuaternionElement) -> QuaternionElement:
        n = reduced_norm(x, self)
        if n == 0:
            raise ZeroDivisionError("element has reduced norm 0")
        return conjugate(x).scale(1 / n)


def _scaled(x: QuaternionElement):
    # integer numerators over a common denominator
    d = lcm(*(c.denominator for c in x.coords))
    return [c.numerator * (d // c.denominator) for c in x.coords], d


def multiply(x: QuaternionElement, y: QuaternionElement, alg: QuaternionAlgebra) -> QuaternionElement:
    # all arithmetic on integers, scaled by s^2 * dx * dy; one Fraction per coordinate
    an, ad, bn, bd = alg.a.numerator, alg.a.denominator, alg.b.numerator, alg.b.denominator
    s = ad * bd
    a_, b_ = an * bd, bn * ad
    (x0, x1, x2, x3), dx = _scaled(x)
    (y0, y1, y2, y3), dy = _scaled(y)
    ss = s * s
    den = ss * dx * dy
    return QuaternionElement(
        Fraction(ss * x0 * y0 + s * a_ * x1 * y1 + s * b_ * x2 * y2 - a_ * b_ * x3 * y3, den),
        Fraction(ss * (x0 * y1 + x1 * y0) + s * b_ * (x3 * y2 - x2 * y3), den),
        Fraction(ss * (x0 * y2 + x2 * y0) + s * a_ * (x1 * y3 - x3 * y1), den),
        Fraction(ss * (x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1), den),
    )


def conjugate(x: QuaternionElement) -> QuaternionElement:
    x0, x1, x2, x3 = x.coords
    return QuaternionElement(x0, -x1, -x2, -x3)


def reduced_trace(x: QuaternionElement) -> Fraction:
    return 2 * x.coords[0]


def reduced_norm(x: QuaternionElement, alg: QuaternionAlgebra) -> Fraction:
    an, ad, bn, bd = alg.a.numerator, alg.a.denominator, alg.b.numerator, alg.b.denominator
    (x0, x1, x2, x3), d = _scaled(x)
    num = ad * bd * x0 * x0 - an * bd * x1 * x1 - bn * ad * x2 * x2 + an * bn * x3 * x3
    return Fraction(num, ad * bd * d * d)


def compute_invariants(a, b) -> QuaternionAlgebra:
    """Build (a, b | Q) and insist it is an indefinite division algebra."""
    alg = QuaternionAlgebra(a, b)
    if alg.discriminant == 1 and alg.indefinite:
        raise SplitAlgebra(f"({alg.a}, {alg.b}) is split: discriminant 1")
    if not alg.indefinite:
        raise DefiniteAlgebra(f"({alg.a}, {alg.b}) is definite: a and b are both negative")
    return alg
