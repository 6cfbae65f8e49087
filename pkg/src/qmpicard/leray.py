"""Rank bookkeeping for the Leray filtration of a fibered surface.

Purely combinatorial: h^{1,1} is an input, never computed here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InconsistentH11, MissingH11


@dataclass(frozen=True)
class FibrationData:
    genus_base: int = 0
    fiber_genus: int = 2
    singular_fibers: tuple[int, ...] = ()
    h11: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "singular_fibers", tuple(int(m) for m in self.singular_fibers))
        if self.genus_base < 0:
            raise ValueError("genus_base must be >= 0")
        if self.fiber_genus < 1:
            raise ValueError("fiber_genus must be >= 1")
        if any(m < 1 for m in self.singular_fibers):
            raise ValueError("component counts must be positive")
        if self.h11 is not None and self.h11 < 0:
            raise ValueError("h11 must be >= 0")


@dataclass(frozen=True)
class LerayRanks:
    rank_L0L1: int
    rank_L2L3: int
    rank_middle_if_h11: int | None = None


@dataclass(frozen=True)
class PicardVerdict:
    rho: int
    maximal: bool
    # True when rho is exact, False when it is only the divisor-span lower bound
    exact: bool = field(default=True)


def leray_ranks(data: FibrationData) -> LerayRanks:
    # section class plus non-fiber components of each singular fiber
    low = 1 + sum(m - 1 for m in data.singular_fibers)
    top = 1
    middle = None
    if data.h11 is not None:
        middle = data.h11 - low - top
        if middle < 0:
            raise InconsistentH11(f"h11 = {data.h11} is below the divisor span {low + top}")
    return LerayRanks(low, top, middle)


def picard_verdict(data: FibrationData, extremal: bool, pg_zero: bool = False) -> PicardVerdict:
    """Picard number from the Leray pieces.

    An extremal fibration has no (1,1) classes in the middle piece, so every
    (1,1) class is a divisor class and rho = h11. With geometric genus zero
    all of H^2 is (1,1) and the same conclusion holds trivially.
    """
    if data.h11 is None:
        raise MissingH11("picard_verdict needs h11")
    ranks = leray_ranks(data)
    if extremal or pg_zero:
        return PicardVerdict(data.h11, True, True)
    lower = ranks.rank_L0L1 + ranks.rank_L2L3
    return PicardVerdict(lower, lower == data.h11, False)
