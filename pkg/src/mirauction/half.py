"""1/2-approximation for black-box valuations via equal bundles.

The supply is cut into n^2 equal bundles of size b = m // n^2 plus one
remainder bundle holding what is left.  Two dynamic-programming tables find
the welfare-maximal way to hand out whole bundles, with the remainder going
to at most one bidder (or nobody).  The range is valuation-independent, the
mechanism needs only value queries at bundle multiples, and its welfare is
at least half the unrestricted optimum.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .core import Instance, MechanismResult, welfare


@dataclass(frozen=True)
class BundleScheme:
    """How the supply is cut: ``count`` regular bundles of ``b`` plus ``r`` left over."""

    b: int
    count: int
    r: int


def bundle_scheme(m: int, n: int) -> BundleScheme:
    """The cutting scheme for m items and n bidders.

    When m < n^2 the regular size would floor to zero; we fall back to m unit
    bundles and no remainder, which keeps the range valuation-independent
    (it is then all allocations, and the table stays within n*m <= n^3 cells).
    """
    b = m // (n * n)
    if b == 0:
        return BundleScheme(b=1, count=m, r=0)
    return BundleScheme(b=b, count=n * n, r=m - n * n * b)


def solve_half(instance: Instance) -> MechanismResult:
    """Optimal bundle allocation, remainder bundle included.

    best[i][q] is the top value bidders 0..i-1 can draw from at most q
    regular bundles; best_plus[i][q] additionally allows the remainder bundle
    to have been handed to one of them (or to nobody -- leaving it unassigned
    is permitted and the table's base case).  Backtracking prefers giving the
    remainder to nobody and fewer bundles to later-indexed bidders.
    """
    m, n = instance.m, instance.n
    scheme = bundle_scheme(m, n)
    b, count, r = scheme.b, scheme.count, scheme.r
    bidders = instance.bidders
    best = [[0] * (count + 1) for _ in range(n + 1)]
    best_plus = [[0] * (count + 1) for _ in range(n + 1)]
    for i, v in enumerate(bidders, start=1):
        regular = [v.value(c * b) for c in range(count + 1)]
        plus = [v.value(c * b + r) for c in range(count + 1)]
        for q in range(count + 1):
            top = 0
            top_plus = 0
            for c in range(q + 1):
                cand = regular[c] + best[i - 1][q - c]
                if cand > top:
                    top = cand
                cand_plus = regular[c] + best_plus[i - 1][q - c]
                if cand_plus > top_plus:
                    top_plus = cand_plus
                cand_here = plus[c] + best[i - 1][q - c]
                if cand_here > top_plus:
                    top_plus = cand_here
            best[i][q] = top
            best_plus[i][q] = top_plus

    counts = [0] * n
    remainder_bidder: int | None = None
    q = count
    holding_plus = True
    for i in range(n, 0, -1):
        v = bidders[i - 1]
        if holding_plus:
            target = best_plus[i][q]
            chosen = None
            for c in range(q + 1):
                if v.value(c * b) + best_plus[i - 1][q - c] == target:
                    chosen = c
                    break
            if chosen is None:
                for c in range(q + 1):
                    if v.value(c * b + r) + best[i - 1][q - c] == target:
                        chosen = c
                        remainder_bidder = i - 1
                        holding_plus = False
                        break
            assert chosen is not None
            counts[i - 1] = chosen
            q -= chosen
        else:
            target = best[i][q]
            for c in range(q + 1):
                if v.value(c * b) + best[i - 1][q - c] == target:
                    counts[i - 1] = c
                    q -= c
                    break

    alloc = [c * b for c in counts]
    if remainder_bidder is not None:
        alloc[remainder_bidder] += r
    allocation = tuple(alloc)
    witness = {
        "bundle_size": b,
        "bundle_count": count,
        "remainder": r,
        "remainder_bidder": remainder_bidder,
        "bundle_counts": counts,
    }
    return MechanismResult(allocation, welfare(instance, allocation), witness)


def enumerate_half_range(m: int, n: int) -> Iterator[tuple[int, ...]]:
    """The declared bundle range, deduplicated.  Test scale only."""
    scheme = bundle_scheme(m, n)
    seen: set[tuple[int, ...]] = set()

    def count_vectors(budget: int, parts: int):
        if parts == 0:
            yield ()
            return
        for head in range(budget + 1):
            for tail in count_vectors(budget - head, parts - 1):
                yield (head,) + tail

    for counts in count_vectors(scheme.count, n):
        base = tuple(c * scheme.b for c in counts)
        if base not in seen:
            seen.add(base)
            yield base
        if scheme.r > 0:
            for i in range(n):
                bumped = base[:i] + (base[i] + scheme.r,) + base[i + 1 :]
                if bumped not in seen:
                    seen.add(bumped)
                    yield bumped


@dataclass(frozen=True)
class HalfMechanism:
    name: str = "half"

    def solve(self, instance: Instance) -> MechanismResult:
        return solve_half(instance)

    def guarantee(self, n: int) -> Fraction:
        return Fraction(1, 2)

    def enumerate_range(self, m: int, n: int) -> Iterator[tuple[int, ...]]:
        return enumerate_half_range(m, n)
