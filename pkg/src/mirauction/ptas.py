"""Truthful PTAS for k-minded bidders: exact search over t-round allocations.

The mechanism fixes a precision parameter t and fully optimizes welfare over
the range of t-round allocations (see :func:`mirauction.core.is_t_round`):
every subset T of at most t bidders is tried, members of T are assigned
quantities straight from their bid lists, and the items left over are cut
into equal bundles that a small dynamic program distributes among the rest.
Welfare is at least t/(t+1) of the unrestricted optimum, and at t = n the
search recovers the exact optimum.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .core import (
    Instance,
    MechanismMismatch,
    MechanismResult,
    is_t_round,
    iter_allocations,
    welfare,
)
from .valuations import KMindedValuation, unwrap


def dp_equal_bundles(
    valuations: Sequence, bundle_size: int, max_bundles: int
) -> tuple[tuple[int, ...], int]:
    """Optimally hand out at most ``max_bundles`` bundles of ``bundle_size`` items.

    Classic table: best[i][q] is the most value bidders 0..i-1 can extract
    from at most q bundles, filled via
    best[i][q] = max over c <= q of value_i(c * bundle_size) + best[i-1][q - c].
    Returns per-bidder bundle counts (backtracked preferring smaller counts
    for later-indexed bidders) and the total value.
    """
    if bundle_size < 1:
        raise ValueError(f"bundle size must be >= 1, got {bundle_size}")
    if max_bundles < 0:
        raise ValueError(f"bundle budget must be >= 0, got {max_bundles}")
    n = len(valuations)
    if n == 0:
        return (), 0
    best = [[0] * (max_bundles + 1) for _ in range(n + 1)]
    for i, v in enumerate(valuations, start=1):
        gain = [v.value(c * bundle_size) for c in range(max_bundles + 1)]
        prev = best[i - 1]
        row = best[i]
        for q in range(max_bundles + 1):
            top = 0
            for c in range(q + 1):
                cand = gain[c] + prev[q - c]
                if cand > top:
                    top = cand
            row[q] = top
    counts = [0] * n
    q = max_bundles
    for i in range(n, 0, -1):
        target = best[i][q]
        v = valuations[i - 1]
        for c in range(q + 1):
            if v.value(c * bundle_size) + best[i - 1][q - c] == target:
                counts[i - 1] = c
                q -= c
                break
    return tuple(counts), best[n][max_bundles]


def _bid_quantities(instance: Instance) -> list[list[int]]:
    quantities = []
    for i, v in enumerate(instance.bidders):
        inner = unwrap(v)
        if not isinstance(inner, KMindedValuation):
            raise MechanismMismatch(
                f"bidder {i} is {type(inner).__name__}; this mechanism needs k-minded bids"
            )
        quantities.append([q for q, p in inner.bids if p > 0 and q <= instance.m])
    return quantities


def solve_ptas(instance: Instance, t: int) -> MechanismResult:
    """Welfare-maximal t-round allocation for a k-minded instance.

    Deterministic: subsets are scanned smallest-first in lexicographic order,
    bid quantities in stored order, and the first welfare maximizer wins.
    Any t above the bidder count is clamped (the range is then everything).
    """
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    quantities = _bid_quantities(instance)
    m, n = instance.m, instance.n
    t_eff = min(t, n)
    best_welfare = -1
    best_alloc: tuple[int, ...] | None = None
    best_witness: dict = {}
    for size in range(t_eff + 1):
        for subset in itertools.combinations(range(n), size):
            outside = [i for i in range(n) if i not in subset]
            for assignment in itertools.product(*(quantities[i] for i in subset)):
                l = sum(assignment)
                if l > m:
                    continue
                exact_value = sum(
                    instance.bidders[i].value(q) for i, q in zip(subset, assignment)
                )
                if outside:
                    # At t = n the range is unrestricted, so the bundle size for
                    # undersized subsets may be derived from the complement.
                    denom = (n - t_eff) ** 2 if t_eff < n else (n - size) ** 2
                    b = max((m - l) // denom, 1)
                    budget = min(denom, (m - l) // b)
                    counts, bundle_value = dp_equal_bundles(
                        [instance.bidders[i] for i in outside], b, budget
                    )
                else:
                    b = None
                    counts, bundle_value = (), 0
                total = exact_value + bundle_value
                if total > best_welfare:
                    alloc = [0] * n
                    for i, q in zip(subset, assignment):
                        alloc[i] = q
                    for i, c in zip(outside, counts):
                        alloc[i] = c * b
                    best_welfare = total
                    best_alloc = tuple(alloc)
                    best_witness = {
                        "T": list(subset),
                        "l": l,
                        "b": b,
                        "bundle_counts": list(counts),
                    }
    assert best_alloc is not None  # the empty subset always yields a candidate
    return MechanismResult(best_alloc, welfare(instance, best_alloc), best_witness)


def enumerate_t_round_range(m: int, n: int, t: int) -> Iterator[tuple[int, ...]]:
    """Every t-round allocation, each exactly once.  Test scale only."""
    t_eff = min(t, n)
    for alloc in iter_allocations(m, n):
        if is_t_round(m, n, alloc, t_eff):
            yield alloc


@dataclass(frozen=True)
class PtasMechanism:
    """The t-round mechanism packaged for payment and range checks."""

    t: int

    @property
    def name(self) -> str:
        return f"ptas(t={self.t})"

    def solve(self, instance: Instance) -> MechanismResult:
        return solve_ptas(instance, self.t)

    def guarantee(self, n: int) -> Fraction:
        t_eff = min(self.t, n)
        return Fraction(t_eff, t_eff + 1)

    def enumerate_range(self, m: int, n: int) -> Iterator[tuple[int, ...]]:
        return enumerate_t_round_range(m, n, self.t)
