"""Core types for multi-unit auctions: instances, allocations, welfare.

All quantities and values are exact non-negative integers; nothing in this
package ever touches floating point.  An instance is a supply of m identical
items plus an ordered list of bidder valuations.  An allocation hands each
bidder a bundle size, using at most m items in total -- allocations are
allowed to leave items unassigned.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence


class AuctionError(Exception):
    """Base class for every error raised by this package."""


class InvalidAllocation(AuctionError):
    """Allocation does not fit the instance (wrong length or oversubscribed)."""


class InvalidValuation(AuctionError):
    """Valuation violates a structural invariant."""


class MechanismMismatch(AuctionError):
    """A mechanism was handed a valuation kind it cannot process."""


class InstanceTooLarge(AuctionError):
    """Instance exceeds an exhaustive-search size guard."""


class InnerSolverBreach(AuctionError):
    """An inner solver returned an infeasible allocation (contract breach)."""


@dataclass(frozen=True)
class Instance:
    """An auction: ``m`` identical items and one valuation per bidder.

    Valuations must be normalized (value(0) == 0) and monotone non-decreasing;
    the concrete kinds in :mod:`mirauction.valuations` enforce this at
    construction.  Table-backed valuations must cover exactly 0..m.
    """

    m: int
    bidders: tuple

    def __post_init__(self):
        object.__setattr__(self, "bidders", tuple(self.bidders))
        if not isinstance(self.m, int) or isinstance(self.m, bool) or self.m < 1:
            raise ValueError(f"supply must be a positive integer, got {self.m!r}")
        if not self.bidders:
            raise ValueError("an instance needs at least one bidder")
        for i, v in enumerate(self.bidders):
            domain = getattr(v, "max_quantity", None)
            if domain is not None and domain != self.m:
                raise InvalidValuation(
                    f"bidder {i}: table covers 0..{domain} but the instance needs 0..{self.m}"
                )

    @property
    def n(self) -> int:
        return len(self.bidders)

    def replace_bidder(self, i: int, valuation) -> "Instance":
        """A copy of this instance with bidder ``i``'s valuation swapped out."""
        bidders = list(self.bidders)
        bidders[i] = valuation
        return Instance(self.m, tuple(bidders))


@dataclass(frozen=True)
class MechanismResult:
    """Output of one mechanism run.

    ``witness`` holds the range parameters that realize the allocation inside
    the mechanism's declared range (which subset was served exactly, bundle
    size, bundle counts, ...); its keys are mechanism-specific.  ``payments``
    are signed: the zero-pivot rule pays bidders, so entries may be negative.
    """

    allocation: tuple[int, ...]
    welfare: int
    witness: dict
    payments: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "allocation", tuple(self.allocation))
        if self.payments is not None:
            object.__setattr__(self, "payments", tuple(self.payments))

    def with_payments(self, payments: Sequence[int]) -> "MechanismResult":
        return MechanismResult(self.allocation, self.welfare, self.witness, tuple(payments))


def validate_allocation(instance: Instance, allocation: Sequence[int]) -> None:
    """Raise :class:`InvalidAllocation` unless ``allocation`` fits ``instance``."""
    _validate_shares(instance.m, instance.n, allocation)


def _validate_shares(m: int, n: int, allocation: Sequence[int]) -> None:
    if len(allocation) != n:
        raise InvalidAllocation(
            f"allocation has {len(allocation)} entries but the instance has {n} bidders"
        )
    for s in allocation:
        if not isinstance(s, int) or isinstance(s, bool) or s < 0:
            raise InvalidAllocation(f"shares must be non-negative integers, got {s!r}")
    total = sum(allocation)
    if total > m:
        raise InvalidAllocation(f"allocation assigns {total} items but only {m} exist")


def welfare(instance: Instance, allocation: Sequence[int]) -> int:
    """Total value of an allocation, exact integer arithmetic."""
    validate_allocation(instance, allocation)
    return sum(v.value(s) for v, s in zip(instance.bidders, allocation))


def is_t_round(m: int, n: int, allocation: Sequence[int], t: int) -> bool:
    """Decide membership in the t-round range by exhaustive subset search.

    An allocation is t-round if some set T of at most t bidders receives
    arbitrary bundles (say l items in total) while every bidder outside T
    receives a multiple of ``b = max((m - l) // (n - t)**2, 1)``, with at most
    ``b * (n - t)**2`` items going to bidders outside T.  For t >= n the
    conditions are vacuous (T may be everyone) and every valid allocation
    qualifies.  Exponential in n; intended for test-scale instances only.
    """
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    _validate_shares(m, n, allocation)
    shares = tuple(allocation)
    if t >= n:
        return True
    denom = (n - t) ** 2
    for size in range(t + 1):
        for subset in itertools.combinations(range(n), size):
            chosen = set(subset)
            l = sum(shares[j] for j in subset)
            b = max((m - l) // denom, 1)
            outside = [shares[i] for i in range(n) if i not in chosen]
            if sum(outside) <= b * denom and all(s % b == 0 for s in outside):
                return True
    return False


def iter_allocations(m: int, n: int) -> Iterator[tuple[int, ...]]:
    """All allocations of at most m items to n bidders, lexicographic order."""
    if n == 0:
        yield ()
        return
    for head in range(m + 1):
        for tail in iter_allocations(m - head, n - 1):
            yield (head,) + tail


def iter_complete_allocations(m: int, n: int) -> Iterator[tuple[int, ...]]:
    """All allocations assigning exactly m items to n bidders."""
    if n == 1:
        yield (m,)
        return
    for head in range(m + 1):
        for tail in iter_complete_allocations(m - head, n - 1):
            yield (head,) + tail
