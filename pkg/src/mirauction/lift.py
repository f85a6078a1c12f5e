"""Lift a few-bidder maximal-in-range solver to any number of bidders.

Given an inner solver that is maximal-in-range for up to t bidders with
guarantee alpha, the lift produces an n-bidder maximal-in-range mechanism
with guarantee alpha - 1/(t+1).  For every subset T of at most t bidders and
every level l from a geometric grid, the inner solver allocates m - l items
among T while the l remaining items are cut into at most 2*n^2 equal bundles
that a dynamic program hands to the bidders outside T; the best combined
allocation over all branches wins.  Only value queries are needed for the
bidders outside T.

Four inner solvers ship with the package: exhaustive search for k-minded
bidders (exact), the trivial single-bidder solver (exact), a breakpoint
search for marginal-piecewise bidders (exact), and a designated-bidder grid
search that is a 3/4-approximation for subadditive valuations.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .core import (
    AuctionError,
    Instance,
    InnerSolverBreach,
    MechanismMismatch,
    MechanismResult,
    iter_allocations,
    welfare,
)
from .ptas import dp_equal_bundles
from .valuations import KMindedValuation, MarginalPiecewiseValuation, unwrap


def build_l_grid(m: int, n: int) -> tuple[int, ...]:
    """Geometric level grid {0, 1, floor(u^j), ..., m} for u = 1 + 1/(2n).

    Powers are evaluated with exact integer arithmetic ((2n+1)^j over
    (2n)^j), so the grid is reproducible at any scale.  Size O(n log m).
    The grid is dense enough that for every s with m - s >= 1 the largest
    level l <= m - s satisfies l * (2n + 1) >= 2n * (m - s).
    """
    if m < 1 or n < 1:
        raise ValueError(f"need m >= 1 and n >= 1, got m={m}, n={n}")
    levels = {0, 1, m}
    num, den = 2 * n + 1, 2 * n
    power_num, power_den = 1, 1
    while True:
        power_num *= num
        power_den *= den
        if power_num > m * power_den:
            break
        levels.add(power_num // power_den)
    return tuple(sorted(levels))


@dataclass(frozen=True)
class InnerSolver:
    """A pluggable maximal-in-range solver for at most ``capacity`` bidders.

    ``solve(bidders, supply)`` must return a feasible allocation that
    maximizes welfare over a valuation-independent range with guarantee
    ``alpha``; ``enumerate_range(n_bidders, supply)`` streams that range at
    test scale (None when unavailable).
    """

    name: str
    capacity: int
    alpha: Fraction
    solve: Callable[[Sequence, int], tuple[int, ...]]
    enumerate_range: Callable[[int, int], Iterator[tuple[int, ...]]] | None = None


def lift_solve(instance: Instance, inner: InnerSolver, t: int) -> MechanismResult:
    """Best allocation over all (subset, level) branches of the construction.

    Deterministic: levels ascending, then subsets smallest-first in
    lexicographic order; the first welfare maximizer wins.  Raises if t
    exceeds the inner solver's capacity, or if the inner solver ever returns
    an infeasible allocation (a contract breach there is fatal).
    """
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    if t > inner.capacity:
        raise MechanismMismatch(
            f"inner solver {inner.name!r} handles at most {inner.capacity} bidders, t={t}"
        )
    m, n = instance.m, instance.n
    t_eff = min(t, n)
    levels = build_l_grid(m, n)
    best_welfare = -1
    best_alloc: tuple[int, ...] | None = None
    best_witness: dict = {}
    for l in levels:
        sub_supply = m - l
        b = max(l // (2 * n * n), 1)
        budget = min(2 * n * n, l // b)
        for size in range(t_eff + 1):
            for subset in itertools.combinations(range(n), size):
                if size:
                    chosen = [instance.bidders[i] for i in subset]
                    inner_alloc = tuple(inner.solve(chosen, sub_supply))
                    _check_inner(inner, inner_alloc, size, sub_supply)
                    inner_value = sum(
                        v.value(s) for v, s in zip(chosen, inner_alloc)
                    )
                else:
                    inner_alloc = ()
                    inner_value = 0
                outside = [i for i in range(n) if i not in subset]
                if outside:
                    counts, bundle_value = dp_equal_bundles(
                        [instance.bidders[i] for i in outside], b, budget
                    )
                else:
                    counts, bundle_value = (), 0
                total = inner_value + bundle_value
                if total > best_welfare:
                    alloc = [0] * n
                    for i, s in zip(subset, inner_alloc):
                        alloc[i] = s
                    for i, c in zip(outside, counts):
                        alloc[i] = c * b
                    best_welfare = total
                    best_alloc = tuple(alloc)
                    best_witness = {
                        "T": list(subset),
                        "l": l,
                        "b": b,
                        "bundle_counts": list(counts),
                        "inner": inner.name,
                    }
    assert best_alloc is not None
    return MechanismResult(best_alloc, welfare(instance, best_alloc), best_witness)


def _check_inner(inner: InnerSolver, alloc: tuple[int, ...], size: int, supply: int) -> None:
    if len(alloc) != size or any(
        not isinstance(s, int) or isinstance(s, bool) or s < 0 for s in alloc
    ) or sum(alloc) > supply:
        raise InnerSolverBreach(
            f"inner solver {inner.name!r} returned {alloc!r} for {size} bidders and {supply} items"
        )


# --- the four inner solvers --------------------------------------------------

def inner_exhaustive_k_minded(bidders: Sequence, supply: int) -> tuple[int, ...]:
    """Exact optimum for k-minded bidders: try every bid quantity (or 0) each.

    For step valuations any share can be shrunk to its smallest bid quantity
    without losing value, so this search is optimal over all allocations.
    """
    options = []
    for i, v in enumerate(bidders):
        inner = unwrap(v)
        if not isinstance(inner, KMindedValuation):
            raise MechanismMismatch(
                f"bidder {i} is {type(inner).__name__}; exhaustive search needs k-minded bids"
            )
        options.append([0] + [q for q, p in inner.bids if p > 0 and q <= supply])
    best_value = -1
    best: tuple[int, ...] = ()
    for combo in itertools.product(*options):
        if sum(combo) > supply:
            continue
        value = sum(v.value(s) for v, s in zip(bidders, combo))
        if value > best_value:
            best_value = value
            best = combo
    return best


def inner_single_bidder(bidder, supply: int) -> tuple[int, ...]:
    """One bidder: hand over everything (optimal by monotonicity)."""
    return (supply,)


def _piecewise_candidates(valuation: MarginalPiecewiseValuation, supply: int) -> list[int]:
    cands = {0, supply}
    for u, _ in valuation.tuples[1:]:
        if u - 1 <= supply:
            cands.add(u - 1)
    return sorted(cands)


def inner_piecewise_exact(bidders: Sequence, supply: int) -> tuple[int, ...]:
    """Exact optimum for marginal-piecewise bidders.

    Some optimal allocation parks every bidder but one at a piece boundary
    (moving an item between two mid-piece bidders exchanges equal marginals,
    so items can be shifted until shares hit boundaries).  Try each bidder as
    the one odd bidder out, enumerate boundary assignments for the rest, and
    give the leftovers to the odd one.
    """
    values = []
    for i, v in enumerate(bidders):
        inner = unwrap(v)
        if not isinstance(inner, MarginalPiecewiseValuation):
            raise MechanismMismatch(
                f"bidder {i} is {type(inner).__name__}; this solver needs marginal-piecewise bids"
            )
        values.append(inner)
    n = len(bidders)
    if n == 0:
        return ()
    best_value = -1
    best: tuple[int, ...] = ()
    for loose in range(n):
        others = [i for i in range(n) if i != loose]
        pools = [_piecewise_candidates(values[i], supply) for i in others]
        for combo in itertools.product(*pools):
            used = sum(combo)
            if used > supply:
                continue
            alloc = [0] * n
            for i, s in zip(others, combo):
                alloc[i] = s
            alloc[loose] = supply - used
            value = sum(v.value(s) for v, s in zip(bidders, alloc))
            if value > best_value:
                best_value = value
                best = tuple(alloc)
    return best


def delta_grid(supply: int, delta: Fraction = Fraction(4, 3)) -> tuple[int, ...]:
    """Integerized geometric size grid {0} plus distinct floor(delta^i) <= supply."""
    if delta <= 1:
        raise ValueError(f"delta must exceed 1, got {delta}")
    sizes = {0}
    num, den = 1, 1
    while True:
        point = num // den
        if point > supply:
            break
        sizes.add(point)
        num *= delta.numerator
        den *= delta.denominator
    return tuple(sorted(sizes))


def inner_subadditive(
    bidders: Sequence, supply: int, delta: Fraction = Fraction(4, 3)
) -> tuple[int, ...]:
    """Designated-bidder grid search, a 3/4-approximation for subadditive bidders.

    One designated bidder absorbs whatever the others leave; everybody else
    receives a size from the geometric grid.  Exhaustive over that
    valuation-independent range, so the solver is maximal-in-range for any
    valuations; the 3/4 factor needs subadditivity.
    """
    n = len(bidders)
    if n == 0:
        return ()
    grid = [g for g in delta_grid(supply, delta) if g <= supply]
    best_value = -1
    best: tuple[int, ...] = ()
    for designated in range(n):
        others = [i for i in range(n) if i != designated]
        for combo in itertools.product(grid, repeat=len(others)):
            used = sum(combo)
            if used > supply:
                continue
            alloc = [0] * n
            for i, s in zip(others, combo):
                alloc[i] = s
            alloc[designated] = supply - used
            value = sum(v.value(s) for v, s in zip(bidders, alloc))
            if value > best_value:
                best_value = value
                best = tuple(alloc)
    return best


# --- packaged solvers ---------------------------------------------------------

def _full_range(n_bidders: int, supply: int) -> Iterator[tuple[int, ...]]:
    return iter_allocations(supply, n_bidders)


def _single_range(n_bidders: int, supply: int) -> Iterator[tuple[int, ...]]:
    if n_bidders == 0:
        yield ()
    elif n_bidders == 1:
        yield (supply,)
    else:
        raise AuctionError("single-bidder solver has no range beyond one bidder")


def _designated_range(delta: Fraction) -> Callable[[int, int], Iterator[tuple[int, ...]]]:
    def enumerate_range(n_bidders: int, supply: int) -> Iterator[tuple[int, ...]]:
        if n_bidders == 0:
            yield ()
            return
        grid = delta_grid(supply, delta)
        seen: set[tuple[int, ...]] = set()
        for designated in range(n_bidders):
            others = [i for i in range(n_bidders) if i != designated]
            for combo in itertools.product(grid, repeat=len(others)):
                used = sum(combo)
                if used > supply:
                    continue
                alloc = [0] * n_bidders
                for i, s in zip(others, combo):
                    alloc[i] = s
                alloc[designated] = supply - used
                out = tuple(alloc)
                if out not in seen:
                    seen.add(out)
                    yield out

    return enumerate_range


def exhaustive_k_minded_solver(capacity: int = 3) -> InnerSolver:
    return InnerSolver(
        name="exhaustive",
        capacity=capacity,
        alpha=Fraction(1),
        solve=inner_exhaustive_k_minded,
        enumerate_range=_full_range,
    )


def single_bidder_solver() -> InnerSolver:
    return InnerSolver(
        name="single",
        capacity=1,
        alpha=Fraction(1),
        solve=lambda bidders, supply: inner_single_bidder(bidders[0], supply),
        enumerate_range=_single_range,
    )


def piecewise_solver(capacity: int = 3) -> InnerSolver:
    return InnerSolver(
        name="piecewise",
        capacity=capacity,
        alpha=Fraction(1),
        solve=inner_piecewise_exact,
        enumerate_range=_full_range,
    )


def subadditive_solver(capacity: int = 3, delta: Fraction = Fraction(4, 3)) -> InnerSolver:
    return InnerSolver(
        name="subadditive",
        capacity=capacity,
        alpha=Fraction(3, 4),
        solve=lambda bidders, supply: inner_subadditive(bidders, supply, delta),
        enumerate_range=_designated_range(delta),
    )


INNER_SOLVERS: dict[str, Callable[[int], InnerSolver]] = {
    "exhaustive": exhaustive_k_minded_solver,
    "single": lambda capacity: single_bidder_solver(),
    "piecewise": piecewise_solver,
    "subadditive": subadditive_solver,
}


def enumerate_lift_range(
    m: int, n: int, inner: InnerSolver, t: int
) -> Iterator[tuple[int, ...]]:
    """The lift's declared range, rebuilt from grid, subsets and the inner range."""
    if inner.enumerate_range is None:
        raise AuctionError(f"inner solver {inner.name!r} has no range enumerator")
    t_eff = min(t, n)
    seen: set[tuple[int, ...]] = set()
    for l in build_l_grid(m, n):
        sub_supply = m - l
        b = max(l // (2 * n * n), 1)
        budget = min(2 * n * n, l // b)
        for size in range(t_eff + 1):
            for subset in itertools.combinations(range(n), size):
                outside = [i for i in range(n) if i not in subset]
                for inner_alloc in inner.enumerate_range(size, sub_supply):
                    for counts in iter_allocations(budget, len(outside)):
                        alloc = [0] * n
                        for i, s in zip(subset, inner_alloc):
                            alloc[i] = s
                        for i, c in zip(outside, counts):
                            alloc[i] = c * b
                        out = tuple(alloc)
                        if out not in seen:
                            seen.add(out)
                            yield out


def check_lift_witness(instance: Instance, result: MechanismResult, t: int) -> bool:
    """Structural range-membership check for a lift output against its witness."""
    w = result.witness
    subset = w["T"]
    if len(subset) > min(t, instance.n):
        return False
    l, b = w["l"], w["b"]
    n = instance.n
    if b != max(l // (2 * n * n), 1):
        return False
    inner_total = sum(result.allocation[i] for i in subset)
    if inner_total > instance.m - l:
        return False
    outside = [i for i in range(n) if i not in subset]
    budget = min(2 * n * n, l // b)
    counts = w["bundle_counts"]
    if sum(counts) > budget:
        return False
    return all(result.allocation[i] == c * b for i, c in zip(outside, counts))


@dataclass(frozen=True)
class LiftMechanism:
    inner: InnerSolver
    t: int

    @property
    def name(self) -> str:
        return f"lift({self.inner.name}, t={self.t})"

    def solve(self, instance: Instance) -> MechanismResult:
        return lift_solve(instance, self.inner, self.t)

    def guarantee(self, n: int) -> Fraction:
        t_eff = min(self.t, n)
        return self.inner.alpha - Fraction(1, t_eff + 1)

    def enumerate_range(self, m: int, n: int) -> Iterator[tuple[int, ...]]:
        return enumerate_lift_range(m, n, self.inner, self.t)
