"""Verification machinery: oracle, fuzzers, adversarial instance families.

Everything here exists to check the mechanisms, not to run auctions: an
exhaustive welfare oracle, a misreport fuzzer that hunts for profitable
lies, a deliberately manipulable greedy baseline, the hard instance
families used to exhibit tight approximation ratios, seeded random instance
generation, and a range-argmax cross-check.  All of it is deterministic
given seeds and uses exact integer arithmetic.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .core import (
    AuctionError,
    Instance,
    InstanceTooLarge,
    MechanismMismatch,
    MechanismResult,
)
from .half import bundle_scheme
from .lift import build_l_grid
from .valuations import (
    VALUE_CAP,
    KMindedValuation,
    MarginalPiecewiseValuation,
    TableValuation,
    is_subadditive,
    subadditive_closure,
    unwrap,
)

BRUTE_FORCE_MAX_M = 60
BRUTE_FORCE_MAX_COMPLETE = 1_000_000


def brute_force_opt(instance: Instance) -> tuple[tuple[int, ...], int]:
    """Exact welfare optimum by enumerating complete allocations.

    Monotonicity makes some complete allocation optimal, so only the
    C(m+n-1, n-1) complete ones are scanned; the returned allocation is the
    lexicographically smallest complete maximizer.  Guarded: refuses
    instances beyond desk scale.
    """
    m, n = instance.m, instance.n
    if m > BRUTE_FORCE_MAX_M or comb(m + n - 1, n - 1) > BRUTE_FORCE_MAX_COMPLETE:
        raise InstanceTooLarge(
            f"brute force over C({m + n - 1}, {n - 1}) complete allocations refused; "
            f"stay within m <= {BRUTE_FORCE_MAX_M} and {BRUTE_FORCE_MAX_COMPLETE} allocations"
        )
    tables = [tuple(v.value(q) for q in range(m + 1)) for v in instance.bidders]
    best_welfare = -1
    best_alloc: tuple[int, ...] | None = None
    shares = [0] * n

    def descend(i: int, remaining: int, acc: int) -> None:
        nonlocal best_welfare, best_alloc
        if i == n - 1:
            total = acc + tables[i][remaining]
            if total > best_welfare:
                shares[i] = remaining
                best_welfare = total
                best_alloc = tuple(shares)
            return
        row = tables[i]
        for s in range(remaining + 1):
            shares[i] = s
            descend(i + 1, remaining - s, acc + row[s])

    descend(0, m, 0)
    assert best_alloc is not None
    return best_alloc, best_welfare


@dataclass(frozen=True)
class BruteMechanism:
    """The oracle packaged as a mechanism (full range, ratio 1)."""

    name: str = "brute"

    def solve(self, instance: Instance) -> MechanismResult:
        alloc, value = brute_force_opt(instance)
        return MechanismResult(alloc, value, {})

    def guarantee(self, n: int) -> Fraction:
        return Fraction(1)


# --- adversarial and random instance generation ------------------------------

def gen_onepoint(thresholds: Sequence[int], m: int) -> Instance:
    """Bidder i wants exactly thresholds[i] items and values them at 1.

    A zero threshold would clash with value(0) = 0, so it is encoded as a
    bid at quantity 1.  Thresholds must jointly fit in the supply.
    """
    if sum(thresholds) > m:
        raise ValueError(f"thresholds sum to {sum(thresholds)} > supply {m}")
    bidders = []
    for s in thresholds:
        if s < 0:
            raise ValueError(f"thresholds must be non-negative, got {s}")
        bidders.append(KMindedValuation(((max(s, 1), 1),)))
    return Instance(m, tuple(bidders))


def gen_subadditive_hard(m: int, s1: int) -> Instance:
    """Two subadditive bidders whose thresholds exactly partition the supply.

    Bidder 0 values s1 items at 2 and anything smaller (but non-empty) at 1;
    bidder 1 mirrors it at m - s1.  The optimum is 4, reachable only by the
    complete split (s1, m - s1); every other allocation scores at most 3.
    """
    if not 1 <= s1 <= m - 1:
        raise ValueError(f"need 1 <= s1 <= m-1, got s1={s1}, m={m}")
    first = KMindedValuation(((1, 1), (s1, 2))) if s1 > 1 else KMindedValuation(((1, 2),))
    s2 = m - s1
    second = KMindedValuation(((1, 1), (s2, 2))) if s2 > 1 else KMindedValuation(((1, 2),))
    return Instance(m, (first, second))


RANDOM_KINDS = ("k_minded", "marginal_piecewise", "table", "subadditive_table")


def gen_random(kind: str, n: int, m: int, k: int, value_cap: int, seed: int) -> Instance:
    """Deterministic pseudo-random instance of the requested kind."""
    if kind not in RANDOM_KINDS:
        raise ValueError(f"unknown kind {kind!r}; pick one of {RANDOM_KINDS}")
    if n < 1 or m < 1 or k < 1 or value_cap < 1:
        raise ValueError("n, m, k and value_cap must all be positive")
    rng = random.Random(seed)
    bidders = []
    for _ in range(n):
        if kind == "k_minded":
            bidders.append(_random_k_minded(rng, m, k, value_cap))
        elif kind == "marginal_piecewise":
            bidders.append(_random_piecewise(rng, m, k, value_cap))
        elif kind == "table":
            bidders.append(_random_table(rng, m, value_cap))
        else:
            base = _random_table(rng, m, value_cap)
            closed = subadditive_closure(base, m)
            assert is_subadditive(closed, m)
            bidders.append(closed)
    return Instance(m, tuple(bidders))


def _random_k_minded(rng: random.Random, m: int, k: int, cap: int) -> KMindedValuation:
    quantities = rng.sample(range(1, m + 1), min(k, m))
    return KMindedValuation(tuple((q, rng.randint(0, cap)) for q in sorted(quantities)))


def _random_piecewise(rng: random.Random, m: int, k: int, cap: int) -> MarginalPiecewiseValuation:
    extra = rng.sample(range(2, m + 1), min(k - 1, max(m - 1, 0)))
    breaks = [1] + sorted(extra)
    return MarginalPiecewiseValuation(tuple((u, rng.randint(0, cap)) for u in breaks))


def _random_table(rng: random.Random, m: int, cap: int) -> TableValuation:
    draws = sorted(rng.randint(0, cap) for _ in range(m))
    return TableValuation((0,) + tuple(draws))


# --- the manipulable baseline -------------------------------------------------

def _greedy_allocation(instance: Instance) -> tuple[int, ...]:
    entries = []
    for i, v in enumerate(instance.bidders):
        inner = unwrap(v)
        if not isinstance(inner, KMindedValuation):
            raise MechanismMismatch(
                f"bidder {i} is {type(inner).__name__}; the greedy baseline needs k-minded bids"
            )
        for q, p in inner.bids:
            if p > 0:
                entries.append((Fraction(p, q), i, q))
    # Highest value density first; ties broken by bidder then quantity.
    entries.sort(key=lambda e: (-e[0], e[1], e[2]))
    remaining = instance.m
    shares = [0] * instance.n
    awarded: set[int] = set()
    for _, i, q in entries:
        if i in awarded or q > remaining:
            continue
        shares[i] = q
        awarded.add(i)
        remaining -= q
    return tuple(shares)


@dataclass(frozen=True)
class GreedyBaseline:
    """Greedy-by-density allocation; deliberately NOT maximal-in-range.

    Pairing it with VCG-formula payments does not give a truthful mechanism;
    the misreport fuzzer exhibits profitable lies against it.
    """

    name: str = "greedy"

    def solve(self, instance: Instance) -> MechanismResult:
        alloc = _greedy_allocation(instance)
        value = sum(v.value(s) for v, s in zip(instance.bidders, alloc))
        return MechanismResult(alloc, value, {"rule": "greedy-density"})


def baseline_greedy_vcg(instance: Instance) -> MechanismResult:
    """Greedy allocation plus VCG-formula payments computed from greedy reruns."""
    from .vcg import compute_payments

    mech = GreedyBaseline()
    result = mech.solve(instance)
    return result.with_payments(compute_payments(instance, mech, "clarke", result))


# --- misreport fuzzing ----------------------------------------------------------

@dataclass(frozen=True)
class MisreportReport:
    """Outcome of a misreport hunt for one bidder.

    ``gain`` is the best utility improvement over truthful reporting that
    the sampled lies achieved (exact, possibly negative).  A positive gain
    always carries the lying valuation's wire record as ``witness``.
    """

    bidder: int
    gain: int
    witness: dict | None
    samples: int


def misreport_search(
    mechanism, instance: Instance, bidder: int, samples: int, seed: int
) -> MisreportReport:
    """Sample lies for one bidder and report the best utility gain.

    Payments follow the Clarke pivot computed from the mechanism itself; the
    pivot term ignores the bidder's own report, so each lie costs exactly one
    mechanism rerun.  Deterministic given the seed.
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    if not 0 <= bidder < instance.n:
        raise ValueError(f"bidder index {bidder} out of range for n={instance.n}")
    rng = random.Random(seed)
    truth = instance.bidders[bidder]
    zeroed = instance.replace_bidder(bidder, truth.zero_like())
    pivot = mechanism.solve(zeroed).welfare

    def utility_of(result: MechanismResult) -> int:
        mine = truth.value(result.allocation[bidder])
        others = sum(
            v.value(s)
            for j, (v, s) in enumerate(zip(instance.bidders, result.allocation))
            if j != bidder
        )
        return mine - (pivot - others)

    honest = utility_of(mechanism.solve(instance))
    pool = _breakpoint_pool(instance.m, instance.n)
    best_gain: int | None = None
    best_witness: dict | None = None
    for _ in range(samples):
        lie = _mutate(truth, rng, instance.m, pool)
        result = mechanism.solve(instance.replace_bidder(bidder, lie))
        gain = utility_of(result) - honest
        if best_gain is None or gain > best_gain:
            best_gain = gain
            best_witness = lie.record() if gain > 0 else None
    assert best_gain is not None
    return MisreportReport(bidder, best_gain, best_witness, samples)


def _breakpoint_pool(m: int, n: int) -> list[int]:
    """Quantities where the mechanisms' ranges have discontinuities."""
    pool = {1, m}
    scheme = bundle_scheme(m, n)
    pool.update(c * scheme.b for c in range(1, scheme.count + 1) if c * scheme.b <= m)
    pool.update(l for l in build_l_grid(m, n) if 1 <= l <= m)
    return sorted(pool)


def _mutate(valuation, rng: random.Random, m: int, pool: list[int]):
    inner = unwrap(valuation)
    if isinstance(inner, KMindedValuation):
        return _mutate_k_minded(inner, rng, m, pool)
    if isinstance(inner, MarginalPiecewiseValuation):
        return _mutate_piecewise(inner, rng, m, pool)
    if isinstance(inner, TableValuation):
        return _mutate_table(inner, rng)
    raise MechanismMismatch(f"no misreport model for {type(inner).__name__}")


def _clamp_value(p: int) -> int:
    return max(0, min(p, VALUE_CAP))


def _mutate_k_minded(v: KMindedValuation, rng: random.Random, m: int, pool: list[int]):
    bids = dict(v.bids)
    op = rng.randrange(7)
    if op == 0 or not bids:  # the zero valuation, or nothing to perturb
        if op == 0:
            return KMindedValuation(())
        bids[rng.randint(1, m)] = rng.randint(1, 10)
        return KMindedValuation(tuple(bids.items()))
    quantities = sorted(bids)
    q = quantities[rng.randrange(len(quantities))]
    if op == 1:  # scale every price
        factor = rng.choice((0, 1, 2, 3, 10))
        scaled = {bq: _clamp_value(bp * factor if factor else bp // 2) for bq, bp in bids.items()}
        return KMindedValuation(tuple(scaled.items()))
    if op == 2:  # nudge one price
        delta = rng.randint(1, max(1, bids[q]))
        bids[q] = _clamp_value(bids[q] + rng.choice((-1, 1)) * delta)
    elif op == 3:  # shift one quantity by one (merge on collision, keep the better price)
        shifted = min(max(q + rng.choice((-1, 1)), 1), m)
        price = bids.pop(q)
        bids[shifted] = max(bids.get(shifted, 0), price)
    elif op == 4:  # bluff one quantity onto a range breakpoint
        target = pool[rng.randrange(len(pool))]
        price = bids.pop(q)
        bids[target] = max(bids.get(target, 0), price)
    elif op == 5:  # drop one bid
        del bids[q]
    else:  # add a bid
        top = max(bids.values(), default=1)
        bids.setdefault(rng.randint(1, m), _clamp_value(rng.randint(0, 2 * top)))
    return KMindedValuation(tuple(bids.items()))


def _mutate_piecewise(v: MarginalPiecewiseValuation, rng: random.Random, m: int, pool: list[int]):
    pieces = dict(v.tuples)
    op = rng.randrange(6)
    if op == 0:
        return MarginalPiecewiseValuation(((1, 0),))
    breaks = sorted(pieces)
    u = breaks[rng.randrange(len(breaks))]
    if op == 1:  # scale marginals
        factor = rng.choice((0, 2, 3))
        scaled = {bu: _clamp_value(bm * factor if factor else bm // 2) for bu, bm in pieces.items()}
        return MarginalPiecewiseValuation(tuple(sorted(scaled.items())))
    if op == 2:  # nudge one marginal
        delta = rng.randint(1, max(1, pieces[u]))
        pieces[u] = _clamp_value(pieces[u] + rng.choice((-1, 1)) * delta)
    elif op == 3:  # move one breakpoint (the first stays pinned at 1)
        if u != 1:
            mv = pieces.pop(u)
            target = max(2, min(m, rng.choice((u - 1, u + 1, pool[rng.randrange(len(pool))]))))
            pieces.setdefault(target, mv)
    elif op == 4 and len(pieces) > 1:  # drop one non-initial piece
        if u != 1:
            del pieces[u]
    else:  # add a piece
        top = max(pieces.values(), default=1)
        if m >= 2:
            pieces.setdefault(rng.randint(2, m), _clamp_value(rng.randint(0, 2 * top)))
    pieces[1] = pieces.get(1, 0)
    return MarginalPiecewiseValuation(tuple(sorted(pieces.items())))


def _mutate_table(v: TableValuation, rng: random.Random):
    values = list(v.values)
    top = max(values)
    op = rng.randrange(5)
    if op == 0:
        return v.zero_like()
    if op == 1:  # scale
        factor = rng.choice((0, 2, 3))
        values = [x * factor if factor else x // 2 for x in values]
    elif op == 2:  # raise the tail from a random point on
        start = rng.randint(1, len(values) - 1)
        bump = rng.randint(1, max(1, top))
        values = values[:start] + [x + bump for x in values[start:]]
    elif op == 3:  # cap from above
        ceiling = rng.randint(0, max(1, top))
        values = [min(x, ceiling) for x in values]
    else:  # single threshold bluff
        threshold = rng.randint(1, len(values) - 1)
        height = rng.randint(1, max(1, 2 * top))
        values = [0 if q < threshold else height for q in range(len(values))]
    # Re-normalize: empty bundle worth 0, monotone, capped.
    values[0] = 0
    running = 0
    for q in range(len(values)):
        running = max(running, min(values[q], VALUE_CAP))
        values[q] = running if q else 0
    return TableValuation(tuple(values))


# --- range cross-check -----------------------------------------------------------

def range_argmax_check(mechanism, instance: Instance) -> bool:
    """True iff the mechanism's welfare matches the max over its declared range."""
    enumerate_range = getattr(mechanism, "enumerate_range", None)
    if enumerate_range is None:
        raise AuctionError(
            f"mechanism {getattr(mechanism, 'name', mechanism)!r} declares no range"
        )
    from .core import welfare

    best = max(welfare(instance, alloc) for alloc in enumerate_range(instance.m, instance.n))
    return mechanism.solve(instance).welfare == best
