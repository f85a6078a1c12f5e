"""Valuation kinds: step bids, piecewise marginals, explicit tables.

Every valuation maps a bundle size to a non-negative integer value, answers
``value(q)`` for any q in the instance's range, is normalized
(``value(0) == 0``) and monotone non-decreasing.  The JSON wire format is::

    {"kind": "k_minded",           "bids":   [[quantity, price], ...]}
    {"kind": "marginal_piecewise", "tuples": [[first_item, marginal], ...]}
    {"kind": "table",              "values": [0, ...]}

Bid prices, marginals and table entries are capped at 2**32 - 1 on parse so
that any welfare sum fits comfortably in 64 bits.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .core import Instance, InvalidValuation

VALUE_CAP = 2**32 - 1


class Valuation:
    """Interface: a normalized monotone map from bundle size to value."""

    #: Largest queryable bundle size, or None when the kind is procedural
    #: and can answer any quantity.
    max_quantity: int | None = None

    def value(self, q: int) -> int:
        raise NotImplementedError

    def zero_like(self) -> "Valuation":
        """The zero valuation expressed in this valuation's kind."""
        raise NotImplementedError

    def record(self) -> dict:
        """JSON-ready record in the wire format above."""
        raise NotImplementedError


def eval_k_minded(bids: Sequence[tuple[int, int]], q: int) -> int:
    """Best price among bids whose quantity fits in q; 0 if none does."""
    if q < 0:
        raise ValueError(f"bundle size must be non-negative, got {q}")
    best = 0
    for bq, bp in bids:
        if bq <= q and bp > best:
            best = bp
    return best


def eval_marginal_piecewise(tuples: Sequence[tuple[int, int]], q: int) -> int:
    """Sum of the first q per-item marginals, computed per piece.

    Piece j prices items ``u_j .. u_{j+1} - 1`` at marginal ``m_j``; the last
    piece extends to infinity.  Closed-form per piece, so quantities up to
    2**40 cost nothing.
    """
    if q < 0:
        raise ValueError(f"bundle size must be non-negative, got {q}")
    total = 0
    for idx, (start, marginal) in enumerate(tuples):
        if start > q:
            break
        end = tuples[idx + 1][0] - 1 if idx + 1 < len(tuples) else q
        total += marginal * (min(end, q) - start + 1)
    return total


@dataclass(frozen=True)
class KMindedValuation(Valuation):
    """A step function given by up to k (quantity, price) bids.

    value(q) is the best price among bids with quantity <= q.  An empty bid
    list is the zero valuation; a single bid is the single-minded case.
    Bids are stored sorted by quantity; duplicate quantities are rejected.
    """

    bids: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        cleaned = []
        for entry in self.bids:
            q, p = entry
            _check_count(q, "bid quantity", minimum=1)
            _check_count(p, "bid price", minimum=0)
            cleaned.append((q, p))
        cleaned.sort()
        quantities = [q for q, _ in cleaned]
        if len(set(quantities)) != len(quantities):
            raise InvalidValuation(f"duplicate bid quantities in {quantities}")
        object.__setattr__(self, "bids", tuple(cleaned))

    def value(self, q: int) -> int:
        return eval_k_minded(self.bids, q)

    def zero_like(self) -> "KMindedValuation":
        return KMindedValuation(())

    def record(self) -> dict:
        return {"kind": "k_minded", "bids": [list(b) for b in self.bids]}


@dataclass(frozen=True)
class MarginalPiecewiseValuation(Valuation):
    """Per-item marginals that are piecewise constant in the item index.

    ``tuples[j] = (u_j, m_j)`` prices every item from the u_j-th onward at
    marginal m_j, until the next tuple takes over.  Breakpoints must start at
    1 and strictly increase.  Marginals need not be decreasing.
    """

    tuples: tuple[tuple[int, int], ...]

    def __post_init__(self):
        cleaned = []
        for entry in self.tuples:
            u, mv = entry
            _check_count(u, "breakpoint", minimum=1)
            _check_count(mv, "marginal", minimum=0)
            cleaned.append((u, mv))
        if not cleaned:
            raise InvalidValuation("piecewise valuation needs at least one tuple")
        if cleaned[0][0] != 1:
            raise InvalidValuation(f"first breakpoint must be 1, got {cleaned[0][0]}")
        for (ua, _), (ub, _) in zip(cleaned, cleaned[1:]):
            if ub <= ua:
                raise InvalidValuation(f"breakpoints must strictly increase, got {ua} then {ub}")
        object.__setattr__(self, "tuples", tuple(cleaned))

    def value(self, q: int) -> int:
        return eval_marginal_piecewise(self.tuples, q)

    def zero_like(self) -> "MarginalPiecewiseValuation":
        return MarginalPiecewiseValuation(((1, 0),))

    def record(self) -> dict:
        return {"kind": "marginal_piecewise", "tuples": [list(t) for t in self.tuples]}


@dataclass(frozen=True)
class TableValuation(Valuation):
    """An explicit value table; entry q is the value of q items."""

    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(self.values)
        if not vals:
            raise InvalidValuation("table valuation needs at least the 0-entry")
        for v in vals:
            _check_count(v, "table value", minimum=0)
        if vals[0] != 0:
            raise InvalidValuation(f"value of the empty bundle must be 0, got {vals[0]}")
        for a, b in zip(vals, vals[1:]):
            if b < a:
                raise InvalidValuation(f"table is not monotone: {a} followed by {b}")
        object.__setattr__(self, "values", vals)

    @property
    def max_quantity(self) -> int:
        return len(self.values) - 1

    def value(self, q: int) -> int:
        if q < 0:
            raise ValueError(f"bundle size must be non-negative, got {q}")
        if q >= len(self.values):
            raise InvalidValuation(f"table covers 0..{len(self.values) - 1}, queried at {q}")
        return self.values[q]

    def zero_like(self) -> "TableValuation":
        return TableValuation((0,) * len(self.values))

    def record(self) -> dict:
        return {"kind": "table", "values": list(self.values)}


class QueryCountedValuation(Valuation):
    """Wrapper that counts distinct value queries; answers are unchanged.

    The counter is owned by one mechanism run: call :meth:`reset` between
    runs.  Distinct means distinct bundle sizes -- a black box can cache, so
    repeats are free.
    """

    def __init__(self, inner: Valuation):
        self.inner = inner
        self._queried: set[int] = set()

    @property
    def max_quantity(self) -> int | None:
        return self.inner.max_quantity

    @property
    def query_count(self) -> int:
        return len(self._queried)

    def reset(self) -> None:
        self._queried.clear()

    def value(self, q: int) -> int:
        self._queried.add(q)
        return self.inner.value(q)

    def zero_like(self) -> "QueryCountedValuation":
        return QueryCountedValuation(self.inner.zero_like())

    def record(self) -> dict:
        return self.inner.record()


def unwrap(valuation: Valuation) -> Valuation:
    """Strip query-counting wrappers to reach the structural valuation."""
    while isinstance(valuation, QueryCountedValuation):
        valuation = valuation.inner
    return valuation


def is_subadditive(valuation: Valuation, m: int) -> bool:
    """True iff value(s) + value(t) >= value(s + t) for all s + t <= m.

    O(m^2) pair enumeration; test scale only.
    """
    vals = [valuation.value(q) for q in range(m + 1)]
    for s in range(1, m + 1):
        for t in range(s, m - s + 1):
            if vals[s] + vals[t] < vals[s + t]:
                return False
    return True


def subadditive_closure(valuation: Valuation, m: int) -> TableValuation:
    """The subadditive valuation v'(s) = v(s) + v(m) for s >= 1, v'(0) = 0."""
    top = valuation.value(m)
    return TableValuation((0,) + tuple(valuation.value(s) + top for s in range(1, m + 1)))


# --- JSON wire format -------------------------------------------------------

def _check_count(x, what: str, minimum: int) -> None:
    if not isinstance(x, int) or isinstance(x, bool):
        raise InvalidValuation(f"{what} must be an integer, got {x!r}")
    if x < minimum:
        raise InvalidValuation(f"{what} must be >= {minimum}, got {x}")


def _checked_pairs(raw, what: str) -> list[tuple[int, int]]:
    if not isinstance(raw, list):
        raise InvalidValuation(f"{what} must be a list, got {type(raw).__name__}")
    pairs = []
    for entry in raw:
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise InvalidValuation(f"each {what} entry must be a pair, got {entry!r}")
        pairs.append((entry[0], entry[1]))
    return pairs


def parse_valuation(record: dict) -> Valuation:
    """Build a valuation from a wire record, checking every invariant.

    Raises :class:`InvalidValuation` on malformed records, non-monotone
    tables, misplaced breakpoints, duplicate bid quantities, or values above
    the 2**32 - 1 cap.
    """
    if not isinstance(record, dict) or "kind" not in record:
        raise InvalidValuation(f"valuation record must be an object with a 'kind', got {record!r}")
    kind = record["kind"]
    if kind == "k_minded":
        bids = _checked_pairs(record.get("bids"), "bid")
        for _, p in bids:
            _check_capped(p, "bid price")
        return KMindedValuation(tuple(bids))
    if kind == "marginal_piecewise":
        tuples = _checked_pairs(record.get("tuples"), "tuple")
        for _, mv in tuples:
            _check_capped(mv, "marginal")
        return MarginalPiecewiseValuation(tuple(tuples))
    if kind == "table":
        values = record.get("values")
        if not isinstance(values, list):
            raise InvalidValuation("table record needs a 'values' list")
        for v in values:
            _check_capped(v, "table value")
        return TableValuation(tuple(values))
    raise InvalidValuation(f"unknown valuation kind {kind!r}")


def _check_capped(x, what: str) -> None:
    _check_count(x, what, minimum=0)
    if x > VALUE_CAP:
        raise InvalidValuation(f"{what} {x} exceeds the cap {VALUE_CAP}")


def valuation_record(valuation: Valuation) -> dict:
    return valuation.record()


def parse_instance(record: dict) -> Instance:
    """Build an instance from ``{"m": int, "bidders": [records]}``."""
    if not isinstance(record, dict):
        raise InvalidValuation(f"instance record must be an object, got {type(record).__name__}")
    m = record.get("m")
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise InvalidValuation(f"instance needs a positive integer 'm', got {m!r}")
    raw_bidders = record.get("bidders")
    if not isinstance(raw_bidders, list) or not raw_bidders:
        raise InvalidValuation("instance needs a non-empty 'bidders' list")
    return Instance(m, tuple(parse_valuation(r) for r in raw_bidders))


def instance_record(instance: Instance) -> dict:
    return {"m": instance.m, "bidders": [v.record() for v in instance.bidders]}


def dump_instance(instance: Instance) -> str:
    """Canonical serialization: fixed key order, sorted bids, newline-terminated."""
    return json.dumps(instance_record(instance), indent=2) + "\n"


def load_instance(text: str) -> Instance:
    try:
        record = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidValuation(f"not valid JSON: {exc}") from exc
    return parse_instance(record)
