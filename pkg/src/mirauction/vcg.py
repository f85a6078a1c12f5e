"""VCG payments over a fixed range, turning maximal-in-range rules truthful.

Bidder i pays ``h_i - (welfare of the others at the chosen allocation)``.
With the Clarke pivot, h_i is the mechanism's welfare when bidder i's report
is replaced by the zero valuation -- the zeroed instance keeps the same
bidder count and supply, hence exactly the same range, which is what makes
the payments incentive-compatible.  The zero-pivot variant sets h_i = 0,
i.e. the mechanism pays each bidder the others' welfare; it is equally
truthful but hands out money, so Clarke is the default.
"""
from __future__ import annotations

from .core import AuctionError, Instance, MechanismResult

PAYMENT_RULES = ("clarke", "zero-pivot")


def compute_payments(
    instance: Instance,
    mechanism,
    rule: str = "clarke",
    result: MechanismResult | None = None,
) -> tuple[int, ...]:
    """Per-bidder payments (signed) for ``mechanism`` run on ``instance``.

    ``result`` may carry a previously computed run to avoid re-solving the
    true instance.  Clarke re-runs the mechanism once per bidder with that
    bidder zeroed out.
    """
    if rule not in PAYMENT_RULES:
        raise ValueError(f"unknown payment rule {rule!r}; pick one of {PAYMENT_RULES}")
    if result is None:
        result = mechanism.solve(instance)
    payments = []
    for i in range(instance.n):
        others = result.welfare - instance.bidders[i].value(result.allocation[i])
        if rule == "clarke":
            zeroed = instance.replace_bidder(i, instance.bidders[i].zero_like())
            pivot = mechanism.solve(zeroed).welfare
        else:
            pivot = 0
        payments.append(pivot - others)
    return tuple(payments)


def solve_with_payments(
    instance: Instance, mechanism, rule: str = "clarke"
) -> MechanismResult:
    result = mechanism.solve(instance)
    return result.with_payments(compute_payments(instance, mechanism, rule, result))


def utility(instance: Instance, i: int, result: MechanismResult) -> int:
    """Quasilinear utility of bidder i: value received minus payment."""
    if result.payments is None:
        raise AuctionError("result carries no payments; compute them first")
    return instance.bidders[i].value(result.allocation[i]) - result.payments[i]
