"""Why range restriction matters: a lie-hunt against two payment schemes.

A rule that exactly maximizes over a fixed range, paired with Clarke
payments, leaves no bidder any profitable misreport.  The same payment
formula wrapped around a greedy heuristic is exploitable, and the fuzzer
finds the exploit.
"""
from mirauction import (
    GreedyBaseline,
    HalfMechanism,
    Instance,
    KMindedValuation,
    PtasMechanism,
    compute_payments,
    gen_random,
    misreport_search,
    utility,
)

inst = gen_random("k_minded", 3, 10, 2, 8, seed=14)
print("random 3-bidder instance; Clarke payments on the half mechanism:")
mech = HalfMechanism()
result = mech.solve(inst).with_payments(compute_payments(inst, mech, "clarke"))
for i in range(3):
    print(
        f"  bidder {i}: gets {result.allocation[i]}, pays {result.payments[i]}, "
        f"utility {utility(inst, i, result)}"
    )
print()

print("hunting misreports (1000 lies per bidder) against truthful mechanisms:")
for mechanism in (PtasMechanism(1), HalfMechanism()):
    worst = max(
        misreport_search(mechanism, inst, bidder, 1000, seed=bidder).gain
        for bidder in range(3)
    )
    print(f"  {mechanism.name}: best gain found {worst} (<= 0 means no lie helps)")
print()

trap = Instance(8, (KMindedValuation(((1, 10),)), KMindedValuation(((8, 16),))))
print("greedy-by-density with the same payment formula, thresholds (1, 10) vs (8, 16):")
greedy = GreedyBaseline()
honest = greedy.solve(trap).with_payments(compute_payments(trap, greedy, "clarke"))
print(f"  honest outcome: {honest.allocation}, payments {honest.payments}")
report = misreport_search(greedy, trap, 1, 200, seed=3)
print(f"  bidder 1 gains {report.gain} by reporting {report.witness}")
print("  (inflating the bid flips the greedy order; the payment does not punish it)")
