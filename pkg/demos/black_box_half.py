"""The equal-bundle 1/2-approximation, and why its factor is tight.

The mechanism never looks inside a valuation: it cuts the supply into n^2
equal bundles plus a remainder and asks each bidder for its value at whole
bundles only.  That makes it usable at astronomically large supplies -- and
exactly a factor 2 away from optimal on adversarial step valuations.
"""
import time

from mirauction import (
    Instance,
    KMindedValuation,
    QueryCountedValuation,
    brute_force_opt,
    bundle_scheme,
    gen_random,
    solve_half,
)

# Two bidders, 8 items: one wants 7, the other 1, both at value 10.
tight = Instance(8, (KMindedValuation(((7, 10),)), KMindedValuation(((1, 10),))))
scheme = bundle_scheme(8, 2)
print(f"tight instance: bundles of {scheme.b} (x{scheme.count}), remainder {scheme.r}")
result = solve_half(tight)
print(f"mechanism welfare {result.welfare} at {result.allocation}")
print(f"optimum {brute_force_opt(tight)[1]} at (7, 1): both fit, but not on the bundle grid")
print()

# The range only contains multiples of 25 here, so one threshold must starve.
far = Instance(100, (KMindedValuation(((30, 1),)), KMindedValuation(((70, 1),))))
print(f"thresholds (30, 70) of 100: mechanism welfare {solve_half(far).welfare}, optimum 2")
print()

# Query counting at a million items: still a handful of value queries.
big = gen_random("k_minded", 4, 10**6, 2, 1000, seed=8)
counted = Instance(big.m, tuple(QueryCountedValuation(v) for v in big.bidders))
start = time.perf_counter()
result = solve_half(counted)
elapsed = time.perf_counter() - start
queries = sum(v.query_count for v in counted.bidders)
print(f"m = 10^6, n = 4: welfare {result.welfare} from {queries} distinct queries "
      f"in {elapsed * 1000:.1f} ms")
print(f"bound: n * (n^2 + 2) = {4 * 18} queries, independent of m")
