"""Walk through the t-round mechanism on a three-bidder threshold instance.

Each bidder wants an exact number of items (2, 3 and 4) out of 9 and values
its threshold at 1.  All three can be served simultaneously, but the t-round
range deliberately cannot express that allocation for small t -- that
restriction is what buys truthfulness.
"""
from mirauction import (
    brute_force_opt,
    enumerate_t_round_range,
    gen_onepoint,
    is_t_round,
    solve_ptas,
)

instance = gen_onepoint((2, 3, 4), 9)
opt_alloc, opt = brute_force_opt(instance)
print(f"instance: thresholds (2, 3, 4), supply 9")
print(f"unrestricted optimum: welfare {opt} at {opt_alloc}")
print()

print("is (2, 3, 4) inside the range?")
for t in range(4):
    print(f"  t={t}: {is_t_round(9, 3, (2, 3, 4), t)}")
print("(ranges for different t are not nested: at t=0 the bundle size")
print(" degenerates to 1 and admits everything, t=1 rules the allocation")
print(" out, and t=2 re-admits it by serving two bidders exactly)")
print()

for t in range(4):
    result = solve_ptas(instance, t)
    size = sum(1 for _ in enumerate_t_round_range(9, 3, t))
    print(
        f"t={t}: welfare {result.welfare} at {result.allocation}, "
        f"range has {size} allocations, witness {result.witness}"
    )
print()
print("guarantee check, exact integers: (t+1) * ALG >= t * OPT")
for t in (1, 2, 3):
    alg = solve_ptas(instance, t).welfare
    print(f"  t={t}: {(t + 1) * alg} >= {t * opt}  ({alg}/{opt})")
