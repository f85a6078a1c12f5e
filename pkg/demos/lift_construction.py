"""Lifting a small exact solver into a mechanism for many bidders.

The lift tries every subset of up to t bidders at every supply level from a
geometric grid: the inner solver serves the subset exactly while everyone
else shares equal bundles cut from the leftover.  Whatever guarantee the
inner solver has, the lift keeps it up to an additive 1/(t+1).
"""
from mirauction import (
    brute_force_opt,
    build_l_grid,
    exhaustive_k_minded_solver,
    gen_random,
    gen_subadditive_hard,
    inner_subadditive,
    lift_solve,
    piecewise_solver,
    single_bidder_solver,
    subadditive_solver,
)

print("level grid for 10 items, 2 bidders:", build_l_grid(10, 2))
print()

inst = gen_random("k_minded", 4, 20, 2, 9, seed=21)
opt = brute_force_opt(inst)[1]
print(f"random 4-bidder step instance, optimum {opt}")
for t in (1, 2):
    result = lift_solve(inst, exhaustive_k_minded_solver(t), t)
    print(f"  exhaustive inner, t={t}: welfare {result.welfare}, witness {result.witness}")
single = lift_solve(inst, single_bidder_solver(), 1)
print(f"  single-bidder inner, t=1: welfare {single.welfare} (guarantee 1/2)")
print()

pw = gen_random("marginal_piecewise", 3, 15, 3, 5, seed=4)
result = lift_solve(pw, piecewise_solver(2), 2)
print(f"piecewise instance: lift welfare {result.welfare}, optimum {brute_force_opt(pw)[1]}")
print()

hard = gen_subadditive_hard(10, 4)
alloc = inner_subadditive(hard.bidders, 10)
value = sum(v.value(s) for v, s in zip(hard.bidders, alloc))
print("subadditive hard family (thresholds 4 and 6 of 10):")
print(f"  designated-bidder grid search: welfare {value} at {alloc}, optimum 4")
lifted = lift_solve(hard, subadditive_solver(2), 2)
print(f"  lifted, t=2: welfare {lifted.welfare}")
