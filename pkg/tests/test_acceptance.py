"""Acceptance gate: one test per criterion, exact integer arithmetic throughout.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS line per
criterion.  The only tolerances anywhere are wall-clock budgets.
"""
import json
import random
import subprocess
import sys
import time
from pathlib import Path

from mirauction import (
    GreedyBaseline,
    HalfMechanism,
    Instance,
    LiftMechanism,
    PtasMechanism,
    QueryCountedValuation,
    brute_force_opt,
    build_l_grid,
    compute_payments,
    exhaustive_k_minded_solver,
    gen_onepoint,
    gen_random,
    gen_subadditive_hard,
    inner_subadditive,
    is_subadditive,
    iter_allocations,
    lift_solve,
    load_instance,
    misreport_search,
    piecewise_solver,
    range_argmax_check,
    single_bidder_solver,
    solve_half,
    solve_ptas,
    subadditive_solver,
    utility,
    welfare,
)

DATA = Path(__file__).parent / "data"


def report_pass(number: int, name: str) -> None:
    print(f"\ncriterion {number} ({name}): PASS")


def random_sizes(rng, n_max, m_max):
    return rng.randint(1, n_max), rng.randint(1, m_max)


def test_criterion_1_oracle_equivalence_full_range():
    rng = random.Random(1001)
    start = time.perf_counter()
    for trial in range(1000):
        n, m = random_sizes(rng, 3, 8)
        inst = gen_random("k_minded", n, m, min(2, m), 3, seed=trial)
        assert solve_ptas(inst, n).welfare == brute_force_opt(inst)[1]
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0, f"budget blown: {elapsed:.1f}s"
    report_pass(1, "oracle equivalence at t = n, 1000 instances")


def test_criterion_2_ptas_guarantee_and_tightness():
    rng = random.Random(1002)
    for trial in range(500):
        n, m = random_sizes(rng, 5, 30)
        inst = gen_random("k_minded", n, m, min(3, m), 20, seed=10_000 + trial)
        opt = brute_force_opt(inst)[1]
        for t in (1, 2):
            alg = solve_ptas(inst, t).welfare
            t_eff = min(t, n)
            assert (t_eff + 1) * alg >= t_eff * opt
    tight = gen_onepoint((2, 3, 4), 9)
    assert solve_ptas(tight, 1).welfare == 2
    assert brute_force_opt(tight)[1] == 3
    report_pass(2, "ptas guarantee on 500 instances, tight at 2/3")


def test_criterion_3_half_guarantee_and_tightness():
    rng = random.Random(1003)
    kinds = ("k_minded", "table", "marginal_piecewise", "subadditive_table")
    for trial in range(500):
        n, m = random_sizes(rng, 4, 50)
        inst = gen_random(kinds[trial % 4], n, m, min(3, m), 20, seed=20_000 + trial)
        assert 2 * solve_half(inst).welfare >= brute_force_opt(inst)[1]
    tight = load_instance((DATA / "two_bidder_tight.json").read_text())
    assert solve_half(tight).welfare == 10
    assert brute_force_opt(tight)[1] == 20
    assert solve_half(gen_onepoint((30, 70), 100)).welfare == 1
    report_pass(3, "half guarantee on 500 mixed instances, tight at 10/20 and 1/2")


def test_criterion_4_lift_guarantee():
    rng = random.Random(1004)
    for trial in range(300):
        n, m = random_sizes(rng, 4, 25)
        inst = gen_random("k_minded", n, m, min(2, m), 20, seed=30_000 + trial)
        opt = brute_force_opt(inst)[1]
        for t in (1, 2):
            alg = lift_solve(inst, exhaustive_k_minded_solver(t), t).welfare
            t_eff = min(t, n)
            assert (t_eff + 1) * alg >= t_eff * opt
        single = lift_solve(inst, single_bidder_solver(), 1).welfare
        assert 2 * single >= opt
    report_pass(4, "lift guarantee, exhaustive inner t in {1,2} and single inner t=1")


def test_criterion_5_subadditive_inner():
    rng = random.Random(1005)
    for trial in range(200):
        n = rng.randint(1, 3)
        m = rng.randint(2, 20)
        inst = gen_random("subadditive_table", n, m, min(3, m), 12, seed=40_000 + trial)
        assert all(is_subadditive(v, m) for v in inst.bidders)
        alloc = inner_subadditive(inst.bidders, m)
        alg = sum(v.value(s) for v, s in zip(inst.bidders, alloc))
        assert 4 * alg >= 3 * brute_force_opt(inst)[1]
    hard = gen_subadditive_hard(10, 4)
    assert brute_force_opt(hard)[1] == 4
    for alloc in iter_allocations(10, 2):
        if alloc == (4, 6):
            assert welfare(hard, alloc) == 4
        else:
            assert welfare(hard, alloc) <= 3
    report_pass(5, "subadditive inner 3/4 guarantee and hard-family structure")


def test_criterion_6_mir_argmax():
    rng = random.Random(1006)
    for trial in range(100):
        n, m = random_sizes(rng, 3, 10)
        t = rng.randint(0, 2)
        inst = gen_random("k_minded", n, m, min(2, m), 8, seed=50_000 + trial)
        assert range_argmax_check(PtasMechanism(t), inst)
    kinds = ("k_minded", "table", "marginal_piecewise", "subadditive_table")
    for trial in range(100):
        n, m = random_sizes(rng, 3, 12)
        inst = gen_random(kinds[trial % 4], n, m, min(2, m), 8, seed=60_000 + trial)
        assert range_argmax_check(HalfMechanism(), inst)
    lift_cases = (
        ("k_minded", exhaustive_k_minded_solver),
        ("marginal_piecewise", piecewise_solver),
        ("subadditive_table", subadditive_solver),
        ("table", None),  # single-bidder inner
    )
    for trial in range(25):
        n, m = random_sizes(rng, 3, 10)
        t = rng.randint(1, 2)
        for kind, factory in lift_cases:
            inst = gen_random(kind, n, m, min(2, m), 8, seed=70_000 + trial)
            if factory is None:
                mech = LiftMechanism(single_bidder_solver(), 1)
            else:
                mech = LiftMechanism(factory(t), t)
            assert range_argmax_check(mech, inst)
    report_pass(6, "range argmax for ptas, half, and lift with all four inners")


def test_criterion_7_truthfulness():
    rng = random.Random(1007)
    configs = (
        (PtasMechanism(1), "k_minded"),
        (PtasMechanism(2), "k_minded"),
        (HalfMechanism(), "table"),
        (LiftMechanism(exhaustive_k_minded_solver(2), 1), "k_minded"),
        (LiftMechanism(single_bidder_solver(), 1), "table"),
        (LiftMechanism(piecewise_solver(2), 1), "marginal_piecewise"),
        (LiftMechanism(subadditive_solver(2), 1), "subadditive_table"),
    )
    instances = 0
    reruns = 0
    for config_idx, (mech, kind) in enumerate(configs):
        for i in range(15):
            n = rng.randint(2, 3)
            m = rng.randint(2, 8 if kind != "table" else 12)
            inst = gen_random(kind, n, m, min(2, m), 6, seed=80_000 + 100 * config_idx + i)
            instances += 1
            payments = compute_payments(inst, mech, "clarke")
            truth = mech.solve(inst).with_payments(payments)
            for bidder in range(n):
                assert payments[bidder] >= 0, "positive transfer"
                assert utility(inst, bidder, truth) >= 0, "individual rationality"
                found = misreport_search(mech, inst, bidder, 100, seed=1000 * config_idx + bidder)
                reruns += found.samples
                assert found.gain <= 0, (
                    f"profitable lie against {mech.name}: {found.gain} via {found.witness}"
                )
    assert instances >= 100 and reruns >= 10_000
    baseline = misreport_search(
        GreedyBaseline(),
        load_instance((DATA / "greedy_manipulable.json").read_text()),
        1,
        200,
        seed=3,
    )
    assert baseline.gain > 0 and baseline.witness is not None
    report_pass(
        7,
        f"no profitable lie in {reruns} reruns over {instances} instances; greedy baseline manipulable",
    )


def test_criterion_8_query_complexity_and_scale():
    m, n = 10**6, 4
    inst = gen_random("k_minded", n, m, 2, 1000, seed=8)
    counted = Instance(m, tuple(QueryCountedValuation(v) for v in inst.bidders))
    start = time.perf_counter()
    solve_half(counted)
    half_elapsed = time.perf_counter() - start
    queries = sum(v.query_count for v in counted.bidders)
    assert queries <= n * (n * n + 2) == 72
    assert half_elapsed < 1.0, f"half took {half_elapsed:.3f}s"
    start = time.perf_counter()
    solve_ptas(inst, 1)
    ptas_elapsed = time.perf_counter() - start
    assert ptas_elapsed < 5.0, f"ptas took {ptas_elapsed:.3f}s"
    report_pass(8, f"half used {queries} <= 72 queries at m=10^6; both budgets met")


def test_criterion_9_grid_exactness_and_density():
    assert build_l_grid(10, 2) == (0, 1, 2, 3, 4, 5, 7, 9, 10)
    rng = random.Random(1009)
    for _ in range(100):
        m = rng.randint(1, 10**6)
        n = rng.randint(1, 10)
        grid = build_l_grid(m, n)
        # Checking each consecutive level pair at its worst target covers
        # every s: for s with m - s in [low, high), the chosen level is low.
        for low, high in zip(grid, grid[1:]):
            worst = high - 1
            if worst >= 1:
                assert low * (2 * n + 1) >= 2 * n * worst
        for _ in range(50):  # spot-check the property in its direct form
            s = rng.randint(0, m - 1)
            target = m - s
            chosen = max(l for l in grid if l <= target)
            assert chosen * (2 * n + 1) >= 2 * n * target
    report_pass(9, "grid exact at (10, 2); density property on 100 random (m, n)")


def test_criterion_10_cli_byte_determinism():
    fixture = str(DATA / "two_bidder_tight.json")
    onepoint = str(DATA / "onepoint_2_3_4.json")
    commands = [
        ["solve", "--input", fixture, "--mechanism", "ptas", "--t", "2"],
        ["solve", "--input", fixture, "--mechanism", "half", "--payments", "clarke"],
        ["solve", "--input", fixture, "--mechanism", "lift", "--inner", "exhaustive", "--t", "1"],
        ["solve", "--input", fixture, "--mechanism", "brute"],
        ["verify", "--input", onepoint, "--mechanism", "ptas", "--t", "1"],
        ["verify", "--input", fixture, "--mechanism", "half"],
        ["gen", "onepoint", "--s", "30,70", "--m", "100"],
        ["gen", "subadditive-hard", "--m", "10", "--s1", "4"],
        ["gen", "random", "--kind", "subadditive_table", "--n", "3", "--m", "9", "--seed", "42"],
        ["misreport", "--input", fixture, "--mechanism", "half", "--bidder", "0",
         "--samples", "40", "--seed", "7"],
    ]
    for command in commands:
        runs = [
            subprocess.run(
                [sys.executable, "-m", "mirauction.cli", *command],
                capture_output=True,
            )
            for _ in range(2)
        ]
        assert runs[0].stdout == runs[1].stdout, f"nondeterministic: {command}"
        assert runs[0].returncode == runs[1].returncode
        json.loads(runs[0].stdout)  # every report is well-formed JSON
    report_pass(10, f"{len(commands)} CLI commands byte-identical across runs")
