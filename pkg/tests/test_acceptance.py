"""Acceptance suite: one check per criterion, each reporting PASS or FAIL.

Run with ``pytest tests/test_acceptance.py -v`` (summary lines appear under
"acceptance criteria") or directly with ``python3 tests/test_acceptance.py``.
"""

import math
import time
import timeit

import numpy as np
import scipy.linalg as sla

from bsgda import _kernels, bench
from bsgda.discs import DiscState, eig_sandwich_check, left_end, sampling_vector, scale_factor
from bsgda.generators import GENERATORS, gen_sensor_graph
from bsgda.graph import path_graph
from bsgda.oracle import brute_force_set_cover, dense_coefficient_matrix, harmonic, lambda_min
from bsgda.recon import (
    SampleObservation, SolverConfig, adjoint_sampling, glr_reconstruct, mse_bound_check,
)
from bsgda.sampler import (
    bs_gda, certified_bound, coverage_table, estimate_coverage, greedy_cover, random_sampler,
)

from _graphs import random_graph, random_sampling_vector, random_scales

FAMILIES = ("sensor", "community", "ba")


def _random_connected(rng, n):
    return random_graph(rng, n, p_edge=rng.uniform(0.1, 0.6), connected=True)


def criterion_1():
    g = path_graph(5)
    sub = estimate_coverage(g, 0.2, 2, p=12, mu=1.0)  # root 3 in 1-based labels
    best = min(timeit.repeat(lambda: estimate_coverage(g, 0.2, 2, 12, 1.0), number=1, repeat=50))
    ok = sub.member_set == {1, 2, 3} and best < 1e-3
    return ok, f"root 2 -> {sorted(sub.member_set)} (labels 1-based: {{2,3,4}}), {1e3 * best:.3f} ms"


def criterion_2():
    rng = np.random.default_rng(20)
    worst, violations = math.inf, 0
    for _ in range(200):
        n = int(rng.integers(1, 51))
        g = random_graph(rng, n, p_edge=rng.uniform(0.05, 0.6))
        a, s, mu = random_sampling_vector(rng, n), random_scales(rng, n), rng.choice([0.01, 0.1, 1.0])
        lo, lam, hi = eig_sandwich_check(g, a, s, mu)
        margin = min(lam - lo, hi - lam)
        worst = min(worst, margin)
        violations += margin < -1e-9
    return violations == 0, f"200 instances, violations={violations}, smallest margin={worst:.3e}"


def criterion_3():
    rng = np.random.default_rng(30)
    err_empty = err_full = 0.0
    for k in range(30):
        g = GENERATORS[FAMILIES[k % 3]](int(rng.integers(20, 120)), k) if k < 15 \
            else _random_connected(rng, int(rng.integers(2, 50)))
        if not g.is_connected():
            continue
        mu = rng.choice([0.01, 1.0])
        zero = np.zeros(g.n)
        cert = certified_bound(g, [], np.ones(g.n), mu)
        err_empty = max(err_empty, abs(cert), abs(lambda_min(g, mu, zero)))
        err_full = max(err_full, abs(lambda_min(g, mu, np.ones(g.n)) - 1.0))
    ok = err_empty <= 1e-8 and err_full <= 1e-8
    return ok, f"empty: max |bound|,|lambda_min| = {err_empty:.2e}; full: max |lambda_min - 1| = {err_full:.2e}"


def criterion_4():
    rng = np.random.default_rng(40)
    worst, probes = 0.0, 0
    while probes < 1000:
        n = int(rng.integers(2, 40))
        g = _random_connected(rng, n)
        a, s, mu = random_sampling_vector(rng, n), random_scales(rng, n), rng.uniform(0.01, 2.0)
        k = int(rng.integers(n))
        top = min(1.0, a[k] + mu * g.degrees[k])
        T = rng.uniform(0.0, top)
        if T <= 0:
            continue
        st = DiscState(g, a, s, mu)
        s2 = s.copy()
        s2[k] = scale_factor(st, k, T)
        worst = max(worst, abs(left_end(DiscState(g, a, s2, mu), k) - T))
        probes += 1
    return worst <= 1e-10, f"{probes} probes, max |left_end - T| = {worst:.2e}"


def criterion_5():
    rng = np.random.default_rng(50)
    total = equal = bad = 0
    for _ in range(60):
        n = int(rng.integers(3, 11))
        g = _random_connected(rng, n)
        for T in (0.05, 0.2, 0.5):
            subsets = [estimate_coverage(g, T, i, 12, 1.0).member_set for i in range(n)]
            opt = len(brute_force_set_cover(range(n), subsets))
            res = greedy_cover(g, T, n, 12, 1.0)
            size = len(res.sample_set)
            bad += (not res.valid) or size > harmonic(max(map(len, subsets))) * opt
            equal += size == opt
            total += 1
    rate = equal / total
    return bad == 0, (f"{total} instances, H-bound violations={bad}, "
                      f"greedy optimal in {100 * rate:.1f}% (soft target 80%)")


def grid_top_valid(g, K, eps, p, mu):
    """Largest grid point k*eps/2 in (0, 1) at which greedy cover is valid."""
    step = eps / 2
    k = int(math.floor((1 - 1e-12) / step))
    while k >= 1:
        table = coverage_table(g, k * step, p, mu)
        if _kernels.greedy_cover(g.n, table.ptr, table.members, K)[1] == 0:
            return k * step
        k -= 1
    return 0.0


def criterion_6_instances():
    """Fixed instance family: seeds 0..19, rotating graph families, n in [20, 60]."""
    for seed in range(20):
        n = int(np.random.default_rng(seed).integers(20, 61))
        yield seed, FAMILIES[seed % 3], n, GENERATORS[FAMILIES[seed % 3]](n, seed), max(1, n // 10)


def criterion_6():
    eps, mu = 1e-4, 0.01
    failures = []
    for seed, family, n, g, K in criterion_6_instances():
        out = bs_gda(g, K, eps=eps, p=12, mu=mu)
        grid = grid_top_valid(g, K, eps, 12, mu)
        if abs(out.achieved_T - grid) > eps:
            failures.append(f"seed {seed} {family} n={n} K={K}: T_hat={out.achieved_T:.6g} grid={grid:.6g}")
    detail = f"{20 - len(failures)}/20 within eps={eps:g}"
    if failures:
        detail += "; mismatches: " + "; ".join(failures)
    return not failures, detail


def criterion_7():
    rng = np.random.default_rng(70)
    cert_viol, weaker = 0, []
    ratios = []
    for seed in range(10):
        g = gen_sensor_graph(200, 6, seed)
        out = bs_gda(g, 20)
        lam = lambda_min(g, 0.01, sampling_vector(200, out.sample_set))
        cert_viol += out.certified_lower_bound > lam + 1e-12
        rand = np.mean([lambda_min(g, 0.01, sampling_vector(200, random_sampler(g, 20, rng)))
                        for _ in range(20)])
        ratios.append(lam / rand)
        if lam < rand:
            weaker.append(seed)
    for k in range(10):
        g = GENERATORS[FAMILIES[1 + k % 2]](200, k)
        out = bs_gda(g, 20)
        cert_viol += out.certified_lower_bound > lambda_min(g, 0.01, sampling_vector(200, out.sample_set)) + 1e-12
    ok = cert_viol == 0 and not weaker
    return ok, (f"certified > lambda_min in {cert_viol}/20 outcomes; GDA/random lambda_min ratio "
                f"min={min(ratios):.2f} mean={np.mean(ratios):.2f}; graphs where GDA lower: {weaker}")


def criterion_8():
    rng = np.random.default_rng(80)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 201))
        g = random_graph(rng, n, p_edge=rng.uniform(0.02, 0.3), connected=True)
        S = [int(v) for v in rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False)]
        y = rng.normal(size=len(S))
        mu = rng.choice([0.01, 0.1, 1.0])
        x_hat = glr_reconstruct(g, SampleObservation(S, y), SolverConfig(mu=mu))
        a = adjoint_sampling(np.ones(len(S)), S, n)
        ref = sla.solve(dense_coefficient_matrix(g, mu, a), adjoint_sampling(y, S, n), assume_a="pos")
        worst = max(worst, np.linalg.norm(x_hat - ref) / np.linalg.norm(ref))
    bound_viol = 0
    for _ in range(100):
        n = int(rng.integers(2, 101))
        g = random_graph(rng, n, p_edge=rng.uniform(0.02, 0.4), connected=True)
        S = [int(v) for v in rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False)]
        lhs, rhs = mse_bound_check(g, S, rng.normal(size=n), rng.normal(scale=0.1, size=n),
                                   SolverConfig(mu=rng.choice([0.01, 0.1, 1.0])))
        bound_viol += lhs > rhs + 1e-9
    ok = worst <= 1e-6 and bound_viol == 0
    return ok, f"max relative error vs dense = {worst:.2e} (50 runs); bound violations = {bound_viol}/100"


def criterion_9():
    cfg = bench.ExperimentConfig(graph_type="sensor", n=500, graph_seed=0, signal="GS1",
                                 budgets=[30, 50, 80], n_signals=10, n_noise=10)
    t0 = time.perf_counter()
    rows = bench.run_experiment(cfg)
    elapsed = time.perf_counter() - t0
    by = {(r.sampler, r.K): r.mean_mse for r in rows}
    wins = [by["gda", K] < by["random", K] for K in cfg.budgets]
    parts = [f"K={K}: gda {by['gda', K]:.4f} vs random {by['random', K]:.4f}" for K in cfg.budgets]
    return all(wins) and elapsed < 120, f"{cfg.trials} trials; " + "; ".join(parts) + f"; {elapsed:.1f} s"


def criterion_10():
    fixed = bench.time_sampler([1000, 4000], K=50, eps=1e-3, repeats=5)
    prop = bench.time_sampler([1000, 4000], K=None, eps=1e-3, repeats=5)
    r_fixed = bench.scaling_ratios(fixed)[0][2]
    r_prop = bench.scaling_ratios(prop)[0][2]
    g = gen_sensor_graph(3000, 6, 0)
    t0 = time.perf_counter()
    bs_gda(g, 300, eps=1e-3)
    big = time.perf_counter() - t0
    t0 = time.perf_counter()
    fine = bs_gda(g, 300, eps=1e-5)
    big_fine = time.perf_counter() - t0
    ok = r_fixed <= 6 and r_prop <= 10 and big < 10
    return ok, (f"eps=1e-3: ratio K=50 {r_fixed:.2f}, ratio K=n/10 {r_prop:.2f}, n=3000 K=300 "
                f"{big:.3f} s; info: eps=1e-5 n=3000 {big_fine:.3f} s valid={fine.valid}")


def criterion_11():
    mismatches = []
    for family in FAMILIES:
        g = GENERATORS[family](500, 1)
        ref = bs_gda(g, 50, workers=1)
        for w in (1, 2, 4):
            out = bs_gda(g, 50, workers=w)
            same = (out.sample_set == ref.sample_set and out.achieved_T == ref.achieved_T
                    and np.array_equal(out.assembled_s, ref.assembled_s)
                    and out.certified_lower_bound == ref.certified_lower_bound
                    and out.trace == ref.trace)
            if not same:
                mismatches.append(f"bs_gda {family} workers={w}")
        if random_sampler(g, 50, 9) != random_sampler(g, 50, 9):
            mismatches.append(f"random {family}")
    base = None
    for w in (1, 3, 1):
        cfg = bench.ExperimentConfig(n=150, budgets=[10, 20], n_signals=3, n_noise=3, seed=5,
                                     signal="GS2", workers=w)
        rows = [(r.sampler, r.K, r.trials, r.mean_mse, r.std_mse) for r in bench.run_experiment(cfg)]
        if base is None:
            base = rows
        elif rows != base:
            mismatches.append(f"experiment workers={w}")
    return not mismatches, "bit-identical across repeats and workers" if not mismatches \
        else "differences: " + ", ".join(mismatches)


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 12)}


def _run(number, acceptance_report):
    ok, detail = CRITERIA[number]()
    acceptance_report(number, ok, detail)
    assert ok, detail


def test_criterion_01_worked_example(acceptance_report):
    _run(1, acceptance_report)


def test_criterion_02_sandwich_bound(acceptance_report):
    _run(2, acceptance_report)


def test_criterion_03_extreme_sampling(acceptance_report):
    _run(3, acceptance_report)


def test_criterion_04_scale_factor(acceptance_report):
    _run(4, acceptance_report)


def test_criterion_05_greedy_quality(acceptance_report):
    _run(5, acceptance_report)


def test_criterion_06_binary_search_vs_grid(acceptance_report):
    _run(6, acceptance_report)


def test_criterion_07_certified_conditioning(acceptance_report):
    _run(7, acceptance_report)


def test_criterion_08_reconstruction(acceptance_report):
    _run(8, acceptance_report)


def test_criterion_09_mse_direction(acceptance_report):
    _run(9, acceptance_report)


def test_criterion_10_scaling(acceptance_report):
    _run(10, acceptance_report)


def test_criterion_11_determinism(acceptance_report):
    _run(11, acceptance_report)


if __name__ == "__main__":
    failed = 0
    for number, check in CRITERIA.items():
        ok, detail = check()
        failed += not ok
        print(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}", flush=True)
    raise SystemExit(1 if failed else 0)
