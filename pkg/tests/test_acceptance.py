"""Acceptance criteria 1-11, each at its stated tolerance.

Every test prints one ``ACCEPTANCE <n> PASS|FAIL`` line (visible with
``pytest -v``, ``-s`` not required) before asserting.
"""

import math
import time

import numpy as np
import pytest

from fixedangle.angles import builtin_table, verify_conjecture
from fixedangle.classical import (
    GW_RATIO,
    gw_expected_cut,
    gw_round,
    gw_solve,
    maxcut_exact,
    maxcut_naive,
    performance_ratio,
)
from fixedangle.engine import Evaluator, guarantee
from fixedangle.graphs import (
    Graph,
    TreeSpec,
    edge_lightcone,
    girth,
    is_bipartite,
    load_cubic_corpus,
    petersen_graph,
    random_regular,
    tree_subgraph,
)
from fixedangle.optimize import OptimizerConfig, angle_distance, optimize_tree_angles, warm_start_compare
from fixedangle.statevec import QaoaAngles, simulate_expectation
from fixedangle.tensornet import edge_expectation_tn


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {n} {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail
    return emit


def test_criterion_01_table_p1(report):
    t0 = time.perf_counter()
    entry = optimize_tree_angles(3, 1, "interp")
    elapsed = time.perf_counter() - t0
    dist = angle_distance(entry.angles, QaoaAngles((0.616,), (0.393,)))
    ok = (
        abs(entry.guarantee - 0.6925) <= 1e-3
        and dist <= 2e-3
        and entry.provenance["backend"] == "statevector"
        and elapsed < 60
    )
    report(1, ok, f"tree(3,1) guarantee {entry.guarantee:.6f} (target 0.6925 +- 1e-3), "
                  f"angle distance to (0.616, 0.393) after symmetry reduction {dist:.2e}, "
                  f"backend {entry.provenance['backend']}, {elapsed:.1f} s")


def test_criterion_02_table_p2(report):
    t0 = time.perf_counter()
    interp = optimize_tree_angles(3, 2, "interp")
    multi = optimize_tree_angles(3, 2, "multistart", n_starts=200, seed=0)
    elapsed = time.perf_counter() - t0
    gap = abs(interp.guarantee - multi.guarantee)
    ok = (
        tree_subgraph(TreeSpec(3, 2)).graph.num_vertices == 14
        and abs(interp.guarantee - 0.7559) <= 1e-3
        and abs(multi.guarantee - 0.7559) <= 1e-3
        and gap <= 1e-4
        and elapsed < 600
    )
    report(2, ok, f"tree(3,2) interp {interp.guarantee:.6f}, multistart(200) {multi.guarantee:.6f}, "
                  f"|diff| {gap:.1e} (<= 1e-4), target 0.7559 +- 1e-3, {elapsed:.1f} s")


def test_criterion_03_table_p3(report):
    t0 = time.perf_counter()
    entry = optimize_tree_angles(3, 3, "interp", backend="tensor")
    elapsed = time.perf_counter() - t0
    n = tree_subgraph(TreeSpec(3, 3)).graph.num_vertices
    ok = abs(entry.guarantee - 0.7924) <= 1e-3 and n == 30 and entry.provenance["backend"] == "tensor" and elapsed < 1800
    report(3, ok, f"tree(3,3) ({n} vertices) interp via tensor network {entry.guarantee:.6f} "
                  f"(target 0.7924 +- 1e-3), {elapsed:.1f} s")


def test_criterion_04_eval_p4(report):
    t0 = time.perf_counter()
    value = edge_expectation_tn(tree_subgraph(TreeSpec(3, 4)), builtin_table(3, 4).angles)
    elapsed = time.perf_counter() - t0
    ok = abs(value - 0.8169) <= 1e-3 and elapsed < 60
    report(4, ok, f"tree(3,4) at embedded angles via tensor network {value:.6f} (target 0.8169 +- 1e-3), {elapsed:.2f} s")


def test_criterion_05_oracle_equivalence(report):
    t0 = time.perf_counter()
    worst_edge = worst_total = 0.0
    graphs = 0
    rng = np.random.default_rng(2024)
    for k in range(104):
        n = (8, 10, 12, 14)[k % 4]
        g = random_regular(n, 3, seed=k)
        graphs += 1
        for p in (1, 2):
            a = QaoaAngles.from_vector(rng.uniform(-math.pi / 2, math.pi / 2, 2 * p))
            full = simulate_expectation(g, a)
            for idx, e in enumerate(g.edges):
                tn_value = edge_expectation_tn(edge_lightcone(g, e, p), a)
                worst_edge = max(worst_edge, abs(tn_value - full.per_edge[idx]))
            rep = Evaluator(shortcut=False).evaluate(g, a)
            worst_total = max(worst_total, abs(rep.total_expectation - full.total))
    elapsed = time.perf_counter() - t0
    ok = graphs >= 100 and worst_edge <= 1e-8 and worst_total <= 1e-8 and elapsed < 600
    report(5, ok, f"{graphs} random cubic graphs N<=14, p in (1,2): max per-edge |tensor - statevector| "
                  f"{worst_edge:.1e}, max |lightcone total - full statevector| {worst_total:.1e} (<= 1e-8), {elapsed:.1f} s")


def test_criterion_06_conjecture_sweep(report):
    t0 = time.perf_counter()
    corpus = load_cubic_corpus(max_n=14)
    ev = Evaluator()
    reps = {p: verify_conjecture(corpus, 3, p, ensemble_id="cubic<=14", evaluator=ev) for p in (1, 2)}
    # the stored guarantees are rounded to 4 digits; p=1 sits 5e-5 above the reachable tree optimum
    stored = {p: verify_conjecture(corpus, 3, p, evaluator=ev, threshold="stored") for p in (1, 2)}
    elapsed = time.perf_counter() - t0
    by_id = dict(corpus)
    worst = by_id[reps[2].argmin]
    ok = (
        len(corpus) == 621
        and reps[1].ok
        and reps[2].ok
        and abs(reps[2].min_ratio - 0.7559) <= 1e-3
        and worst.num_vertices == 14
        and girth(worst) == 6
        and is_bipartite(worst)
        and elapsed < 1800
    )
    report(6, ok, f"{len(corpus)} cubic graphs: p=1 min {reps[1].min_ratio:.6f} "
                  f"(tree bound {reps[1].threshold:.6f}) violations {len(reps[1].violations)}; "
                  f"p=2 min {reps[2].min_ratio:.6f} (tree bound {reps[2].threshold:.6f}) violations {len(reps[2].violations)}, "
                  f"argmin N={worst.num_vertices} girth={girth(worst)} bipartite={is_bipartite(worst)}; "
                  f"against the rounded stored guarantees {stored[1].threshold}/{stored[2].threshold} the counts "
                  f"would be {len(stored[1].violations)}/{len(stored[2].violations)}, {elapsed:.1f} s")


def test_criterion_07_petersen_advantage(report):
    t0 = time.perf_counter()
    angles = builtin_table(3, 2).angles
    ev = Evaluator()
    assert _is_petersen(petersen_graph())
    lines, others_ok, pet = [], True, None
    for k, (gid, g) in enumerate(load_cubic_corpus(max_n=10)):
        f = ev.evaluate(g, angles).total_expectation
        emb = gw_solve(g, seed=k)
        res = gw_round(emb, g, n_samples=100, seed=1000 + k)
        sigma = res.sample_stderr() if len(set(res.cut_samples)) > 1 else 0.0
        exact = gw_expected_cut(emb, g)
        if _is_petersen(g):
            pet = (gid, f, res.average_cut, sigma, exact)
        elif f > res.average_cut + 3 * sigma:
            others_ok = False
            lines.append(f"{gid} B={f / res.average_cut:.4f}")
    elapsed = time.perf_counter() - t0
    gid, f, avg, sigma, exact = pet
    b_sample = performance_ratio(f, avg)
    b_exact = performance_ratio(f, exact)
    pet_ok = f > avg - 3 * sigma and b_exact > 1
    ok = pet_ok and others_ok and elapsed < 600
    report(7, ok, f"Petersen F_2 {f:.4f} vs GW(100) {avg:.3f} +- {sigma:.3f}: B_2 {b_sample:.4f} "
                  f"(F_2 above GW - 3 sigma), infinite-sample B_2 {b_exact:.5f} > 1; other 26 graphs N<=10 "
                  f"B_2 <= 1 within 3 sigma: {others_ok} {lines}, {elapsed:.1f} s")


def _is_petersen(g: Graph) -> bool:
    # the only cubic graph on 10 vertices with girth 5
    return g.num_vertices == 10 and girth(g) == 5


def test_criterion_08_warm_start(report):
    t0 = time.perf_counter()
    fixed = builtin_table(3, 1).angles
    corpus = load_cubic_corpus(max_n=10)
    gaps, reached = [], 0
    for gid, g in corpus:
        rec = warm_start_compare(g, 1, fixed, OptimizerConfig(), multistart_budget=20, seed=0,
                                 cmax=maxcut_exact(g).value)
        gaps.append(rec.global_value - rec.fixed_value)
        reached += rec.reached_global
    elapsed = time.perf_counter() - t0
    mean_gap = float(np.mean(gaps))
    ok = reached == len(corpus) and mean_gap <= 0.005 and elapsed < 1200
    report(8, ok, f"p=1 warm start reached the multistart optimum on {reached}/{len(corpus)} cubic graphs N<=10; "
                  f"mean ratio gap fixed->optimal {mean_gap:.5f} (<= 0.005), {elapsed:.1f} s")


def test_criterion_09_degree_monotonicity(report):
    t0 = time.perf_counter()
    values = {d: optimize_tree_angles(d, 1, "both", n_starts=20, seed=0).guarantee for d in (3, 4, 5)}
    elapsed = time.perf_counter() - t0
    ok = values[3] > values[4] > values[5] and elapsed < 300
    report(9, ok, "optimized p=1 tree values " + ", ".join(f"g({d})={v:.6f}" for d, v in values.items())
                  + f", strictly decreasing: {ok}, {elapsed:.1f} s")


def test_criterion_10_classical_baselines(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(10)
    suite = []
    for k in range(60):
        n = int(rng.integers(3, 13))
        density = float(rng.uniform(0.2, 0.8))
        edges = [(i, j) for j in range(n) for i in range(j) if rng.random() < density]
        suite.append(Graph(n, tuple(edges)))
    exact_ok = all(maxcut_exact(g).value == maxcut_naive(g) for g in suite)

    cubic = load_cubic_corpus(max_n=12)
    cubic += load_cubic_corpus(max_n=14, min_n=14)[::10]
    cubic += load_cubic_corpus(max_n=16, min_n=16)[::40]
    relax_ok, slack = True, math.inf
    for k, g in enumerate(suite + [g for _, g in cubic]):
        if not g.edges:
            continue
        emb = gw_solve(g, seed=k)
        slack = min(slack, emb.relaxation_value - maxcut_exact(g).value)
        relax_ok &= emb.relaxation_value >= maxcut_exact(g).value - 1e-6
    worst_ratio = math.inf
    for k, (gid, g) in enumerate(cubic):
        emb = gw_solve(g, seed=k)
        res = gw_round(emb, g, n_samples=1000, seed=k)
        worst_ratio = min(worst_ratio, res.average_cut / emb.relaxation_value)
    elapsed = time.perf_counter() - t0
    ok = exact_ok and relax_ok and worst_ratio >= 0.87 and elapsed < 900
    report(10, ok, f"exact == naive on {len(suite)} random graphs N<=12: {exact_ok}; relaxation >= MaxCut on "
                   f"{len(suite) + len(cubic)} graphs (min slack {slack:.1e}, floor -1e-6): {relax_ok}; GW 1000-sample "
                   f"average / relaxation min {worst_ratio:.4f} (>= 0.87) over {len(cubic)} cubic graphs N<=16, "
                   f"{elapsed:.1f} s")


def test_criterion_11_structural_constants(report):
    n = tree_subgraph(TreeSpec(3, 11)).graph.num_vertices
    g11 = guarantee(3, 11)
    ok = n == 8190 and g11 == 0.8828 and g11 > GW_RATIO == 0.8786
    report(11, ok, f"tree_subgraph(3,11) has {n} vertices (8190); guarantee(3,11) = {g11} > {GW_RATIO}")
