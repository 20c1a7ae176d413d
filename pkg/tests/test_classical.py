import math

import numpy as np
import pytest

from fixedangle.classical import (
    GwResult,
    approximation_ratio,
    default_rank,
    goemans_williamson,
    gw_expected_cut,
    gw_round,
    gw_solve,
    maxcut_exact,
    maxcut_naive,
    performance_ratio,
)
from fixedangle.errors import CapacityError, DataError
from fixedangle.graphs import (
    Graph,
    complete_graph,
    cycle_graph,
    heawood_graph,
    load_cubic_corpus,
    petersen_graph,
    random_regular,
)


def random_graph(n, density, seed):
    rng = np.random.default_rng(seed)
    edges = [(i, j) for j in range(n) for i in range(j) if rng.random() < density]
    return Graph(n, tuple(edges))


def sdp_value(g: Graph) -> float:
    """MaxCut relaxation solved as a genuine SDP (independent oracle)."""
    cp = pytest.importorskip("cvxpy")
    n = g.num_vertices
    x = cp.Variable((n, n), PSD=True)
    obj = sum((1 - x[i, j]) / 2 for i, j in g.edges)
    prob = cp.Problem(cp.Maximize(obj), [cp.diag(x) == 1])
    prob.solve(solver="SCS", eps=1e-7)
    return float(prob.value)


def test_known_maxcuts():
    assert maxcut_exact(petersen_graph()).value == 12
    assert maxcut_exact(complete_graph(4)).value == 4
    assert maxcut_exact(heawood_graph()).value == 21
    assert maxcut_exact(cycle_graph(8)).value == 8
    assert maxcut_exact(cycle_graph(7)).value == 6
    assert maxcut_exact(Graph(3, ())).value == 0


@pytest.mark.parametrize("seed", range(30))
def test_exact_matches_naive(seed):
    g = random_graph(4 + seed % 9, 0.45, seed)
    res = maxcut_exact(g)
    assert res.value == maxcut_naive(g)
    assert g.cut_size(res.witness) == res.value
    assert not res.witness & 1
    if g.num_edges:
        assert math.ceil(g.num_edges / 2) <= res.value <= g.num_edges


def test_exact_cap():
    with pytest.raises(CapacityError, match="cut fraction"):
        maxcut_exact(random_regular(30, 3, 0))
    with pytest.raises(CapacityError):
        maxcut_exact(random_regular(12, 3, 0), cap=10)


def test_gw_small_relaxations():
    assert gw_solve(complete_graph(2)).relaxation_value == pytest.approx(1.0, abs=1e-6)
    assert gw_solve(complete_graph(3)).relaxation_value == pytest.approx(2.25, abs=1e-3)
    for g in (heawood_graph(), cycle_graph(10)):
        assert gw_solve(g).relaxation_value == pytest.approx(g.num_edges, abs=1e-3)
    with pytest.raises(DataError):
        gw_solve(complete_graph(3), rank=1)
    assert default_rank(10) == 5 and default_rank(2) == 3


@pytest.mark.parametrize("seed", range(6))
def test_gw_matches_sdp_oracle(seed):
    g = random_regular(12, 3, seed) if seed % 2 else random_graph(10, 0.4, seed)
    res = gw_solve(g, seed=seed)
    assert res.relaxation_value == pytest.approx(sdp_value(g), abs=1e-3)
    assert res.relaxation_value >= maxcut_exact(g).value - 1e-6
    assert np.allclose(np.linalg.norm(res.embedding, axis=1), 1.0, atol=1e-9)


def test_petersen_relaxation_is_eigenvalue_bound():
    res = gw_solve(petersen_graph())
    assert res.relaxation_value == pytest.approx(12.5, abs=1e-6)
    assert gw_expected_cut(res, petersen_graph()) == pytest.approx(15 * math.acos(-2 / 3) / math.pi, abs=1e-6)


def test_rounding():
    k2 = complete_graph(2)
    res = gw_round(gw_solve(k2), k2, n_samples=50)
    assert res.average_cut == 1.0 and set(res.cut_samples) == {1}
    k3 = complete_graph(3)
    emb = np.array([[math.cos(t), math.sin(t)] for t in (0, 2 * math.pi / 3, 4 * math.pi / 3)])
    res = gw_round(GwResult(2.25, emb), k3, n_samples=20000, seed=3)
    assert res.average_cut == pytest.approx(2.0, abs=4 * res.sample_stderr())
    assert gw_expected_cut(res, k3) == pytest.approx(2.0, abs=1e-12)
    assert res.average_cut == pytest.approx(np.mean(res.cut_samples))
    with pytest.raises(DataError):
        gw_round(res, k3, n_samples=0)


def test_gw_determinism_and_bounds():
    g = random_regular(16, 3, 2)
    a = goemans_williamson(g, n_samples=100, seed=4)
    b = goemans_williamson(g, n_samples=100, seed=4)
    assert a.cut_samples == b.cut_samples
    assert a.relaxation_value >= max(a.cut_samples) - 1e-6


@pytest.mark.slow
def test_gw_average_bound_on_cubic_graphs():
    corpus = load_cubic_corpus(max_n=12, min_n=8)
    for gid, g in corpus[::4]:
        res = goemans_williamson(g, n_samples=1000, seed=1)
        assert res.average_cut >= 0.87 * res.relaxation_value, gid


def test_ratios():
    assert approximation_ratio(7.0, 7) == 1.0
    assert performance_ratio(3.3, 1.1) * 1.1 == pytest.approx(3.3, abs=0)
    for f, avg in [(10.5, 3.0), (1.0, 7.0), (12.25, 0.5)]:
        assert performance_ratio(f, avg) * avg == f
    with pytest.raises(ZeroDivisionError):
        approximation_ratio(1.0, 0)
    with pytest.raises(ZeroDivisionError):
        performance_ratio(1.0, 0.0)
