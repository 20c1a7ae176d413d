import math

import numpy as np
import pytest

from fixedangle.angles import builtin_table
from fixedangle.errors import CapacityError, DataError, DivergenceError
from fixedangle.graphs import heawood_graph
from fixedangle.optimize import (
    GraphObjective,
    ObjectiveError,
    OptimizerConfig,
    TreeObjective,
    angle_distance,
    canonical_angles,
    finite_diff_gradient,
    interp_extend,
    multistart,
    optimize_tree_angles,
    random_starts,
    rmsprop_batch,
    rmsprop_maximize,
    warm_start_compare,
    write_trace_csv,
)
from fixedangle.statevec import QaoaAngles


class Quadratic:
    def __init__(self, center):
        self.c = np.asarray(center, dtype=float)

    def batch(self, pts):
        return -np.sum((np.atleast_2d(pts) - self.c) ** 2, axis=1)

    def __call__(self, x):
        return float(self.batch(np.asarray(x)[None, :])[0])


def test_finite_differences():
    f = lambda x: float(np.sum(np.asarray(x) ** 2))
    assert np.allclose(finite_diff_gradient(f, [0.0, 0.0]), 0.0)
    assert np.allclose(finite_diff_gradient(f, [1.0, 2.0]), [2.0, 4.0], atol=1e-8)
    cubic = lambda x: float(x[0] ** 3 + x[0] * x[1] ** 2)
    h = 1e-3
    g = finite_diff_gradient(cubic, [0.7, -1.2], h)
    exact = np.array([3 * 0.49 + 1.44, 2 * 0.7 * -1.2])
    assert np.all(np.abs(g - exact) <= 2 * h * h)
    with pytest.raises(DataError):
        finite_diff_gradient(f, [1.0], h=0)


def test_finite_difference_failure_names_coordinate():
    def f(x):
        if x[1] > 0.5:
            raise RuntimeError("boom")
        return 0.0

    with pytest.raises(ObjectiveError) as err:
        finite_diff_gradient(f, [0.0, 0.5])
    assert err.value.coordinate == 1


def test_tree_gradient_vanishes_at_table_optimum():
    obj = TreeObjective(3, 1)
    assert obj.backend == "statevector"
    exact = [math.atan(1 / math.sqrt(2)), math.pi / 8]
    assert np.linalg.norm(finite_diff_gradient(obj, exact)) <= 1e-8
    # the printed angles are rounded to three digits, which alone leaves a 1.1e-3 gradient
    assert np.linalg.norm(finite_diff_gradient(obj, [0.616, 0.393])) <= 1.2e-3


def test_rmsprop_on_quadratic():
    res = rmsprop_maximize(Quadratic([0.3, -0.2, 1.1, 0.4]), [1.0, 1.0, 0.0, 0.0])
    assert np.allclose(res.angles.to_vector(), [0.3, -0.2, 1.1, 0.4], atol=1e-4)
    assert res.value >= Quadratic([0.3, -0.2, 1.1, 0.4])([1.0, 1.0, 0.0, 0.0])


def test_config_validation():
    with pytest.raises(DataError):
        OptimizerConfig(decay=1.0)
    with pytest.raises(DataError):
        OptimizerConfig(learning_rate=0.0)


def test_divergence_reports_last_good():
    def f(x):
        return 0.0 if x[0] < 0.05 else float("nan")

    with pytest.raises(DivergenceError) as err:
        rmsprop_maximize(lambda x: x[0] + f(x), [0.0, 0.0])
    assert err.value.last_good is not None


def test_rmsprop_tree_p1_from_default_start():
    res = rmsprop_maximize(TreeObjective(3, 1), [0.5, 0.5])
    assert res.value == pytest.approx(0.6925, abs=1e-3)
    assert res.converged
    obj = TreeObjective(3, 1)
    assert res.value == pytest.approx(obj(res.angles.to_vector()), abs=1e-9)
    assert np.linalg.norm(finite_diff_gradient(obj, res.angles.to_vector())) <= 10 * OptimizerConfig().grad_tol


def test_multistart_determinism_and_single_start():
    obj = TreeObjective(3, 1)
    a = multistart(obj, 1, 8, seed=5, record_trace=True)
    b = multistart(obj, 1, 8, seed=5, record_trace=True)
    assert [r.trace for r in a.runs] == [r.trace for r in b.runs]
    one = multistart(obj, 1, 1, seed=9)
    direct = rmsprop_maximize(obj, random_starts(1, 1, 9)[0])
    assert one.value == direct.value and one.angles == direct.angles
    assert a.value >= max(r.value for r in a.runs) - 1e-15
    with pytest.raises(DataError):
        multistart(obj, 1, 0, seed=0)


def test_starts_in_box():
    s = random_starts(3, 500, 1)
    assert np.all((s[:, :3] > 0) & (s[:, :3] < math.pi))
    assert np.all((s[:, 3:] > 0) & (s[:, 3:] < math.pi / 2))


def test_batched_runs_match_individual_runs():
    obj = TreeObjective(3, 1)
    starts = random_starts(1, 4, 2)
    together = rmsprop_batch(obj, starts, record_trace=False)
    for k in range(4):
        alone = rmsprop_maximize(obj, starts[k], record_trace=False)
        assert together[k].value == pytest.approx(alone.value, abs=1e-14)
        assert together[k].iterations == alone.iterations


def test_interp_extend():
    assert interp_extend(QaoaAngles((0.7,), (0.2,))) == QaoaAngles((0.7, 0.7), (0.2, 0.2))
    assert np.allclose(interp_extend(QaoaAngles((0.4, 0.8), (0.1, 0.1))).gamma, [0.4, 0.6, 0.8])
    out = interp_extend(QaoaAngles((0.488, 0.898), (0.555, 0.293)))
    assert np.allclose(out.gamma, [0.488, 0.693, 0.898])
    assert out.p == 3


def test_symmetry_reduction():
    a = QaoaAngles((0.616,), (0.393,))
    flipped = QaoaAngles((-0.616,), (-0.393 + math.pi / 2,))
    assert angle_distance(a, flipped) < 1e-12
    obj = TreeObjective(3, 1)
    assert obj(a.to_vector()) == pytest.approx(obj(flipped.to_vector()), abs=1e-12)
    assert canonical_angles(QaoaAngles((0.3,), (0.393 + math.pi,))).beta[0] == pytest.approx(0.393)


def test_optimize_tree_entries():
    e = optimize_tree_angles(3, 1, "multistart", n_starts=50, seed=7, date="2026-01-01")
    assert e.guarantee == pytest.approx(0.6925, abs=1e-3)
    assert angle_distance(e.angles, QaoaAngles((0.616,), (0.393,))) < 2e-3
    assert e.provenance["kind"] == "computed" and e.provenance["date"] == "2026-01-01"
    d4 = optimize_tree_angles(4, 1, "multistart", n_starts=20)
    assert d4.guarantee < 0.6925
    with pytest.raises(CapacityError):
        optimize_tree_angles(3, 99)
    with pytest.raises(DataError):
        optimize_tree_angles(3, 1, "annealing")


def test_tree_values_non_decreasing():
    values = [optimize_tree_angles(3, p).guarantee for p in (1, 2, 3)]
    assert values[0] < values[1] < values[2]


def test_objectives_match_backends():
    pts = np.random.default_rng(0).uniform(0, 1.2, size=(5, 4))
    sv = TreeObjective(3, 2, backend="statevector").batch(pts)
    tn = TreeObjective(3, 2, backend="tensor").batch(pts)
    assert np.allclose(sv, tn, atol=1e-10)
    with pytest.raises(DataError):
        TreeObjective(3, 2).batch(np.zeros((1, 3)))


def test_warm_start_saturated_instance():
    fixed = builtin_table(3, 1).angles
    rec = warm_start_compare(heawood_graph(), 1, fixed, multistart_budget=5, cmax=21)
    assert rec.reached_global
    assert rec.global_value - rec.fixed_value < 1e-3
    assert rec.euclid_distance < 5e-3
    obj = GraphObjective(heawood_graph(), 1, cmax=21)
    assert rec.fixed_value == pytest.approx(obj(fixed.to_vector()))


def test_trace_csv(tmp_path):
    res = rmsprop_maximize(TreeObjective(3, 1), [0.5, 0.5])
    path = tmp_path / "trace.csv"
    write_trace_csv(res, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "iteration,value"
    assert len(lines) == len(res.trace) + 1
    res.trace = None
    with pytest.raises(DataError):
        write_trace_csv(res, path)
