import numpy as np
import pytest
from hypothesis import given, strategies as st

from stabilitylab import problem as pc
from stabilitylab.errors import BlockOutOfRange, ContinuousSpace, UnsupportedLaw, ValidationError
from stabilitylab.metric import SolutionCloud
from stabilitylab.problem import InputVector, ProblemInstance, WindowRule
from stabilitylab.stats import ks_two_sample

SMALL = [dict(family="TSP", n=7), dict(family="MST", n=6), dict(family="WeightedGraph", n=7),
         dict(family="WeightedGraph", n=8, graph_kind="matching"), dict(family="WeightedGraph", n=6, graph_kind="mst"),
         dict(family="Assignment", n=5), dict(family="SK", n=8), dict(family="EA", n=6, shape=(2, 3)),
         dict(family="BRW", n=5, progeny=(0.2, 0.3, 0.5))]


def sk2(x):
    inst = ProblemInstance("SK", 2)
    return inst, InputVector(((0, 1),), np.array([x]))


def test_sk_two_spins():
    inst, x = sk2(0.5)
    sol = pc.solve(inst, x)
    assert sol.encoding == (1, 1) and sol.objective_value == -0.5
    assert len(pc.near_optimal_set(inst, x, 0.7).members) == 1
    assert len(pc.near_optimal_set(inst, x, 1.0).members) == 2


def test_assignment_and_triangle():
    inst = ProblemInstance("Assignment", 2)
    x = InputVector(tuple(pc.index_set(inst)), np.array([1.0, 2.0, 2.0, 1.0]))
    sol = pc.solve(inst, x)
    assert sol.encoding == (0, 1) and sol.objective_value == 2.0
    tri = ProblemInstance("TSP", 3, rng_seed=4)
    x = pc.sample_inputs(tri)
    assert len(pc.perturbed_optimizers(tri, x, pc.perturbation_scheme(tri))) == 1


def test_index_sets_and_laws():
    assert pc.index_set(ProblemInstance("SK", 3)) == [(0, 1), (0, 2), (1, 2)]
    x = pc.sample_inputs(ProblemInstance("Assignment", 3, rng_seed=9))
    y = pc.sample_inputs(ProblemInstance("Assignment", 3, rng_seed=9))
    assert np.array_equal(x.values, y.values)
    big = pc.sample_inputs(ProblemInstance("Assignment", 316, law="exponential", rng_seed=1))
    assert abs(big.values.mean() - 1) < 0.02
    with pytest.raises(UnsupportedLaw):
        ProblemInstance("SK", 4, law="cauchy").input_law


def test_validation():
    with pytest.raises(ValidationError):
        ProblemInstance("TSP", 16)
    with pytest.raises(ValidationError):
        ProblemInstance("EA", 0, shape=(5, 5))
    with pytest.raises(ValidationError):
        ProblemInstance("Knapsack", 4)


def test_perturb_inputs():
    inst = ProblemInstance("SK", 5, rng_seed=1)
    x = pc.sample_inputs(inst)
    fresh = pc.draw_values(inst, np.random.default_rng(2))
    scheme = pc.perturbation_scheme(inst)
    y = pc.perturb_inputs(x, scheme, 3, fresh)
    assert np.flatnonzero(y.values != x.values).tolist() == [3]
    whole = pc.PerturbationScheme((tuple(range(len(x))),))
    assert np.array_equal(pc.perturb_inputs(x, whole, 0, fresh).values, fresh.values)
    y2 = pc.perturb_inputs(x, scheme, 7, fresh)
    outside = [i for i in range(len(x)) if i not in (3, 7)]
    assert np.array_equal(y.values[outside], y2.values[outside])
    with pytest.raises(BlockOutOfRange):
        pc.perturb_inputs(x, scheme, scheme.m, fresh)


@pytest.mark.parametrize("family,variant", [("SK", "row_block"), ("Assignment", "row_block"),
                                            ("WeightedGraph", "row_block"), ("Wigner", "row_block"),
                                            ("Wishart", "row_block"), ("EA", "single_block")])
def test_blocks_cover_index_set(family, variant):
    inst = ProblemInstance(family, 5, shape=(2, 3))
    scheme = pc.perturbation_scheme(inst, variant)
    scheme.validate(inst.k)


def test_block_sizes():
    wig = ProblemInstance("Wigner", 6)
    assert all(len(b) == 6 for b in pc.perturbation_scheme(wig, "row_block").blocks)
    wis = ProblemInstance("Wishart", 4, alpha=2)
    assert [len(b) for b in pc.perturbation_scheme(wis, "row_block").blocks] == [8] * 4


def test_perturbation_preserves_law():
    inst = ProblemInstance("Assignment", 3, law="exponential")
    scheme = pc.perturbation_scheme(inst)
    a, b = [], []
    for r in range(10_000):
        x = pc.draw_values(inst, np.random.default_rng([r, 0]))
        fresh = pc.draw_values(inst, np.random.default_rng([r, 1]))
        a.append(x.values[4])
        b.append(pc.perturb_inputs(x, scheme, 4, fresh).values[4])
    assert ks_two_sample(a, b)[1] > 0.001


@pytest.mark.parametrize("kw", SMALL, ids=lambda kw: kw["family"] + "-" + str(kw["n"]))
def test_solver_beats_every_enumerated_solution(kw):
    inst = ProblemInstance(rng_seed=11, **kw)
    x = pc.sample_inputs(inst)
    sol = pc.solve(inst, x)
    assert pc.objective(inst, x, sol.encoding) == pytest.approx(sol.objective_value, rel=1e-9)
    everything = pc.near_optimal_set(inst, x, np.inf)
    assert min(m.objective_value for m in everything.members) >= sol.objective_value - 1e-9
    assert pc.near_optimal_set(inst, x, 0.0).members[0].encoding == sol.encoding


@pytest.mark.parametrize("kw", SMALL[:7], ids=lambda kw: kw["family"] + "-" + str(kw["n"]))
def test_near_optimal_sets_nest(kw):
    inst = ProblemInstance(rng_seed=3, **kw)
    x = pc.sample_inputs(inst)
    small = {m.encoding for m in pc.near_optimal_set(inst, x, 0.1).members}
    large = {m.encoding for m in pc.near_optimal_set(inst, x, 0.4).members}
    assert small <= large


def test_perturbed_optimizer_is_optimal_for_its_input():
    inst = ProblemInstance("SK", 7, rng_seed=5)
    x = pc.sample_inputs(inst)
    scheme = pc.perturbation_scheme(inst)
    fresh = pc.draw_values(inst, np.random.default_rng(8))
    xl = pc.perturb_inputs(x, scheme, 2, fresh)
    assert pc.solve(inst, xl).encoding == pc.near_optimal_set(inst, xl, 0.0).members[0].encoding


def test_continuous_space():
    inst = ProblemInstance("Wigner", 4)
    with pytest.raises(ContinuousSpace):
        pc.near_optimal_set(inst, pc.sample_inputs(inst), 0.1)


def test_window_lengths():
    assert pc.window_length(WindowRule("TSP", c=1), 100) == pytest.approx(0.1)
    assert pc.window_length(WindowRule("Assignment"), 50) == pytest.approx(0.02)
    assert pc.window_length(WindowRule("SK", "row_block"), 49) == pytest.approx(7)


@given(st.sampled_from(pc.FAMILIES), st.sampled_from(pc.VARIANTS), st.floats(0.01, 10), st.integers(2, 10**6))
def test_window_positive(family, variant, c, n):
    assert pc.window_length(WindowRule(family, variant, c), n) > 0


def test_subsample_and_identical_fresh():
    inst = ProblemInstance("SK", 10, rng_seed=2)
    x = pc.sample_inputs(inst)
    scheme = pc.perturbation_scheme(inst)
    run = pc.perturbed_run(inst, x, scheme, block_subsample=12, seed=4)
    assert len(run.optimizers) == 12
    same = pc.perturbed_run(inst, x, scheme, fresh=lambda l: x)
    assert len(same.cloud) == 1 and np.all(same.excess == 0)
    assert pc.stability_statistic(inst, x, scheme, 0.3, run=same).ball_count == 1


def test_brw_subsample_hits_ancestral_edges():
    inst = ProblemInstance("BRW", 10, rng_seed=6)
    x = pc.sample_inputs(inst)
    scheme = pc.perturbation_scheme(inst)
    run = pc.perturbed_run(inst, x, scheme, block_subsample=64, seed=1)
    fam = pc.get_family("BRW")
    anc = {v - 1 for v in fam.tree(inst).ancestors(run.optimum.encoding)}
    assert len(run.blocks) == 64 and len(anc & set(run.blocks)) >= 8


def test_statistic_on_fixture_clouds():
    from stabilitylab.metric import partial_cover_count
    cluster = SolutionCloud.from_line([0.0, 3.0], counts=[9, 1])
    assert partial_cover_count(cluster, 0.1, 0.1).ball_count == 1
    assert partial_cover_count(SolutionCloud.from_line([0, 1, 2, 3]), 1, 0).ball_count == 2
