"""The ten acceptance criteria, one test each; conftest prints a PASS/FAIL summary."""

import math
import time
from fractions import Fraction

import pytest

from conftest import bubble_graph, eye_graph, fat_triangle_graph, random_graph_suite
from loopvertex.graphs import LabeledMultigraph, count_spanning_trees_matrix_tree, enumerate_spanning_trees
from loopvertex.intermediate import collapsed_census, iter_phi4_graphs
from loopvertex.parametric import AmplitudeConfig, amplitude
from loopvertex.resummation import (
    lve_tree_contributions,
    mass_conservation,
    relative_class_weights,
    scaled_combinatoric_factors,
    sigma_wick_census,
)
from loopvertex.series import SqrtLambdaSeries
from loopvertex.weights import tree_weight
from loopvertex.zerodim import (
    IdentityCheckSample,
    intermediate_field_identity_check,
    loop_vertex_contributions,
    z_from_feynman,
    z_from_loop_vertices,
)

F = Fraction


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


@pytest.fixture(scope="module")
def suite():
    return random_graph_suite(200)


def test_ac01_fat_triangle_tree_weights():
    with Timer() as t:
        g = fat_triangle_graph()
        w = {tr.edge_ids: tree_weight(g, tr) for tr in enumerate_spanning_trees(g)}
    assert w.pop((1, 2)) == F(1, 6)
    assert list(w.values()) == [F(5, 24)] * 4
    assert F(1, 6) + sum(w.values()) == 1
    assert t.elapsed < 1


def test_ac02_eye_tree_weights():
    with Timer() as t:
        g = eye_graph()
        w = {frozenset(tr.edge_ids): tree_weight(g, tr) for tr in enumerate_spanning_trees(g)}
    small = [{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}]
    for s in small:
        assert w.pop(frozenset(s)) == F(1, 15)
    assert list(w.values()) == [F(11, 120)] * 8
    assert 4 * F(1, 15) + sum(w.values()) == 1
    assert t.elapsed < 1


def test_ac03_partition_of_unity_suite(suite):
    assert len(suite) == 200
    assert max(len(g.vertices) for g in suite) <= 6 and max(len(g.edges) for g in suite) <= 8
    assert any(e.is_loop for g in suite for e in g.edges)
    assert any(len({frozenset((e.u, e.v)) for e in g.edges if not e.is_loop})
               < sum(not e.is_loop for e in g.edges) for g in suite)
    with Timer() as t:
        for g in suite:
            assert sum(tree_weight(g, tr) for tr in enumerate_spanning_trees(g)) == 1
    assert t.elapsed < 60


def test_ac04_spanning_tree_counts(suite):
    for g in suite:
        assert len(enumerate_spanning_trees(g)) == count_spanning_trees_matrix_tree(g)
    assert len(enumerate_spanning_trees(fat_triangle_graph())) == 5
    assert len(enumerate_spanning_trees(eye_graph())) == 12


def test_ac05_loop_vertex_series():
    with Timer() as t:
        contrib = loop_vertex_contributions(3)
        z = z_from_loop_vertices(3)
    rows = {
        1: [-2, 24, -640],
        2: [-1, 22, F(-320, 3) - 624],
        3: [0, 6, -300],
        4: [0, F(1, 2), F(-80, 3) - 30],
        5: [0, 0, -5],
        6: [0, 0, F(-1, 6)],
    }
    for k, row in rows.items():
        assert contrib[k] == SqrtLambdaSeries.from_lambda([0, *row], 3), k
    assert z.lambda_coefficients() == [1, -3, F(105, 2), F(-10395, 6)]
    assert t.elapsed < 5


def test_ac06_two_sided_equality():
    assert [sum(1 for _ in iter_phi4_graphs(n)) for n in (1, 2, 3)] == [3, 105, 10395]
    assert z_from_feynman(3) == z_from_loop_vertices(3)


def test_ac07_sigma_wick_example():
    c = sigma_wick_census([1, 2, 3])
    assert sorted(c.classes.values()) == [3, 6, 6]
    weights = relative_class_weights(c)
    assert sorted(weights.values()) == [F(1, 5), F(2, 5), F(2, 5)]
    factors = scaled_combinatoric_factors(c, 960)
    assert sorted(factors.values()) == [192, 384, 384]
    with Timer() as t:
        cen = collapsed_census(3)
    assert cen.total == 280665
    for key, factor in factors.items():
        assert cen.classes[key].mass == factor
    assert t.elapsed < 120


def test_ac08_lve_mass_conservation():
    for b in mass_conservation(3):
        assert b.before == b.after == b.labeled_graphs
    total = SqrtLambdaSeries.zero(6)
    for tc in lve_tree_contributions(3):
        total = total + tc.per_order
    assert total.lambda_coefficients() == [c - (n == 0) for n, c in
                                           enumerate(z_from_feynman(3).lambda_coefficients())]


def test_ac09_parametric_amplitudes():
    graphs = [
        bubble_graph(),
        fat_triangle_graph(),
        eye_graph(),
        LabeledMultigraph.from_pairs([1, 2, 3], [(1, 2), (2, 3), (3, 1)]),
        LabeledMultigraph.from_pairs([1, 2], [(1, 2), (1, 1), (2, 2)]),
    ]
    with Timer() as t:
        for g in graphs:
            for m in (1.0, 1.3):
                r = amplitude(g, AmplitudeConfig(0.0, mass=m, budget=2**16))
                assert abs(r.value - m ** (-2 * len(g.edges))) <= 3 * r.error + 1e-12
        for dim in (0.0, 0.5, 1.0, 1.5):
            r = amplitude(bubble_graph(), AmplitudeConfig(dim, mass=1.0, budget=2**16))
            assert abs(r.value - math.gamma(2 - dim / 2)) <= 3 * r.error, dim
    assert t.elapsed < 30


@pytest.mark.parametrize("phi, lam", [(0, 0.1), (1, 0.01), (0.5, 0.05)])
def test_ac10_intermediate_field_identity(phi, lam):
    assert intermediate_field_identity_check(IdentityCheckSample(phi, lam)).residual < 1e-8
