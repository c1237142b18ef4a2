import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from clusterexp import (ALL_KINDS, DOB, FP, IMPDOB, KP, CapExceeded, PlanarRootedTree,
                        TruncationError, build_graph, condition_holds, iterate_via_trees,
                        labeled_rooted_tree_count, planar_multiplicity, planar_trees, t_map,
                        tree_bound_sum, tree_layer, tree_remainder, ursell_coefficient,
                        vertex_function)
from clusterexp.trees import planar_shape
from clusterexp.ursell import RootedLabeledTree
from conftest import graphs

LEAF = PlanarRootedTree()


def complete_polymers(n):
    return build_graph(n, list(itertools.combinations(range(n), 2)))


def test_vertex_function_examples(k2):
    for kind in ALL_KINDS:
        assert vertex_function(kind, k2, 0, ()) == 1
        assert vertex_function(kind, k2, 0, (1,)) == 1
    assert vertex_function(FP, k2, 0, (1, 1)) == 0
    assert vertex_function(KP, k2, 0, (1, 1)) == 1
    assert vertex_function(DOB, k2, 0, (1, 1)) == 0
    assert vertex_function(DOB, k2, 0, (0, 1)) == 1
    assert vertex_function(IMPDOB, k2, 0, (0, 1)) == 0
    assert vertex_function(FP, build_graph(2), 0, (1,)) == 0


def test_tree_bound_sum_examples(k2):
    for kind in ALL_KINDS:
        assert tree_bound_sum(kind, k2, (0,)) == 1
        assert tree_bound_sum(kind, k2, (0, 1)) == 1
    k3 = complete_polymers(3)
    assert tree_bound_sum(FP, k3, (0, 1, 2)) == 2
    with pytest.raises(CapExceeded):
        tree_bound_sum(FP, k3, (0,) * 9)


@pytest.mark.parametrize("n", range(2, 6))
def test_tree_bound_is_exact_on_complete_clusters(n):
    g = complete_polymers(n)
    seq = tuple(range(n))
    assert tree_bound_sum(FP, g, seq) == abs(ursell_coefficient(g, seq)) == math.factorial(n - 1)


def test_planar_multiplicity_examples():
    assert planar_multiplicity(LEAF) == 1
    assert planar_multiplicity(PlanarRootedTree((LEAF, LEAF))) == 1
    chain = PlanarRootedTree((PlanarRootedTree((LEAF,)),))
    assert planar_multiplicity(chain) == 2
    assert chain.depth == 2 and chain.n_vertices == 2


def test_labeled_counts():
    assert [labeled_rooted_tree_count(n) for n in range(1, 5)] == [1, 3, 16, 125]
    assert labeled_rooted_tree_count(0) == 1
    with pytest.raises(ValueError):
        labeled_rooted_tree_count(-1)


@pytest.mark.parametrize("n", range(0, 6))
def test_multiplicities_sum_to_labeled_count(n):
    expected = (n + 1) ** (n - 1) if n else 1
    assert sum(planar_multiplicity(t) for t in planar_trees(n)) == expected


def _planar_weight(t, x, depth=0):
    w = x[depth][len(t.children)]
    for c in t.children:
        w *= _planar_weight(c, x, depth + 1)
    return w


def _labeled_weight(par, n, x):
    kids = {v: [] for v in range(n + 1)}
    for v, p in par.items():
        kids[p].append(v)

    def walk(v, d):
        w = x[d][len(kids[v])]
        for c in kids[v]:
            w *= walk(c, d + 1)
        return w

    return walk(0, 0)


@pytest.mark.parametrize("n", range(1, 5))
def test_multiplicity_identity_with_generic_weights(n):
    # weights depending on generation and number of offspring, arbitrary rationals
    x = [[Fraction(3 * d + s + 2, 7 + d * s) for s in range(n + 1)] for d in range(n + 1)]
    planar = sum(planar_multiplicity(t) * _planar_weight(t, x) for t in planar_trees(n))
    labeled = sum(_labeled_weight(par, n, x) for par in oracles.rooted_trees(n))
    assert planar == labeled


@pytest.mark.parametrize("n", range(1, 6))
def test_label_ordered_drawing_hits_each_shape_beta_times(n):
    from clusterexp.ursell import all_labeled_trees
    counts = {}
    for t in all_labeled_trees(n + 1):
        s = planar_shape(t)
        counts[s] = counts.get(s, 0) + 1
    assert counts == {t: planar_multiplicity(t) for t in planar_trees(n)}


def test_iterate_examples(selfx):
    assert iterate_via_trees(FP, selfx, [0.5], 2, [0.5])[0] == pytest.approx(0.875, abs=1e-15)
    assert iterate_via_trees(FP, selfx, [0.5], 0, [0.3]).tolist() == [0.3]
    assert iterate_via_trees(KP, selfx, [0.2], 1, [0.0]).tolist() == [0.2]
    with pytest.raises(ValueError):
        iterate_via_trees(FP, selfx, [0.5], -1, [0.5])


def test_kp_truncation_is_reported(selfx):
    with pytest.raises(TruncationError):
        iterate_via_trees(KP, selfx, [0.3], 1, [5.0], s_max=3)


@given(graphs(max_n=4), st.data())
def test_tree_sums_equal_iterated_map(g, data):
    n = g.n_polymers
    rho = np.array(data.draw(st.lists(st.floats(0, 0.2), min_size=n, max_size=n)))
    mu = np.array(data.draw(st.lists(st.floats(0, 0.4), min_size=n, max_size=n)))
    kind = data.draw(st.sampled_from(ALL_KINDS))
    direct = mu
    for k in range(1, 4):
        direct = t_map(kind, g, rho, direct)
        via = iterate_via_trees(kind, g, rho, k, mu)
        assert via == pytest.approx(direct, rel=1e-12, abs=1e-300)


@given(graphs(max_n=4), st.data())
def test_layers_rebuild_iterates_from_zero(g, data):
    n = g.n_polymers
    rho = np.array(data.draw(st.lists(st.floats(0, 0.2), min_size=n, max_size=n)))
    kind = data.draw(st.sampled_from([FP, DOB, IMPDOB]))
    total = np.zeros(n)
    for depth in range(3):
        total = total + tree_layer(kind, g, rho, depth)
        assert rho * total == pytest.approx(iterate_via_trees(kind, g, rho, depth + 1,
                                                              np.zeros(n)), rel=1e-12)


@given(graphs(max_n=4), st.data())
def test_remainders_decrease(g, data):
    n = g.n_polymers
    mu = np.array(data.draw(st.lists(st.floats(0, 0.4), min_size=n, max_size=n)))
    kind = data.draw(st.sampled_from([FP, DOB, IMPDOB]))
    rho = mu / np.maximum(t_map(kind, g, np.ones(n), mu), 1.0) * 0.9
    assert condition_holds(kind, g, rho, mu)
    tmu = t_map(kind, g, rho, mu)
    for k in (2, 3):
        a = tree_remainder(kind, g, rho, mu, k)
        b = tree_remainder(kind, g, rho, tmu, k - 1)
        c = tree_remainder(kind, g, rho, mu, k - 1)
        assert np.all(a <= b + 1e-13) and np.all(b <= c + 1e-13)
    with pytest.raises(ValueError):
        tree_remainder(kind, g, rho, mu, 0)


@given(graphs(max_n=5), st.data())
def test_truncated_function_below_tree_bounds(g, data):
    seq = tuple(data.draw(st.lists(st.integers(0, g.n_polymers - 1), min_size=1, max_size=5)))
    val = abs(ursell_coefficient(g, seq))
    for kind in ALL_KINDS:
        assert val <= tree_bound_sum(kind, g, seq)


def test_rooted_labeled_tree_helpers():
    t = RootedLabeledTree((-1, 0, 1, 1))
    assert t.depth == (0, 1, 2, 2)
    assert sorted(t.children(1)) == [2, 3]
    assert planar_shape(t).n_vertices == 3
