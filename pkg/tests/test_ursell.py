import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles
from clusterexp import (CapExceeded, ClusterGraph, RootedLabeledTree, build_graph,
                        css_signed_sum, enumerate_rooted_spanning_trees, mayer_log_truncated,
                        partition_function, penrose_closure, penrose_tree_count, pi_truncated,
                        pi_volume, truncated_function, ursell_coefficient,
                        verify_partition_scheme)
from clusterexp.ursell import literal_index_closure, scheme_tree_count
from conftest import edge_list, graphs


def cg(n, edges):
    return ClusterGraph.from_edges(n, edges)


K3 = cg(3, [(0, 1), (0, 2), (1, 2)])
P012 = cg(3, [(0, 1), (1, 2)])
C4 = cg(4, [(0, 2), (0, 3), (1, 2), (1, 3)])


def complete(n):
    return cg(n, itertools.combinations(range(n), 2))


# values below were produced by the edge-subset and spanning-tree listings in oracles.py
FROZEN = [
    (C4, -3, 3),
    (cg(5, [(i, (i + 1) % 5) for i in range(5)]), 4, 4),
    (complete(4), -6, 6),
    (cg(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]), -4, 4),
    (complete(5), 24, 24),
    (cg(4, [(0, 1), (0, 2), (0, 3)]), -1, 1),
]


@pytest.mark.parametrize("graph,css,pen", FROZEN)
def test_frozen_signed_sums_and_tree_counts(graph, css, pen):
    assert css_signed_sum(graph) == css
    assert penrose_tree_count(graph) == pen


def test_css_small_cases():
    assert css_signed_sum(cg(2, [(0, 1)])) == -1
    assert css_signed_sum(K3) == 2
    with pytest.raises(ValueError):
        css_signed_sum(cg(2, []))


@pytest.mark.parametrize("n", range(2, 8))
def test_complete_graph_values(n):
    assert css_signed_sum(complete(n)) == (-1) ** (n - 1) * math.factorial(n - 1)


def test_ursell_coefficient_examples(k2, path3):
    assert ursell_coefficient(k2, (0,)) == 1
    assert ursell_coefficient(k2, (0, 1)) == -1
    assert ursell_coefficient(k2, (0, 1, 0)) == 2
    assert ursell_coefficient(build_graph(2), (0, 1)) == 0
    frozen = {(0, 1): -1, (0, 2): 0, (0, 1, 2): 1, (1, 0, 2): 1, (0, 1, 1): 2,
              (1, 1, 1): 2, (0, 0, 1, 2): -2}
    for seq, val in frozen.items():
        assert ursell_coefficient(path3, seq) == val
        assert truncated_function(path3, seq) == val


def test_edge_cap():
    big = complete(8)  # 28 edges
    with pytest.raises(CapExceeded):
        css_signed_sum(big, cap=20)


def test_spanning_trees():
    assert len(enumerate_rooted_spanning_trees(cg(2, [(0, 1)]))) == 1
    assert len(enumerate_rooted_spanning_trees(K3)) == 3
    trees = enumerate_rooted_spanning_trees(P012)
    assert [t.edges for t in trees] == [P012.edges]


def test_penrose_closure_examples():
    star = RootedLabeledTree((-1, 0, 0))
    assert penrose_closure(star, K3) == K3
    path = RootedLabeledTree((-1, 0, 1))
    assert penrose_closure(path, K3).edges == path.edges
    assert penrose_closure(path, P012).edges == P012.edges
    with pytest.raises(ValueError):
        penrose_closure(star, P012)


def test_penrose_counts():
    assert penrose_tree_count(cg(1, [])) == 1
    assert penrose_tree_count(K3) == 2
    assert penrose_tree_count(P012) == 1


def test_partition_scheme_reports():
    r = verify_partition_scheme(K3)
    assert r.ok and r.n_css == 4 and r.n_trees == 3
    r = verify_partition_scheme(cg(2, [(0, 1)]))
    assert r.ok and r.n_css == 1 and r.n_trees == 1


def test_literal_index_rule_is_not_a_partition():
    r = verify_partition_scheme(C4, literal_index_closure)
    assert not r.ok
    assert ("uncovered", sorted(C4.edges)) in r.violations
    assert verify_partition_scheme(C4, penrose_closure).ok
    assert scheme_tree_count(C4) == 3


@given(graphs(min_n=1, max_n=4), st.data())
def test_truncated_function_matches_oracle(g, data):
    seq = tuple(data.draw(st.lists(st.integers(0, g.n_polymers - 1), min_size=1, max_size=5)))
    expected = oracles.ursell(g.n_polymers, edge_list(g), seq)
    assert ursell_coefficient(g, seq) == expected
    assert truncated_function(g, seq) == expected


@given(st.integers(2, 6), st.data())
def test_penrose_identity_random_graph(n, data):
    pairs = list(itertools.combinations(range(n), 2))
    keep = data.draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = [p for p, k in zip(pairs, keep) if k]
    graph = cg(n, edges)
    if not oracles.connected(n, oracles.pairs_of(edges)):
        return
    css = css_signed_sum(graph)
    assert css == oracles.css_sum(n, edges)
    assert penrose_tree_count(graph) == oracles.penrose_count(n, edges) == (-1) ** (n - 1) * css
    assert scheme_tree_count(graph) == penrose_tree_count(graph)
    assert verify_partition_scheme(graph).ok


@given(graphs(max_n=4), st.data())
def test_permutation_symmetry(g, data):
    seq = data.draw(st.lists(st.integers(0, g.n_polymers - 1), min_size=2, max_size=5))
    perm = data.draw(st.permutations(seq[1:]))
    assert ursell_coefficient(g, tuple(seq)) == ursell_coefficient(g, (seq[0],) + tuple(perm))


def test_pi_truncated_examples(selfx):
    assert pi_truncated(selfx, 0, [0.0], 5) == 1.0
    assert pi_truncated(selfx, 0, [0.5], 3) == pytest.approx(1.875, abs=1e-15)
    assert pi_truncated(selfx, 0, [0.5], 3, ordered=True) == pytest.approx(1.875, abs=1e-15)
    assert pi_truncated(selfx, 0, [0.5], 12) == pytest.approx(2.0, abs=1e-3)


def test_mayer_examples(selfx):
    assert mayer_log_truncated(selfx, None, [0.0], 4) == 0.0
    assert mayer_log_truncated(selfx, None, [0.5], 2) == pytest.approx(0.375, abs=1e-15)
    assert mayer_log_truncated(selfx, None, [0.5], 2, ordered=True) == pytest.approx(0.375)


@given(graphs(max_n=3), st.data())
def test_mayer_coefficients_match_log_of_polynomial(g, data):
    # coefficients of t^m in log Xi(t z), exact arithmetic on both sides
    z = data.draw(st.lists(st.fractions(-1, 1, max_denominator=4),
                           min_size=g.n_polymers, max_size=g.n_polymers))
    order = 4
    coeffs = oracles.log_series_coefficients(g.n_polymers, edge_list(g), z, order)
    partial = 0
    for m in range(1, order + 1):
        term = sum(Fraction(ursell_coefficient(g, seq)) *
                   math.prod((z[k] for k in seq), start=Fraction(1))
                   for seq in itertools.product(range(g.n_polymers), repeat=m))
        term /= math.factorial(m)
        assert term == coeffs[m]
        partial += term
    t = 0.37
    approx = mayer_log_truncated(g, None, [float(x) * t for x in z], order)
    expected = sum(float(coeffs[m]) * t ** m for m in range(1, order + 1))
    assert approx == pytest.approx(expected, abs=1e-12)


@given(graphs(max_n=3), st.data())
def test_ordered_and_multiset_paths_agree(g, data):
    rho = data.draw(st.lists(st.floats(0, 0.2), min_size=g.n_polymers, max_size=g.n_polymers))
    v = data.draw(st.integers(0, g.n_polymers - 1))
    a = pi_truncated(g, v, rho, 4)
    b = pi_truncated(g, v, rho, 4, ordered=True)
    assert a == pytest.approx(b, rel=1e-12)
    z = [-x for x in rho]
    assert mayer_log_truncated(g, None, z, 4) == \
        pytest.approx(mayer_log_truncated(g, None, z, 4, ordered=True), rel=1e-12, abs=1e-15)


@given(graphs(max_n=4), st.data())
def test_pi_truncated_monotone_and_limit(g, data):
    rho = data.draw(st.lists(st.floats(0, 0.08), min_size=g.n_polymers, max_size=g.n_polymers))
    v = data.draw(st.integers(0, g.n_polymers - 1))
    seq = [pi_truncated(g, v, rho, n) for n in range(0, 11)]
    assert all(a <= b * (1 + 1e-14) for a, b in zip(seq, seq[1:]))
    exact = pi_volume(g, None, v, rho)
    assert seq[-1] <= exact * (1 + 1e-12)
    assert seq[-1] == pytest.approx(exact, rel=1e-6)


def test_series_cap(selfx):
    with pytest.raises(CapExceeded):
        pi_truncated(selfx, 0, [0.1], 20)
    with pytest.raises(CapExceeded):
        mayer_log_truncated(selfx, None, [0.1], 20)


def test_mayer_converges_to_log_for_k2():
    k2 = build_graph(2, [(0, 1)])
    val = mayer_log_truncated(k2, None, [0.1, 0.1], 8)
    assert val == pytest.approx(math.log(partition_function(k2, None, [0.1, 0.1])), abs=1e-6)
