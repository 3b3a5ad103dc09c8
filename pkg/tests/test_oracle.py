import itertools
from dataclasses import replace
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from distcolor.graph import build_graph, complete, empty_graph, gnp, interval, line_graph, path, ring, star, tree
from distcolor.hpartition import h_partition_fixed_bound
from distcolor.listreduce import ListAssignment
from distcolor.oracle import (
    OracleCapExceeded,
    Verdict,
    coloring_is_feasible_certificate,
    degeneracy,
    exact_list_color,
    guaranteed_set,
    neighborhood_independence,
    verify_h_partition,
    verify_list_respecting,
    verify_proper,
    verify_total,
)

from helpers import deg_plus_one_lists
from mutants import kill_count


def brute_force_colorable(g, lists):
    for combo in itertools.product(*lists):
        if all(combo[u] != combo[v] for u, v in g.edges()):
            return True
    return False


@st.composite
def instances(draw):
    n = draw(st.integers(1, 7))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), max_size=12)) if pairs else []
    lists = [draw(st.lists(st.integers(0, 3), min_size=1, max_size=3, unique=True)) for _ in range(n)]
    return build_graph(n, edges), lists


def test_verify_proper_examples():
    k3 = complete(3)
    assert verify_proper(k3, [1, 2, 3])
    v = verify_proper(path(2), [1, 1])
    assert not v and v.violations == [(0, 1, 1)]
    assert verify_proper(k3, [None] * 3)
    assert not verify_proper(k3, [1, 2])


def test_verify_list_examples():
    assert verify_list_respecting([[1, 2]], [1])
    assert not verify_list_respecting([[1, 2]], [3])
    assert verify_list_respecting([[1, 2]], [None])
    assert not verify_total([1, None])


def test_witness_cap():
    v = verify_proper(complete(10), [0] * 10)
    assert len(v.violations) == 10 and not v.ok
    assert v.to_dict()["ok"] is False


def test_exact_examples():
    assert exact_list_color(complete(3), [[1, 2]] * 3) is None
    assert exact_list_color(ring(5), [[1, 2]] * 5) is None
    g = gnp(20, 0.3, 1)
    sol = exact_list_color(g, deg_plus_one_lists(g, 30, 1))
    assert sol is not None and verify_proper(g, sol)
    with pytest.raises(OracleCapExceeded):
        exact_list_color(gnp(30, 0.1, 1), [[0]] * 30)


@given(instances())
@settings(max_examples=200, deadline=None)
def test_exact_matches_brute_force(inst):
    g, lists = inst
    sol = exact_list_color(g, lists)
    assert (sol is not None) == brute_force_colorable(g, lists)
    if sol is not None:
        assert verify_proper(g, sol) and verify_list_respecting(lists, sol)


def test_certificate():
    g = ring(6)
    assert coloring_is_feasible_certificate(g, [0, 1, 0, 1, None, None])
    assert not coloring_is_feasible_certificate(g, [0, 0, None, None, None, None])


def test_neighborhood_independence_examples():
    assert neighborhood_independence(complete(6)) == 1
    assert neighborhood_independence(star(6)) == 5
    assert neighborhood_independence(empty_graph(3)) == 0
    for s in range(5):
        assert neighborhood_independence(line_graph(gnp(25, 0.2, s)).line_graph) <= 2
    with pytest.raises(OracleCapExceeded):
        neighborhood_independence(star(20))


@pytest.mark.parametrize("seed", range(8))
def test_neighborhood_independence_networkx(seed):
    g = gnp(18, 0.35, seed)
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    want = 0
    for v in range(g.n):
        comp = nx.complement(h.subgraph(g.adj[v]))
        if comp.number_of_nodes():
            want = max(want, nx.max_weight_clique(comp, weight=None)[1])
    assert neighborhood_independence(g) == want


def test_degeneracy_examples():
    assert degeneracy(tree(30, 2)) == 1
    assert degeneracy(complete(7)) == 6
    assert degeneracy(ring(9)) == 2


def test_guaranteed_set():
    assert guaranteed_set([[1, 2, 3], [1]], [1, 1], 2) == [0]
    assert guaranteed_set(ListAssignment.of([[1, 2, 3]]), [1], Fraction(3)) == []


def test_h_partition_validator():
    g = star(6)
    hp = h_partition_fixed_bound(g, 1, Fraction(1, 2))
    assert verify_h_partition(g, None, hp)
    bad = replace(hp, level=(1,) * 6, h=1)
    assert not verify_h_partition(g, None, bad)
    assert not verify_h_partition(g, None, replace(hp, h=7))
    assert verify_h_partition(empty_graph(0), None, h_partition_fixed_bound(empty_graph(0), 1, 1))


def test_mutation_kill_rate():
    killed, total = kill_count()
    assert total >= 50
    assert killed == total


def test_verdict_bool():
    v = Verdict()
    assert v
    v.fail((1, 2))
    assert not v and v.violations == [(1, 2)]
    assert interval(5, 0).n == 5
