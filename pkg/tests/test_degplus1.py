import math
from fractions import Fraction

import pytest

from distcolor.degplus1 import (
    ColoringReport,
    FrameworkParams,
    PreconditionError,
    StepReport,
    arboricity_list_color,
    deg_plus_one_list_color,
    half_degree_step,
    iterate_half_steps,
    degplus1_params,
)
from distcolor.engine import CONGEST, Runner, congest_budget
from distcolor.graph import complete, empty_graph, gnp, induced_subgraph, ring, tree
from distcolor.listreduce import InternalError, ListAssignment
from distcolor.oracle import degeneracy, verify_list_respecting, verify_proper, verify_total
from distcolor.primitives import linial_coloring, low_degree_list_color

from helpers import deg_plus_one_lists, random_lists, shifted_lists


def low_degree_inner(h, lists, base, runner):
    return low_degree_list_color(h, h.max_degree(), lists.lists, base, runner)


SMALL = FrameworkParams(S=1, T="low degree", inner=low_degree_inner)


def bot_degree(g, out):
    return max((sum(1 for u in g.adj[v] if out[u] is None) for v in range(g.n) if out[v] is None), default=0)


def check_total(g, lists, out):
    assert verify_total(out) and verify_proper(g, out) and verify_list_respecting(lists, out)


def test_half_step_isolated():
    g = empty_graph(4)
    la = ListAssignment.of([[v] for v in range(4)], 4)
    out = half_degree_step(g, la, SMALL, linial_coloring(g))
    assert out == [0, 1, 2, 3]


def test_half_step_k4_small_s():
    g = complete(4)
    la = ListAssignment.of([[1, 2, 3, 4]] * 4, 5)
    rep = StepReport()
    out = half_degree_step(g, la, SMALL, linial_coloring(g), report=rep)
    assert verify_proper(g, out) and verify_list_respecting(la, out)
    assert bot_degree(g, out) <= 1 and rep.uncolored_max_degree <= 1


@pytest.mark.parametrize("seed", range(6))
def test_half_step_small_s_gnp(seed):
    # S=1 gives 2 buckets, so classes have internal edges
    g = gnp(120, 0.1, seed)
    la = deg_plus_one_lists(g, 3 * g.max_degree(), seed)
    rep = StepReport()
    out = half_degree_step(g, la, SMALL, linial_coloring(g), report=rep)
    assert verify_proper(g, out) and verify_list_respecting(la, out)
    assert bot_degree(g, out) <= g.max_degree() // 2
    assert rep.classes >= 2


def test_half_step_default_params():
    g = gnp(150, 0.05, 4)
    la = deg_plus_one_lists(g, g.max_degree() ** 3, 4)
    out = half_degree_step(g, la, degplus1_params(g.max_degree()), linial_coloring(g))
    assert verify_proper(g, out) and verify_list_respecting(la, out)
    assert bot_degree(g, out) <= g.max_degree() // 2


def test_half_step_detects_lazy_inner():
    lazy = FrameworkParams(S=1, T="none", inner=lambda h, l, b, r: [None] * h.n)
    g = ring(6)
    with pytest.raises(InternalError, match="uncolored"):
        half_degree_step(g, ListAssignment.of([[0, 1, 2]] * 6), lazy, linial_coloring(g))
    cheat = FrameworkParams(S=1, T="none", inner=lambda h, l, b, r: [99] * h.n)
    with pytest.raises(InternalError, match="outside"):
        half_degree_step(g, ListAssignment.of([[0, 1, 2]] * 6, 100), cheat, linial_coloring(g))


def test_params_checks():
    with pytest.raises(ValueError):
        FrameworkParams(S=0, T="", inner=low_degree_inner)
    assert degplus1_params(1).S == 3
    assert degplus1_params(16).S == 9  # r = 2
    assert degplus1_params(1024).S == 3 ** math.ceil(math.sqrt(10))


def test_iterate_small_s_total():
    g = gnp(200, 0.08, 1)
    la = deg_plus_one_lists(g, 2 * g.max_degree() + 5, 1)
    rep = ColoringReport()
    out = iterate_half_steps(g, la, lambda d: SMALL, Runner(), "it", rep)
    check_total(g, la, out)
    assert rep.iterations <= math.ceil(math.log2(g.max_degree())) + 1
    for a, b in zip(rep.max_degrees, rep.max_degrees[1:]):
        assert b <= a // 2


def test_deg_plus_one_clique():
    g = complete(4)
    la = ListAssignment.of([[1, 2, 3, 4]] * 4, 5)
    out = deg_plus_one_list_color(g, la, max_space_exponent=None)
    assert sorted(out) == [1, 2, 3, 4]


def test_deg_plus_one_ring():
    g = ring(5)
    la = random_lists([3] * 5, 9, 0)
    out = deg_plus_one_list_color(g, la, max_space_exponent=None)
    check_total(g, la, out)


@pytest.mark.parametrize("seed", range(25))
def test_deg_plus_one_gnp_shifted(seed):
    g = gnp(200, 0.05, 5)
    la = shifted_lists(g, g.max_degree() ** 3, seed)
    rep = ColoringReport()
    out = deg_plus_one_list_color(g, la, report=rep)
    check_total(g, la, out)
    assert rep.iterations <= math.ceil(math.log2(g.max_degree())) + 1


def test_deg_plus_one_preconditions():
    g = ring(5)
    with pytest.raises(PreconditionError):
        deg_plus_one_list_color(g, ListAssignment.of([[0, 1]] * 5, 8))
    with pytest.raises(PreconditionError, match="exceeds"):
        deg_plus_one_list_color(g, ListAssignment.of([[0, 1, 2]] * 5, 9))
    out = deg_plus_one_list_color(g, ListAssignment.of([[0, 1, 2]] * 5, 9), max_space_exponent=4)
    assert None not in out


def test_deg_plus_one_congest():
    g = gnp(120, 0.06, 2)
    C = g.max_degree() ** 3
    la = deg_plus_one_lists(g, C, 2)
    r = Runner(CONGEST, space=C)
    out = deg_plus_one_list_color(g, la, r)
    check_total(g, la, out)
    assert 0 < r.metrics.max_payload_bits <= congest_budget(g.n, C)


def test_deg_plus_one_emulated_equivalence():
    g = gnp(100, 0.05, 3)
    la = deg_plus_one_lists(g, g.max_degree() ** 3, 3)
    a, b = Runner(), Runner(emulated=True)
    assert deg_plus_one_list_color(g, la, a) == deg_plus_one_list_color(g, la, b)
    assert a.metrics.rounds == b.metrics.rounds


def test_arboricity_tree():
    g = tree(80, 4)
    la = random_lists([4] * g.n, 12, 4)
    out = arboricity_list_color(g, 1, 1, la)
    check_total(g, la, out)


def test_arboricity_k6():
    g = complete(6)
    la = ListAssignment.of([range(1, 11)] * 6, 11)
    check_total(g, la, arboricity_list_color(g, 3, 1, la))


def test_arboricity_sparse_gnp():
    for seed in range(3):
        g = gnp(200, 0.025, seed)
        a = degeneracy(g)
        assert a <= 5
        la = random_lists([math.floor(Fraction(5, 2) * 5) + 1] * g.n, 40, seed)
        check_total(g, la, arboricity_list_color(g, 5, 0.5, la))


def test_arboricity_short_lists():
    with pytest.raises(PreconditionError):
        arboricity_list_color(complete(6), 3, 1, ListAssignment.of([range(9)] * 6, 11))


def test_classes_are_independent_runs():
    # the per-class inner runs see the class subgraph only
    seen = []

    def spy(h, lists, base, runner):
        seen.append(h.n)
        return low_degree_inner(h, lists, base, runner)

    g = gnp(60, 0.2, 7)
    la = deg_plus_one_lists(g, 100, 7)
    half_degree_step(g, la, FrameworkParams(1, "spy", spy), linial_coloring(g))
    assert sum(seen) == g.n
    assert induced_subgraph(g, range(g.n)).graph == g
