"""Acceptance criteria, one test per criterion.

Each test prints ``PASS criterion N: ...`` or ``FAIL criterion N: ...``
(repeated in the terminal summary) and asserts the criterion at its stated
tolerance.  Every run made by criteria 1-10 and 12 is recorded and replayed
on the emulated executor by criterion 11.
"""

import math
from fractions import Fraction

import numpy as np
from scipy.stats import spearmanr

from acceptance_log import record
from distcolor.bni import bni_deg_plus_one, bni_recursive_list_color, edge_list_color, weak_reduction
from distcolor.degplus1 import ColoringReport, arboricity_list_color, deg_plus_one_list_color, half_degree_step, degplus1_params
from distcolor.engine import CONGEST, CongestViolation, Runner
from distcolor.graph import (
    complete,
    gnp,
    interval,
    line_graph,
    orient_by_degeneracy,
    orient_by_id,
    ring,
    star,
    tree,
)
from distcolor.hpartition import generalized_h_partition, log_depth_bound
from distcolor.listreduce import ListAssignment, oriented_reduction, recursive_list_color
from distcolor.oracle import (
    coloring_is_feasible_certificate,
    degeneracy,
    exact_list_color,
    neighborhood_independence,
    verify_edge_coloring,
    verify_h_partition,
    verify_list_respecting,
    verify_oriented_reduction,
    verify_phase_bound,
    verify_proper,
    verify_total,
    verify_weak_reduction,
)
from distcolor.primitives import linial_coloring, low_degree_list_color

from helpers import deg_plus_one_lists, random_lists, recursive_sizes, rng, small_corpus
from mutants import kill_count

# (name, fn(runner) -> output, output, rounds) of every recorded run
MODE_CASES: list = []
DONE: set[int] = set()


def tracked(name, fn, runner=None):
    runner = runner if runner is not None else Runner()
    out = fn(runner)
    MODE_CASES.append((name, fn, out, runner.metrics.rounds))
    return out, runner


def valid_coloring(g, lists, col, total=True):
    ok = verify_proper(g, col).ok and verify_list_respecting(lists, col).ok
    return ok and (verify_total(col).ok if total else True)


# -- 1 ---------------------------------------------------------------------------------


def hpartition_corpus():
    sizes = [32, 48, 64, 96, 128, 192, 256, 384, 512]
    out = [(f"ring{n}", ring(n)) for n in sizes]
    out += [(f"star{n}", star(n)) for n in sizes]
    out += [(f"tree{n}_{s}", tree(n, s)) for n in sizes for s in range(4)]
    out += [(f"K{k}", complete(k)) for k in range(2, 22)]
    out += [(f"gnp{n}_{d}_{s}", gnp(n, d / n, s)) for n in sizes for d in (3, 6, 12) for s in range(5)]
    return out


def criterion_1():
    corpus = hpartition_corpus()
    valid = 0
    depth_ok = {Fraction(1, 4): 0, Fraction(1, 2): 0, Fraction(1): 0}
    worst = {}
    for name, g in corpus:
        o, _ = orient_by_degeneracy(g)
        good = True
        for eps in depth_ok:
            hp, _ = tracked(f"c1:{name}:{eps}", lambda r, g=g, o=o, eps=eps: generalized_h_partition(g, o, eps, r))
            good &= verify_h_partition(g, o, hp).ok
            bound = log_depth_bound(g.edge_count, eps)
            if hp.h <= bound:
                depth_ok[eps] += 1
            elif eps not in worst or hp.h - bound > worst[eps][1] - worst[eps][2]:
                worst[eps] = (name, hp.h, bound)
        valid += good
    n = len(corpus)
    ok = n >= 200 and valid == n and all(c == n for c in depth_ok.values())
    parts = ", ".join(f"eps={e}: {c}/{n}" for e, c in depth_ok.items())
    detail = f"validator {valid}/{n}; depth bound met {parts}"
    if worst:
        detail += "; worst " + ", ".join(f"eps={e} {w[0]} h={w[1]} > {w[2]}" for e, w in worst.items())
    DONE.add(1)
    return ok, detail


# -- 2 ---------------------------------------------------------------------------------


def reduction_graphs():
    out = []
    for s in range(34):
        kind = s % 4
        if kind == 0:
            n = 40 + 5 * s
            out.append((f"gnp{n}_{s}", gnp(n, 8 / n, s)))
        elif kind == 1:
            out.append((f"interval{s}", interval(60 + 3 * s, s, 0.1)))
        elif kind == 2:
            out.append((f"tree{s}", tree(50 + 4 * s, s)))
        else:
            out.append((f"line{s}", line_graph(gnp(25 + s, 0.15, s)).line_graph))
    return out


def criterion_2():
    runs = passed = within = 0
    worst_bits = 0
    for i, (name, g) in enumerate(reduction_graphs()):
        C = 64 if i % 2 else 256
        o = orient_by_degeneracy(g)[0] if i % 3 else orient_by_id(g)
        gen = rng(1000 + i)
        la = random_lists([int(x) for x in gen.integers(1, C + 1, size=g.n)], C, i)
        budget = 32 * (math.ceil(math.log2(g.n)) + math.ceil(math.log2(C)) + 8)
        for eta in (2, 4, 8):
            for eps in (Fraction(1, 2), Fraction(1)):
                runs += 1
                runner = Runner(CONGEST, space=C)
                try:
                    res, _ = tracked(
                        f"c2:{name}:{eta}:{eps}",
                        lambda r, g=g, o=o, la=la, eta=eta, eps=eps: oriented_reduction(g, o, la, eta, eps, r),
                        runner,
                    )
                except CongestViolation:
                    continue
                passed += verify_oriented_reduction(g, o, la, res, eta, 2 + eps).ok
                bits = runner.metrics.max_payload_bits
                worst_bits = max(worst_bits, bits)
                within += bits <= budget
    ok = runs >= 200 and passed == runs and within == runs
    DONE.add(2)
    return ok, f"validator {passed}/{runs}, payload within budget {within}/{runs} (max {worst_bits} bits)"


# -- 3 ---------------------------------------------------------------------------------


def criterion_3():
    instances = colored_all = valid = 0
    for r in (2, 3, 4):
        for eps in (Fraction(1), Fraction(1, 2)):
            for s in range(17):
                kind = s % 3
                if kind == 0:
                    n = 50 + 15 * s
                    g = gnp(n, 6 / n, s)
                elif kind == 1:
                    g = interval(80 + 5 * s, s, 0.1)
                else:
                    g = tree(60 + 10 * s, s)
                o, _ = orient_by_degeneracy(g)
                sizes = recursive_sizes(o.out_degree, eps, r)
                C = max(max(g.max_degree(), 2) ** 3, max(sizes))
                la = random_lists(sizes, C, 7 * s + r)
                out, _ = tracked(
                    f"c3:{r}:{eps}:{s}", lambda run, g=g, o=o, la=la, eps=eps, r=r: recursive_list_color(g, o, la, eps, r, run)
                )
                instances += 1
                colored_all += None not in out
                valid += valid_coloring(g, la, out, total=False)
    ok = instances >= 100 and colored_all == instances and valid == instances
    DONE.add(3)
    return ok, f"all nodes colored on {colored_all}/{instances}, validators pass on {valid}/{instances}"


# -- 4, 5 ------------------------------------------------------------------------------

_T12: dict = {}


def degplus1_runs():
    if _T12:
        return _T12
    rows = []
    for i in range(50):
        n = 50 + 7 * i
        g = gnp(n, min(0.3, 10 / n), 100 + i)
        C = max(g.max_degree(), 2) ** 3
        la = deg_plus_one_lists(g, C, i)
        rep = ColoringReport()
        out, _ = tracked(f"c5:{i}", lambda r, g=g, la=la, rep=rep: deg_plus_one_list_color(g, la, r, report=rep))
        # first halving step on its own, degree of the uncolored part measured here
        base = linial_coloring(g)
        step, _ = tracked(
            f"c4:{i}",
            lambda r, g=g, la=la, base=base: half_degree_step(g, la, degplus1_params(g.max_degree()), base, r),
        )
        bot = max(
            (sum(1 for u in g.adj[v] if step[u] is None) for v in range(g.n) if step[v] is None),
            default=0,
        )
        rows.append((g, la, out, rep, bot))
    _T12["rows"] = rows
    return _T12


def criterion_4():
    rows = degplus1_runs()["rows"]
    checks = fails = 0
    for g, la, out, rep, bot in rows:
        checks += 1
        fails += bot > g.max_degree() // 2
        for dh, st in zip(rep.max_degrees, rep.steps):
            checks += 1
            fails += st.uncolored_max_degree > dh // 2
    DONE.add(4)
    return fails == 0, f"{checks - fails}/{checks} halving steps leave uncolored max degree <= floor(Delta/2)"


def criterion_5():
    rows = degplus1_runs()["rows"]
    good = iters_ok = 0
    for g, la, out, rep, _ in rows:
        good += valid_coloring(g, la, out)
        iters_ok += rep.iterations <= math.ceil(math.log2(max(g.max_degree(), 2))) + 1
    n = len(rows)
    DONE.add(5)
    return n >= 50 and good == n and iters_ok == n, f"total proper list colorings {good}/{n}, iteration bound met {iters_ok}/{n}"


# -- 6 ---------------------------------------------------------------------------------


def weak_instances():
    out = []
    for k in range(4, 24):
        out.append((f"K{k}", complete(k), 1))
    for s in range(15):
        lg = line_graph(gnp(30 + 2 * s, 0.15, s)).line_graph
        out.append((f"line{s}", lg, neighborhood_independence(lg, cap=64)))
    for s in range(15):
        g = interval(60 + 4 * s, s, 0.12)
        out.append((f"interval{s}", g, neighborhood_independence(g, cap=64)))
    return out


def criterion_6():
    runs = passed = eq4 = gate = 0
    assigned = 0
    for i, (name, g, theta) in enumerate(weak_instances()):
        for eta in (2, 4):
            C = 64 if eta == 2 else 128
            if i % 2:
                la = ListAssignment.of([range(C)] * g.n, C)
            else:
                la = deg_plus_one_lists(g, C, i)
            res, _ = tracked(f"c6:{name}:{eta}", lambda r, g=g, theta=theta, la=la, eta=eta: weak_reduction(g, theta, la, eta, r))
            runs += 1
            passed += verify_weak_reduction(g, la, res, eta, 3 * theta, 2 * theta * eta).ok
            eq4 += verify_phase_bound(g, res, theta).ok
            gate += res.gate.defect_ok and res.gate.share_ok
            assigned += sum(x is not None for x in res.subspace_index)
    ok = runs >= 100 and passed == runs and eq4 == runs and gate == runs
    DONE.add(6)
    return ok, f"validator {passed}/{runs}, phase bound {eq4}/{runs}, class-share gate {gate}/{runs} ({assigned} assigned nodes)"


# -- 7 ---------------------------------------------------------------------------------


def criterion_7():
    exceptions = guaranteed = runs = invalid = 0
    cases = []
    for s in range(8):
        cases.append((f"line{s}", line_graph(gnp(30 + 3 * s, 0.12, s)).line_graph))
        cases.append((f"interval{s}", interval(70 + 5 * s, s, 0.1)))
        cases.append((f"K{6 + s}", complete(6 + s)))
    for ci, (name, g) in enumerate(cases):
        theta = neighborhood_independence(g, cap=64)
        for r in (2, 3, 4):
            gen = rng(100 * ci + r)
            big = (3 * theta) ** (r - 1)
            sizes = [big * d + 1 if gen.random() < 0.6 else max(1, d) for d in g.degrees()]
            la = random_lists(sizes, max(sizes), r)
            out, _ = tracked(
                f"c7:{name}:{r}", lambda run, g=g, theta=theta, la=la, r=r: bni_recursive_list_color(g, theta, la, r, runner=run)
            )
            runs += 1
            invalid += not valid_coloring(g, la, out, total=False)
            for v in range(g.n):
                if len(la.lists[v]) > big * g.degree(v):
                    guaranteed += 1
                    exceptions += out[v] is None
    totals = tot_runs = 0
    for s in range(10):
        g = line_graph(gnp(40 + 4 * s, 0.1, 50 + s)).line_graph if s < 7 else complete(5 + s)
        theta = 2 if s < 7 else 1
        la = deg_plus_one_lists(g, max(g.max_degree(), 2) ** 3, s)
        out, _ = tracked(f"c7:deg+1:{s}", lambda run, g=g, theta=theta, la=la: bni_deg_plus_one(g, theta, la, run))
        tot_runs += 1
        totals += valid_coloring(g, la, out)
    ok = exceptions == 0 and invalid == 0 and totals == tot_runs
    DONE.add(7)
    return ok, (
        f"{exceptions} uncolored among {guaranteed} guaranteed nodes over {runs} runs "
        f"({invalid} invalid); deg+1 totals {totals}/{tot_runs}"
    )


# -- 8 ---------------------------------------------------------------------------------


def criterion_8():
    good = conflicts_total = 0
    n_inst = 30
    for i in range(n_inst):
        n = 20 + 6 * i
        g = gnp(n, min(0.4, 6 / n), 200 + i)
        colors, _ = tracked(f"c8:{i}", lambda r, g=g: edge_list_color(g, runner=r))
        at = {}
        conflicts = 0
        for (u, v), c in colors.items():
            for w in (u, v):
                conflicts += (w, c) in at
                at[(w, c)] = True
        conflicts_total += conflicts
        in_range = all(c is not None and 0 <= c <= 2 * g.max_degree() - 2 for c in colors.values())
        good += verify_edge_coloring(g, colors).ok and conflicts == 0 and in_range
    DONE.add(8)
    return good == n_inst, f"proper (2Delta-1)-edge colorings {good}/{n_inst}, adjacent conflicts {conflicts_total}"


# -- 9 ---------------------------------------------------------------------------------


def criterion_9():
    cases = [(f"tree{s}", tree(40 + 20 * s, s), 1) for s in range(8)]
    cases += [(f"K{2 * a}", complete(2 * a), a) for a in range(1, 7)]
    for s in range(8):
        n = 60 + 30 * s
        g = gnp(n, 5 / n, 300 + s)
        cases.append((f"gnp{n}", g, degeneracy(g)))
    runs = good = 0
    for name, g, a in cases:
        for eps in (Fraction(1, 2), Fraction(1)):
            need = math.floor((2 + eps) * a) + 1
            la = random_lists([need] * g.n, max(4 * need, 8), runs)
            out, _ = tracked(f"c9:{name}:{eps}", lambda r, g=g, a=a, eps=eps, la=la: arboricity_list_color(g, a, eps, la, r))
            runs += 1
            good += valid_coloring(g, la, out)
    DONE.add(9)
    return good == runs, f"total proper list colorings {good}/{runs} (trees, K_2a, sparse gnp)"


# -- 10 --------------------------------------------------------------------------------


def criterion_10():
    outputs = confirmed = 0
    for name, g in small_corpus():
        assert g.n <= 20
        la = deg_plus_one_lists(g, max(g.max_degree(), 2) ** 3, g.n)
        assert exact_list_color(g, la) is not None
        o, a = orient_by_degeneracy(g)
        rlists = random_lists(recursive_sizes(o.out_degree, 1, 2), max(max(g.max_degree(), 2) ** 3, 9 * a + 1), 3)
        alists = random_lists([3 * max(a, 1) + 1] * g.n, 12 * max(a, 1) + 4, 4)
        theta = neighborhood_independence(g)
        runs = [
            ("degplus1", la, lambda r, g=g, la=la: deg_plus_one_list_color(g, la, r)),
            ("bni", la, lambda r, g=g, la=la, t=max(theta, 1): bni_deg_plus_one(g, t, la, r)),
            ("arboricity", alists, lambda r, g=g, a=max(a, 1), la=alists: arboricity_list_color(g, a, 1, la, r)),
            ("recursive", rlists, lambda r, g=g, o=o, la=rlists: recursive_list_color(g, o, la, 1, 2, r)),
            ("lowdeg", la, lambda r, g=g, la=la: low_degree_list_color(g, g.max_degree(), la.lists, linial_coloring(g, r), r)),
        ]
        for alg, lists, fn in runs:
            out, _ = tracked(f"c10:{name}:{alg}", fn)
            outputs += 1
            confirmed += coloring_is_feasible_certificate(g, out) and verify_list_respecting(lists, out).ok
        if g.edge_count:
            colors, _ = tracked(f"c10:{name}:edges", lambda r, g=g: edge_list_color(g, runner=r, max_space_exponent=None))
            lg = line_graph(g)
            as_nodes = [colors[e] for e in lg.edge_of_node]
            outputs += 1
            confirmed += coloring_is_feasible_certificate(lg.line_graph, as_nodes)
    killed, total = kill_count()
    ok = confirmed == outputs and total >= 50 and killed == total
    DONE.add(10)
    return ok, f"exact feasibility confirms {confirmed}/{outputs} outputs; mutants killed {killed}/{total}"


# -- 12 --------------------------------------------------------------------------------


def criterion_12():
    C = 1024
    la_cache = {}
    measured, predicted, per_r = [], [], {}
    for s in range(3):
        g = gnp(256, 0.1, 400 + s)
        o, _ = orient_by_degeneracy(g)
        la = la_cache.setdefault(g.n, ListAssignment(tuple(tuple(range(C)) for _ in range(g.n)), (0, C)))
        for r in (2, 3, 4, 5):
            _, runner = tracked(f"c12:{s}:{r}", lambda run, g=g, o=o, la=la, r=r: recursive_list_color(g, o, la, 1, r, run))
            m = runner.metrics
            defective = sum(x for lab, x in m.per_phase if lab.endswith(":defective"))
            measured.append(m.rounds - defective)
            predicted.append(r * math.ceil(C ** (2 / r)))
            per_r.setdefault(r, []).append(m.rounds - defective)
    rho = spearmanr(measured, predicted).statistic
    trend = ", ".join(f"r={r}: {int(np.mean(v))}" for r, v in per_r.items())
    DONE.add(12)
    return rho >= 0.8, f"Spearman rho = {rho:.2f} (need >= 0.8); mean non-defective rounds {trend}"


# -- 11 --------------------------------------------------------------------------------

ORDER = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9, criterion_10, criterion_12]


def criterion_11():
    for k, fn in zip([1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12], ORDER):
        if k not in DONE:
            fn()
    same = 0
    mismatches = []
    for name, fn, out, rounds in MODE_CASES:
        runner = Runner(emulated=True)
        out2 = fn(runner)
        if out2 == out and repr(out2) == repr(out) and runner.metrics.rounds == rounds:
            same += 1
        elif len(mismatches) < 5:
            mismatches.append(name)
    n = len(MODE_CASES)
    detail = f"identical outputs and round counts on {same}/{n} recorded runs"
    if mismatches:
        detail += f"; first mismatches {mismatches}"
    return same == n and n > 0, detail


# -- tests -----------------------------------------------------------------------------


def _check(n, fn):
    ok, detail = fn()
    record(n, ok, detail)
    assert ok, detail


def test_criterion_01_h_partition():
    _check(1, criterion_1)


def test_criterion_02_oriented_reduction():
    _check(2, criterion_2)


def test_criterion_03_recursive_coloring():
    _check(3, criterion_3)


def test_criterion_04_halving_step():
    _check(4, criterion_4)


def test_criterion_05_deg_plus_one():
    _check(5, criterion_5)


def test_criterion_06_weak_reduction():
    _check(6, criterion_6)


def test_criterion_07_bni_guaranteed_set():
    _check(7, criterion_7)


def test_criterion_08_edge_coloring():
    _check(8, criterion_8)


def test_criterion_09_arboricity():
    _check(9, criterion_9)


def test_criterion_10_oracle_cross_check():
    _check(10, criterion_10)


def test_criterion_12_round_scaling():
    _check(12, criterion_12)


def test_criterion_11_mode_equivalence():
    _check(11, criterion_11)
