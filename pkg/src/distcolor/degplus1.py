"""(deg+1)-list coloring by repeated degree halving.

:func:`half_degree_step` splits the graph with a relative defective
coloring into classes of small internal degree and lets an inner
partial-coloring algorithm color one class after the other with the colors
neighbors have not taken yet.  Every node that still had many uncolored
neighbors when its class came up has a long residual list compared to its
class degree, so the inner algorithm colors it.  The uncolored remainder
therefore has max degree at most half the previous one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .engine import Runner, ensure_runner
from .graph import Graph, induced_subgraph, orient_by_degeneracy
from .hpartition import h_partition_fixed_bound
from .listreduce import InternalError, ListAssignment, recursive_list_color
from .primitives import (
    PartialColoring,
    ProperColoring,
    as_fraction,
    linial_coloring,
    relative_defective_coloring,
    remove_taken_colors,
)

#: inner(graph, lists, base, runner) -> partial coloring of graph
InnerAlgorithm = Callable[[Graph, ListAssignment, ProperColoring, Runner], PartialColoring]


class PreconditionError(ValueError):
    """Input does not satisfy the algorithm's hypothesis."""


@dataclass(frozen=True)
class FrameworkParams:
    """Slack factor S, a round-budget note T and the inner algorithm.

    ``inner`` must color every node v with ``|L_v| > S * deg(v)``.
    """

    S: int
    T: str
    inner: InnerAlgorithm

    def __post_init__(self) -> None:
        if self.S < 1:
            raise ValueError(f"S must be >= 1, got {self.S}")


@dataclass
class StepReport:
    classes: int = 0
    palette: int = 0
    uncolored_max_degree: int = 0
    colored: int = 0


@dataclass
class ColoringReport:
    iterations: int = 0
    steps: list[StepReport] = field(default_factory=list)
    max_degrees: list[int] = field(default_factory=list)


def check_deg_plus_one(g: Graph, lists: Sequence[Sequence[int]]) -> None:
    for v in range(g.n):
        if len(lists[v]) < g.degree(v) + 1:
            raise PreconditionError(f"node {v}: list of size {len(lists[v])} < deg + 1 = {g.degree(v) + 1}")


def half_degree_step(
    g: Graph,
    lists: ListAssignment,
    params: FrameworkParams,
    base: ProperColoring,
    runner: Runner | None = None,
    label: str = "half",
    report: StepReport | None = None,
) -> PartialColoring:
    """Partial list coloring whose uncolored part has max degree <= floor(Delta/2).

    Needs ``|L_v| >= deg(v) + 1``.  Raises InternalError if the inner
    algorithm leaves a node uncolored that it is obliged to color.
    """
    runner = ensure_runner(runner)
    check_deg_plus_one(g, lists.lists)
    lam = Fraction(1, 2 * params.S)
    dc = relative_defective_coloring(g, lam, base, runner, label=f"{label}:defective")
    residual = [tuple(l) for l in lists.lists]
    result: PartialColoring = [None] * g.n
    classes: dict[int, list[int]] = {}
    for v in range(g.n):
        classes.setdefault(dc.bucket[v], []).append(v)
    for x in sorted(classes):
        members = classes[x]
        sub = induced_subgraph(g, members)
        sub_lists = ListAssignment(tuple(residual[v] for v in sub.to_parent), lists.space)
        sub_base = ProperColoring(tuple(base.color[v] for v in sub.to_parent), base.palette_size)
        out = params.inner(sub.graph, sub_lists, sub_base, runner)
        new = {}
        for i, v in enumerate(sub.to_parent):
            c = out[i]
            if c is not None:
                if c not in residual[v]:
                    raise InternalError(f"inner algorithm gave node {v} color {c} outside its residual list")
                new[v] = c
            elif len(residual[v]) > params.S * sub.graph.degree(i):
                raise InternalError(
                    f"inner algorithm left node {v} uncolored although |L'|={len(residual[v])} "
                    f"> S*deg_class={params.S * sub.graph.degree(i)}"
                )
        for v, c in new.items():
            result[v] = c
        remove_taken_colors(g, new, residual, runner, label=f"{label}:announce")
    if report is not None:
        report.classes = len(classes)
        report.palette = dc.q
        report.colored = sum(c is not None for c in result)
        report.uncolored_max_degree = max(
            (sum(1 for u in g.adj[v] if result[u] is None) for v in range(g.n) if result[v] is None), default=0
        )
    return result


def degplus1_params(delta: int) -> FrameworkParams:
    """S = 3^r with r = max(1, ceil(sqrt(log2 Delta))); inner: recursive coloring with eps = 1."""
    r = max(1, math.ceil(math.sqrt(math.log2(delta)))) if delta > 1 else 1

    def inner(h: Graph, lists: ListAssignment, base: ProperColoring, runner: Runner) -> PartialColoring:
        o, _ = orient_by_degeneracy(h)
        return recursive_list_color(h, o, lists, 1, r, runner, base=base, label=f"inner(r={r})")

    return FrameworkParams(S=3**r, T=f"recursive r={r}", inner=inner)


def iterate_half_steps(
    g: Graph,
    lists: ListAssignment,
    make_params: Callable[[int], FrameworkParams],
    runner: Runner,
    label: str,
    report: ColoringReport | None = None,
) -> PartialColoring:
    """Apply half-degree steps to the uncolored remainder until everything is colored."""
    check_deg_plus_one(g, lists.lists)
    base_g = linial_coloring(g, runner, label=f"{label}:linial")
    result: PartialColoring = [None] * g.n
    residual = [tuple(l) for l in lists.lists]
    remaining = list(range(g.n))
    delta0 = g.max_degree()
    limit = (math.ceil(math.log2(delta0)) if delta0 > 1 else 0) + 1
    it = 0
    while remaining:
        it += 1
        if it > limit:
            raise InternalError(f"more than {limit} halving iterations needed (Delta={delta0})")
        sub = induced_subgraph(g, remaining)
        h = sub.graph
        dh = h.max_degree()
        if report is not None:
            report.max_degrees.append(dh)
        sub_base = ProperColoring(tuple(base_g.color[v] for v in sub.to_parent), base_g.palette_size)
        base = linial_coloring(h, runner, initial=sub_base, label=f"{label}:{it}:linial")
        params = make_params(dh)
        step_report = StepReport()
        out = half_degree_step(
            h,
            ListAssignment(tuple(residual[v] for v in sub.to_parent), lists.space),
            params,
            base,
            runner,
            label=f"{label}:{it}",
            report=step_report,
        )
        if step_report.uncolored_max_degree > dh // 2:
            raise InternalError(
                f"iteration {it}: uncolored max degree {step_report.uncolored_max_degree} > floor({dh}/2)"
            )
        if report is not None:
            report.steps.append(step_report)
        new = {}
        for i, v in enumerate(sub.to_parent):
            if out[i] is not None:
                new[v] = out[i]
                result[v] = out[i]
        remove_taken_colors(g, new, residual, runner, label=f"{label}:{it}:announce")
        remaining = [v for v in remaining if result[v] is None]
    if report is not None:
        report.iterations = it
    return result


def check_space(g: Graph, lists: ListAssignment, max_space_exponent: int | None) -> None:
    if max_space_exponent is None:
        return
    cap = max(g.max_degree(), 2) ** max_space_exponent
    if lists.size > cap:
        raise PreconditionError(
            f"color space of size {lists.size} exceeds max(Delta,2)^{max_space_exponent} = {cap}"
        )


def deg_plus_one_list_color(
    g: Graph,
    lists: ListAssignment,
    runner: Runner | None = None,
    max_space_exponent: int | None = 3,
    report: ColoringReport | None = None,
    label: str = "degplus1",
) -> PartialColoring:
    """Total (deg+1)-list coloring of a general graph.

    Each halving step uses S = 3^r, r = max(1, ceil(sqrt(log2 Delta))) for
    the current max degree and the recursive list coloring as inner
    algorithm.  The color space may not exceed ``max(Delta,2)^max_space_exponent``
    (None disables the check).
    """
    runner = ensure_runner(runner)
    check_space(g, lists, max_space_exponent)
    out = iterate_half_steps(g, lists, degplus1_params, runner, label, report)
    missing = [v for v, c in enumerate(out) if c is None]
    if missing:
        raise InternalError(f"nodes left uncolored: {missing[:10]}")
    return out


def arboricity_list_color(
    g: Graph,
    a: int,
    epsilon,
    lists: ListAssignment,
    runner: Runner | None = None,
    label: str = "arboricity",
) -> PartialColoring:
    """List coloring with lists of size ``floor((2+eps)*a) + 1``.

    Levels of an H-partition with threshold (2+eps)*a are colored from the
    highest to the lowest; each level is a (deg+1)-list instance once the
    colors of higher-level neighbors are removed.
    """
    runner = ensure_runner(runner)
    eps = as_fraction(epsilon)
    need = math.floor((2 + eps) * a) + 1
    for v in range(g.n):
        if len(lists.lists[v]) < need:
            raise PreconditionError(f"node {v}: list of size {len(lists.lists[v])} < floor((2+eps)a)+1 = {need}")
    hp = h_partition_fixed_bound(g, a, eps, runner, label=f"{label}:hpartition")
    residual = [tuple(l) for l in lists.lists]
    result: PartialColoring = [None] * g.n
    for lvl in range(hp.h, 0, -1):
        nodes = [v for v in range(g.n) if hp.level[v] == lvl]
        sub = induced_subgraph(g, nodes)
        sub_lists = ListAssignment(tuple(residual[v] for v in sub.to_parent), lists.space)
        out = deg_plus_one_list_color(
            sub.graph, sub_lists, runner, max_space_exponent=None, label=f"{label}:level{lvl}"
        )
        new = {v: out[i] for i, v in enumerate(sub.to_parent)}
        for v, c in new.items():
            result[v] = c
        remove_taken_colors(g, new, residual, runner, label=f"{label}:level{lvl}:announce")
    return result
