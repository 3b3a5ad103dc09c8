"""List coloring for graphs of bounded neighborhood independence theta.

The weak reduction assigns color subspaces only to nodes of degree above
theta*p, in phases with a halving cap on how many neighbors may already
share the subspace.  :func:`bni_recursive_list_color` recurses on the
high-degree nodes of each subspace and finishes the low-degree nodes with
the direct low-degree coloring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .degplus1 import (
    ColoringReport,
    FrameworkParams,
    PreconditionError,
    check_space,
    iterate_half_steps,
)
from .engine import PENDING, Broadcast, NodeProgram, Runner, ensure_runner
from .graph import Graph, edge_filtered, induced_subgraph, line_graph
from .listreduce import ColorSpacePartition, InternalError, ListAssignment
from .primitives import (
    DefectiveColoring,
    PartialColoring,
    ProperColoring,
    as_fraction,
    iroot_floor,
    linial_coloring,
    low_degree_list_color,
    relative_defective_coloring,
    remove_taken_colors,
)


@dataclass(frozen=True)
class PhaseSchedule:
    deltas: tuple[int, ...]
    q: int

    @staticmethod
    def build(delta: int, q: int) -> "PhaseSchedule":
        ds = [max(delta, 1)]
        while ds[-1] > 1:
            ds.append(-(-ds[-1] // 2))
        return PhaseSchedule(tuple(ds), q)


@dataclass
class ClassBoundReport:
    """Same-class neighbor counts against the two per-class bounds."""

    max_defect: int
    defect_ok: bool
    share_ok: bool
    defect_violations: list = field(default_factory=list)
    share_violations: list = field(default_factory=list)
    max_count: int = 0


def per_class_neighborhood_bound(g: Graph, theta: int, defcol: DefectiveColoring, eps=None) -> ClassBoundReport:
    """Check |N(v) ∩ class x| <= theta*(d+1) (d = max defect) and, if eps is given, <= max(theta, eps*deg(v))."""
    b = defcol.bucket
    d = max((sum(1 for u in g.adj[v] if b[u] == b[v]) for v in range(g.n)), default=0)
    eps = as_fraction(eps) if eps is not None else None
    rep = ClassBoundReport(max_defect=d, defect_ok=True, share_ok=True)
    for v in range(g.n):
        counts: dict[int, int] = {}
        for u in g.adj[v]:
            counts[b[u]] = counts.get(b[u], 0) + 1
        for x, c in sorted(counts.items()):
            rep.max_count = max(rep.max_count, c)
            if c > theta * (d + 1):
                rep.defect_ok = False
                if len(rep.defect_violations) < 10:
                    rep.defect_violations.append((v, x, c))
            if eps is not None and c > max(theta, eps * g.degree(v)):
                rep.share_ok = False
                if len(rep.share_violations) < 10:
                    rep.share_violations.append((v, x, c))
    return rep


@dataclass(frozen=True)
class WeakReductionOutcome:
    subspace_index: tuple[int | None, ...]
    new_lists: tuple[tuple[int, ...] | None, ...]
    new_degree: tuple[int | None, ...]
    new_spaces: tuple[tuple[int, int] | None, ...]
    phase: tuple[int | None, ...]
    p: tuple[int, ...]
    theta: int
    eta: Fraction
    gamma: int
    D: Fraction
    schedule: PhaseSchedule
    gate: ClassBoundReport

    def to_dict(self) -> dict:
        return {
            "subspace_index": list(self.subspace_index),
            "new_lists": [None if l is None else list(l) for l in self.new_lists],
            "new_degree": list(self.new_degree),
            "phase": list(self.phase),
            "theta": self.theta,
            "eta": str(self.eta),
            "gamma": self.gamma,
            "D": str(self.D),
        }


class WeakAssignProgram(NodeProgram):
    """Phase/class schedule of the weak reduction.

    Local input dict: eligible, dclass, q, deltas, counts (list share per
    part), size, deg, p.  The (phase, class) pair (phi, x) owns round
    ``1 + phi*q + x``; an assignment is announced as ``(i,)``.  Output is
    ``(i, phi)`` or ``(None, None)``.
    """

    def init(self, node, neighbors, local_input):
        return (local_input, {})

    def step(self, state, round_no, inbox):
        info, seen = state
        if not info["eligible"]:
            return state, None, (None, None)
        if inbox:
            seen = dict(seen)
            for u, msg in inbox.items():
                seen[u] = msg[0]
        q, x = info["q"], info["dclass"]
        phi, rem = divmod(round_no - 1, q)
        if rem != x or phi >= len(info["deltas"]):
            if phi >= len(info["deltas"]):
                return (info, seen), None, (None, None)
            return (info, seen), None, PENDING
        pick = self._pick(info, seen, info["deltas"][phi])
        if pick is None:
            if phi == len(info["deltas"]) - 1:
                return (info, seen), None, (None, None)
            return (info, seen), None, PENDING
        return (info, seen), Broadcast((pick,)), (pick, phi)

    def next_wake(self, state, round_no):
        info = state[0]
        q, x = info["q"], info["dclass"]
        phi = (round_no - 1) // q
        nxt = 1 + phi * q + x
        if nxt <= round_no:
            nxt += q
        return nxt

    @staticmethod
    def _pick(info, seen, cap):
        p, deg, size, counts = info["p"], info["deg"], info["size"], info["counts"]
        per = [0] * p
        for i in seen.values():
            per[i] += 1
        best = None
        for i in range(p):
            if per[i] <= cap and (cap * p + deg) * size <= 3 * p * counts[i] * deg:
                if best is None or counts[i] > counts[best]:
                    best = i
        return best


def _weak_core(
    g: Graph,
    theta: int,
    lists: Sequence[Sequence[int]],
    spaces: Sequence[tuple[int, int]],
    eta: Fraction,
    base: ProperColoring,
    runner: Runner,
    label: str,
    chunks: Sequence[int] | None = None,
) -> WeakReductionOutcome:
    parts = {}
    node_part = []
    for v in range(g.n):
        lo, hi = spaces[v]
        size = hi - lo
        if chunks is not None:
            s = chunks[v]
        else:
            s = max(1, math.floor(Fraction(size) / eta))
        key = (lo, hi, s)
        if key not in parts:
            # eta of the partition is chosen so that the chunk equals s
            parts[key] = _FixedChunk(lo, hi, s)
        node_part.append(parts[key])
    lam = [Fraction(1, 3 * node_part[v].p) for v in range(g.n)]
    dc = relative_defective_coloring(g, lam, base, runner, label=f"{label}:defective")
    sched = PhaseSchedule.build(g.max_degree(), dc.q)
    inputs = []
    for v in range(g.n):
        part = node_part[v]
        deg = g.degree(v)
        inputs.append(
            {
                "eligible": deg > theta * part.p,
                "dclass": dc.bucket[v],
                "q": dc.q,
                "deltas": sched.deltas,
                "counts": tuple(part.counts(lists[v])),
                "size": len(lists[v]),
                "deg": deg,
                "p": part.p,
            }
        )
    out = runner.execute(WeakAssignProgram(), g, inputs, f"{label}:assign")
    idx = tuple(i for i, _ in out)
    phase = tuple(ph for _, ph in out)
    for v in range(g.n):
        if inputs[v]["eligible"] and idx[v] is None:
            raise InternalError(
                f"node {v} of degree {g.degree(v)} > theta*p = {theta * node_part[v].p} got no subspace"
            )
    new_spaces = tuple(None if idx[v] is None else node_part[v].part(idx[v]) for v in range(g.n))
    new_lists = tuple(
        None if new_spaces[v] is None else tuple(c for c in lists[v] if new_spaces[v][0] <= c < new_spaces[v][1])
        for v in range(g.n)
    )
    new_degree = tuple(
        None if idx[v] is None else sum(1 for u in g.adj[v] if idx[u] == idx[v] and spaces[u] == spaces[v])
        for v in range(g.n)
    )
    gate = per_class_neighborhood_bound(g, theta, dc, eps=None)
    # share check needs per-node eps = 1/p
    cor_ok, cor_viol = True, []
    for v in range(g.n):
        counts: dict[int, int] = {}
        for u in g.adj[v]:
            counts[dc.bucket[u]] = counts.get(dc.bucket[u], 0) + 1
        lim = max(Fraction(theta), Fraction(g.degree(v), node_part[v].p))
        for x, c in counts.items():
            if c > lim:
                cor_ok = False
                if len(cor_viol) < 10:
                    cor_viol.append((v, x, c))
    gate.share_ok, gate.share_violations = cor_ok, cor_viol
    return WeakReductionOutcome(
        subspace_index=idx,
        new_lists=new_lists,
        new_degree=new_degree,
        new_spaces=new_spaces,
        phase=phase,
        p=tuple(pt.p for pt in node_part),
        theta=theta,
        eta=eta,
        gamma=3 * theta,
        D=2 * theta * eta,
        schedule=sched,
        gate=gate,
    )


@dataclass(frozen=True)
class _FixedChunk(ColorSpacePartition):
    """Partition with an explicit chunk size (the eta field holds the chunk)."""

    @property
    def chunk(self) -> int:
        return self.eta


def weak_reduction(
    g: Graph,
    theta: int,
    lists: ListAssignment,
    eta,
    runner: Runner | None = None,
    base: ProperColoring | None = None,
    label: str = "weak",
) -> WeakReductionOutcome:
    """Assign a subspace of size floor(C/eta) to every node of degree > theta*p.

    For assigned v, ``|L'_v| * deg(v) * 3 * theta >= |L_v| * deg'(v)`` when
    the neighborhood independence is at most theta.
    """
    runner = ensure_runner(runner)
    eta = as_fraction(eta)
    if eta <= 1:
        raise ValueError(f"eta must exceed 1, got {eta}")
    if theta < 1:
        raise ValueError(f"theta must be >= 1, got {theta}")
    if base is None:
        base = linial_coloring(g, runner, label=f"{label}:linial")
    return _weak_core(g, theta, lists.lists, [lists.space] * g.n, eta, base, runner, label)


def _bni_core(
    g: Graph,
    theta: int,
    lists: Sequence[Sequence[int]],
    spaces: Sequence[tuple[int, int]],
    r: int,
    base: ProperColoring,
    runner: Runner,
    label: str,
    trace: list | None,
) -> PartialColoring:
    result: PartialColoring = [None] * g.n
    if g.n == 0:
        return result
    delta = g.max_degree()
    if r <= 2:
        d = [min(hi - lo, delta) for lo, hi in spaces]
        return low_degree_list_color(g, d, lists, base, runner, label=f"{label}:base")
    # chunk = floor(C^((r-1)/r)) and p = ceil(C/chunk), exact
    chunks = [max(1, iroot_floor((hi - lo) ** (r - 1), r)) for lo, hi in spaces]
    ps = [-(-(hi - lo) // s) for (lo, hi), s in zip(spaces, chunks)]
    # V_L: deg <= 2*theta*C^(1/r) (deg^r <= (2 theta)^r C) or not eligible (deg <= theta*p)
    d_low_all = [max(iroot_floor((2 * theta) ** r * (hi - lo), r), theta * p) for (lo, hi), p in zip(spaces, ps)]
    low = [v for v in range(g.n) if g.degree(v) <= d_low_all[v]]
    low_set = set(low)
    eta_top = Fraction(max(hi - lo for lo, hi in spaces), max(1, chunks[0]))
    wr = _weak_core(g, theta, lists, spaces, eta_top, base, runner, f"{label}:weak", chunks=chunks)
    if trace is not None:
        trace.append((r, wr, low_set))
    high = [v for v in range(g.n) if v not in low_set]
    for v in high:
        if wr.subspace_index[v] is None:
            raise InternalError(f"high-degree node {v} (deg {g.degree(v)}) was not assigned a subspace")
    sub = induced_subgraph(g, high)
    idx = wr.subspace_index
    same = edge_filtered(sub.graph, lambda a, b: idx[sub.to_parent[a]] == idx[sub.to_parent[b]])
    sub_lists = [wr.new_lists[v] for v in sub.to_parent]
    sub_spaces = [wr.new_spaces[v] for v in sub.to_parent]
    sub_base = ProperColoring(tuple(base.color[v] for v in sub.to_parent), base.palette_size)
    out_high = _bni_core(same, theta, sub_lists, sub_spaces, r - 1, sub_base, runner, f"{label}:r{r - 1}", trace)
    residual = [tuple(l) for l in lists]
    new = {}
    for i, v in enumerate(sub.to_parent):
        if out_high[i] is not None:
            result[v] = out_high[i]
            new[v] = out_high[i]
    remove_taken_colors(g, new, residual, runner, label=f"{label}:announce")
    lsub = induced_subgraph(g, low)
    d_low = [d_low_all[v] for v in lsub.to_parent]
    low_base = ProperColoring(tuple(base.color[v] for v in lsub.to_parent), base.palette_size)
    out_low = low_degree_list_color(
        lsub.graph, d_low, [residual[v] for v in lsub.to_parent], low_base, runner, label=f"{label}:low"
    )
    for i, v in enumerate(lsub.to_parent):
        result[v] = out_low[i]
    return result


def bni_recursive_list_color(
    g: Graph,
    theta: int,
    lists: ListAssignment,
    r: int,
    base: ProperColoring | None = None,
    runner: Runner | None = None,
    label: str = "bni",
    trace: list | None = None,
) -> PartialColoring:
    """Partial list coloring that colors every v with ``|L_v| > (3 theta)^(r-1) * deg(v)``."""
    runner = ensure_runner(runner)
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if base is None:
        base = linial_coloring(g, runner, label=f"{label}:linial")
    return _bni_core(g, theta, lists.lists, [lists.space] * g.n, r, base, runner, label, trace)


def bni_params(theta: int, delta: int) -> FrameworkParams:
    """S = (3 theta)^(r-1), r = max(1, ceil(sqrt(log2 theta * log2 Delta)))."""
    if delta > 1 and theta > 1:
        r = max(1, math.ceil(math.sqrt(math.log2(theta) * math.log2(delta))))
    else:
        r = 1

    def inner(h: Graph, lists: ListAssignment, base: ProperColoring, runner: Runner) -> PartialColoring:
        return bni_recursive_list_color(h, theta, lists, r, base=base, runner=runner, label=f"bni(r={r})")

    return FrameworkParams(S=(3 * theta) ** (r - 1), T=f"bni recursive r={r}", inner=inner)


def bni_deg_plus_one(
    g: Graph,
    theta: int,
    lists: ListAssignment,
    runner: Runner | None = None,
    max_space_exponent: int | None = 3,
    report: ColoringReport | None = None,
    label: str = "bnideg",
) -> PartialColoring:
    """Total (deg+1)-list coloring for neighborhood independence <= theta."""
    runner = ensure_runner(runner)
    if theta < 1:
        raise ValueError(f"theta must be >= 1, got {theta}")
    check_space(g, lists, max_space_exponent)
    out = iterate_half_steps(g, lists, lambda d: bni_params(theta, d), runner, label, report)
    missing = [v for v, c in enumerate(out) if c is None]
    if missing:
        raise InternalError(f"nodes left uncolored: {missing[:10]}")
    return out


def default_edge_lists(g: Graph) -> list[tuple[int, ...]]:
    """{0, ..., 2*Delta-2} for every edge."""
    k = max(1, 2 * g.max_degree() - 1)
    return [tuple(range(k)) for _ in g.edges()]


def edge_list_color(
    g: Graph,
    edge_lists: Sequence[Sequence[int]] | None = None,
    runner: Runner | None = None,
    max_space_exponent: int | None = 3,
) -> dict[tuple[int, int], int]:
    """Color the edges (in ``g.edges()`` order) from lists of size deg(u)+deg(v)-1.

    Runs the theta=2 coloring on the line graph; adjacent edges differ.
    """
    runner = ensure_runner(runner)
    mapping = line_graph(g)
    if edge_lists is None:
        edge_lists = default_edge_lists(g)
    if len(edge_lists) != len(mapping.edge_of_node):
        raise PreconditionError(f"{len(edge_lists)} lists for {len(mapping.edge_of_node)} edges")
    deg = g.degrees()
    for i, (u, v) in enumerate(mapping.edge_of_node):
        if len(set(edge_lists[i])) < deg[u] + deg[v] - 1:
            raise PreconditionError(
                f"edge ({u}, {v}): list of size {len(set(edge_lists[i]))} < deg(u)+deg(v)-1 = {deg[u] + deg[v] - 1}"
            )
    la = ListAssignment.of(edge_lists)
    colors = bni_deg_plus_one(mapping.line_graph, 2, la, runner, max_space_exponent=max_space_exponent)
    return {e: colors[i] for i, e in enumerate(mapping.edge_of_node)}
