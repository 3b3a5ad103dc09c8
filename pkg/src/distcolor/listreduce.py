"""Oriented list color space reduction and the recursive list coloring built on it.

One reduction step splits the color space into p contiguous chunks and
sends every node to one chunk, keeping only the list colors inside it.
Nodes are processed level by level (highest H-partition level first) and,
inside a level, by defective color.  A node picks the chunk x whose
already-decided out-neighbors are few compared to the share of its list
that x keeps, so the ratio |L_v| / beta(v) degrades by at most 2+eps.

:func:`recursive_list_color` applies r such steps with eta about C^(1/r),
leaving every node a list of at most one color.  A node keeps that color
when no out-neighbor ended up in the same one-color subspace.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .engine import PENDING, Broadcast, NodeProgram, Runner, ensure_runner
from .graph import Graph, Orientation, edge_filtered, orientation_from_rule, restrict_orientation
from .hpartition import HPartition, generalized_h_partition, peeling_depth_bound
from .primitives import (
    PartialColoring,
    ProperColoring,
    as_fraction,
    iroot_ceil,
    linial_coloring,
    relative_defective_coloring,
)


class InternalError(RuntimeError):
    """An invariant the analysis guarantees was observed to fail."""


@dataclass(frozen=True)
class ColorSpacePartition:
    """Contiguous chunks of ``[lo, hi)`` of size ``max(1, (hi-lo) // eta)``."""

    lo: int
    hi: int
    eta: int

    def __post_init__(self) -> None:
        if self.hi < self.lo:
            raise ValueError(f"empty interval [{self.lo}, {self.hi})")
        if self.eta < 1:
            raise ValueError(f"eta must be >= 1, got {self.eta}")

    @property
    def size(self) -> int:
        return self.hi - self.lo

    @property
    def chunk(self) -> int:
        return max(1, self.size // self.eta)

    @property
    def p(self) -> int:
        return max(1, -(-self.size // self.chunk))

    def part_of(self, color: int) -> int:
        if not self.lo <= color < self.hi:
            raise ValueError(f"color {color} outside [{self.lo}, {self.hi})")
        return (color - self.lo) // self.chunk

    def part(self, i: int) -> tuple[int, int]:
        lo = self.lo + i * self.chunk
        return lo, min(self.hi, lo + self.chunk)

    def counts(self, lst: Sequence[int]) -> list[int]:
        out = [0] * self.p
        for c in lst:
            out[self.part_of(c)] += 1
        return out


@dataclass(frozen=True)
class ListAssignment:
    lists: tuple[tuple[int, ...], ...]
    space: tuple[int, int]

    def __post_init__(self) -> None:
        lo, hi = self.space
        for v, lst in enumerate(self.lists):
            if any(not lo <= c < hi for c in lst):
                raise ValueError(f"list of node {v} leaves the space [{lo}, {hi})")

    @staticmethod
    def of(lists: Sequence[Sequence[int]], space: tuple[int, int] | int | None = None) -> "ListAssignment":
        norm = tuple(tuple(sorted(set(l))) for l in lists)
        if space is None:
            top = max((l[-1] for l in norm if l), default=-1)
            space = (0, top + 1 if top >= 0 else 1)
        elif isinstance(space, int):
            space = (0, space)
        return ListAssignment(norm, tuple(space))

    @property
    def size(self) -> int:
        return self.space[1] - self.space[0]

    def to_dict(self) -> dict:
        return {"space": list(self.space), "lists": [list(l) for l in self.lists]}


@dataclass(frozen=True)
class ReductionOutcome:
    subspace_index: tuple[int, ...]
    new_orientation: Orientation
    new_lists: tuple[tuple[int, ...], ...]
    new_beta: tuple[int, ...]
    new_spaces: tuple[tuple[int, int], ...]
    #: same-subspace out-neighbors under the new orientation, no list filter
    local_beta: tuple[int, ...]
    partition: HPartition
    dcolor: tuple[int, ...]
    epsilon: Fraction
    eta: int
    meta: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {
            "subspace_index": list(self.subspace_index),
            "new_lists": [list(l) for l in self.new_lists],
            "new_beta": list(self.new_beta),
            "new_spaces": [list(s) for s in self.new_spaces],
            "orientation": [list(o) for o in self.new_orientation.out],
            "levels": list(self.partition.level),
            "epsilon": str(self.epsilon),
            "eta": self.eta,
        }


class AssignProgram(NodeProgram):
    """Chunk selection for one reduction step.

    Local input is a dict with keys level, dcolor, slot, beta, counts, size,
    delta, eps (exact fractions where relevant).  Round 1 announces
    ``(level, dcolor)``.  At its slot the node picks x and announces it;
    one round later it knows the choices of same-slot neighbors and
    outputs ``(x, beta')`` with beta' its out-neighbors sharing x.
    """

    def init(self, node, neighbors, local_input):
        return {"me": node, "info": local_input, "nbr": {}, "xs": {}, "x": None}

    def step(self, state, round_no, inbox):
        info = state["info"]
        if round_no == 1:
            return state, Broadcast((info["level"], info["dcolor"])), PENDING
        state = dict(state)
        if inbox:
            nbr, xs = dict(state["nbr"]), dict(state["xs"])
            for u, msg in inbox.items():
                if len(msg) == 2:
                    nbr[u] = msg
                else:
                    xs[u] = msg[0]
            state["nbr"], state["xs"] = nbr, xs
        slot = info["slot"]
        if round_no == slot:
            x = self._choose(state)
            state["x"] = x
            return state, Broadcast((x,)), PENDING
        if round_no == slot + 1:
            x = state["x"]
            beta_new = sum(1 for u, xu in state["xs"].items() if xu == x and self._out(state, u))
            return state, None, (x, beta_new)
        return state, None, PENDING

    def next_wake(self, state, round_no):
        slot = state["info"]["slot"]
        if round_no < slot:
            return slot
        if round_no == slot:
            return slot + 1
        return None

    @staticmethod
    def _out(state, u) -> bool:
        """Does the new orientation point me -> u?"""
        lv, cv = state["info"]["level"], state["info"]["dcolor"]
        lu, cu = state["nbr"][u]
        if lv != lu:
            return lv < lu
        if cv != cu:
            return cv > cu
        return state["me"] < u

    def _choose(self, state) -> int:
        info = state["info"]
        beta, size, counts = info["beta"], info["size"], info["counts"]
        delta, eps = info["delta"], info["eps"]
        p = len(counts)
        b = [0] * p
        for u, xu in state["xs"].items():
            if self._out(state, u):
                b[xu] += 1
        best = None
        for x in range(p):
            if (p * b[x] + delta * beta) * size <= (2 + eps) * p * counts[x] * beta:
                if best is None or counts[x] > counts[best]:
                    best = x
        if best is None:
            raise InternalError(
                f"node {state['me']}: no feasible subspace; beta={beta} |L|={size} "
                f"counts={counts} b={b} level={info['level']} dcolor={info['dcolor']}"
            )
        return best


def _reduction_step(
    g: Graph,
    o: Orientation,
    lists: Sequence[Sequence[int]],
    spaces: Sequence[tuple[int, int]],
    etas: Sequence[int],
    eps: Fraction,
    base: ProperColoring,
    runner: Runner,
    label: str,
    depth_edges: int,
) -> ReductionOutcome:
    """One reduction step with per-node spaces (independent instances side by side).

    ``depth_edges`` bounds the edge count of the whole network; every node
    derives the same level bound from it to schedule the slots.
    """
    delta = eps / 2
    hp = generalized_h_partition(g, o, delta, runner, label=f"{label}:hpartition")
    parts = {}
    node_part = []
    for v in range(g.n):
        key = (spaces[v][0], spaces[v][1], etas[v])
        if key not in parts:
            parts[key] = ColorSpacePartition(*key)
        node_part.append(parts[key])
    lam = [delta / (node_part[v].p * (2 + delta)) for v in range(g.n)]
    level_graph = edge_filtered(g, lambda u, v: hp.level[u] == hp.level[v])
    dc = relative_defective_coloring(level_graph, lam, base, runner, label=f"{label}:defective")
    h_bound = peeling_depth_bound(depth_edges, delta)
    if hp.h > h_bound:
        raise InternalError(f"H-partition depth {hp.h} exceeds the bound {h_bound}")
    q = dc.q
    beta = o.out_degree
    inputs = []
    for v in range(g.n):
        part = node_part[v]
        inputs.append(
            {
                "level": hp.level[v],
                "dcolor": dc.bucket[v],
                "slot": 1 + (h_bound - hp.level[v]) * q + dc.bucket[v] + 1,
                "beta": beta[v],
                "counts": tuple(part.counts(lists[v])),
                "size": len(lists[v]),
                "delta": delta,
                "eps": eps,
            }
        )
    out = runner.execute(AssignProgram(), g, inputs, f"{label}:assign")
    xs = tuple(x for x, _ in out)
    level, dcol = hp.level, dc.bucket

    def up(u: int, v: int) -> bool:
        if level[u] != level[v]:
            return level[u] < level[v]
        if dcol[u] != dcol[v]:
            return dcol[u] > dcol[v]
        return True

    pi = orientation_from_rule(g, up)
    new_spaces = tuple(node_part[v].part(xs[v]) for v in range(g.n))
    new_lists = tuple(
        tuple(c for c in lists[v] if new_spaces[v][0] <= c < new_spaces[v][1]) for v in range(g.n)
    )
    new_beta = []
    for v in range(g.n):
        mine = set(new_lists[v])
        new_beta.append(
            sum(1 for u in pi.out[v] if xs[u] == xs[v] and spaces[u] == spaces[v] and mine.intersection(new_lists[u]))
        )
    return ReductionOutcome(
        subspace_index=xs,
        new_orientation=pi,
        new_lists=new_lists,
        new_beta=tuple(new_beta),
        new_spaces=new_spaces,
        local_beta=tuple(b for _, b in out),
        partition=hp,
        dcolor=tuple(dcol),
        epsilon=eps,
        eta=max(etas, default=1),
        meta={"defective_palette": q, "level_bound": h_bound, "p": {k: v.p for k, v in parts.items()}},
    )


def oriented_reduction(
    g: Graph,
    o: Orientation,
    lists: ListAssignment,
    eta: int,
    epsilon,
    runner: Runner | None = None,
    base: ProperColoring | None = None,
    label: str = "reduce",
) -> ReductionOutcome:
    """Split the color space into chunks of size ``floor(C/eta)`` and assign each node one.

    Afterwards ``|L'_v| * beta(v) * (2+eps) >= |L_v| * beta'(v)`` for all v,
    where beta is the out-degree under ``o`` and beta' counts out-neighbors
    under the new orientation with an intersecting new list.  An ``eta``
    larger than the space is treated as the space size.
    """
    runner = ensure_runner(runner)
    eps = as_fraction(epsilon)
    if not 0 < eps <= 1:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    if eta < 2:
        raise ValueError(f"eta must be >= 2, got {eta}")
    if base is None:
        base = linial_coloring(g, runner, label=f"{label}:linial")
    eta_eff = max(1, min(eta, lists.size))
    return _reduction_step(
        g,
        o,
        lists.lists,
        [lists.space] * g.n,
        [eta_eff] * g.n,
        eps,
        base,
        runner,
        label,
        g.edge_count,
    )


def recursive_list_color(
    g: Graph,
    o: Orientation,
    lists: ListAssignment,
    epsilon,
    r: int,
    runner: Runner | None = None,
    base: ProperColoring | None = None,
    label: str = "recursive",
    trace: list | None = None,
) -> PartialColoring:
    """Partial list coloring by r reduction steps with eta = ceil(C^(1/r)).

    Every node with ``|L_v| > (2+eps)^r * outdeg_o(v)`` is colored; others
    may output None.  Subspaces are handled in parallel: after each step
    only edges whose endpoints chose the same subspace are kept.
    """
    runner = ensure_runner(runner)
    eps = as_fraction(epsilon)
    if not 0 < eps <= 1:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if base is None:
        base = linial_coloring(g, runner, label=f"{label}:linial")
    eta = max(1, iroot_ceil(lists.size, r))
    cur_g, cur_o = g, o
    cur_lists = [tuple(l) for l in lists.lists]
    spaces = [lists.space] * g.n
    depth_edges = g.edge_count
    for step in range(r):
        if all(hi - lo <= 1 for lo, hi in spaces):
            break
        etas = [max(1, min(eta, hi - lo)) for lo, hi in spaces]
        res = _reduction_step(
            cur_g, cur_o, cur_lists, spaces, etas, eps, base, runner, f"{label}:{step + 1}", depth_edges
        )
        if trace is not None:
            trace.append(res)
        xs, old_spaces = res.subspace_index, spaces
        spaces = list(res.new_spaces)
        cur_lists = list(res.new_lists)
        nxt = edge_filtered(cur_g, lambda u, v: old_spaces[u] == old_spaces[v] and xs[u] == xs[v])
        cur_o = restrict_orientation(res.new_orientation, nxt)
        cur_g = nxt
    final_beta = cur_o.out_degree
    result: PartialColoring = [None] * g.n
    for v in range(g.n):
        lo, hi = spaces[v]
        if hi - lo != 1 and cur_lists[v]:
            raise InternalError(f"node {v} ended with space [{lo}, {hi}) of size != 1")
        if cur_lists[v] and final_beta[v] == 0:
            result[v] = cur_lists[v][0]
    return result


def guaranteed_nodes(lists: ListAssignment, o: Orientation, epsilon, r: int) -> list[int]:
    """Nodes with ``|L_v| > (2+eps)^r * outdeg(v)``."""
    gamma = (2 + as_fraction(epsilon)) ** r
    return [v for v, b in enumerate(o.out_degree) if len(lists.lists[v]) > gamma * b]


__all__ = [
    "ColorSpacePartition",
    "InternalError",
    "ListAssignment",
    "ReductionOutcome",
    "guaranteed_nodes",
    "oriented_reduction",
    "recursive_list_color",
]
