"""Graphs, edge orientations, generators and derived graphs.

Node ids are the dense integers ``0..n-1``; they double as the unique
identifiers the distributed algorithms break ties with.
"""

from __future__ import annotations

import bisect
import heapq
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph with sorted adjacency tuples."""

    n: int
    adj: tuple[tuple[int, ...], ...]
    edge_count: int = field(default=0)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v`` in lexicographic order."""
        for u, nbrs in enumerate(self.adj):
            for v in nbrs:
                if u < v:
                    yield u, v

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.adj[u]
        i = bisect.bisect_left(nbrs, v)
        return i < len(nbrs) and nbrs[i] == v

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges()]}

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"


def build_graph(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Canonical graph on ``n`` nodes; duplicate edges are merged."""
    if n < 0:
        raise GraphError(f"negative node count {n}")
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for e in edges:
        u, v = int(e[0]), int(e[1])
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) has an id outside [0, {n})")
        if u == v:
            raise GraphError(f"self-loop at node {u}")
        nbrs[u].add(v)
        nbrs[v].add(u)
    adj = tuple(tuple(sorted(s)) for s in nbrs)
    m = sum(len(a) for a in adj) // 2
    return Graph(n, adj, m)


def empty_graph(n: int) -> Graph:
    return Graph(n, tuple(() for _ in range(n)), 0)


# -- generators ---------------------------------------------------------------

GENERATOR_KINDS = ("ring", "star", "complete", "path", "gnp", "interval", "tree")


def _rng(seed: int) -> np.random.Generator:
    # PCG64 seeded explicitly; every stochastic generator draws from this.
    return np.random.Generator(np.random.PCG64(seed))


def ring(n: int) -> Graph:
    if n < 3:
        return path(n)
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def star(n: int) -> Graph:
    """Node 0 is the center, ``1..n-1`` are leaves."""
    return build_graph(n, [(0, i) for i in range(1, n)])


def complete(n: int) -> Graph:
    return build_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def gnp(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi graph.

    Pairs ``(i, j)``, ``i < j``, are visited in lexicographic order and
    edge ``(i, j)`` is kept iff the next PCG64 uniform draw is ``< p``.
    """
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"gnp probability {p} outside [0, 1]")
    if n < 2:
        return empty_graph(max(n, 0))
    iu, ju = np.triu_indices(n, k=1)
    draws = _rng(seed).random(iu.shape[0])
    keep = draws < p
    return build_graph(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def interval(n: int, seed: int, width: float = 0.1) -> Graph:
    """Interval graph of ``n`` random intervals on [0, 1).

    Left ends are uniform on [0, 1), lengths uniform on [width/2, width].
    Similar lengths keep the neighborhood independence small.
    """
    rng = _rng(seed)
    left = rng.random(n)
    length = width / 2 + rng.random(n) * (width / 2)
    right = left + length
    order = np.argsort(left, kind="stable")
    edges = []
    for a_pos, a in enumerate(order):
        for b in order[a_pos + 1 :]:
            if left[b] >= right[a]:
                break
            edges.append((int(a), int(b)))
    return build_graph(n, edges)


def tree(n: int, seed: int) -> Graph:
    """Random recursive tree: node i > 0 attaches to a uniform earlier node."""
    rng = _rng(seed)
    parents = [int(rng.integers(0, i)) for i in range(1, n)]
    return build_graph(n, [(p, i) for i, p in zip(range(1, n), parents)])


def generate(kind: str, n: int, p: float = 0.1, seed: int = 0, width: float = 0.1) -> Graph:
    if n < 1:
        raise GraphError(f"need n >= 1, got {n}")
    if kind == "ring":
        return ring(n)
    if kind == "star":
        return star(n)
    if kind == "complete":
        return complete(n)
    if kind == "path":
        return path(n)
    if kind == "gnp":
        return gnp(n, p, seed)
    if kind == "interval":
        return interval(n, seed, width)
    if kind == "tree":
        return tree(n, seed)
    raise GraphError(f"unknown graph kind {kind!r}; expected one of {GENERATOR_KINDS}")


# -- orientations --------------------------------------------------------------


@dataclass(frozen=True)
class Orientation:
    """Direction of every edge of ``graph``; ``out[v]`` lists v's out-neighbors."""

    graph: Graph
    out: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        g = self.graph
        if len(self.out) != g.n:
            raise GraphError("orientation size differs from graph size")
        seen = 0
        for v, outs in enumerate(self.out):
            for u in outs:
                if not g.has_edge(v, u):
                    raise GraphError(f"oriented pair ({v}, {u}) is not an edge")
            seen += len(outs)
        if seen != g.edge_count:
            raise GraphError("orientation does not direct every edge exactly once")
        for u, v in g.edges():
            if self.points(u, v) == self.points(v, u):
                raise GraphError(f"edge ({u}, {v}) oriented both or neither way")

    @property
    def out_degree(self) -> list[int]:
        return [len(o) for o in self.out]

    def points(self, u: int, v: int) -> bool:
        """True iff the edge {u, v} is oriented u -> v."""
        outs = self.out[u]
        i = bisect.bisect_left(outs, v)
        return i < len(outs) and outs[i] == v

    def is_acyclic(self) -> bool:
        indeg = [0] * self.graph.n
        for outs in self.out:
            for u in outs:
                indeg[u] += 1
        stack = [v for v in range(self.graph.n) if indeg[v] == 0]
        seen = 0
        while stack:
            v = stack.pop()
            seen += 1
            for u in self.out[v]:
                indeg[u] -= 1
                if indeg[u] == 0:
                    stack.append(u)
        return seen == self.graph.n


def orientation_from_rule(g: Graph, points_up) -> Orientation:
    """Orient each edge ``u < v`` as ``u -> v`` iff ``points_up(u, v)``."""
    out: list[list[int]] = [[] for _ in range(g.n)]
    for u, v in g.edges():
        if points_up(u, v):
            out[u].append(v)
        else:
            out[v].append(u)
    return Orientation(g, tuple(tuple(sorted(o)) for o in out))


def orient_by_id(g: Graph) -> Orientation:
    """Every edge points from the lower id to the higher id."""
    return orientation_from_rule(g, lambda u, v: True)


def degeneracy_order(g: Graph) -> tuple[list[int], int]:
    """Min-degree peeling order (ties -> lowest id) and the degeneracy."""
    deg = g.degrees()
    removed = [False] * g.n
    heap = [(d, v) for v, d in enumerate(deg)]
    heapq.heapify(heap)
    order: list[int] = []
    k = 0
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != deg[v]:
            continue
        removed[v] = True
        order.append(v)
        k = max(k, d)
        for u in g.adj[v]:
            if not removed[u]:
                deg[u] -= 1
                heapq.heappush(heap, (deg[u], u))
    return order, k


def orient_by_degeneracy(g: Graph) -> tuple[Orientation, int]:
    """Acyclic orientation from min-degree peeling.

    Each edge points from the endpoint peeled first to the one peeled later,
    so a node's out-degree equals its residual degree when it was removed.
    Centralized helper for preparing inputs; not round-counted.
    """
    order, k = degeneracy_order(g)
    rank = [0] * g.n
    for i, v in enumerate(order):
        rank[v] = i
    return orientation_from_rule(g, lambda u, v: rank[u] < rank[v]), k


# -- derived graphs ------------------------------------------------------------


@dataclass(frozen=True)
class LineGraphMapping:
    line_graph: Graph
    edge_of_node: tuple[tuple[int, int], ...]
    node_degree_sum: tuple[int, ...]


def line_graph(g: Graph) -> LineGraphMapping:
    """One node per edge of ``g``; adjacent iff the edges share an endpoint."""
    edge_list = list(g.edges())
    index = {e: i for i, e in enumerate(edge_list)}
    incident: list[list[int]] = [[] for _ in range(g.n)]
    for i, (u, v) in enumerate(edge_list):
        incident[u].append(i)
        incident[v].append(i)
    pairs = []
    for inc in incident:
        for a in range(len(inc)):
            for b in range(a + 1, len(inc)):
                pairs.append((inc[a], inc[b]))
    lg = build_graph(len(edge_list), pairs)
    deg = g.degrees()
    sums = tuple(deg[u] + deg[v] for u, v in edge_list)
    assert len(index) == len(edge_list)
    return LineGraphMapping(lg, tuple(edge_list), sums)


@dataclass(frozen=True)
class Subgraph:
    graph: Graph
    to_parent: tuple[int, ...]
    to_child: dict[int, int]


def induced_subgraph(g: Graph, nodes: Iterable[int]) -> Subgraph:
    """Subgraph induced by ``nodes`` with ids remapped in increasing order."""
    keep = sorted(set(nodes))
    for v in keep:
        if not 0 <= v < g.n:
            raise GraphError(f"node {v} outside [0, {g.n})")
    to_child = {v: i for i, v in enumerate(keep)}
    adj = []
    for v in keep:
        adj.append(tuple(to_child[u] for u in g.adj[v] if u in to_child))
    m = sum(len(a) for a in adj) // 2
    return Subgraph(Graph(len(keep), tuple(adj), m), tuple(keep), to_child)


def edge_filtered(g: Graph, keep_edge) -> Graph:
    """Spanning subgraph keeping the edges ``(u, v)`` with ``keep_edge(u, v)``."""
    adj = tuple(tuple(u for u in g.adj[v] if keep_edge(v, u)) for v in range(g.n))
    for v, nbrs in enumerate(adj):
        for u in nbrs:
            if v not in adj[u]:
                raise GraphError("edge filter must be symmetric")
    return Graph(g.n, adj, sum(len(a) for a in adj) // 2)


def restrict_orientation(o: Orientation, h: Graph) -> Orientation:
    """Orientation of a spanning subgraph ``h`` inherited from ``o``."""
    out = tuple(tuple(u for u in o.out[v] if h.has_edge(v, u)) for v in range(h.n))
    return Orientation(h, out)


def check_graph(g: Graph) -> None:
    """Full-scan check of the Graph invariants; raises GraphError."""
    total = 0
    for v, nbrs in enumerate(g.adj):
        if list(nbrs) != sorted(set(nbrs)):
            raise GraphError(f"adjacency of {v} not sorted/unique")
        for u in nbrs:
            if u == v:
                raise GraphError(f"self-loop at {v}")
            if v not in g.adj[u]:
                raise GraphError(f"asymmetric edge ({v}, {u})")
        total += len(nbrs)
    if total != 2 * g.edge_count:
        raise GraphError("edge_count disagrees with adjacency")


# -- text / JSON formats -------------------------------------------------------


def to_edge_list_text(g: Graph) -> str:
    lines = [f"{g.n} {g.edge_count}"]
    lines += [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def from_edge_list_text(text: str) -> Graph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not rows:
        raise GraphError("empty edge-list file")
    n, m = int(rows[0][0]), int(rows[0][1])
    edges = [(int(a), int(b)) for a, b in rows[1:]]
    if len(edges) != m:
        raise GraphError(f"header announces {m} edges, found {len(edges)}")
    return build_graph(n, edges)


def graph_from_json(obj) -> Graph:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return build_graph(int(obj["n"]), obj.get("edges", []))
