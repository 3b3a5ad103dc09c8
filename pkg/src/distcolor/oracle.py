"""Brute-force validators and exact solvers for small instances.

Validators recompute every quantity from the raw inputs instead of trusting
fields of the outcome objects, and report the first 10 violations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .graph import Graph, Orientation

MAX_WITNESSES = 10


class OracleCapExceeded(ValueError):
    pass


@dataclass
class Verdict:
    ok: bool = True
    violations: list = field(default_factory=list)

    def fail(self, witness) -> None:
        self.ok = False
        if len(self.violations) < MAX_WITNESSES:
            self.violations.append(witness)

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": [list(w) if isinstance(w, tuple) else w for w in self.violations]}


def _lists_of(lists) -> Sequence[Sequence[int]]:
    return lists.lists if hasattr(lists, "lists") else lists


def _frac(x) -> Fraction:
    return Fraction(repr(x)) if isinstance(x, float) else Fraction(x)


# -- colorings ---------------------------------------------------------------------


def verify_proper(g: Graph, coloring: Sequence) -> Verdict:
    """Fails iff two adjacent nodes hold the same non-None color."""
    res = Verdict()
    if len(coloring) != g.n:
        res.fail(("length", len(coloring), g.n))
        return res
    for u, v in g.edges():
        if coloring[u] is not None and coloring[u] == coloring[v]:
            res.fail((u, v, coloring[u]))
    return res


def verify_list_respecting(lists, coloring: Sequence) -> Verdict:
    res = Verdict()
    ls = _lists_of(lists)
    if len(ls) != len(coloring):
        res.fail(("length", len(coloring), len(ls)))
        return res
    for v, c in enumerate(coloring):
        if c is not None and c not in set(ls[v]):
            res.fail((v, c))
    return res


def verify_total(coloring: Sequence) -> Verdict:
    res = Verdict()
    for v, c in enumerate(coloring):
        if c is None:
            res.fail((v,))
    return res


def verify_edge_coloring(g: Graph, colors: dict) -> Verdict:
    """Edges sharing an endpoint get different colors; every edge is colored."""
    res = Verdict()
    at: dict[int, dict[int, tuple[int, int]]] = {}
    for u, v in g.edges():
        c = colors.get((u, v))
        if c is None:
            res.fail(("uncolored", u, v))
            continue
        for w in (u, v):
            seen = at.setdefault(w, {})
            if c in seen:
                res.fail((seen[c], (u, v), c))
            else:
                seen[c] = (u, v)
    return res


# -- H-partitions ------------------------------------------------------------------


def verify_h_partition(g: Graph, o: Orientation | None, part, alpha=None, beta: Sequence[int] | None = None) -> Verdict:
    """Each v at level i has at most alpha*beta(v) neighbors at levels >= i.

    beta comes from ``beta``, else from the out-degrees of ``o``, else from
    the partition itself.
    """
    res = Verdict()
    level = part.level
    alpha = _frac(part.alpha if alpha is None else alpha)
    if beta is None:
        beta = [len(x) for x in o.out] if o is not None else part.beta
    if len(level) != g.n:
        res.fail(("length", len(level), g.n))
        return res
    h = max(level, default=0)
    if part.h != h:
        res.fail(("depth", part.h, h))
    for v in range(g.n):
        if not 1 <= level[v] <= max(h, 1):
            res.fail(("level", v, level[v]))
            continue
        later = sum(1 for u in g.adj[v] if level[u] >= level[v])
        if later > alpha * beta[v]:
            res.fail((v, level[v], later, str(alpha * beta[v])))
    return res


# -- color space reductions ----------------------------------------------------------


def verify_oriented_reduction(g: Graph, o: Orientation, lists, outcome, eta: int, gamma) -> Verdict:
    """Chunk sizes, new lists, orientation and the list/out-degree ratio with factor gamma."""
    res = Verdict()
    gamma = _frac(gamma)
    lo, hi = lists.space
    size = hi - lo
    chunk = max(1, size // eta)
    new_o = outcome.new_orientation
    if new_o.graph.n != g.n or new_o.graph.adj != g.adj:
        res.fail(("orientation", "different graph"))
        return res
    directed = sum(len(x) for x in new_o.out)
    if directed != g.edge_count:
        res.fail(("orientation", directed, g.edge_count))
    for u, v in g.edges():
        if (u in new_o.out[v]) == (v in new_o.out[u]):
            res.fail(("edge", u, v))
    xs = outcome.subspace_index
    p = -(-size // chunk) if size else 1
    new_lists = []
    for v in range(g.n):
        i = xs[v]
        if not 0 <= i < p:
            res.fail(("index", v, i))
            new_lists.append(())
            continue
        a, b = lo + i * chunk, min(hi, lo + (i + 1) * chunk)
        if (b - a) * eta > size:
            res.fail(("part", i, b - a))
        want = tuple(c for c in lists.lists[v] if a <= c < b)
        if tuple(outcome.new_lists[v]) != want:
            res.fail(("list", v))
        new_lists.append(set(want))
    beta = [len(x) for x in o.out]
    for v in range(g.n):
        bp = sum(1 for u in new_o.out[v] if xs[u] == xs[v] and new_lists[u] & new_lists[v])
        if outcome.new_beta[v] != bp:
            res.fail(("beta'", v, outcome.new_beta[v], bp))
        if len(new_lists[v]) * beta[v] * gamma < len(lists.lists[v]) * bp:
            res.fail(("ratio", v, len(lists.lists[v]), beta[v], len(new_lists[v]), bp))
    return res


def verify_weak_reduction(g: Graph, lists, outcome, eta, gamma, D) -> Verdict:
    """High-degree nodes assigned, chunk sizes, new lists, degree ratio with factor gamma."""
    res = Verdict()
    eta, gamma, D = _frac(eta), _frac(gamma), _frac(D)
    lo, hi = lists.space
    size = hi - lo
    xs = outcome.subspace_index
    for v in range(g.n):
        deg = g.degree(v)
        i = xs[v]
        if i is None:
            if deg > D:
                res.fail(("unassigned", v, deg))
            continue
        a, b = outcome.new_spaces[v]
        if not lo <= a < b <= hi or (b - a) * eta > size:
            res.fail(("part", v, a, b))
        want = tuple(c for c in lists.lists[v] if a <= c < b)
        if tuple(outcome.new_lists[v]) != want:
            res.fail(("list", v))
        dp = sum(1 for u in g.adj[v] if xs[u] == i)
        if outcome.new_degree[v] != dp:
            res.fail(("deg'", v, outcome.new_degree[v], dp))
        if len(want) * deg * gamma < len(lists.lists[v]) * dp:
            res.fail(("ratio", v, len(lists.lists[v]), deg, len(want), dp))
    return res


def verify_phase_bound(g: Graph, outcome, theta: int) -> Verdict:
    """|S(v)| <= theta * (delta_phi + deg(v)/p) for every assigned v (phi = its phase)."""
    res = Verdict()
    xs = outcome.subspace_index
    for v in range(g.n):
        if xs[v] is None:
            continue
        s = sum(1 for u in g.adj[v] if xs[u] == xs[v])
        d_phi = outcome.schedule.deltas[outcome.phase[v]]
        if s * outcome.p[v] > theta * (d_phi * outcome.p[v] + g.degree(v)):
            res.fail((v, s, d_phi, g.degree(v), outcome.p[v]))
    return res


# -- exact solvers ------------------------------------------------------------------


def exact_list_color(g: Graph, lists, cap: int = 24) -> list[int] | None:
    """A proper list coloring, or None if none exists.

    Backtracking on the node with the fewest remaining colors (ties: lowest
    id), trying colors in increasing order, with forward checking.
    """
    if g.n > cap:
        raise OracleCapExceeded(f"exact solver limited to {cap} nodes, got {g.n}")
    ls = _lists_of(lists)
    domains = [set(ls[v]) for v in range(g.n)]
    color: list[int | None] = [None] * g.n

    def solve() -> bool:
        best = None
        for v in range(g.n):
            if color[v] is None and (best is None or len(domains[v]) < len(domains[best])):
                best = v
        if best is None:
            return True
        v = best
        for c in sorted(domains[v]):
            removed = []
            dead = False
            for u in g.adj[v]:
                if color[u] is None and c in domains[u]:
                    domains[u].discard(c)
                    removed.append(u)
                    if not domains[u]:
                        dead = True
            color[v] = c
            if not dead and solve():
                return True
            color[v] = None
            for u in removed:
                domains[u].add(c)
        return False

    return list(color) if solve() else None


def coloring_is_feasible_certificate(g: Graph, coloring: Sequence[int | None]) -> bool:
    """True iff fixing every colored node to its color leaves a satisfiable instance.

    Uncolored nodes get a private color ``-1 - v``, so
    the answer is True exactly when the colored part is proper.
    """
    singleton = [[c] if c is not None else [-1 - v] for v, c in enumerate(coloring)]
    return exact_list_color(g, singleton, cap=max(24, g.n)) is not None


def _max_independent(nodes: list[int], adj_sets) -> int:
    best = 0

    def grow(cand: list[int], size: int) -> None:
        nonlocal best
        if size + len(cand) <= best:
            return
        if not cand:
            best = max(best, size)
            return
        v = cand[0]
        grow([u for u in cand[1:] if u not in adj_sets[v]], size + 1)
        grow(cand[1:], size)

    grow(nodes, 0)
    return best


def neighborhood_independence(g: Graph, cap: int = 16) -> int:
    """Largest independent set inside a single neighborhood (exact)."""
    if g.max_degree() > cap:
        raise OracleCapExceeded(f"max degree {g.max_degree()} exceeds the cap {cap}")
    adj_sets = [set(a) for a in g.adj]
    return max((_max_independent(list(g.adj[v]), adj_sets) for v in range(g.n)), default=0)


def degeneracy(g: Graph) -> int:
    """Max over the min-degree peeling of the degree at removal time."""
    alive = set(range(g.n))
    deg = {v: g.degree(v) for v in alive}
    k = 0
    while alive:
        v = min(alive, key=lambda x: (deg[x], x))
        k = max(k, deg[v])
        alive.remove(v)
        for u in g.adj[v]:
            if u in alive:
                deg[u] -= 1
    return k


def guaranteed_set(lists, beta: Sequence[int], factor) -> list[int]:
    """Nodes with ``|L_v| > factor * beta(v)``."""
    f = _frac(factor)
    return [v for v, b in enumerate(beta) if len(_lists_of(lists)[v]) > f * b]


__all__ = [
    "OracleCapExceeded",
    "Verdict",
    "coloring_is_feasible_certificate",
    "degeneracy",
    "exact_list_color",
    "guaranteed_set",
    "neighborhood_independence",
    "verify_edge_coloring",
    "verify_h_partition",
    "verify_list_respecting",
    "verify_oriented_reduction",
    "verify_phase_bound",
    "verify_proper",
    "verify_total",
    "verify_weak_reduction",
]
