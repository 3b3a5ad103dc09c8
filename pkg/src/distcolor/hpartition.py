"""Generalized H-partitions by distributed peeling.

A node leaves the residual graph in the first round where its residual
degree is at most ``alpha * beta(v)``; its level is that round number.
``beta(v)`` is the out-degree under a given orientation, or a constant
arboricity bound for :func:`h_partition_fixed_bound`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .engine import PENDING, Broadcast, NodeProgram, RoundLimitExceeded, Runner, ensure_runner
from .graph import Graph, Orientation
from .primitives import as_fraction


class HPartitionStall(RuntimeError):
    """Peeling stopped with a non-empty residual graph."""

    def __init__(self, residual: list[int], level: int):
        self.residual = residual
        self.level = level
        super().__init__(
            f"peeling stalled after level {level}: residual subgraph of {len(residual)} nodes "
            f"has no node within its degree threshold (first nodes: {residual[:10]})"
        )


@dataclass(frozen=True)
class HPartition:
    level: tuple[int, ...]
    h: int
    alpha: Fraction
    beta: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"h": self.h, "levels": list(self.level)}


class PeelProgram(NodeProgram):
    """Local input: the peel threshold (a Fraction); message ``(1,)`` = peeled."""

    def init(self, node, neighbors, local_input):
        return (len(neighbors), local_input)

    def step(self, state, round_no, inbox):
        deg, threshold = state
        deg -= len(inbox)
        if deg <= threshold:
            return (deg, threshold), Broadcast((1,)), round_no
        return (deg, threshold), None, PENDING

    def next_wake(self, state, round_no):
        return None


def _peel(g: Graph, beta: Sequence[int], alpha: Fraction, runner: Runner | None, label: str) -> HPartition:
    runner = ensure_runner(runner)
    inputs = [alpha * b for b in beta]
    try:
        levels = runner.execute(PeelProgram(), g, inputs, label)
    except RoundLimitExceeded as exc:
        stuck = [v for v, x in enumerate(exc.partial_outputs) if x is PENDING]
        done = [x for x in exc.partial_outputs if x is not PENDING]
        raise HPartitionStall(stuck, max(done, default=0)) from exc
    return HPartition(tuple(levels), max(levels, default=0), alpha, tuple(beta))


def generalized_h_partition(
    g: Graph,
    o: Orientation,
    epsilon,
    runner: Runner | None = None,
    label: str = "hpartition",
) -> HPartition:
    """Peel with threshold ``(2 + epsilon) * outdeg_o(v)``."""
    eps = as_fraction(epsilon)
    if not 0 < eps <= 1:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    if o.graph is not g and (o.graph.n != g.n or o.graph.adj != g.adj):
        raise ValueError("orientation belongs to a different graph")
    return _peel(g, o.out_degree, 2 + eps, runner, label)


def h_partition_fixed_bound(
    g: Graph,
    a: int,
    epsilon,
    runner: Runner | None = None,
    label: str = "hpartition",
) -> HPartition:
    """Peel with the constant threshold ``(2 + epsilon) * a``.

    Raises :class:`HPartitionStall` when ``a`` is too small for ``g``.
    """
    if a < 1:
        raise ValueError(f"arboricity bound must be >= 1, got {a}")
    eps = as_fraction(epsilon)
    if eps <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    return _peel(g, [a] * g.n, 2 + eps, runner, label)


def log_depth_bound(m: int, epsilon) -> int:
    """``ceil(log(2m+1) / log(1/(1-eps))) + 1``; equals 1 at eps = 1."""
    eps = float(epsilon)
    if eps >= 1:
        return 1
    return math.ceil(math.log(2 * m + 1) / math.log(1 / (1 - eps))) + 1


def peeling_depth_bound(m: int, epsilon) -> int:
    """Depth bound that follows from the peel rule itself.

    With Phi the number of residual edges, each level leaves
    ``Phi' < Phi / (1 + eps)`` edges, so Phi' <= ceil(Phi/(1+eps)) - 1.
    One more level removes the edgeless remainder.
    """
    eps = as_fraction(epsilon)
    t, steps = m, 0
    while t > 0:
        q = Fraction(t) / (1 + eps)
        t = math.ceil(q) - 1
        steps += 1
    return steps + 1
