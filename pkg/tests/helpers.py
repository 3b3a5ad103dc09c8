"""Instance builders shared by the test modules."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from distcolor.graph import Graph, complete, gnp, interval, line_graph, path, ring, star, tree
from distcolor.listreduce import ListAssignment


def rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_lists(sizes, space: int, seed: int) -> ListAssignment:
    """Uniform random subsets of [0, space) with the given sizes."""
    gen = rng(seed)
    lists = []
    for s in sizes:
        s = min(s, space)
        lists.append(tuple(sorted(int(c) for c in gen.choice(space, size=s, replace=False))))
    return ListAssignment(tuple(lists), (0, space))


def deg_plus_one_lists(g: Graph, space: int, seed: int) -> ListAssignment:
    return random_lists([d + 1 for d in g.degrees()], space, seed)


def shifted_lists(g: Graph, space: int, seed: int) -> ListAssignment:
    """{s, ..., s+deg} with a random shift s per node."""
    gen = rng(seed)
    out = []
    for d in g.degrees():
        s = int(gen.integers(0, space - d))
        out.append(tuple(range(s, s + d + 1)))
    return ListAssignment(tuple(out), (0, space))


def recursive_sizes(beta, epsilon, r: int) -> list[int]:
    gamma = (2 + Fraction(epsilon)) ** r
    return [math.ceil(gamma * b) + 1 for b in beta]


def small_corpus():
    """(name, graph) pairs with n <= 20 for exact cross-checks."""
    out = [
        ("K1", complete(1)),
        ("K4", complete(4)),
        ("K6", complete(6)),
        ("C5", ring(5)),
        ("C8", ring(8)),
        ("P6", path(6)),
        ("star7", star(7)),
        ("line_K4", line_graph(complete(4)).line_graph),
    ]
    for s in range(4):
        out.append((f"gnp{s}", gnp(16, 0.3, s)))
        out.append((f"tree{s}", tree(14, s)))
        out.append((f"int{s}", interval(18, s, 0.2)))
    return out
