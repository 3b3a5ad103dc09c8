"""
Peeling a sparse graph, then shrinking every list once
======================================================

A node's out-degree under a low out-degree orientation is its "budget".
Peeling removes every node whose residual degree fits within (2+eps) times
that budget.  One reduction step then moves each node into a subspace of the
color space, where both its list and its out-degree shrink.
"""

from fractions import Fraction

from distcolor.graph import gnp, orient_by_degeneracy
from distcolor.hpartition import generalized_h_partition, peeling_depth_bound
from distcolor.listreduce import ListAssignment, oriented_reduction
from distcolor.oracle import verify_h_partition, verify_oriented_reduction

g = gnp(300, 0.03, seed=1)
o, degen = orient_by_degeneracy(g)
print(f"n={g.n} m={g.edge_count} max degree={g.max_degree()} degeneracy={degen}")

for eps in (Fraction(1, 4), Fraction(1, 2), Fraction(1)):
    hp = generalized_h_partition(g, o, eps)
    ok = verify_h_partition(g, o, hp).ok
    print(f"eps={eps}: {hp.h} levels (bound {peeling_depth_bound(g.edge_count, eps)}), valid={ok}")

# every node gets the full space of 64 colors, split into 4 subspaces
C, eta, eps = 64, 4, Fraction(1)
lists = ListAssignment(tuple(tuple(range(C)) for _ in range(g.n)), (0, C))
res = oriented_reduction(g, o, lists, eta, eps)
print("reduction valid:", verify_oriented_reduction(g, o, lists, res, eta, 2 + eps).ok)

v = max(range(g.n), key=lambda x: o.out_degree[x])
print(f"node {v}: out-degree {o.out_degree[v]} -> {res.new_beta[v]}, list {C} -> {len(res.new_lists[v])} colors")
