"""
Where the rounds go
===================

Recursing r times with eta = C^(1/r) subspaces per step should trade list
shrinkage against per-step cost.  On simulable sizes the per-step cost is
dominated by the assignment phase, whose length is (levels) x (palette of
the defective coloring).  That palette is capped by the input proper
coloring, here node ids, so it does not shrink as r grows and the total
grows with r instead.
"""

from distcolor.engine import Runner
from distcolor.graph import gnp, orient_by_degeneracy
from distcolor.listreduce import ListAssignment, recursive_list_color

C = 1024
g = gnp(200, 0.1, seed=7)
o, _ = orient_by_degeneracy(g)
lists = ListAssignment(tuple(tuple(range(C)) for _ in range(g.n)), (0, C))

print(" r  rounds  assign  hpartition  defective")
for r in (2, 3, 4, 5):
    run = Runner()
    recursive_list_color(g, o, lists, 1, r, run)
    m = run.metrics
    parts = {k: sum(x for lab, x in m.per_phase if lab.endswith(":" + k)) for k in ("assign", "hpartition", "defective")}
    print(f"{r:2d} {m.rounds:7d} {parts['assign']:7d} {parts['hpartition']:11d} {parts['defective']:10d}")
