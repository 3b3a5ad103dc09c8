"""
(deg+1)-list coloring, one halving step at a time
=================================================

Each step colors enough nodes that the uncolored part has at most half the
previous maximum degree.  The report records how the degree falls and the
runner records what it cost, in LOCAL and in CONGEST.
"""

import numpy as np

from distcolor.degplus1 import ColoringReport, deg_plus_one_list_color
from distcolor.engine import CONGEST, Runner
from distcolor.graph import gnp
from distcolor.listreduce import ListAssignment
from distcolor.oracle import verify_list_respecting, verify_proper, verify_total

g = gnp(250, 0.06, seed=3)
C = g.max_degree() ** 3
gen = np.random.default_rng(0)
lists = ListAssignment(
    tuple(tuple(sorted(int(c) for c in gen.choice(C, g.degree(v) + 1, replace=False))) for v in range(g.n)),
    (0, C),
)

rep = ColoringReport()
local = Runner()
col = deg_plus_one_list_color(g, lists, local, report=rep)
print("max degree per iteration:", rep.max_degrees)
print("uncolored degree after each step:", [s.uncolored_max_degree for s in rep.steps])
print("proper:", verify_proper(g, col).ok, "list-respecting:", verify_list_respecting(lists, col).ok, "total:", verify_total(col).ok)

congest = Runner(CONGEST, space=C)
assert deg_plus_one_list_color(g, lists, congest) == col
print(f"LOCAL rounds {local.metrics.rounds}, CONGEST rounds {congest.metrics.rounds}")
print(f"largest CONGEST message {congest.metrics.max_payload_bits} bits of {congest.budget_for(g)} allowed")
