"""
Graphs with small neighborhood independence
===========================================

In a line graph no node has three pairwise non-adjacent neighbors, so
theta = 2.  That is enough to color the edges of any graph with 2*Delta - 1
colors from their lists.
"""

from distcolor.bni import bni_deg_plus_one, edge_list_color
from distcolor.graph import gnp, line_graph
from distcolor.listreduce import ListAssignment
from distcolor.oracle import neighborhood_independence, verify_edge_coloring, verify_proper

g = gnp(80, 0.1, seed=5)
lg = line_graph(g).line_graph
print(f"{g.edge_count} edges, line graph max degree {lg.max_degree()}")
print("neighborhood independence of the line graph:", neighborhood_independence(lg, cap=64))

colors = edge_list_color(g)
print(f"edge coloring uses {len(set(colors.values()))} colors, limit {2 * g.max_degree() - 1}")
print("proper:", verify_edge_coloring(g, colors).ok)

# the same machinery on the line graph with explicit deg+1 lists
C = lg.max_degree() ** 3
lists = ListAssignment(tuple(tuple(range(d + 1)) for d in lg.degrees()), (0, C))
col = bni_deg_plus_one(lg, 2, lists)
print("line graph vertex coloring proper:", verify_proper(lg, col).ok)
