"""
Graphs, edge ids and monotone restrictions
==========================================

"""

# ## Imports

import numpy as np

from cliqueswitch.formats import graph_to_text, restriction_to_text
from cliqueswitch.graphs import (
    Graph,
    Restriction,
    RngStream,
    compose,
    edge_id,
    edge_table,
    full_edge_mask,
    has_k_clique,
    num_edges,
    popcount,
    restriction_to_graph,
    sample_restriction,
)

# ## Edge ids
# Pairs of {0..n-1} are ranked lexicographically, so K([4]) has ids 0..5.

n = 4
for e, (u, v) in enumerate(edge_table(n)):
    print(e, (u, v), edge_id(v, u, n))

# Graphs are int bitmasks over those ids.

cycle = Graph.from_pairs(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
print(graph_to_text(cycle))
print("triangle in the 5-cycle:", has_k_clique(cycle, 3))

# ## Restrictions
# A restriction sends each live edge to 1 or to a free star.

stream = RngStream(seed=0, stream_id=1)
rho = sample_restriction(5, full_edge_mask(5), 0.4, stream)
print(restriction_to_text(rho))

# Restricting the stars again composes the two; the star rate multiplies.

n = 120
rates = []
for i in range(20):
    r1 = sample_restriction(n, full_edge_mask(n), 0.5, RngStream(i, 0))
    r2 = sample_restriction(n, r1.stars, 0.3, RngStream(i, 1))
    rates.append(popcount(compose(r1, r2).stars) / num_edges(n))
print("mean composed rate", np.mean(rates), "expected", 0.5 * 0.3)

# The 1-edges of a total restriction at star rate p form an ER(n, 1-p) graph.

g = restriction_to_graph(sample_restriction(100, full_edge_mask(100), 0.3, RngStream(2, 0)))
print("edge density", len(g) / num_edges(100))

print(Restriction.all_star(3).stars == full_edge_mask(3))
