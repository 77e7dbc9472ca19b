"""
Clique appearance in random graphs
==================================

"""

# ## Imports

from cliqueswitch.circuits import FlatCNF
from cliqueswitch.cliques import clique_cnf, clique_indicator
from cliqueswitch.graphs import RngStream
from cliqueswitch.pipeline import clique_appearance_bound, clique_gap_experiment, estimate_satisfaction

# ## Union bound vs Monte Carlo
# G ~ ER(n, 1-p); the union bound over k-sets caps the clique probability.

for p in (0.5, 0.8):
    rep = clique_gap_experiment([], 12, 4, p, 5000, RngStream(0, int(10 * p)))
    print(p, rep.clique.p_hat, float(clique_appearance_bound(12, 4, p)))

# ## A family that is true exactly on cliques
# One clause per maximal triangle-free graph: all true iff a triangle exists.

clauses = [FlatCNF(5, (c,)) for c in clique_cnf(5, 3).clauses]
rep = clique_gap_experiment(clauses, 5, 3, 0.5, 1, RngStream(0, 1), exhaustive=True)
print(rep.conjunction.successes, rep.clique.successes, rep.gap)

# Dropping clauses makes the family easier to satisfy; the gap opens and a
# clique-free witness appears.

rep = clique_gap_experiment(clauses[:5], 5, 3, 0.5, 4000, RngStream(0, 2))
print("gap", rep.gap, "witness edges", bin(rep.witness or 0).count("1"))

est = estimate_satisfaction(clique_indicator(6, 3), 6, 0.5, 20000, RngStream(0, 3))
print(f"P(triangle in ER(6, 1/2)) ~ {est.p_hat:.4f} +- {est.half_width:.4f}")
