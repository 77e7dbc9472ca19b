"""
DNF to CNF under random restrictions
====================================

"""

# ## Imports

import numpy as np

from cliqueswitch.circuits import FlatDNF
from cliqueswitch.generators import random_dnf
from cliqueswitch.graphs import Restriction, RngStream, full_edge_mask, sample_restriction
from cliqueswitch.switching import UnswitchFailure, dnf_to_cnf, transversal_tree

# ## Transversal trees
# Leaves of the tree are the clauses of an equivalent CNF.

a, b, c = 1, 2, 4
tree, _ = transversal_tree([a | b, c], 4)
print([w.g for w in tree.nodes if w.tprime_leaf])

# ## A forced failure
# (a) v (b) has no 1-clause CNF; with both edges free the switch fails.

g = FlatDNF(4, (a, b))
print(dnf_to_cnf(g, Restriction.all_star(4), 1))

# ## Failure rate against 2^{-s-1}
# At star rate 1/(2t) the failure rate should stay below 2^{-s-1}.

n, trials = 8, 4000
gen = np.random.default_rng(0)
for t in (1, 2, 3):
    g = random_dnf(n, t, 8, gen)
    for s in (1, 2, 3):
        fails = 0
        for i in range(trials):
            rho = sample_restriction(n, full_edge_mask(n), 1 / (2 * t), RngStream(100 * t + s, i))
            fails += isinstance(dnf_to_cnf(g, rho, s), UnswitchFailure)
        print(f"t={t} s={s} rate={fails / trials:.4f} limit={2 ** (-s - 1):.4f}")
