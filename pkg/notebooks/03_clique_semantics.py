"""
Cliques: implication sets and the depth-2 CNF
=============================================

"""

# ## Imports

import numpy as np

from cliqueswitch.circuits import truth_table
from cliqueswitch.cliques import (
    clique_cnf,
    clique_implication_set,
    clique_implication_set_definitional,
    clique_indicator,
    enumerate_maximal_clique_free,
    extend_maximal,
)
from cliqueswitch.formats import family_to_text, maximal_to_text
from cliqueswitch.generators import three_clause_example
from cliqueswitch.graphs import Restriction

# ## Which triangles force the three-clause example true?

f = three_clause_example()
full = Restriction.all_star(5)
z = clique_implication_set(f, full, 3)
print(family_to_text(z))

# The fast characterization agrees with the brute-force definition.

print(z == clique_implication_set_definitional(f, full, 3))

# ## Maximal clique-free graphs

print(maximal_to_text(enumerate_maximal_clique_free(3, 3)))
for n, k in [(4, 3), (5, 3), (5, 4), (6, 3), (6, 4)]:
    print(n, k, len(enumerate_maximal_clique_free(n, k)))

# Their non-edges give an AND-of-clauses formula for k-CLIQUE.

for n, k in [(5, 3), (6, 4)]:
    same = np.array_equal(truth_table(clique_cnf(n, k)), truth_table(clique_indicator(n, k)))
    print(f"n={n} k={k}: clause form equals clique indicator: {same}")

# Adding universal vertices lifts a maximal graph to a larger k.

h = enumerate_maximal_clique_free(4, 3).as_graphs()[0]
lifted = extend_maximal(h, 3, 4)
print(h.pairs(), "->", lifted.pairs())
