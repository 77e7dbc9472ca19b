"""
CNF to DNF with small clique loss
=================================

"""

# ## Imports

import numpy as np

from cliqueswitch.circuits import simplify_cnf, truth_table
from cliqueswitch.formats import tree_to_text
from cliqueswitch.generators import random_cnf, random_restriction, three_clause_example
from cliqueswitch.graphs import Restriction, iter_bits
from cliqueswitch.switching import T_AND_TPRIME, build_trees, check_tree_relations, cnf_to_dnf

# ## The two trees on the three-clause example
# T branches on vertex sets and stops once the clique closure satisfies f;
# T' keeps going on the edge labels alone.

f = three_clause_example()
tree, levels = build_trees(f, mode=T_AND_TPRIME)
print(tree_to_text(tree, one_based=True))


def show(masks):
    return [tuple(v + 1 for v in iter_bits(a)) for a in masks]


print("A_2:", show(levels.A(2)))
print("B_3:", show(levels.B(3)))

# ## The switch itself

full = Restriction.all_star(5)
res = cnf_to_dnf(f, full, t=6, k=3, exact=True)
print("d =", res.d, "exact loss =", res.exact_loss, "bound =", res.loss_bound)

# All five tree relations hold on this instance.

for item in check_tree_relations(f, full).items:
    print(item.item, item.name, item.passed)

# ## Random CNFs
# The exact loss is far below the bound in practice.

gen = np.random.default_rng(1)
rows = []
for _ in range(100):
    n = int(gen.integers(5, 8))
    g = random_cnf(n, 2, 5, gen)
    rho = random_restriction(n, 0.7, gen, max_stars=16)
    r = cnf_to_dnf(simplify_cnf(g, rho), rho, t=6, k=3, exact=True)
    below = not (truth_table(r.g, rho) & ~truth_table(g, rho)).any()
    rows.append((below, r.exact_loss, float(r.loss_bound)))
print("all sound:", all(b for b, _, _ in rows))
print("mean loss", np.mean([x for _, x, _ in rows]), "mean bound", np.mean([y for _, _, y in rows]))
