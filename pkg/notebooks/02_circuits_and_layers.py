"""
Monotone circuits, restriction and alternating layers
=====================================================

"""

# ## Imports

import numpy as np

from cliqueswitch.circuits import CircuitBuilder, apply_restriction, as_flat, measure, normalize_alternating, truth_table
from cliqueswitch.formats import circuit_to_json
from cliqueswitch.generators import random_circuit, three_clause_example
from cliqueswitch.graphs import Restriction, edge_id, full_edge_mask

# ## The three-clause example
# (12 v 13) ^ (12 v 34) ^ (14 v 25 v 45) over five vertices, 1-based labels.

f = three_clause_example()
table = truth_table(f)
print("true on", table.sum(), "of", table.size, "graphs")
print(measure(f.to_circuit()))

# Fixing edge 12 to 1 satisfies the first two clauses.

one_12 = Restriction(5, full_edge_mask(5), 1 << edge_id(0, 1, 5))
fr = apply_restriction(f.to_circuit(), one_12)
print(as_flat(fr, "cnf"))

# ## Building circuits by hand

b = CircuitBuilder(4)
x = [b.input(e) for e in range(4)]
b.or_(b.and_(x[0], x[1]), b.and_(x[2], b.or_(x[3], x[0])))
g = b.build()
print(circuit_to_json(g))

# ## Layered form
# Normalization gives strictly alternating layers over a fan-in-1 bottom.

lc = normalize_alternating(g)
print(lc.kinds, [len(layer) for layer in lc.layers])
print("same function:", np.array_equal(truth_table(lc), truth_table(g)))

gen = np.random.default_rng(0)
growth = []
for _ in range(200):
    h = random_circuit(5, gen, gates=8)
    before, after = measure(h), normalize_alternating(h)
    growth.append((after.depth - before.depth, after.size / before.size))
print("max depth growth", max(d for d, _ in growth), "max size ratio", max(r for _, r in growth))
