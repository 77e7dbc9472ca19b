"""
The switching pipeline on toy circuits
======================================

"""

# ## Imports

from collections import Counter

from cliqueswitch.circuits import normalize_alternating, truth_table
from cliqueswitch.generators import toy_pipeline_suite
from cliqueswitch.graphs import RngStream
from cliqueswitch.pipeline import (
    PipelineParams,
    asymptotic_schedule,
    dnf_switch_gate_count,
    run_pipeline,
    select_disjoint_monomials,
)

# ## Widths from the asymptotic schedule
# At desk scale the schedule widths are far larger than any toy circuit.

sched = asymptotic_schedule(1024, 8, c_d=2, c_s=1)
print(sched.t, sched.s, sched.p_layer, sched.target_p, sched.variant_target_p)

# ## One trace

circuit = toy_pipeline_suite()[0]
lc = normalize_alternating(circuit)
print("layers", lc.kinds, "DNF gates switched", dnf_switch_gate_count(lc))

params = PipelineParams(n=circuit.n, k=3, t=2, s=1)
tr = run_pipeline(lc, params, RngStream(0, 3))
for st in tr.stages:
    print(st)
print(tr.outcome, "ledger bound", tr.ledger.total_bound, "exact", tr.ledger.total_exact)

# When the trace completes, the final DNF never says yes where the circuit says no.

if tr.completed:
    rho = tr.restriction
    print("one-sided:", not (truth_table(tr.final, rho) & ~truth_table(circuit, rho)).any())
    sel = select_disjoint_monomials(tr.final, rho, 3)
    print("disjoint picks", sel.x, "lower bound", sel.lower_bound)

# ## Abort frequency over many seeds

outcomes = Counter(run_pipeline(lc, params, RngStream(1, r)).outcome for r in range(300))
print(outcomes, "union bound", dnf_switch_gate_count(lc) * 2 ** (-params.s - 1))
