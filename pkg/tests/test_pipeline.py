import math
from fractions import Fraction

import numpy as np
import pytest

from cliqueswitch.circuits import CircuitBuilder, FlatCNF, FlatDNF, build_dnf, normalize_alternating, truth_table
from cliqueswitch.cliques import clique_cnf, clique_implication_set, clique_indicator
from cliqueswitch.errors import DomainError
from cliqueswitch.generators import three_clause_example, toy_pipeline_suite
from cliqueswitch.graphs import Restriction, RngStream, clique_edges, edge_id, popcount
from cliqueswitch.pipeline import (
    LossLedger,
    LossRecord,
    PipelineParams,
    asymptotic_schedule,
    clique_appearance_bound,
    clique_gap_experiment,
    dnf_switch_gate_count,
    estimate_satisfaction,
    run_pipeline,
    select_disjoint_monomials,
)
from cliqueswitch.switching import build_trees


def e1(u, v, n):
    return 1 << edge_id(u - 1, v - 1, n)


def test_schedule_examples():
    sched = asymptotic_schedule(1024, 4, c_d=2, c_s=1)
    assert sched.t == 1800
    assert sched.p_layer == 1 / 3600
    assert sched.target_p == pytest.approx((1 / 3600) ** 3)
    assert sched.variant_target_p == 4.0 ** -6
    assert asymptotic_schedule(16, 4, 1, 1).s == 2
    assert asymptotic_schedule(5, 4, 1, 1).s == 1
    with pytest.raises(DomainError):
        asymptotic_schedule(1, 2, 1, 1)


def test_params_defaults_and_validation():
    assert PipelineParams(n=5, k=3, t=4, s=1).p_layer == 1 / 8
    with pytest.raises(DomainError):
        PipelineParams(n=5, k=3, t=0, s=1)
    with pytest.raises(DomainError):
        PipelineParams(n=5, k=3, t=1, s=1, p_layer=1.5)


def test_ledger_totals():
    led = LossLedger([LossRecord(0, 0, Fraction(3, 2), 1), LossRecord(0, 1, Fraction(1, 2), 0)])
    assert led.total_bound == 2 and led.total_exact == 1 and led.sound()
    led.records.append(LossRecord(1, 0, Fraction(1), 2))
    assert not led.sound()


def test_dnf_input_needs_no_stage():
    f = FlatDNF(5, (e1(1, 2, 5) | e1(2, 3, 5), e1(4, 5, 5)))
    tr = run_pipeline(f.to_circuit(), PipelineParams(n=5, k=3, t=2, s=1), RngStream(0, 0))
    assert tr.completed and tr.stages == [] and tr.ledger.records == []
    assert set(tr.final.monomials) == set(f.monomials)


def test_three_clause_single_cnf_stage():
    f = three_clause_example()
    tr = run_pipeline(f.to_circuit(), PipelineParams(n=5, k=3, t=6, s=1), RngStream(0, 0))
    assert tr.completed
    assert [st.direction for st in tr.stages] == ["cnf->dnf"]
    _, lv = build_trees(f, depth_limit=2)
    want = build_dnf((clique_edges(a, 5) for a in lv.A(2)), 5)
    assert np.array_equal(truth_table(tr.final), truth_table(want))
    assert tr.ledger.total_exact == 0


def _and_of_two_dnfs(n=6):
    b = CircuitBuilder(n)
    x = [b.input(edge_id(u, v, n)) for u, v in [(0, 1), (1, 2), (2, 3), (3, 4), (0, 5), (4, 5), (1, 3), (2, 5)]]
    d1 = b.or_(b.and_(x[0], x[1]), b.and_(x[2], x[3]))
    d2 = b.or_(b.and_(x[4], x[5]), b.and_(x[6], x[7]))
    b.and_(d1, d2)
    return b.build()


def test_depth4_toy_circuit_one_sided():
    f = _and_of_two_dnfs()
    lc = normalize_alternating(f)
    assert lc.depth == 4
    completed = 0
    for r in range(40):
        tr = run_pipeline(f, PipelineParams(n=6, k=3, t=2, s=2), RngStream(1, r))
        if not tr.completed:
            continue
        completed += 1
        rho = tr.restriction
        assert not (truth_table(tr.final, rho) & ~truth_table(f, rho)).any()
        assert tr.ledger.sound()
        lost = len(clique_implication_set(f, rho, 3) - clique_implication_set(tr.final, rho, 3))
        assert lost <= tr.ledger.total_bound
    assert completed > 0


def test_restriction_bookkeeping():
    f = _and_of_two_dnfs()
    tr = run_pipeline(f, PipelineParams(n=6, k=3, t=2, s=2), RngStream(2, 0), keep_going=True)
    dnf_stages = [st for st in tr.stages if st.direction == "dnf->cnf"]
    assert tr.nominal_star_rate == math.prod(st.star_rate for st in dnf_stages)
    assert tr.restriction.stars & ~Restriction.all_star(6).stars == 0
    assert [st.stars_after for st in tr.stages] == sorted((st.stars_after for st in tr.stages), reverse=True)


def test_abort_is_an_outcome():
    f = _and_of_two_dnfs()
    outcomes = {run_pipeline(f, PipelineParams(n=6, k=3, t=1, s=1, p_layer=1.0),
                             RngStream(3, r)).outcome for r in range(5)}
    assert outcomes == {"aborted"}


def test_abort_rate_within_union_bound():
    circuit = toy_pipeline_suite()[0]
    lc = normalize_alternating(circuit)
    runs, s = 300, 1
    aborts = sum(not run_pipeline(lc, PipelineParams(n=circuit.n, k=3, t=2, s=s), RngStream(4, r)).completed
                 for r in range(runs))
    rate = aborts / runs
    predicted = dnf_switch_gate_count(lc) * 2.0 ** (-s - 1)
    assert rate <= predicted + 3 * math.sqrt(rate * (1 - rate) / runs)


def test_select_disjoint_already_disjoint():
    n = 4
    f2 = FlatDNF(n, (e1(1, 2, n), e1(3, 4, n)))
    sel = select_disjoint_monomials(f2, Restriction.all_star(n), 3)
    assert sel.x == 2 and sel.pairwise_disjoint()


def test_select_disjoint_shared_vertex():
    # Z = {123, 124, 134}; 123 takes edge 12, then 134 still avoids it and takes 13
    n = 4
    f2 = FlatDNF(n, (e1(1, 2, n), e1(1, 3, n)))
    sel = select_disjoint_monomials(f2, Restriction.all_star(n), 3)
    assert sel.picked == (e1(1, 2, n), e1(1, 3, n))
    assert sel.cliques == ((0, 1, 2), (0, 2, 3))
    assert sel.x == 2 and sel.pairwise_disjoint()


def test_select_disjoint_empty():
    sel = select_disjoint_monomials(FlatDNF(5, ()), Restriction.all_star(5), 3)
    assert sel.x == 0 and sel.z_size == 0


def test_select_disjoint_meets_lower_bound():
    for circuit in toy_pipeline_suite()[:10]:
        for r in range(10):
            tr = run_pipeline(circuit, PipelineParams(n=circuit.n, k=3, t=2, s=1), RngStream(5, r))
            if tr.completed:
                sel = select_disjoint_monomials(tr.final, tr.restriction, 3)
                assert sel.pairwise_disjoint()
                assert sel.x >= sel.lower_bound
                assert all(popcount(p & ~tr.restriction.stars) == 0 for p in sel.picked)


def test_estimate_satisfaction_examples():
    true_f = FlatDNF(5, (0,))
    assert estimate_satisfaction(true_f, 5, 0.3, 100, RngStream(0, 0)).p_hat == 1
    single = FlatDNF(5, (1,))
    est = estimate_satisfaction(single, 5, 0.5, 100_000, RngStream(0, 1))
    assert abs(est.p_hat - 0.5) <= 0.01
    assert est.low < 0.5 < est.high and est.half_width < 0.005
    assert estimate_satisfaction(clique_indicator(6, 3), 6, 1.0, 50, RngStream(0, 2)).p_hat == 1
    with pytest.raises(DomainError):
        estimate_satisfaction(true_f, 5, 0.5, 0, RngStream(0, 3))


def test_clique_appearance_bound():
    assert clique_appearance_bound(5, 3, 0.9) == Fraction(1, 100)
    assert clique_appearance_bound(5, 3, 1) == 0
    with pytest.raises(DomainError):
        clique_appearance_bound(3, 4, 0.5)


def test_gap_experiment_constant_true():
    rep = clique_gap_experiment([FlatCNF(5, ())] * 3, 5, 3, 1.0, 200, RngStream(0, 0))
    assert rep.conjunction.p_hat == 1 and rep.clique.p_hat == 0
    assert rep.witness == 0


def test_gap_experiment_identical_events():
    rep = clique_gap_experiment([clique_indicator(5, 3)], 5, 3, 0.4, 2000, RngStream(0, 1))
    assert rep.conjunction.successes == rep.clique.successes
    assert rep.witness is None and rep.gap == 0


def test_gap_experiment_exhaustive_clause_family():
    clauses = [FlatCNF(5, (c,)) for c in clique_cnf(5, 3).clauses]
    rep = clique_gap_experiment(clauses, 5, 3, 0.5, 1, RngStream(0, 2), exhaustive=True)
    assert rep.trials == 1024
    assert rep.conjunction.successes == rep.clique.successes
    assert rep.exact_conjunction == pytest.approx(rep.exact_clique)
