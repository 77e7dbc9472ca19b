"""Property-based checks of the combinatorial invariants."""
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from cliqueswitch.circuits import FlatCNF, FlatDNF, apply_restriction, simplify_cnf, truth_table
from cliqueswitch.cliques import clique_implication_set, clique_implication_set_definitional
from cliqueswitch.graphs import Restriction, compose, edge_id, edge_pair, num_edges
from cliqueswitch.switching import UnswitchFailure, cnf_to_dnf, dnf_to_cnf, transversal_tree

N = 5
M = num_edges(N)

edge_sets = st.integers(min_value=1, max_value=(1 << M) - 1)
narrow_sets = st.lists(st.integers(0, M - 1), min_size=1, max_size=3).map(lambda es: sum(1 << e for e in set(es)))
restrictions = st.integers(0, (1 << M) - 1).map(lambda stars: Restriction.from_stars(N, stars))


@given(st.integers(2, 64).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, num_edges(n) - 1))))
def test_edge_id_inverse(ne):
    n, e = ne
    u, v = edge_pair(e, n)
    assert u < v < n
    assert edge_id(u, v, n) == e == edge_id(v, u, n)


@given(st.lists(narrow_sets, min_size=1, max_size=5), edge_sets, edge_sets)
def test_flat_forms_are_monotone(sets, g, h):
    for f in (FlatCNF(N, tuple(sets)), FlatDNF(N, tuple(sets))):
        assert f.evaluate(g) <= f.evaluate(g | h)


@given(st.lists(narrow_sets, min_size=1, max_size=5), restrictions)
def test_restriction_semantics(clauses, rho):
    f = FlatCNF(N, tuple(clauses))
    fr = apply_restriction(f.to_circuit(), rho)
    assert np.array_equal(truth_table(fr, rho), truth_table(f, rho))


@given(restrictions, st.integers(0, (1 << M) - 1))
def test_compose_shrinks_stars(rho, pick):
    sigma = Restriction.from_stars(N, rho.stars & pick, universe=rho.stars)
    both = compose(rho, sigma)
    assert both.stars & ~rho.stars == 0
    assert both.ones & rho.ones == rho.ones
    assert both.universe == rho.universe


@settings(max_examples=60, deadline=None)
@given(st.lists(narrow_sets, min_size=1, max_size=6), restrictions, st.integers(1, 15), st.integers(2, 5))
def test_cnf_to_dnf_one_sided(clauses, rho, t, k):
    f = simplify_cnf(FlatCNF(N, tuple(clauses)), rho)
    res = cnf_to_dnf(f, rho, t, k, exact=True)
    assert not (truth_table(res.g, rho) & ~truth_table(f, rho)).any()
    assert res.exact_loss <= res.loss_bound


@settings(max_examples=60, deadline=None)
@given(st.lists(narrow_sets, min_size=1, max_size=5), restrictions, st.integers(1, 4))
def test_dnf_to_cnf_exact_or_witness(monomials, rho, s):
    g = FlatDNF(N, tuple(monomials))
    res = dnf_to_cnf(g, rho, s)
    if isinstance(res, UnswitchFailure):
        assert bin(res.witness).count("1") == s + 1 and res.witness & ~rho.stars == 0
    else:
        assert np.array_equal(truth_table(res, rho), truth_table(g, rho))


@given(st.lists(narrow_sets, min_size=1, max_size=4))
def test_transversal_leaves_form_equivalent_cnf(monomials):
    tree, _ = transversal_tree(monomials, N)
    cnf = FlatCNF(N, tuple(w.g for w in tree.nodes if w.tprime_leaf))
    assert np.array_equal(truth_table(cnf), truth_table(FlatDNF(N, tuple(monomials))))


@settings(max_examples=40, deadline=None)
@given(st.lists(narrow_sets, min_size=1, max_size=5), restrictions)
def test_fast_and_definitional_oracles_agree(clauses, rho):
    f = FlatCNF(N, tuple(clauses))
    assert clique_implication_set(f, rho, 3) == clique_implication_set_definitional(f, rho, 3)
