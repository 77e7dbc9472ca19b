from itertools import combinations

import numpy as np
import pytest

from cliqueswitch.circuits import FlatCNF, FlatDNF, build_dnf, truth_table
from cliqueswitch.cliques import (
    clique_cnf,
    clique_implication_set,
    clique_implication_set_definitional,
    clique_indicator,
    enumerate_maximal_clique_free,
    extend_maximal,
    is_maximal_clique_free,
    non_implication_witness,
)
from cliqueswitch.errors import DomainError, ResourceError
from cliqueswitch.generators import random_circuit, random_cnf, random_restriction, three_clause_example
from cliqueswitch.graphs import Graph, Restriction, clique_edges, edge_id, full_edge_mask

# labelled maximal k-clique-free graph counts, computed with networkx's
# clique finder over all graphs (independent of this package)
MAXIMAL_COUNTS = {(3, 3): 3, (4, 3): 7, (4, 4): 6, (5, 3): 27, (5, 4): 25, (6, 3): 211, (6, 4): 162}

THREE_CLAUSE_Z = {(0, 1, 3), (0, 1, 4), (0, 2, 3)}  # {1,2,4},{1,2,5},{1,3,4} in 1-based labels


def test_clique_indicator_examples():
    f = clique_indicator(4, 3)
    assert len(f.monomials) == 4
    assert all(bin(m).count("1") == 3 for m in f.monomials)
    assert f.evaluate(full_edge_mask(4))
    c4 = Graph.from_pairs(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    assert not f.evaluate(c4.edges)
    with pytest.raises(DomainError):
        clique_indicator(4, 5)
    with pytest.raises(DomainError):
        clique_indicator(4, 1)


def test_z_oracle_fixtures():
    full = Restriction.all_star(5)
    assert set(clique_implication_set(clique_indicator(5, 3), full, 3).members) == set(combinations(range(5), 3))
    assert len(clique_implication_set(FlatDNF(5, ()), full, 3)) == 0
    assert set(clique_implication_set(three_clause_example(), full, 3).members) == THREE_CLAUSE_Z


def test_definitional_oracle_fixtures():
    full = Restriction.all_star(5)
    f = three_clause_example()
    assert clique_implication_set_definitional(f, full, 3) == clique_implication_set(f, full, 3)
    assert len(clique_implication_set_definitional(FlatDNF(5, (0,)), full, 3)) == 10
    with pytest.raises(ResourceError):
        clique_implication_set_definitional(f, full, 3, budget=4)


def test_oracles_agree_and_witnesses_exist():
    gen = np.random.default_rng(8)
    for _ in range(100):
        f = random_circuit(5, gen, gates=int(gen.integers(2, 8)), const_prob=0.1)
        rho = random_restriction(5, float(gen.uniform(0.3, 1)), gen)
        fast = clique_implication_set(f, rho, 3)
        assert fast == clique_implication_set_definitional(f, rho, 3)
        # the DNF of the returned cliques stays below f_rho
        below = build_dnf([clique_edges(a, 5) for a in fast], 5)
        assert not (truth_table(below, rho) & ~truth_table(f, rho)).any()
        for a in combinations(range(5), 3):
            if a not in fast:
                assert non_implication_witness(f, rho, a) is not None


def test_z_monotone_in_function():
    gen = np.random.default_rng(9)
    for _ in range(500):
        f = random_cnf(5, 3, int(gen.integers(1, 5)), gen)
        smaller = FlatCNF(5, f.clauses + random_cnf(5, 3, 1, gen).clauses)
        rho = random_restriction(5, float(gen.uniform(0.5, 1)), gen)
        assert clique_implication_set(smaller, rho, 3) <= clique_implication_set(f, rho, 3)


def test_enumerate_small():
    fam = enumerate_maximal_clique_free(3, 3)
    paths = {1 << edge_id(0, 1, 3) | 1 << edge_id(0, 2, 3),
             1 << edge_id(0, 1, 3) | 1 << edge_id(1, 2, 3),
             1 << edge_id(0, 2, 3) | 1 << edge_id(1, 2, 3)}
    assert set(fam.graphs) == paths
    assert enumerate_maximal_clique_free(4, 5).graphs == (full_edge_mask(4),)
    with pytest.raises(ResourceError):
        enumerate_maximal_clique_free(7, 3, max_edges=20)


@pytest.mark.parametrize("nk,count", sorted(MAXIMAL_COUNTS.items()))
def test_enumerate_counts_match_networkx(nk, count):
    fam = enumerate_maximal_clique_free(*nk)
    assert len(fam) == count
    assert all(is_maximal_clique_free(g, nk[1]) for g in fam.as_graphs())


def test_clique_cnf_n3():
    cnf = clique_cnf(3, 3)
    assert sorted(cnf.clauses) == sorted(1 << e for e in range(3))
    assert cnf.evaluate(full_edge_mask(3)) and not cnf.evaluate(0b011)


@pytest.mark.parametrize("n,k", [(4, 3), (5, 3), (6, 3), (6, 4)])
def test_clique_cnf_equals_indicator(n, k):
    assert np.array_equal(truth_table(clique_cnf(n, k)), truth_table(clique_indicator(n, k)))


def test_extend_maximal_path():
    h = Graph.from_pairs(3, [(0, 1), (1, 2)])
    g = extend_maximal(h, 3, 4)
    assert g.n == 4
    assert g.edges in enumerate_maximal_clique_free(4, 4).graphs
    assert extend_maximal(h, 3, 3) == h
    with pytest.raises(DomainError):
        extend_maximal(Graph(3, 0), 3, 4)


def test_extend_all_triangle_free_n4():
    target = set(enumerate_maximal_clique_free(5, 4).graphs)
    for h in enumerate_maximal_clique_free(4, 3).as_graphs():
        assert extend_maximal(h, 3, 4).edges in target
