from fractions import Fraction

import numpy as np
import pytest

from cliqueswitch.circuits import FlatCNF, FlatDNF, simplify_cnf, truth_table
from cliqueswitch.cliques import clique_implication_set
from cliqueswitch.errors import DomainError
from cliqueswitch.generators import random_cnf, random_dnf, random_restriction, three_clause_example
from cliqueswitch.graphs import Restriction, clique_edges, edge_id, full_edge_mask, iter_bits, popcount, vertices_of
from cliqueswitch.switching import (
    T_AND_TPRIME,
    UnswitchFailure,
    build_trees,
    check_tree_relations,
    cnf_to_dnf,
    depth_for_width,
    dnf_to_cnf,
    transversal_tree,
)


def labels(masks):
    """Vertex masks as sorted 1-based tuples."""
    return sorted(tuple(v + 1 for v in iter_bits(a)) for a in masks)


def test_depth_for_width():
    assert [depth_for_width(t) for t in (0, 1, 5, 6, 14, 15, 28)] == [0, 1, 1, 2, 2, 3, 4]


def test_three_clause_trees_hand_trace():
    tree, lv = build_trees(three_clause_example(), depth_limit=2)
    root = tree.root
    assert root.clause == 0
    assert labels(tree.nodes[c].a for c in root.children) == [(1, 2), (1, 3)]
    assert labels(lv.A(2)) == [(1, 2, 4), (1, 2, 4, 5), (1, 2, 5), (1, 3, 4)]
    assert labels(lv.B(3)) == [(1, 2, 3, 4), (1, 2, 3, 4, 5), (1, 2, 3, 5)]


def test_constant_true_tree():
    tree, lv = build_trees(FlatCNF(5, ()), depth_limit=2)
    assert tree.root.t_leaf
    assert lv.A(0) == [0]


def test_tree_label_invariants():
    gen = np.random.default_rng(12)
    for _ in range(50):
        f = random_cnf(6, 3, 4, gen)
        tree, _ = build_trees(f, mode=T_AND_TPRIME)
        for v in tree.nodes:
            assert popcount(v.g) == v.depth
            assert v.g & ~clique_edges(v.a, 6) == 0
            assert vertices_of(v.g, 6) == v.a
            for c in v.children:
                w = tree.nodes[c]
                e = w.g & ~v.g
                assert popcount(e) == 1 and e & f.clauses[v.clause]


def test_b_family_size_and_window():
    gen = np.random.default_rng(13)
    for _ in range(500):
        n = int(gen.integers(4, 8))
        s = int(gen.integers(1, 4))
        f = random_cnf(n, s, int(gen.integers(1, 7)), gen)
        d = int(gen.integers(0, 4))
        _, lv = build_trees(f, depth_limit=d)
        for dd in range(d + 2):
            assert len(lv.B(dd)) <= f.width ** dd
        for b in lv.B(d + 1):
            assert d + 1 <= popcount(b) <= 2 * d + 2


def test_cnf_to_dnf_three_clause():
    full = Restriction.all_star(5)
    f = three_clause_example()
    res = cnf_to_dnf(f, full, t=6, k=3, exact=True)
    assert res.d == 2 and res.t == 6
    assert clique_implication_set(res.g, full, 3) == clique_implication_set(f, full, 3)
    assert res.exact_loss == 0
    assert res.loss_bound == 10 * Fraction(9, 5) ** 3
    assert not (truth_table(res.g) & ~truth_table(f)).any()


def test_cnf_to_dnf_constant_true():
    res = cnf_to_dnf(FlatCNF(5, ()), Restriction.all_star(5), t=3, k=3, exact=True)
    assert res.g.monomials == (0,)
    assert res.exact_loss == 0


def test_cnf_to_dnf_requires_simplified():
    f = three_clause_example()
    rho = Restriction(5, full_edge_mask(5), 1 << edge_id(0, 1, 5))
    with pytest.raises(DomainError):
        cnf_to_dnf(f, rho, t=6)
    cnf_to_dnf(simplify_cnf(f, rho), rho, t=6)


def test_cnf_to_dnf_sound_and_within_bound():
    gen = np.random.default_rng(14)
    for _ in range(100):
        n = int(gen.integers(4, 8))
        s = int(gen.integers(1, 4))
        f = random_cnf(n, s, int(gen.integers(1, 7)), gen)
        rho = random_restriction(n, float(gen.uniform(0.3, 1)), gen, max_stars=16)
        f_rho = simplify_cnf(f, rho)
        t = int(gen.integers(1, 16))
        k = int(gen.integers(2, n + 1))
        res = cnf_to_dnf(f_rho, rho, t, k, exact=True)
        assert not (truth_table(res.g, rho) & ~truth_table(f, rho)).any()
        assert res.exact_loss <= res.loss_bound
        assert res.width <= res.t <= t


def test_tree_relations_three_clause():
    rep = check_tree_relations(three_clause_example(), Restriction.all_star(5))
    assert rep.passed and len(rep.items) == 5


def test_tree_relations_constant_true():
    assert check_tree_relations(FlatCNF(5, ()), Restriction.all_star(5)).passed


def test_tree_relations_random():
    gen = np.random.default_rng(15)
    for _ in range(100):
        f = random_cnf(5, int(gen.integers(1, 4)), int(gen.integers(1, 7)), gen)
        rho = random_restriction(5, float(gen.uniform(0.5, 1)), gen)
        rep = check_tree_relations(f, rho)
        assert rep.passed, [i for i in rep.items if not i.passed]


A, B, C = 1 << 0, 1 << 1, 1 << 2


def test_transversal_two_monomials():
    tree, _ = transversal_tree([A | B, C], 4)
    leaves = sorted(w.g for w in tree.nodes if w.tprime_leaf)
    assert leaves == sorted([A | C, B | C])


def test_transversal_single_monomial():
    tree, _ = transversal_tree([A | B], 4)
    assert sorted(w.g for w in tree.nodes if w.tprime_leaf) == [A, B]


def test_transversal_two_singletons():
    tree, lv = transversal_tree([A, B], 4)
    leaves = [w for w in tree.nodes if w.tprime_leaf]
    assert [w.g for w in leaves] == [A | B] and leaves[0].depth == 2
    assert lv.H(2) == [A | B]


def test_transversal_rejects_empty_monomial():
    with pytest.raises(DomainError):
        transversal_tree([0, A], 4)


def test_dnf_to_cnf_examples():
    n = 4
    full = full_edge_mask(n)
    g = FlatDNF(n, (A, B))
    assert dnf_to_cnf(g, Restriction(n, full, A), 1).clauses == ()
    fail = dnf_to_cnf(g, Restriction.all_star(n), 1)
    assert isinstance(fail, UnswitchFailure) and fail.witness == A | B
    ok = dnf_to_cnf(FlatDNF(n, (A | B,)), Restriction.all_star(n), 2)
    assert isinstance(ok, FlatCNF)


def test_dnf_to_cnf_success_is_equivalent():
    gen = np.random.default_rng(16)
    for _ in range(200):
        g = random_dnf(6, 3, int(gen.integers(1, 6)), gen)
        rho = random_restriction(6, float(gen.uniform(0.1, 0.6)), gen, max_stars=15)
        s = int(gen.integers(1, 4))
        res = dnf_to_cnf(g, rho, s)
        if isinstance(res, UnswitchFailure):
            assert popcount(res.witness) == s + 1
            assert res.witness & ~rho.stars == 0
        else:
            assert res.width <= s
            assert np.array_equal(truth_table(res, rho), truth_table(g, rho))


def test_trees_are_deterministic():
    f = random_cnf(6, 3, 5, np.random.default_rng(17))
    t1, _ = build_trees(f, mode=T_AND_TPRIME)
    t2, _ = build_trees(f, mode=T_AND_TPRIME)
    assert t1 == t2


def test_dnf_to_cnf_depth_first_clause_order():
    # (e0 e1) v (e2 e3): branch on e0 first, so both e0-clauses precede the e1 ones
    cnf = dnf_to_cnf(FlatDNF(4, (0b0011, 0b1100)), Restriction.all_star(4), 2)
    assert cnf.clauses == (0b0101, 0b1001, 0b0110, 0b1010)
