"""Clique semantics of monotone circuits.

Covers the k-clique indicator DNF, the clique implication set of a circuit
under a restriction (a fast characterization and a brute-force definitional
oracle), and the depth-2 AND-of-clauses form of k-CLIQUE built from the
maximal k-clique-free graphs.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .circuits import Circuitish, FlatCNF, FlatDNF, graphs_matrix, truth_table
from .errors import DomainError, ResourceError
from .graphs import (
    Graph,
    Restriction,
    clique_edges,
    edge_id,
    full_edge_mask,
    has_k_clique,
    iter_bits,
    mask_of,
    num_edges,
)

__all__ = [
    "CliqueFamily",
    "MaximalFreeFamily",
    "k_subsets",
    "clique_indicator",
    "clique_implication_set",
    "clique_implication_set_definitional",
    "non_implication_witness",
    "is_maximal_clique_free",
    "enumerate_maximal_clique_free",
    "clique_cnf",
    "extend_maximal",
]


def k_subsets(n: int, k: int) -> list[tuple[int, ...]]:
    return list(combinations(range(n), k))


@dataclass(frozen=True)
class CliqueFamily:
    """A set of k-vertex subsets of ``range(n)``, each a sorted tuple."""

    n: int
    k: int
    members: frozenset[tuple[int, ...]]

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(tuple(sorted(a)) for a in self.members))
        for a in self.members:
            if len(a) != self.k or len(set(a)) != self.k or any(not 0 <= v < self.n for v in a):
                raise DomainError(f"{a} is not a {self.k}-subset of range({self.n})")

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, a) -> bool:
        return tuple(sorted(a)) in self.members

    def __iter__(self):
        return iter(self.sorted())

    def sorted(self) -> list[tuple[int, ...]]:
        return sorted(self.members)

    def __sub__(self, other: CliqueFamily) -> CliqueFamily:
        return CliqueFamily(self.n, self.k, self.members - other.members)

    def __le__(self, other: CliqueFamily) -> bool:
        return self.members <= other.members


@dataclass(frozen=True)
class MaximalFreeFamily:
    """Edge masks of the maximal k-clique-free graphs on ``range(n)``, ascending."""

    n: int
    k: int
    graphs: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.graphs)

    def as_graphs(self) -> list[Graph]:
        return [Graph(self.n, g) for g in self.graphs]


def clique_indicator(n: int, k: int) -> FlatDNF:
    """DNF with one monomial ``K(A)`` per k-subset ``A``, in lexicographic order."""
    if not 2 <= k <= n:
        raise DomainError(f"need 2 <= k <= n, got k={k}, n={n}")
    return FlatDNF(n, tuple(clique_edges(a, n) for a in k_subsets(n, k)))


def clique_implication_set(f: Circuitish, rho: Restriction, k: int) -> CliqueFamily:
    """All k-sets ``A`` with ``f(K(A) ∪ rho^{-1}(1)) = 1``.

    Valid families are closed under union and the cheapest input turning on
    the restricted monomial of ``K(A)`` is ``K(A)`` minus the 1-edges, so by
    monotonicity this single evaluation per ``A`` decides membership in the
    maximal family.
    """
    n = f.n
    if rho.n != n:
        raise DomainError("restriction and circuit disagree on n")
    subsets = k_subsets(n, k)
    if not subsets:
        return CliqueFamily(n, k, frozenset())
    X = graphs_matrix(n, [clique_edges(a, n) | rho.ones for a in subsets])
    vals = f.evaluate_many(X)
    return CliqueFamily(n, k, frozenset(a for a, v in zip(subsets, vals) if v))


def _star_bits(edges: int, stars: list[int]) -> int:
    pos = {e: j for j, e in enumerate(stars)}
    return mask_of(pos[e] for e in iter_bits(edges) if e in pos)


def clique_implication_set_definitional(
    f: Circuitish, rho: Restriction, k: int, budget: int = 20
) -> CliqueFamily:
    """Brute-force maximal ``Z`` with ``(i_{K(Z)})_rho <= f_rho``.

    Each candidate clique is tested against every input over the stars; the
    union of the passing candidates is re-checked as a whole before return.
    """
    stars = rho.star_list()
    if len(stars) > budget:
        raise ResourceError(f"{len(stars)} free edges exceed the exhaustion budget {budget}")
    table = truth_table(f, rho, budget=budget)
    rows = np.arange(table.size, dtype=np.int64)
    n = f.n
    passing = []
    covered = np.zeros(table.size, dtype=bool)
    for a in k_subsets(n, k):
        mb = _star_bits(clique_edges(a, n), stars)
        implied = (rows & mb) == mb
        if table[implied].all():
            passing.append(a)
            covered |= implied
    if (covered & ~table).any():
        raise AssertionError("union of valid cliques violates the inequality")
    return CliqueFamily(n, k, frozenset(passing))


def non_implication_witness(f: Circuitish, rho: Restriction, a: Iterable[int]) -> int | None:
    """An input ``u ⊆ stars`` (edge mask) with ``K(A)`` restricted inside ``u`` but ``f_rho(u) = 0``."""
    u = clique_edges(tuple(a), f.n) & rho.stars
    if not f.evaluate(u | rho.ones):
        return u
    return None


def is_maximal_clique_free(g: Graph, k: int) -> bool:
    if has_k_clique(g, k):
        return False
    missing = full_edge_mask(g.n) & ~g.edges
    return all(has_k_clique(Graph(g.n, g.edges | 1 << e), k) for e in iter_bits(missing))


def enumerate_maximal_clique_free(n: int, k: int, max_edges: int = 21) -> MaximalFreeFamily:
    """Every labelled maximal k-clique-free graph on ``range(n)``, by exhaustion.

    All ``2^C(n,2)`` edge masks are scanned at once with numpy.
    """
    m = num_edges(n)
    if m > max_edges:
        raise ResourceError(f"2^{m} graphs exceed the exhaustion budget 2^{max_edges}")
    if k < 1:
        raise DomainError("k must be positive")
    g = np.arange(1 << m, dtype=np.int64)
    has = np.zeros(g.size, dtype=bool)
    if k <= n:
        for a in k_subsets(n, k):
            cm = clique_edges(a, n)
            has |= (g & cm) == cm
    ok = ~has
    for e in range(m):
        bit = np.int64(1 << e)
        ok &= ((g & bit) != 0) | has[g | bit]
    return MaximalFreeFamily(n, k, tuple(int(x) for x in np.flatnonzero(ok)))


def clique_cnf(n: int, k: int, max_edges: int = 21) -> FlatCNF:
    """k-CLIQUE as an AND of clauses, one per maximal k-clique-free graph.

    The clause of ``H`` is its set of non-edges: a graph escapes every such
    clause only if it is contained in some ``H``.
    """
    if not 2 <= k <= n:
        raise DomainError(f"need 2 <= k <= n, got k={k}, n={n}")
    fam = enumerate_maximal_clique_free(n, k, max_edges)
    full = full_edge_mask(n)
    return FlatCNF(n, tuple(full & ~h for h in fam.graphs))


def extend_maximal(h: Graph, k: int, k2: int) -> Graph:
    """Add ``k2 - k`` vertices adjacent to everything.

    A maximal k-clique-free graph becomes a maximal k2-clique-free graph on
    ``n + k2 - k`` vertices; the result is re-checked before returning.
    """
    if k2 < k:
        raise DomainError("k2 must be at least k")
    if not is_maximal_clique_free(h, k):
        raise DomainError("input graph is not maximal k-clique-free")
    if k2 == k:
        return h
    n2 = h.n + k2 - k
    edges = [edge_id(u, v, n2) for u, v in h.pairs()]
    for w in range(h.n, n2):
        edges.extend(edge_id(w, x, n2) for x in range(n2) if x != w)
    out = Graph(n2, mask_of(edges))
    if not is_maximal_clique_free(out, k2):
        raise AssertionError("extension is not maximal k2-clique-free")
    return out

