"""The two switching transformations between monotone CNFs and DNFs.

``cnf_to_dnf`` grows a decision tree labelled simultaneously by vertex sets
(clique closure) and edge sets, following the first unsatisfied clause at
every node, and keeps the clique closures of the shallow leaves as the DNF.
``dnf_to_cnf`` grows the transversal tree of a restricted DNF and succeeds
when no branch needs more than ``s`` edges.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, sqrt

import numpy as np

from .circuits import FlatCNF, FlatDNF, build_dnf, restrict_dnf, simplify_cnf, truth_table
from .cliques import clique_implication_set
from .errors import DomainError, ResourceError
from .graphs import Restriction, clique_edges, edge_table, iter_bits, popcount, vertices_of

__all__ = [
    "TreeNode",
    "CliqueEdgeTree",
    "LevelSets",
    "SwitchResult",
    "UnswitchFailure",
    "RelationItem",
    "TreeRelationReport",
    "depth_for_width",
    "build_trees",
    "cnf_to_dnf",
    "check_tree_relations",
    "transversal_tree",
    "dnf_to_cnf",
]

T_ONLY = "T"
T_AND_TPRIME = "T+T'"


@dataclass
class TreeNode:
    id: int
    a: int  # vertex mask A(v)
    g: int  # edge mask G(v)
    depth: int
    parent: int | None = None
    clause: int | None = None
    children: list[int] = field(default_factory=list)
    in_t: bool = True
    t_leaf: bool = False
    tprime_leaf: bool = False
    frontier: bool = False

    @property
    def status(self) -> str:
        if self.t_leaf:
            return "leaf-in-T"
        if self.tprime_leaf:
            return "leaf-in-T'"
        if self.frontier:
            return "frontier"
        return "internal"


@dataclass
class CliqueEdgeTree:
    n: int
    nodes: list[TreeNode]
    mode: str

    @property
    def root(self) -> TreeNode:
        return self.nodes[0]

    def t_nodes(self) -> list[TreeNode]:
        return [v for v in self.nodes if v.in_t]

    def depth_t(self) -> int:
        return max(v.depth for v in self.nodes if v.in_t)

    def depth_tprime(self) -> int:
        return max(v.depth for v in self.nodes)


def _dedupe(seq):
    seen = set()
    out = []
    for x in seq:
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


@dataclass
class LevelSets:
    """Label families read off a tree.

    ``t_leaves[d]`` / ``t_nodes[d]`` hold vertex masks of T-leaves / all
    T-nodes at depth exactly ``d``; ``tprime_leaves`` holds the edge masks of
    all T'-leaves; ``by_depth[d]`` holds edge labels at depth ``d`` (used for
    the transversal tree).
    """

    t_leaves: dict[int, list[int]] = field(default_factory=dict)
    t_nodes: dict[int, list[int]] = field(default_factory=dict)
    tprime_leaves: list[int] | None = None
    by_depth: dict[int, list[int]] = field(default_factory=dict)

    def A(self, d: int) -> list[int]:
        """Vertex labels of T-leaves with depth at most ``d``."""
        return _dedupe(a for dd in sorted(self.t_leaves) if dd <= d for a in self.t_leaves[dd])

    def B(self, d: int) -> list[int]:
        """Vertex labels of all T-nodes with depth exactly ``d``."""
        return _dedupe(self.t_nodes.get(d, []))

    def G(self) -> list[int]:
        if self.tprime_leaves is None:
            raise DomainError("T' was not built")
        return _dedupe(self.tprime_leaves)

    def H(self, d: int) -> list[int]:
        return _dedupe(self.by_depth.get(d, []))


def depth_for_width(t: int) -> int:
    """Largest ``d`` with ``C(2d, 2) <= t``."""
    if t < 0:
        raise DomainError("width must be non-negative")
    d = 0
    while comb(2 * (d + 1), 2) <= t:
        d += 1
    return d


def build_trees(
    f_rho: FlatCNF,
    depth_limit: int | None = None,
    mode: str = T_ONLY,
    node_budget: int = 200_000,
) -> tuple[CliqueEdgeTree, LevelSets]:
    """Grow T (and optionally T') on an already restricted CNF.

    A T-node is a leaf when ``K(A(v))`` satisfies ``f_rho``; otherwise it
    branches on each edge (ascending id) of the first clause ``K(A(v))``
    misses. With ``depth_limit`` T stops at depth ``depth_limit + 1``. In
    ``"T+T'"`` mode T is grown completely and every T-leaf whose edge label
    does not yet satisfy ``f_rho`` keeps branching on the first clause its
    edge label misses.
    """
    if mode not in (T_ONLY, T_AND_TPRIME):
        raise DomainError(f"unknown mode {mode!r}")
    n = f_rho.n
    table = edge_table(n)
    if mode == T_AND_TPRIME:
        depth_limit = None
    nodes = [TreeNode(0, 0, 0, 0)]
    queue = [0]
    head = 0
    while head < len(queue):
        v = nodes[queue[head]]
        head += 1
        if v.in_t:
            kA = clique_edges(v.a, n)
            clause = f_rho.first_unsatisfied(kA)
            if clause is None:
                v.t_leaf = True
                if mode == T_ONLY:
                    continue
                clause = f_rho.first_unsatisfied(v.g)
                if clause is None:
                    v.tprime_leaf = True
                    continue
                child_in_t = False
            else:
                if depth_limit is not None and v.depth > depth_limit:
                    v.frontier = True
                    continue
                child_in_t = True
        else:
            clause = f_rho.first_unsatisfied(v.g)
            if clause is None:
                v.tprime_leaf = True
                continue
            child_in_t = False
        v.clause = clause
        for e in iter_bits(f_rho.clauses[clause]):
            if len(nodes) >= node_budget:
                raise ResourceError(f"tree exceeds the node budget {node_budget}")
            x, y = table[e]
            w = TreeNode(len(nodes), v.a | (1 << x) | (1 << y), v.g | (1 << e), v.depth + 1,
                         parent=v.id, in_t=child_in_t)
            nodes.append(w)
            v.children.append(w.id)
            queue.append(w.id)
    levels = LevelSets()
    for v in nodes:
        if v.in_t:
            levels.t_nodes.setdefault(v.depth, []).append(v.a)
            if v.t_leaf:
                levels.t_leaves.setdefault(v.depth, []).append(v.a)
    if mode == T_AND_TPRIME:
        levels.tprime_leaves = [v.g for v in nodes if v.tprime_leaf]
    return CliqueEdgeTree(n, nodes, mode), levels


@dataclass(frozen=True)
class SwitchResult:
    """Outcome of a CNF to DNF switch.

    ``g`` stores full clique edge sets ``K(A)``; read it relative to the
    restriction (1-edges are implicitly present). ``width`` counts only the
    star edges of the widest monomial.
    """

    g: FlatDNF
    d: int
    t: int
    s: int
    width: int
    loss_bound: Fraction | None
    statement_bound: float | None
    exact_loss: int | None
    levels: LevelSets


def _check_simplified(f: FlatCNF, rho: Restriction):
    for c in f.clauses:
        if c & rho.ones:
            raise DomainError("CNF has a clause satisfied by the restriction; simplify it first")
        if c & ~rho.universe:
            raise DomainError("CNF mentions edges outside the restriction's universe")


def cnf_to_dnf(f: FlatCNF, rho: Restriction, t: int, k: int | None = None,
               exact: bool = False) -> SwitchResult:
    """Replace a restricted CNF by a DNF of width ``<= t`` lying below it.

    With ``k`` the clique-loss bound ``C(n,k) (s k / n)^(d+1)`` is attached
    (``s`` is the widest clause); ``exact`` also counts the lost k-cliques.
    """
    if t < 1:
        raise DomainError("width t must be at least 1")
    if f.n != rho.n:
        raise DomainError("CNF and restriction disagree on n")
    _check_simplified(f, rho)
    n = f.n
    d = depth_for_width(t)
    _, levels = build_trees(f, depth_limit=d)
    g = build_dnf((clique_edges(a, n) for a in levels.A(d)), n)
    s = f.width
    width = max((popcount(m & rho.stars) for m in g.monomials), default=0)
    loss_bound = statement = exact_loss = None
    if k is not None:
        loss_bound = comb(n, k) * Fraction(s * k, n) ** (d + 1)
        statement = comb(n, k) * (s * k / n) ** sqrt(t / 2)
        if exact:
            exact_loss = len(clique_implication_set(f, rho, k) - clique_implication_set(g, rho, k))
    return SwitchResult(g, d, comb(2 * d, 2), s, width, loss_bound, statement, exact_loss, levels)


@dataclass(frozen=True)
class RelationItem:
    item: int
    name: str
    passed: bool
    detail: str = ""
    counterexample: int | None = None


@dataclass(frozen=True)
class TreeRelationReport:
    items: tuple[RelationItem, ...]
    tree_nodes: int
    depth_t: int
    depth_tprime: int

    @property
    def passed(self) -> bool:
        return all(i.passed for i in self.items)


def _first_violation(lhs: np.ndarray, rhs: np.ndarray, stars: list[int]) -> int | None:
    bad = np.flatnonzero(lhs & ~rhs)
    if bad.size == 0:
        return None
    row = int(bad[0])
    return sum(1 << e for j, e in enumerate(stars) if row >> j & 1)


def check_tree_relations(f: FlatCNF, rho: Restriction, budget: int = 20,
                         node_budget: int = 200_000) -> TreeRelationReport:
    """Verify the five tree relations exhaustively over the star inputs.

    Clique equality (item 3) is checked for every ``k`` in ``2..n``.
    """
    fr = simplify_cnf(f, rho)
    n = f.n
    stars = rho.star_list()
    if len(stars) > budget:
        raise ResourceError(f"{len(stars)} free edges exceed the exhaustion budget {budget}")
    tree, lv = build_trees(fr, mode=T_AND_TPRIME, node_budget=node_budget)
    dT, dT2 = tree.depth_t(), tree.depth_tprime()
    s = fr.width
    tab_f = truth_table(fr, rho, budget)

    def tab(family_vertices):
        return truth_table(build_dnf((clique_edges(a, n) for a in family_vertices), n, prune=False),
                           rho, budget)

    items = []
    tab_g = truth_table(build_dnf(lv.G(), n, prune=False), rho, budget)
    cx = _first_violation(tab_g, tab_f, stars)
    if cx is None:
        cx = _first_violation(tab_f, tab_g, stars)
    items.append(RelationItem(1, "T'-leaf DNF equals f_rho", cx is None, counterexample=cx))

    a_full = lv.A(dT)
    tab_a = tab(a_full)
    cx = _first_violation(tab_a, tab_f, stars)
    items.append(RelationItem(2, "clique-closed T-leaf DNF below f_rho", cx is None, counterexample=cx))

    dnf_a = build_dnf((clique_edges(a, n) for a in a_full), n, prune=False)
    bad_k = [k for k in range(2, n + 1)
             if clique_implication_set(dnf_a, rho, k) != clique_implication_set(fr, rho, k)]
    items.append(RelationItem(3, "same clique implication set as f", not bad_k,
                           detail=f"mismatch at k={bad_k}" if bad_k else ""))

    cx = None
    bad_d = None
    for d in range(dT + 1):
        cx = _first_violation(tab_a, tab(lv.A(d) + lv.B(d + 1)), stars)
        if cx is not None:
            bad_d = d
            break
    items.append(RelationItem(4, "full leaf DNF below depth-d cut DNF", cx is None,
                           detail=f"d={bad_d}" if bad_d is not None else "", counterexample=cx))

    sizes = {d: len(lv.B(d)) for d in range(dT + 2)}
    over = [d for d, b in sizes.items() if b > s ** d]
    items.append(RelationItem(5, "|B_d| <= s^d", not over,
                           detail=f"sizes={sizes}" + (f" violated at {over}" if over else "")))
    return TreeRelationReport(tuple(items), len(tree.nodes), dT, dT2)


@dataclass(frozen=True)
class UnswitchFailure:
    """A transversal-tree branch of ``s + 1`` star edges."""

    witness: int
    s: int


def transversal_tree(monomials, n: int, depth_limit: int | None = None,
                     node_budget: int = 200_000) -> tuple[CliqueEdgeTree, LevelSets]:
    """Tree whose leaf labels are exactly the clauses of a CNF equal to the DNF.

    A node is a leaf when its edge label meets every monomial; otherwise it
    branches on each edge of the first monomial it misses. Nodes at depth
    ``depth_limit`` are not expanded.
    """
    mons = list(monomials)
    if any(m == 0 for m in mons):
        raise DomainError("empty monomial: the DNF is constant true")
    nodes = [TreeNode(0, 0, 0, 0, in_t=False)]
    queue = [0]
    head = 0
    while head < len(queue):
        w = nodes[queue[head]]
        head += 1
        miss = next((j for j, m in enumerate(mons) if not m & w.g), None)
        if miss is None:
            w.tprime_leaf = True
            continue
        if depth_limit is not None and w.depth >= depth_limit:
            w.frontier = True
            continue
        w.clause = miss
        for e in iter_bits(mons[miss]):
            if len(nodes) >= node_budget:
                raise ResourceError(f"tree exceeds the node budget {node_budget}")
            c = TreeNode(len(nodes), 0, w.g | (1 << e), w.depth + 1, parent=w.id, in_t=False)
            nodes.append(c)
            w.children.append(c.id)
            queue.append(c.id)
    for w in nodes:
        w.a = vertices_of(w.g, n)
    levels = LevelSets(tprime_leaves=[w.g for w in nodes if w.tprime_leaf])
    for w in nodes:
        levels.by_depth.setdefault(w.depth, []).append(w.g)
    return CliqueEdgeTree(n, nodes, "transversal"), levels


def dnf_to_cnf(g: FlatDNF, rho: Restriction, s: int) -> FlatCNF | UnswitchFailure:
    """Rewrite ``g_rho`` as a CNF with clauses of at most ``s`` edges, if the tree allows.

    Clauses come out in depth-first leaf order, without subsumption pruning.
    """
    if s < 0:
        raise DomainError("width s must be non-negative")
    gr = restrict_dnf(g, rho)
    if any(m & ~rho.universe for m in gr.monomials):
        raise DomainError("DNF mentions edges outside the restriction's universe")
    if any(m == 0 for m in gr.monomials):
        return FlatCNF(g.n, ())
    tree, levels = transversal_tree(gr.monomials, g.n, depth_limit=s + 1)
    deep = levels.by_depth.get(s + 1)
    if deep:
        return UnswitchFailure(deep[0], s)
    clauses, todo = [], [0]
    while todo:
        w = tree.nodes[todo.pop()]
        if w.tprime_leaf:
            clauses.append(w.g)
        todo.extend(reversed(w.children))
    return FlatCNF(g.n, tuple(clauses))
