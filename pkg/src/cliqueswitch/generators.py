"""Seeded random instances: flat forms, circuits, restrictions, toy suites."""
from __future__ import annotations

import numpy as np

from .circuits import CircuitBuilder, FlatCNF, FlatDNF, MonotoneCircuit
from .graphs import Restriction, edge_id, mask_of, num_edges

__all__ = [
    "three_clause_example",
    "random_edge_set",
    "random_cnf",
    "random_dnf",
    "random_circuit",
    "random_restriction",
    "toy_pipeline_suite",
]


def three_clause_example() -> FlatCNF:
    """``(12 ∨ 13) ∧ (12 ∨ 34) ∧ (14 ∨ 25 ∨ 45)`` on five vertices, 1-based labels."""
    n = 5

    def e(u, v):
        return 1 << edge_id(u - 1, v - 1, n)

    return FlatCNF(n, (e(1, 2) | e(1, 3), e(1, 2) | e(3, 4), e(1, 4) | e(2, 5) | e(4, 5)))


def random_edge_set(n: int, width: int, gen: np.random.Generator) -> int:
    picks = gen.choice(num_edges(n), size=width, replace=False)
    return mask_of(int(x) for x in picks)


def random_cnf(n: int, s: int, clauses: int, gen: np.random.Generator) -> FlatCNF:
    return FlatCNF(n, tuple(random_edge_set(n, int(gen.integers(1, s + 1)), gen)
                            for _ in range(clauses)))


def random_dnf(n: int, t: int, monomials: int, gen: np.random.Generator) -> FlatDNF:
    return FlatDNF(n, tuple(random_edge_set(n, int(gen.integers(1, t + 1)), gen)
                            for _ in range(monomials)))


def random_restriction(n: int, p: float, gen: np.random.Generator, max_stars: int | None = None) -> Restriction:
    """All of ``K([n])`` restricted at star rate ``p``; redrawn while too many stars."""
    m = num_edges(n)
    while True:
        star = gen.random(m) < p
        if max_stars is None or star.sum() <= max_stars:
            return Restriction.from_stars(n, mask_of(np.flatnonzero(star).tolist()))


def random_circuit(n: int, gen: np.random.Generator, gates: int = 6, max_fanin: int = 3,
                   const_prob: float = 0.0) -> MonotoneCircuit:
    """A random monotone DAG; the last gate is the output."""
    b = CircuitBuilder(n)
    m = num_edges(n)
    pool = [b.input(int(e)) for e in gen.choice(m, size=min(m, 2 * gates), replace=False)]
    if const_prob and gen.random() < const_prob:
        pool.append(b.const(bool(gen.integers(2))))
    for _ in range(gates):
        fan = int(gen.integers(1, max_fanin + 1))
        kids = sorted(set(int(x) for x in gen.choice(pool, size=min(fan, len(pool)), replace=False)))
        kind = "and" if gen.random() < 0.5 else "or"
        pool.append(b.gate(kind, kids))
    return b.build()


def _alternating(n: int, top: str, depth: int, fanin: int, width: int, gen) -> MonotoneCircuit:
    b = CircuitBuilder(n)
    m = num_edges(n)

    def grow(kind: str, level: int) -> int:
        if level == 1:
            w = int(gen.integers(1, width + 1))
            return b.gate(kind, [b.input(int(e)) for e in sorted(gen.choice(m, size=w, replace=False))])
        other = "or" if kind == "and" else "and"
        kids = [grow(other, level - 1) for _ in range(int(gen.integers(2, fanin + 1)))]
        return b.gate(kind, kids)

    grow(top, depth)
    return b.build()


def toy_pipeline_suite(seed: int = 2024, count: int = 20) -> list[MonotoneCircuit]:
    """Fixed toy circuits on at most six vertices, layered depth at most 4.

    Bottom AND gates have at most two inputs so that DNF layers are 2-DNFs.
    """
    gen = np.random.default_rng(seed)
    shapes = [("and", 3), ("or", 3), ("and", 3), ("and", 2), ("or", 2)]
    out = []
    for i in range(count):
        top, depth = shapes[i % len(shapes)]
        n = 5 + i % 2
        out.append(_alternating(n, top, depth, fanin=2, width=2, gen=gen))
    return out
