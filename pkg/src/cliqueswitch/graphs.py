"""Vertices, edges, graphs and monotone restrictions.

Edge sets and vertex sets are Python ints used as bit vectors. Bit ``i`` of
an edge mask is the edge with id ``i``, where ids rank unordered pairs
``{u, v}`` of ``range(n)`` lexicographically by ``(min, max)``. Vertex masks
use bit ``v`` for vertex ``v``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator

import numpy as np

from .errors import DomainError

__all__ = [
    "num_edges",
    "edge_id",
    "edge_pair",
    "edge_table",
    "iter_bits",
    "popcount",
    "mask_of",
    "bools_to_mask",
    "mask_to_bools",
    "full_edge_mask",
    "clique_edges",
    "vertices_of",
    "Graph",
    "Restriction",
    "RngStream",
    "sample_restriction",
    "compose",
    "restriction_to_graph",
    "sample_er_graph",
    "has_k_clique",
]


def num_edges(n: int) -> int:
    return n * (n - 1) // 2


def edge_id(u: int, v: int, n: int) -> int:
    """Rank of the pair ``{u, v}`` among all pairs of ``range(n)``.

    >>> edge_id(2, 3, 4)
    5
    """
    if u == v:
        raise DomainError(f"loop edge ({u}, {v})")
    if not (0 <= u < n and 0 <= v < n):
        raise DomainError(f"vertex out of range for n={n}: ({u}, {v})")
    if u > v:
        u, v = v, u
    # pairs starting with a < u, then offset within row u
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


@lru_cache(maxsize=None)
def edge_table(n: int) -> tuple[tuple[int, int], ...]:
    """All pairs of ``range(n)`` indexed by edge id."""
    return tuple(combinations(range(n), 2))


def edge_pair(e: int, n: int) -> tuple[int, int]:
    if not 0 <= e < num_edges(n):
        raise DomainError(f"edge id {e} out of range for n={n}")
    return edge_table(n)[e]


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def bools_to_mask(arr: np.ndarray) -> int:
    arr = np.asarray(arr, dtype=bool)
    if arr.size == 0:
        return 0
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


def mask_to_bools(mask: int, width: int) -> np.ndarray:
    nbytes = (width + 7) // 8
    raw = np.frombuffer(mask.to_bytes(max(nbytes, 1), "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:width].astype(bool)


def full_edge_mask(n: int) -> int:
    return (1 << num_edges(n)) - 1


@lru_cache(maxsize=4096)
def _clique_edges_cached(vertex_mask: int, n: int) -> int:
    vs = list(iter_bits(vertex_mask))
    m = 0
    for i, u in enumerate(vs):
        for v in vs[i + 1:]:
            m |= 1 << edge_id(u, v, n)
    return m


def clique_edges(vertices: int | Iterable[int], n: int) -> int:
    """Edge mask of ``K(A)``, all pairs inside the vertex set ``A``.

    ``vertices`` may be a vertex mask or an iterable of vertices.
    """
    vm = vertices if isinstance(vertices, int) else mask_of(vertices)
    if vm >> n:
        raise DomainError(f"vertex set {vm:#b} not inside range({n})")
    return _clique_edges_cached(vm, n)


def vertices_of(edges: int, n: int) -> int:
    """Vertex mask of the union of the given edges."""
    table = edge_table(n)
    vm = 0
    for e in iter_bits(edges):
        u, v = table[e]
        vm |= (1 << u) | (1 << v)
    return vm


@dataclass(frozen=True)
class Graph:
    """A graph on ``range(n)``, given by its edge mask."""

    n: int
    edges: int = 0

    def __post_init__(self):
        if self.edges < 0 or self.edges >> num_edges(self.n):
            raise DomainError(f"edge mask exceeds K([{self.n}])")

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> Graph:
        return cls(n, mask_of(edge_id(u, v, n) for u, v in pairs))

    @classmethod
    def complete(cls, n: int) -> Graph:
        return cls(n, full_edge_mask(n))

    def pairs(self) -> list[tuple[int, int]]:
        table = edge_table(self.n)
        return [table[e] for e in iter_bits(self.edges)]

    def __contains__(self, e: int) -> bool:
        return bool(self.edges >> e & 1)

    def __len__(self) -> int:
        return popcount(self.edges)

    def adjacency(self) -> list[int]:
        """Per-vertex neighbour masks."""
        adj = [0] * self.n
        for u, v in self.pairs():
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return adj


@dataclass(frozen=True)
class Restriction:
    """A monotone restriction ``universe -> {1, *}``.

    ``ones`` are the inputs fixed to true; the remaining universe edges are
    stars (free).
    """

    n: int
    universe: int
    ones: int

    def __post_init__(self):
        if self.ones & ~self.universe:
            raise DomainError("restriction ones must lie inside its universe")
        if self.universe >> num_edges(self.n):
            raise DomainError(f"universe exceeds K([{self.n}])")

    @property
    def stars(self) -> int:
        return self.universe & ~self.ones

    @classmethod
    def all_star(cls, n: int, universe: int | None = None) -> Restriction:
        u = full_edge_mask(n) if universe is None else universe
        return cls(n, u, 0)

    @classmethod
    def all_one(cls, n: int, universe: int | None = None) -> Restriction:
        u = full_edge_mask(n) if universe is None else universe
        return cls(n, u, u)

    @classmethod
    def from_stars(cls, n: int, stars: int, universe: int | None = None) -> Restriction:
        u = full_edge_mask(n) if universe is None else universe
        return cls(n, u, u & ~stars)

    def star_list(self) -> list[int]:
        return list(iter_bits(self.stars))

    def is_total(self) -> bool:
        return self.universe == full_edge_mask(self.n)


@dataclass(frozen=True)
class RngStream:
    """A named random stream: equal ``(seed, stream_id)`` give equal draws.

    Backed by numpy's counter-based Philox generator keyed through a
    ``SeedSequence`` with the stream id as spawn key.
    """

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.Philox(ss))

    def child(self, index: int) -> RngStream:
        """A disjoint sub-stream, e.g. one per trial."""
        return RngStream(self.seed, self.stream_id * 1_000_003 + index + 1)


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng).__name__}")


def sample_restriction(n: int, universe: int, p: float, rng) -> Restriction:
    """Draw from ``R_U^p``: each universe edge is a star with probability ``p``.

    Draws are consumed in ascending edge order, one uniform per edge.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"star rate {p} not in [0, 1]")
    gen = _as_generator(rng)
    edges = np.fromiter(iter_bits(universe), dtype=np.int64)
    star = gen.random(edges.size) < p
    stars = 0
    for e in edges[star].tolist():
        stars |= 1 << e
    return Restriction(n, universe, universe & ~stars)


def compose(rho: Restriction, sigma: Restriction) -> Restriction:
    """``sigma o rho``: first apply ``rho``, then ``sigma`` on its stars."""
    if rho.n != sigma.n:
        raise DomainError("restrictions over different vertex counts")
    if sigma.universe != rho.stars:
        raise DomainError("sigma must be defined exactly on the stars of rho")
    return Restriction(rho.n, rho.universe, rho.ones | sigma.ones)


def restriction_to_graph(rho: Restriction) -> Graph:
    """The graph ``rho^{-1}(1)``; needs a restriction on all of ``K([n])``."""
    if not rho.is_total():
        raise DomainError("restriction universe is not all of K([n])")
    return Graph(rho.n, rho.ones)


def sample_er_graph(n: int, edge_prob: float, rng) -> Graph:
    """``ER(n, edge_prob)``; note the argument is the edge *presence* probability."""
    if not 0.0 <= edge_prob <= 1.0:
        raise DomainError(f"edge probability {edge_prob} not in [0, 1]")
    gen = _as_generator(rng)
    present = gen.random(num_edges(n)) < edge_prob
    return Graph(n, bools_to_mask(present))


def has_k_clique(g: Graph, k: int) -> bool:
    """Whether ``g`` contains ``k`` pairwise adjacent vertices.

    Backtracking over candidate sets, pruned when too few candidates remain.
    """
    if k < 1:
        raise DomainError("k must be positive")
    if k == 1:
        return g.n >= 1
    adj = g.adjacency()

    def extend(cands: int, need: int) -> bool:
        if need == 0:
            return True
        while cands:
            if popcount(cands) < need:
                return False
            low = cands & -cands
            v = low.bit_length() - 1
            cands ^= low
            if extend(cands & adj[v], need - 1):
                return True
        return False

    return extend((1 << g.n) - 1, k)
