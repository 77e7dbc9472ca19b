"""Monotone circuits over edge variables, flat CNF/DNF forms and layering.

All circuit-like objects (``MonotoneCircuit``, ``FlatCNF``, ``FlatDNF``,
``LayeredCircuit``) support ``evaluate(mask)`` on one graph and
``evaluate_many(X)`` on a boolean matrix whose rows are graphs and whose
columns are edge ids. ``truth_table`` builds that matrix for every input
``u ∪ rho^{-1}(1)`` with ``u`` ranging over subsets of the stars of ``rho``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DomainError, ResourceError
from .graphs import Graph, Restriction, iter_bits, num_edges, popcount

__all__ = [
    "AND",
    "OR",
    "INPUT",
    "CONST",
    "Gate",
    "MonotoneCircuit",
    "CircuitBuilder",
    "FlatCNF",
    "FlatDNF",
    "LayeredCircuit",
    "CircuitMeasure",
    "evaluate",
    "input_matrix",
    "graphs_matrix",
    "truth_table",
    "apply_restriction",
    "normalize_alternating",
    "build_dnf",
    "measure",
    "simplify_cnf",
    "restrict_dnf",
    "as_flat",
]

AND, OR, INPUT, CONST = "and", "or", "input", "const"
_KINDS = (AND, OR, INPUT, CONST)


def _other(kind: str) -> str:
    return OR if kind == AND else AND


@dataclass(frozen=True)
class Gate:
    kind: str
    children: tuple[int, ...] = ()
    edge: int | None = None
    value: bool | None = None


@dataclass(frozen=True)
class MonotoneCircuit:
    """A DAG of AND/OR gates over edge inputs of ``K([n])``.

    Children of gate ``i`` always have indices below ``i``.
    """

    n: int
    gates: tuple[Gate, ...]
    output: int

    def __post_init__(self):
        m = num_edges(self.n)
        if not 0 <= self.output < len(self.gates):
            raise DomainError("output index out of range")
        for i, g in enumerate(self.gates):
            if g.kind not in _KINDS:
                raise DomainError(f"gate {i}: unknown kind {g.kind!r}")
            if g.kind in (AND, OR):
                if not g.children:
                    raise DomainError(f"gate {i}: {g.kind} gate without children")
                if any(not 0 <= c < i for c in g.children):
                    raise DomainError(f"gate {i}: children must precede the gate")
            elif g.children:
                raise DomainError(f"gate {i}: {g.kind} gate cannot have children")
            if g.kind == INPUT and (g.edge is None or not 0 <= g.edge < m):
                raise DomainError(f"gate {i}: input edge {g.edge} out of range")
            if g.kind == CONST and g.value is None:
                raise DomainError(f"gate {i}: constant without a value")

    def evaluate(self, edges: int | Graph) -> bool:
        x = edges.edges if isinstance(edges, Graph) else edges
        val: list[bool] = []
        for g in self.gates:
            if g.kind == INPUT:
                val.append(bool(x >> g.edge & 1))
            elif g.kind == AND:
                val.append(all(val[c] for c in g.children))
            elif g.kind == OR:
                val.append(any(val[c] for c in g.children))
            else:
                val.append(bool(g.value))
        return val[self.output]

    def evaluate_many(self, X: np.ndarray) -> np.ndarray:
        rows = X.shape[0]
        val: list[np.ndarray] = []
        for g in self.gates:
            if g.kind == INPUT:
                val.append(X[:, g.edge])
            elif g.kind == CONST:
                val.append(np.full(rows, bool(g.value)))
            else:
                acc = val[g.children[0]].copy()
                op = np.logical_and if g.kind == AND else np.logical_or
                for c in g.children[1:]:
                    op(acc, val[c], out=acc)
                val.append(acc)
        return val[self.output]

    def reachable(self) -> list[int]:
        seen = [False] * len(self.gates)
        seen[self.output] = True
        for i in range(self.output, -1, -1):
            if seen[i]:
                for c in self.gates[i].children:
                    seen[c] = True
        return [i for i, s in enumerate(seen) if s]

    def input_edges(self) -> int:
        m = 0
        for g in self.gates:
            if g.kind == INPUT:
                m |= 1 << g.edge
        return m


class CircuitBuilder:
    """Incremental construction of a ``MonotoneCircuit``; inputs are shared."""

    def __init__(self, n: int):
        self.n = n
        self.gates: list[Gate] = []
        self._inputs: dict[int, int] = {}

    def input(self, e: int) -> int:
        if e not in self._inputs:
            self.gates.append(Gate(INPUT, edge=e))
            self._inputs[e] = len(self.gates) - 1
        return self._inputs[e]

    def const(self, value: bool) -> int:
        self.gates.append(Gate(CONST, value=bool(value)))
        return len(self.gates) - 1

    def gate(self, kind: str, children: Iterable[int]) -> int:
        self.gates.append(Gate(kind, tuple(children)))
        return len(self.gates) - 1

    def and_(self, *children: int) -> int:
        return self.gate(AND, children)

    def or_(self, *children: int) -> int:
        return self.gate(OR, children)

    def build(self, output: int | None = None) -> MonotoneCircuit:
        out = len(self.gates) - 1 if output is None else output
        return MonotoneCircuit(self.n, tuple(self.gates), out)


def _check_edges(masks: Sequence[int], n: int, what: str):
    limit = num_edges(n)
    for m in masks:
        if m < 0 or m >> limit:
            raise DomainError(f"{what} {m:#b} has edges outside K([{n}])")


@dataclass(frozen=True)
class FlatCNF:
    """AND of OR-clauses given as edge masks.

    The empty clause list is the constant true function. An empty clause
    (mask 0) can never be satisfied and makes the function constant false.
    """

    n: int
    clauses: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))
        _check_edges(self.clauses, self.n, "clause")

    @property
    def width(self) -> int:
        return max((popcount(c) for c in self.clauses), default=0)

    def evaluate(self, edges: int | Graph) -> bool:
        x = edges.edges if isinstance(edges, Graph) else edges
        return all(c & x for c in self.clauses)

    def evaluate_many(self, X: np.ndarray) -> np.ndarray:
        out = np.ones(X.shape[0], dtype=bool)
        for c in self.clauses:
            out &= X[:, list(iter_bits(c))].any(axis=1)
        return out

    def first_unsatisfied(self, edges: int) -> int | None:
        for j, c in enumerate(self.clauses):
            if not c & edges:
                return j
        return None

    def to_circuit(self) -> MonotoneCircuit:
        b = CircuitBuilder(self.n)
        if not self.clauses:
            b.const(True)
            return b.build()
        if any(c == 0 for c in self.clauses):
            b.const(False)
            return b.build()
        ors = [b.or_(*(b.input(e) for e in iter_bits(c))) for c in self.clauses]
        b.and_(*ors)
        return b.build()


@dataclass(frozen=True)
class FlatDNF:
    """OR of AND-monomials given as edge masks.

    An empty monomial (mask 0) makes the function constant true; the empty
    monomial list is constant false.
    """

    n: int
    monomials: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "monomials", tuple(self.monomials))
        _check_edges(self.monomials, self.n, "monomial")

    @property
    def width(self) -> int:
        return max((popcount(m) for m in self.monomials), default=0)

    def evaluate(self, edges: int | Graph) -> bool:
        x = edges.edges if isinstance(edges, Graph) else edges
        return any(m & x == m for m in self.monomials)

    def evaluate_many(self, X: np.ndarray) -> np.ndarray:
        out = np.zeros(X.shape[0], dtype=bool)
        for m in self.monomials:
            if m == 0:
                out[:] = True
                break
            out |= X[:, list(iter_bits(m))].all(axis=1)
        return out

    def to_circuit(self) -> MonotoneCircuit:
        b = CircuitBuilder(self.n)
        if not self.monomials:
            b.const(False)
            return b.build()
        if any(m == 0 for m in self.monomials):
            b.const(True)
            return b.build()
        ands = [b.and_(*(b.input(e) for e in iter_bits(m))) for m in self.monomials]
        b.or_(*ands)
        return b.build()


@dataclass(frozen=True)
class CircuitMeasure:
    depth: int
    size: int


@dataclass(frozen=True)
class LayeredCircuit:
    """Strictly alternating AND/OR layers over a layer of input edges.

    ``layers[i]`` holds the gates of layer ``i + 1`` as tuples of child
    indices into layer ``i`` (layer 0 being ``inputs``); ``kinds[i]`` is its
    gate kind. Every layer-1 gate has exactly one child. A constant circuit
    has no layers and a non-``None`` ``constant``.
    """

    n: int
    inputs: tuple[int, ...]
    kinds: tuple[str, ...]
    layers: tuple[tuple[tuple[int, ...], ...], ...]
    output: int = 0
    constant: bool | None = None

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def size(self) -> int:
        if self.constant is not None:
            return 1
        return len(self.inputs) + sum(len(layer) for layer in self.layers)

    def evaluate_many(self, X: np.ndarray) -> np.ndarray:
        if self.constant is not None:
            return np.full(X.shape[0], self.constant)
        prev = [X[:, e] for e in self.inputs]
        for kind, layer in zip(self.kinds, self.layers):
            op = np.logical_and if kind == AND else np.logical_or
            cur = []
            for children in layer:
                acc = prev[children[0]].copy()
                for c in children[1:]:
                    op(acc, prev[c], out=acc)
                cur.append(acc)
            prev = cur
        return prev[self.output]

    def evaluate(self, edges: int | Graph) -> bool:
        x = edges.edges if isinstance(edges, Graph) else edges
        return bool(self.evaluate_many(graphs_matrix(self.n, [x]))[0])

    def to_circuit(self) -> MonotoneCircuit:
        b = CircuitBuilder(self.n)
        if self.constant is not None:
            b.const(self.constant)
            return b.build()
        prev = [b.input(e) for e in self.inputs]
        for kind, layer in zip(self.kinds, self.layers):
            prev = [b.gate(kind, (prev[c] for c in children)) for children in layer]
        return b.build(prev[self.output])


Circuitish = Union[MonotoneCircuit, FlatCNF, FlatDNF, LayeredCircuit]


def evaluate(f: Circuitish, g: Graph) -> bool:
    if f.n != g.n:
        raise DomainError(f"circuit on n={f.n} evaluated on a graph with n={g.n}")
    return f.evaluate(g.edges)


def graphs_matrix(n: int, masks: Sequence[int]) -> np.ndarray:
    """Boolean matrix with one row per edge mask."""
    m = num_edges(n)
    X = np.zeros((len(masks), m), dtype=bool)
    for r, mask in enumerate(masks):
        for e in iter_bits(mask):
            X[r, e] = True
    return X


def input_matrix(n: int, stars: Sequence[int], ones: int = 0) -> np.ndarray:
    """All ``2^len(stars)`` inputs ``u ∪ ones``; row ``r`` holds star ``j`` iff bit ``j`` of ``r``."""
    k = len(stars)
    rows = np.arange(1 << k, dtype=np.int64)
    X = np.zeros((1 << k, num_edges(n)), dtype=bool)
    for e in iter_bits(ones):
        X[:, e] = True
    for j, e in enumerate(stars):
        X[:, e] = (rows >> j) & 1
    return X


def truth_table(f: Circuitish, rho: Restriction | None = None, budget: int = 22) -> np.ndarray:
    """Values of ``f(u ∪ rho^{-1}(1))`` for every ``u ⊆ rho^{-1}(*)``.

    Without ``rho`` every edge of ``K([n])`` is free.
    """
    if rho is None:
        rho = Restriction.all_star(f.n)
    stars = rho.star_list()
    if len(stars) > budget:
        raise ResourceError(f"{len(stars)} free edges exceed the truth-table budget {budget}")
    return f.evaluate_many(input_matrix(f.n, stars, rho.ones))


def apply_restriction(f: MonotoneCircuit, rho: Restriction) -> MonotoneCircuit:
    """``f_rho``: hard-wire ``rho^{-1}(1)`` to true and propagate constants.

    The result reads only star inputs; unreachable gates are dropped and
    single-child gates collapse into their child.
    """
    if rho.n != f.n:
        raise DomainError("restriction and circuit disagree on n")
    if not rho.is_total():
        raise DomainError("restriction must be defined on all of K([n])")
    # each old gate maps to ("c", bool) or ("g", old index of representative)
    rep: list[tuple[str, object]] = []
    new_children: dict[int, tuple[int, ...]] = {}
    for i, g in enumerate(f.gates):
        if g.kind == INPUT:
            rep.append(("c", True) if rho.ones >> g.edge & 1 else ("g", i))
        elif g.kind == CONST:
            rep.append(("c", bool(g.value)))
        else:
            absorbing = g.kind == OR
            kids: list[int] = []
            result = None
            for c in g.children:
                tag, v = rep[c]
                if tag == "c":
                    if v == absorbing:
                        result = ("c", absorbing)
                        break
                elif v not in kids:
                    kids.append(v)
            if result is None:
                if not kids:
                    result = ("c", not absorbing)
                elif len(kids) == 1:
                    result = ("g", kids[0])
                else:
                    new_children[i] = tuple(kids)
                    result = ("g", i)
            rep.append(result)
    b = CircuitBuilder(f.n)
    tag, root = rep[f.output]
    if tag == "c":
        b.const(root)
        return b.build()
    index: dict[int, int] = {}

    def emit(i: int) -> int:
        if i in index:
            return index[i]
        g = f.gates[i]
        if g.kind == INPUT:
            index[i] = b.input(g.edge)
        else:
            kids = [emit(c) for c in new_children[i]]
            index[i] = b.gate(g.kind, kids)
        return index[i]

    # iterative order: emit children in ascending old index to keep determinism
    needed = _collect(root, new_children)
    for i in sorted(needed):
        emit(i)
    return b.build(index[root])


def _collect(root: int, children: dict[int, tuple[int, ...]]) -> set[int]:
    seen = {root}
    stack = [root]
    while stack:
        i = stack.pop()
        for c in children.get(i, ()):
            if c not in seen:
                seen.add(c)
                stack.append(c)
    return seen


def measure(f: MonotoneCircuit | LayeredCircuit) -> CircuitMeasure:
    """Depth (longest output-to-input path, inputs at depth 0) and node count."""
    if isinstance(f, LayeredCircuit):
        return CircuitMeasure(f.depth, f.size)
    h = _heights(f)
    return CircuitMeasure(h[f.output], len(f.gates))


def _heights(f: MonotoneCircuit) -> list[int]:
    h: list[int] = []
    for g in f.gates:
        h.append(1 + max(h[c] for c in g.children) if g.children else 0)
    return h


def normalize_alternating(f: MonotoneCircuit) -> LayeredCircuit:
    """Rewrite ``f`` into strictly alternating layers with a fan-in-1 bottom.

    Same-kind parent/child gates are merged first, so every wire joins an
    AND to an OR. A gate of height ``h`` then lands on layer ``h + 1`` or
    ``h + 2`` (whichever has its kind), the layer parity being fixed by the
    output gate on layer ``depth + 1``. Values skipping layers are carried
    by fan-in-1 copies.
    """
    g0 = apply_restriction(f, Restriction.all_star(f.n))
    out_gate = g0.gates[g0.output]
    if out_gate.kind == CONST:
        return LayeredCircuit(f.n, (), (), (), 0, bool(out_gate.value))
    if out_gate.kind == INPUT:
        return LayeredCircuit(f.n, (out_gate.edge,), (OR,), (((0,),),), 0)

    # merge same-kind children
    flat: list[tuple[int, ...]] = []
    for i, g in enumerate(g0.gates):
        kids: list[int] = []
        for c in g.children:
            cg = g0.gates[c]
            src = flat[c] if cg.kind == g.kind else (c,)
            for x in src:
                if x not in kids:
                    kids.append(x)
        flat.append(tuple(kids))
    live = sorted(_collect(g0.output, {i: k for i, k in enumerate(flat)}))
    height: dict[int, int] = {}
    for i in live:
        height[i] = 1 + max(height[c] for c in flat[i]) if flat[i] else 0
    D = height[g0.output]
    L = D + 1
    top_kind = g0.gates[g0.output].kind

    def layer_kind(l: int) -> str:
        return top_kind if (L - l) % 2 == 0 else _other(top_kind)

    layer_of: dict[int, int] = {}
    for i in live:
        g = g0.gates[i]
        if g.kind == INPUT:
            layer_of[i] = 0
        else:
            l = height[i] + 1
            layer_of[i] = l if layer_kind(l) == g.kind else l + 1
    top_use: dict[int, int] = {i: layer_of[i] for i in live}
    for i in live:
        for c in flat[i]:
            top_use[c] = max(top_use[c], layer_of[i] - 1)

    # slot (node, layer) -> position within that layer
    slots: list[dict[int, int]] = [dict() for _ in range(L + 1)]
    for i in live:
        for l in range(layer_of[i], top_use[i] + 1):
            slots[l][i] = len(slots[l])
    inputs = tuple(g0.gates[i].edge for i in slots[0])
    layers = []
    for l in range(1, L + 1):
        layer = []
        for i in slots[l]:
            if layer_of[i] == l:
                layer.append(tuple(slots[l - 1][c] for c in flat[i]))
            else:
                layer.append((slots[l - 1][i],))
        layers.append(tuple(layer))
    kinds = tuple(layer_kind(l) for l in range(1, L + 1))
    return LayeredCircuit(f.n, inputs, kinds, tuple(layers), slots[L][g0.output])


def build_dnf(family: Iterable[int], n: int, prune: bool = True) -> FlatDNF:
    """``i_family``: true on every superset of some member edge set.

    With ``prune`` duplicate and superset members are dropped; the first
    occurrence of each minimal set is kept in its original position.
    """
    fam = list(family)
    if not prune:
        return FlatDNF(n, tuple(fam))
    kept: list[int] = []
    for i, a in enumerate(fam):
        dominated = False
        for j, b in enumerate(fam):
            if j == i:
                continue
            if b & a == b and (b != a or j < i):
                dominated = True
                break
        if not dominated:
            kept.append(a)
    return FlatDNF(n, tuple(kept))


def simplify_cnf(f: FlatCNF, rho: Restriction) -> FlatCNF:
    """Drop clauses satisfied by ``rho^{-1}(1)`` and keep only star edges."""
    if f.n != rho.n:
        raise DomainError("CNF and restriction disagree on n")
    return FlatCNF(f.n, tuple(c & rho.stars for c in f.clauses if not c & rho.ones))


def restrict_dnf(g: FlatDNF, rho: Restriction) -> FlatDNF:
    """Delete ``rho^{-1}(1)`` edges from every monomial of ``g``."""
    if g.n != rho.n:
        raise DomainError("DNF and restriction disagree on n")
    return FlatDNF(g.n, tuple(m & ~rho.ones for m in g.monomials))


def as_flat(f: MonotoneCircuit, form: str) -> FlatCNF | FlatDNF:
    """Read a circuit of depth at most 2 back as a CNF (``"cnf"``) or DNF (``"dnf"``)."""
    g = apply_restriction(f, Restriction.all_star(f.n))
    top = g.gates[g.output]
    outer, inner = (AND, OR) if form == "cnf" else (OR, AND)
    if top.kind == CONST:
        truth = bool(top.value)
        if form == "cnf":
            return FlatCNF(f.n, () if truth else (0,))
        return FlatDNF(f.n, (0,) if truth else ())
    groups = [g.output] if top.kind != outer else list(top.children)
    sets = []
    for c in groups:
        cg = g.gates[c]
        if cg.kind == INPUT:
            sets.append(1 << cg.edge)
        elif cg.kind == inner and all(g.gates[x].kind == INPUT for x in cg.children):
            m = 0
            for x in cg.children:
                m |= 1 << g.gates[x].edge
            sets.append(m)
        else:
            raise DomainError(f"circuit is not a depth-2 {form.upper()}")
    return FlatCNF(f.n, tuple(sets)) if form == "cnf" else FlatDNF(f.n, tuple(sets))
