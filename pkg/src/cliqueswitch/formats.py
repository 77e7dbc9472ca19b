"""Text and JSON formats for graphs, restrictions, circuits, families and trees.

Graphs::

    n=5
    0 1
    1 3

Restrictions list every universe edge with its value::

    n=4
    0 1 1
    0 2 *

Circuits are JSON objects with ``"schema": "cliqueswitch.circuit/1"``, a
vertex count, a gate list and an output id. Each gate has an ``id`` and a
``kind`` (``and``/``or`` with ``children`` ids defined earlier in the list,
``input`` with an ``edge`` pair ``"u v"``, or ``const`` with a boolean
``value``). Flat forms use ``"cliqueswitch.cnf/1"`` with ``clauses`` or
``"cliqueswitch.dnf/1"`` with ``monomials``, each a list of ``"u v"`` pairs.
Every reader takes ``one_based=True`` for inputs labelled from 1; JSON
documents may instead carry ``"vertex_base": 1``.
"""
from __future__ import annotations

import json

from .circuits import CONST, INPUT, CircuitBuilder, FlatCNF, FlatDNF, MonotoneCircuit
from .cliques import CliqueFamily, MaximalFreeFamily
from .errors import DomainError
from .graphs import Graph, Restriction, edge_id, edge_table, iter_bits, mask_of
from .switching import CliqueEdgeTree

CIRCUIT_SCHEMA = "cliqueswitch.circuit/1"
CNF_SCHEMA = "cliqueswitch.cnf/1"
DNF_SCHEMA = "cliqueswitch.dnf/1"


def _header(lines: list[str], key: str = "n") -> dict[str, int]:
    head = {}
    for tok in lines[0].split():
        k, _, v = tok.partition("=")
        head[k] = int(v)
    if key not in head:
        raise DomainError(f"missing '{key}=' header")
    return head


def _body(text: str) -> list[str]:
    return [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


def _pair(u: int, v: int, n: int, base: int) -> int:
    return edge_id(u - base, v - base, n)


def graph_to_text(g: Graph) -> str:
    return "\n".join([f"n={g.n}"] + [f"{u} {v}" for u, v in g.pairs()]) + "\n"


def graph_from_text(text: str, one_based: bool = False) -> Graph:
    lines = _body(text)
    n = _header(lines)["n"]
    base = int(one_based)
    edges = 0
    for ln in lines[1:]:
        u, v = map(int, ln.split())
        edges |= 1 << _pair(u, v, n, base)
    return Graph(n, edges)


def restriction_to_text(rho: Restriction) -> str:
    table = edge_table(rho.n)
    out = [f"n={rho.n}"]
    for e in iter_bits(rho.universe):
        u, v = table[e]
        out.append(f"{u} {v} {'1' if rho.ones >> e & 1 else '*'}")
    return "\n".join(out) + "\n"


def restriction_from_text(text: str, one_based: bool = False) -> Restriction:
    lines = _body(text)
    n = _header(lines)["n"]
    base = int(one_based)
    universe = ones = 0
    for ln in lines[1:]:
        u, v, val = ln.split()
        e = _pair(int(u), int(v), n, base)
        universe |= 1 << e
        if val == "1":
            ones |= 1 << e
        elif val != "*":
            raise DomainError(f"restriction value must be 1 or *, got {val!r}")
    return Restriction(n, universe, ones)


def _pair_str(e: int, n: int) -> str:
    u, v = edge_table(n)[e]
    return f"{u} {v}"


def _parse_pair(s, n: int, base: int) -> int:
    u, v = (s.split() if isinstance(s, str) else s)
    return _pair(int(u), int(v), n, base)


def circuit_to_json(f: MonotoneCircuit) -> str:
    gates = []
    for i, g in enumerate(f.gates):
        rec: dict = {"id": i, "kind": g.kind}
        if g.kind == INPUT:
            rec["edge"] = _pair_str(g.edge, f.n)
        elif g.kind == CONST:
            rec["value"] = bool(g.value)
        else:
            rec["children"] = list(g.children)
        gates.append(rec)
    doc = {"schema": CIRCUIT_SCHEMA, "n": f.n, "gates": gates, "output": f.output}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def circuit_from_json(text: str, one_based: bool = False) -> MonotoneCircuit:
    doc = json.loads(text)
    if doc.get("schema") != CIRCUIT_SCHEMA:
        raise DomainError(f"expected schema {CIRCUIT_SCHEMA}, got {doc.get('schema')!r}")
    n = int(doc["n"])
    base = int(doc.get("vertex_base", int(one_based)))
    b = CircuitBuilder(n)
    ids: dict = {}
    for rec in doc["gates"]:
        kind = rec["kind"]
        if kind == INPUT:
            idx = b.input(_parse_pair(rec["edge"], n, base))
        elif kind == CONST:
            idx = b.const(bool(rec["value"]))
        else:
            try:
                kids = [ids[c] for c in rec["children"]]
            except KeyError as exc:
                raise DomainError(f"gate {rec['id']} references undefined gate {exc}") from None
            idx = b.gate(kind, kids)
        ids[rec["id"]] = idx
    return b.build(ids[doc["output"]])


def flat_to_json(f: FlatCNF | FlatDNF) -> str:
    if isinstance(f, FlatCNF):
        doc = {"schema": CNF_SCHEMA, "n": f.n,
               "clauses": [[_pair_str(e, f.n) for e in iter_bits(c)] for c in f.clauses]}
    else:
        doc = {"schema": DNF_SCHEMA, "n": f.n,
               "monomials": [[_pair_str(e, f.n) for e in iter_bits(m)] for m in f.monomials]}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def flat_from_json(text: str, one_based: bool = False) -> FlatCNF | FlatDNF:
    doc = json.loads(text)
    n = int(doc["n"])
    base = int(doc.get("vertex_base", int(one_based)))

    def sets(key):
        return tuple(mask_of(_parse_pair(p, n, base) for p in group) for group in doc[key])

    if doc.get("schema") == CNF_SCHEMA:
        return FlatCNF(n, sets("clauses"))
    if doc.get("schema") == DNF_SCHEMA:
        return FlatDNF(n, sets("monomials"))
    raise DomainError(f"unknown flat-form schema {doc.get('schema')!r}")


def family_to_text(fam: CliqueFamily) -> str:
    return "\n".join([f"n={fam.n} k={fam.k}"] + [" ".join(map(str, a)) for a in fam.sorted()]) + "\n"


def family_from_text(text: str, one_based: bool = False) -> CliqueFamily:
    lines = _body(text)
    head = _header(lines)
    base = int(one_based)
    members = frozenset(tuple(int(x) - base for x in ln.split()) for ln in lines[1:])
    return CliqueFamily(head["n"], head["k"], members)


def maximal_to_text(fam: MaximalFreeFamily) -> str:
    table = edge_table(fam.n)
    rows = []
    for g in fam.graphs:
        rows.append(" ".join(f"{table[e][0]}-{table[e][1]}" for e in iter_bits(g)) or "-")
    return "\n".join([f"n={fam.n} k={fam.k} count={len(fam)}"] + rows) + "\n"


def maximal_from_text(text: str) -> MaximalFreeFamily:
    lines = _body(text)
    head = _header(lines)
    n = head["n"]
    graphs = []
    for ln in lines[1:]:
        m = 0
        if ln != "-":
            for tok in ln.split():
                u, v = tok.split("-")
                m |= 1 << edge_id(int(u), int(v), n)
        graphs.append(m)
    return MaximalFreeFamily(n, head["k"], tuple(graphs))


def _vset(mask: int, base: int) -> str:
    return "{" + ",".join(str(v + base) for v in iter_bits(mask)) + "}"


def _eset(mask: int, n: int, base: int) -> str:
    table = edge_table(n)
    return "{" + ",".join(f"{table[e][0] + base}{table[e][1] + base}" if n + base <= 10
                          else f"{table[e][0] + base}-{table[e][1] + base}"
                          for e in iter_bits(mask)) + "}"


def tree_to_text(tree: CliqueEdgeTree, one_based: bool = False) -> str:
    """One line per node: id, depth, status, A-label, G-label, clause, children."""
    base = int(one_based)
    out = ["id depth status A G clause children"]
    for v in tree.nodes:
        clause = "-" if v.clause is None else str(v.clause + base)
        kids = ",".join(map(str, v.children)) or "-"
        out.append(f"{v.id} {v.depth} {v.status} {_vset(v.a, base)} "
                   f"{_eset(v.g, tree.n, base)} {clause} {kids}")
    return "\n".join(out) + "\n"


def tree_to_dot(tree: CliqueEdgeTree, one_based: bool = False) -> str:
    """Graphviz rendering; T'-only nodes are dashed."""
    base = int(one_based)
    out = ["digraph tree {", "  node [shape=box, fontname=monospace];"]
    for v in tree.nodes:
        style = "" if v.in_t else ", style=dashed"
        shape = ", peripheries=2" if v.t_leaf or v.tprime_leaf else ""
        label = f"A={_vset(v.a, base)}\\nG={_eset(v.g, tree.n, base)}"
        if v.clause is not None:
            label += f"\\nq{v.clause + base}"
        out.append(f'  n{v.id} [label="{label}"{style}{shape}];')
    for v in tree.nodes:
        for c in v.children:
            out.append(f"  n{v.id} -> n{c};")
    out.append("}")
    return "\n".join(out) + "\n"


def bundled_fixture(name: str) -> str:
    """Text of a file shipped in ``cliqueswitch/fixtures``."""
    from importlib.resources import files

    return files("cliqueswitch").joinpath("fixtures", name).read_text()
