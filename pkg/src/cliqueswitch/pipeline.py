"""Alternating switching pipeline and random-graph experiments.

``run_pipeline`` layers a monotone circuit, then repeatedly switches its
bottom flat forms: DNF layers become CNFs under a fresh random restriction,
CNF layers become DNFs deterministically (recording the clique loss), and
each switched layer is merged into the layer above until one DNF remains.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np
from statsmodels.stats.proportion import proportion_confint

from .circuits import (
    AND,
    FlatCNF,
    FlatDNF,
    LayeredCircuit,
    MonotoneCircuit,
    input_matrix,
    normalize_alternating,
    simplify_cnf,
)
from .cliques import clique_implication_set
from .errors import DomainError
from .graphs import (
    Graph,
    Restriction,
    RngStream,
    bools_to_mask,
    clique_edges,
    compose,
    has_k_clique,
    iter_bits,
    mask_of,
    num_edges,
    popcount,
    sample_restriction,
)
from .switching import UnswitchFailure, cnf_to_dnf, dnf_to_cnf, transversal_tree

__all__ = [
    "PipelineParams",
    "asymptotic_schedule",
    "LossRecord",
    "LossLedger",
    "StageRecord",
    "PipelineTrace",
    "DisjointSelection",
    "SatisfactionEstimate",
    "CliqueGapReport",
    "run_pipeline",
    "dnf_switch_gate_count",
    "select_disjoint_monomials",
    "estimate_satisfaction",
    "clique_appearance_bound",
    "clique_gap_experiment",
]


@dataclass(frozen=True)
class PipelineParams:
    n: int
    k: int
    t: int
    s: int
    p_layer: float | None = None
    c_d: int | None = None
    c_s: int | None = None
    trials: int = 1
    seed: int = 0
    target_p: float | None = None
    variant_target_p: float | None = None

    def __post_init__(self):
        if self.t < 1 or self.s < 1:
            raise DomainError("widths t and s must be at least 1")
        if self.p_layer is None:
            object.__setattr__(self, "p_layer", 1 / (2 * self.t))
        if not 0 < self.p_layer <= 1:
            raise DomainError("p_layer must lie in (0, 1]")


def asymptotic_schedule(n: int, k: int, c_d: int, c_s: int) -> PipelineParams:
    """Widths ``t = ceil(2 (c_s+2)^2 log2(n)^2)`` and ``s = max(1, floor(n / 2k))``.

    ``target_p`` is ``(1/(2t))^(c_d/2 + 2)``; ``variant_target_p`` is the
    constant ``(2 c_s + 2)^(-c_d - 4)`` that multiplies ``log(n)^(-c_d-4)``
    in the closed-form target rate, reported for comparison with ``target_p``.
    """
    if n < 2 or k < 2:
        raise DomainError("need n >= 2 and k >= 2")
    t = math.ceil(2 * (c_s + 2) ** 2 * math.log2(n) ** 2)
    s = max(1, n // (2 * k))
    p_layer = 1 / (2 * t)
    return PipelineParams(
        n=n, k=k, t=t, s=s, p_layer=p_layer, c_d=c_d, c_s=c_s,
        target_p=p_layer ** (c_d / 2 + 2),
        variant_target_p=(2 * c_s + 2) ** (-c_d - 4),
    )


@dataclass(frozen=True)
class LossRecord:
    stage: int
    gate: int
    bound: Fraction
    exact: int | None = None


@dataclass
class LossLedger:
    records: list[LossRecord] = field(default_factory=list)

    @property
    def total_bound(self) -> Fraction:
        return sum((r.bound for r in self.records), Fraction(0))

    @property
    def total_exact(self) -> int | None:
        if any(r.exact is None for r in self.records):
            return None
        return sum(r.exact for r in self.records)

    def sound(self) -> bool:
        return all(r.exact is None or r.exact <= r.bound for r in self.records)


@dataclass(frozen=True)
class StageRecord:
    index: int
    layer: int
    direction: str  # "cnf->dnf" or "dnf->cnf"
    gates: int
    stream_id: int | None = None
    star_rate: float | None = None
    stars_after: int = 0
    failures: tuple[int, ...] = ()


@dataclass
class PipelineTrace:
    params: PipelineParams
    layered: LayeredCircuit
    restriction: Restriction
    stages: list[StageRecord]
    ledger: LossLedger
    outcome: str  # "completed" or "aborted"
    final: FlatDNF | None = None
    witness: UnswitchFailure | None = None
    selection: DisjointSelection | None = None

    @property
    def nominal_star_rate(self) -> float:
        rate = 1.0
        for st in self.stages:
            if st.star_rate is not None:
                rate *= st.star_rate
        return rate

    @property
    def completed(self) -> bool:
        return self.outcome == "completed"


def _layer_edge_sets(lc: LayeredCircuit) -> list[int]:
    """Edge mask read by each layer-2 gate through the fan-in-1 bottom layer."""
    bottom = [1 << lc.inputs[ch[0]] for ch in lc.layers[0]]
    return [mask_of(b for c in kids for b in iter_bits(bottom[c])) for kids in lc.layers[1]]


def _merge(kind: str, n: int, forms: list, layer: tuple[tuple[int, ...], ...]) -> list:
    out = []
    for kids in layer:
        if kind == AND:
            out.append(FlatCNF(n, tuple(c for i in kids for c in forms[i].clauses)))
        else:
            out.append(FlatDNF(n, tuple(m for i in kids for m in forms[i].monomials)))
    return out


def dnf_switch_gate_count(lc: LayeredCircuit) -> int:
    """Number of per-gate DNF-to-CNF switches a completed run performs."""
    if lc.constant is not None or lc.depth < 3:
        return 0
    return sum(len(lc.layers[l - 1]) for l in range(3, lc.depth) if lc.kinds[l - 1] != AND)


def run_pipeline(
    f: MonotoneCircuit | LayeredCircuit,
    params: PipelineParams,
    rng: RngStream,
    rho: Restriction | None = None,
    exact: bool = True,
    keep_going: bool = False,
) -> PipelineTrace:
    """Switch ``f`` down to a single DNF ``f''`` with ``f''_rho <= f_rho``.

    Layers 1 and 2 of the layered form read as the monomials or clauses of
    the layer-3 flat forms, so a circuit that already is a DNF needs no
    stage. Each DNF-to-CNF stage ``i`` draws its restriction from
    ``rng.child(i)``. With ``keep_going`` a failed gate is replaced by its
    unbounded transversal CNF instead of aborting (diagnostic use only).
    """
    lc = f if isinstance(f, LayeredCircuit) else normalize_alternating(f)
    n = lc.n
    if rho is None:
        rho = Restriction.all_star(n)
    ledger = LossLedger()
    stages: list[StageRecord] = []

    def trace(outcome, final=None, witness=None):
        return PipelineTrace(params, lc, rho, stages, ledger, outcome, final, witness)

    if lc.constant is not None:
        return trace("completed", FlatDNF(n, (0,) if lc.constant else ()))
    L = lc.depth
    if L == 1:
        return trace("completed", FlatDNF(n, (1 << lc.inputs[lc.layers[0][0][0]],)))
    if L == 2:
        bottom = [lc.inputs[ch[0]] for ch in lc.layers[0]]
        kids = lc.layers[1][lc.output]
        if lc.kinds[1] == AND:
            final = FlatDNF(n, (mask_of(bottom[c] for c in kids),))
        else:
            final = FlatDNF(n, tuple(1 << bottom[c] for c in kids))
        return trace("completed", final)

    sets = _layer_edge_sets(lc)
    kind = lc.kinds[2]
    forms: list = []
    for kids in lc.layers[2]:
        if kind == AND:
            forms.append(FlatCNF(n, tuple(sets[c] for c in kids)))
        else:
            forms.append(FlatDNF(n, tuple(sets[c] for c in kids)))
    layer = 3
    while True:
        last = layer == L
        if last and kind != AND:
            break
        idx = len(stages)
        if kind == AND:
            new_forms = []
            for gi, form in enumerate(forms):
                if last and gi != lc.output:
                    new_forms.append(None)
                    continue
                res = cnf_to_dnf(simplify_cnf(form, rho), rho, params.t, params.k, exact=exact)
                ledger.records.append(LossRecord(idx, gi, res.loss_bound, res.exact_loss))
                new_forms.append(res.g)
            stages.append(StageRecord(idx, layer, "cnf->dnf", len(forms),
                                      stars_after=popcount(rho.stars)))
            forms = new_forms
        else:
            stream = rng.child(idx)
            sigma = sample_restriction(n, rho.stars, params.p_layer, stream)
            rho = compose(rho, sigma)
            new_forms = []
            failures = []
            for gi, form in enumerate(forms):
                res = dnf_to_cnf(form, rho, params.s)
                if isinstance(res, UnswitchFailure):
                    failures.append(gi)
                    if not keep_going:
                        stages.append(StageRecord(idx, layer, "dnf->cnf", len(forms),
                                                  stream.stream_id, params.p_layer,
                                                  popcount(rho.stars), tuple(failures)))
                        return trace("aborted", witness=res)
                    mons = [m & ~rho.ones for m in form.monomials]
                    tree, _ = transversal_tree(mons, n)
                    res = FlatCNF(n, tuple(w.g for w in tree.nodes if w.tprime_leaf))
                new_forms.append(res)
            stages.append(StageRecord(idx, layer, "dnf->cnf", len(forms), stream.stream_id,
                                      params.p_layer, popcount(rho.stars), tuple(failures)))
            forms = new_forms
        if last:
            break
        kind = lc.kinds[layer]
        forms = _merge(kind, n, forms, lc.layers[layer])
        layer += 1
    return trace("completed", forms[lc.output])


@dataclass(frozen=True)
class DisjointSelection:
    picked: tuple[int, ...]
    cliques: tuple[tuple[int, ...], ...]
    z_size: int
    remaining: tuple[int, ...]  # |X| before each pick
    lower_bound: int

    @property
    def x(self) -> int:
        return len(self.picked)

    def pairwise_disjoint(self) -> bool:
        seen = 0
        for r in self.picked:
            if r & seen:
                return False
            seen |= r
        return True


def select_disjoint_monomials(f2: FlatDNF, rho: Restriction, k: int) -> DisjointSelection:
    """Greedily collect pairwise disjoint star parts of monomials of ``f2``.

    While some clique of ``Z_rho(f2)`` avoids every picked edge, take the
    lexicographically least such clique ``A``, the first monomial inside
    ``K(A) ∪ rho^{-1}(1)`` and keep its star edges. ``lower_bound`` is
    ``ceil(|Z| / (w C(n-2, k-2)))`` with ``w`` the widest pick, since each
    picked edge rules out at most ``C(n-2, k-2)`` cliques.
    """
    n = f2.n
    z = clique_implication_set(f2, rho, k).sorted()
    kmasks = {a: clique_edges(a, n) for a in z}
    picked: list[int] = []
    cliques: list[tuple[int, ...]] = []
    remaining: list[int] = []
    used = 0
    while True:
        X = [a for a in z if not kmasks[a] & used]
        if not X:
            break
        remaining.append(len(X))
        a = X[0]
        avail = kmasks[a] | rho.ones
        q = next(m for m in f2.monomials if m & avail == m)
        r = q & rho.stars
        picked.append(r)
        cliques.append(a)
        if r == 0:
            break
        used |= r
    w = max((popcount(r) for r in picked), default=0)
    per_edge = comb(n - 2, k - 2) if k >= 2 else 0
    lower = math.ceil(len(z) / (w * per_edge)) if z and w and per_edge else (1 if z else 0)
    return DisjointSelection(tuple(picked), tuple(cliques), len(z), tuple(remaining), lower)


@dataclass(frozen=True)
class SatisfactionEstimate:
    successes: int
    trials: int
    p_hat: float
    low: float
    high: float

    @property
    def half_width(self) -> float:
        return (self.high - self.low) / 2


def _estimate(successes: int, trials: int) -> SatisfactionEstimate:
    low, high = proportion_confint(successes, trials, alpha=0.05, method="wilson")
    return SatisfactionEstimate(successes, trials, successes / trials, float(low), float(high))


def _er_batches(n: int, edge_prob: float, trials: int, gen: np.random.Generator, chunk: int = 4096):
    m = num_edges(n)
    done = 0
    while done < trials:
        rows = min(chunk, trials - done)
        yield gen.random((rows, m)) < edge_prob
        done += rows


def estimate_satisfaction(f, n: int, edge_prob: float, trials: int, rng: RngStream) -> SatisfactionEstimate:
    """Monte Carlo ``P(f(G))`` for ``G ~ ER(n, edge_prob)`` with a 95% Wilson interval."""
    if trials < 1:
        raise DomainError("trials must be positive")
    gen = rng.generator()
    hits = 0
    for X in _er_batches(n, edge_prob, trials, gen):
        hits += int(f.evaluate_many(X).sum())
    return _estimate(hits, trials)


def clique_appearance_bound(n: int, k: int, p) -> Fraction:
    """Union bound ``C(n,k) (1-p)^C(k,2)`` on a k-clique in ``ER(n, 1-p)``."""
    if not 2 <= k <= n:
        raise DomainError(f"need 2 <= k <= n, got k={k}, n={n}")
    q = p if isinstance(p, Fraction) else Fraction(str(p))
    if not 0 <= q <= 1:
        raise DomainError("p must lie in [0, 1]")
    return comb(n, k) * (1 - q) ** comb(k, 2)


@dataclass(frozen=True)
class CliqueGapReport:
    n: int
    k: int
    p: float
    trials: int
    conjunction: SatisfactionEstimate
    clique: SatisfactionEstimate
    witness: int | None
    exact_conjunction: float | None = None
    exact_clique: float | None = None

    @property
    def gap(self) -> float:
        return self.conjunction.p_hat - self.clique.p_hat


def clique_gap_experiment(
    circuits: Sequence, n: int, k: int, p: float, trials: int, rng: RngStream,
    exhaustive: bool = False,
) -> CliqueGapReport:
    """Compare ``P(all f_j true)`` with ``P(k-clique)`` over ``G ~ ER(n, 1-p)``.

    The witness is the first graph seen with every ``f_j`` true and no
    k-clique. With ``exhaustive`` every labelled graph is visited once; the
    frequencies are then counts over all graphs and ``exact_*`` hold the
    ``ER(n, 1-p)`` probabilities.
    """
    m = num_edges(n)
    if exhaustive:
        batches = [input_matrix(n, list(range(m)))]
        trials = 1 << m
    else:
        batches = _er_batches(n, 1 - p, trials, rng.generator())
    conj_hits = clique_hits = 0
    witness = None
    w_conj = w_clique = 0.0
    for X in batches:
        conj = np.ones(X.shape[0], dtype=bool)
        for fj in circuits:
            conj &= fj.evaluate_many(X)
        cliq = np.array([has_k_clique(Graph(n, bools_to_mask(row)), k)
                         for row in X], dtype=bool)
        conj_hits += int(conj.sum())
        clique_hits += int(cliq.sum())
        if witness is None:
            hit = np.flatnonzero(conj & ~cliq)
            if hit.size:
                witness = mask_of(np.flatnonzero(X[hit[0]]).tolist())
        if exhaustive:
            sizes = X.sum(axis=1)
            weight = (1 - p) ** sizes * p ** (m - sizes)
            w_conj += float(weight[conj].sum())
            w_clique += float(weight[cliq].sum())
    return CliqueGapReport(
        n, k, p, trials, _estimate(conj_hits, trials), _estimate(clique_hits, trials), witness,
        w_conj if exhaustive else None, w_clique if exhaustive else None,
    )
