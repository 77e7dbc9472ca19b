"""Seeded verification suites.

Each suite returns a list of ``CheckResult`` records with a status of
``"pass"``, ``"fail"`` or ``"skipped"`` and JSON-ready metrics. The CLI and
the acceptance tests both call these functions; every random choice is drawn
from a stream derived from the suite seed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

import numpy as np

from .circuits import (
    FlatDNF,
    normalize_alternating,
    simplify_cnf,
    truth_table,
)
from .cliques import (
    clique_cnf,
    clique_implication_set,
    clique_implication_set_definitional,
    clique_indicator,
    enumerate_maximal_clique_free,
    extend_maximal,
    is_maximal_clique_free,
    non_implication_witness,
)
from .errors import ResourceError
from .generators import (
    three_clause_example,
    random_circuit,
    random_cnf,
    random_dnf,
    random_restriction,
    toy_pipeline_suite,
)
from .graphs import (
    Graph,
    Restriction,
    RngStream,
    compose,
    iter_bits,
    mask_of,
    num_edges,
    popcount,
    restriction_to_graph,
    sample_restriction,
)
from .pipeline import (
    PipelineParams,
    clique_appearance_bound,
    dnf_switch_gate_count,
    run_pipeline,
    select_disjoint_monomials,
    clique_gap_experiment,
)
from .switching import UnswitchFailure, check_tree_relations, cnf_to_dnf, dnf_to_cnf

__all__ = [
    "CheckResult",
    "SUITES",
    "verify_cnf_switch",
    "verify_tree_relations",
    "verify_dnf_switch",
    "verify_z_oracle",
    "verify_clique_cnf",
    "verify_pipeline",
    "verify_distributions",
]

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class CheckResult:
    name: str
    status: str
    metrics: dict = field(default_factory=dict)
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == PASS


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


def _gen(seed: int, stream: int) -> np.random.Generator:
    return RngStream(seed, stream).generator()


def sigma3(p_hat: float, trials: int) -> float:
    return 3 * math.sqrt(p_hat * (1 - p_hat) / trials)


def guard(name: str, fn: Callable[[], list[CheckResult]]) -> list[CheckResult]:
    try:
        return fn()
    except ResourceError as exc:
        return [CheckResult(name, SKIPPED, detail=f"budget exhausted: {exc}")]


def verify_cnf_switch(instances: int = 500, seed: int = 0, n_max: int = 8, s_max: int = 3,
                      clauses_max: int = 6, star_cap: int = 20) -> list[CheckResult]:
    """Soundness ``g <= f_rho`` on all star inputs and exact loss within the bound."""

    def run():
        gen = _gen(seed, 3)
        sound_bad = loss_bad = statement_bad = 0
        max_stars = worst_ratio = 0.0
        total_loss = 0
        first_bad = ""
        for i in range(instances):
            n = int(gen.integers(4, n_max + 1))
            s = int(gen.integers(1, s_max + 1))
            f = random_cnf(n, s, int(gen.integers(1, clauses_max + 1)), gen)
            p_hi = min(1.0, 0.9 * star_cap / num_edges(n))
            rho = random_restriction(n, float(gen.uniform(0.2, p_hi)), gen, max_stars=star_cap)
            k = int(gen.integers(2, min(n, 5) + 1))
            t = int(gen.integers(1, 16))
            fr = simplify_cnf(f, rho)
            res = cnf_to_dnf(fr, rho, t, k, exact=True)
            tf = truth_table(fr, rho, star_cap)
            tg = truth_table(res.g, rho, star_cap)
            max_stars = max(max_stars, popcount(rho.stars))
            if (tg & ~tf).any():
                sound_bad += 1
                first_bad = first_bad or f"instance {i}: g not below f_rho"
            total_loss += res.exact_loss
            if res.exact_loss > res.loss_bound:
                loss_bad += 1
                first_bad = first_bad or f"instance {i}: loss {res.exact_loss} > {res.loss_bound}"
            if fr.width * k <= n and res.exact_loss > res.statement_bound + 1e-9:
                statement_bad += 1
            if res.loss_bound > 0:
                worst_ratio = max(worst_ratio, float(res.exact_loss / res.loss_bound))
        m = {"instances": instances, "soundness_violations": sound_bad,
             "loss_violations": loss_bad, "statement_bound_violations": statement_bad,
             "total_exact_loss": total_loss, "max_stars": int(max_stars),
             "max_loss_to_bound": round(worst_ratio, 6)}
        return [CheckResult("cnf-switch", _status(sound_bad == loss_bad == statement_bad == 0), m, first_bad)]

    return guard("cnf-switch", run)


def verify_tree_relations(instances: int = 100, seed: int = 0, n: int = 5, s_max: int = 3,
                          clauses_max: int = 6, budget: int = 20, node_budget: int = 200_000) -> list[CheckResult]:
    """All five tree relations on the three-clause example and on random instances."""

    def run():
        out = []
        ex = check_tree_relations(three_clause_example(), Restriction.all_star(5), budget, node_budget)
        out.append(CheckResult("tree-relations-example", _status(ex.passed),
                               {f"item{i.item}": i.passed for i in ex.items} | {"tree_nodes": ex.tree_nodes},
                               "; ".join(i.detail for i in ex.items if i.detail)))
        gen = _gen(seed, 7)
        failures = {i: 0 for i in range(1, 6)}
        first = ""
        for j in range(instances):
            f = random_cnf(n, int(gen.integers(1, s_max + 1)), int(gen.integers(1, clauses_max + 1)), gen)
            rho = random_restriction(n, float(gen.uniform(0.5, 1.0)), gen)
            rep = check_tree_relations(f, rho, budget, node_budget)
            for it in rep.items:
                if not it.passed:
                    failures[it.item] += 1
                    first = first or f"instance {j} item {it.item} {it.detail}"
        ok = not any(failures.values())
        out.append(CheckResult("tree-relations-random", _status(ok),
                               {"instances": instances} | {f"item{i}_failures": v for i, v in failures.items()},
                               first))
        return out

    return guard("tree-relations", run)


def _dnf_switch_config(t: int, s: int, dnfs: int, trials: int, seed: int, n: int, budget: int):
    gen = _gen(seed, 4000 + 10 * t + s)
    p = 1 / (2 * t)
    m = num_edges(n)
    weights = np.array([1 << e for e in range(m)], dtype=np.int64)
    worst = None
    equiv_bad = 0
    for d in range(dnfs):
        g = random_dnf(n, t, int(gen.integers(1, 9)), gen)
        support = mask_of(e for mon in g.monomials for e in iter_bits(mon))
        draws = gen.random((trials, m)) < p
        star_masks = (draws * weights).sum(axis=1)
        cache: dict[int, bool] = {}
        fails = 0
        for sm in star_masks.tolist():
            key = sm & support
            if key not in cache:
                rho_s = Restriction.from_stars(n, key)
                res = dnf_to_cnf(g, rho_s, s)
                if isinstance(res, UnswitchFailure):
                    cache[key] = False
                else:
                    # only the support's free edges are variables of either side
                    local = Restriction(n, support, support & ~key)
                    if len(local.star_list()) > budget:
                        raise ResourceError("support stars exceed truth-table budget")
                    if not np.array_equal(truth_table(res, local, budget), truth_table(g, local, budget)):
                        equiv_bad += 1
                    cache[key] = True
            fails += not cache[key]
        rate = fails / trials
        limit = 2.0 ** (-s - 1) + sigma3(rate, trials)
        if worst is None or rate - limit > worst[0] - worst[1]:
            worst = (rate, limit)
    return worst, equiv_bad


def verify_dnf_switch(trials: int = 10_000, seed: int = 0, dnfs: int = 4, n: int = 8,
                      ts=(1, 2, 3, 4), ss=(1, 2, 3, 4, 5), budget: int = 20) -> list[CheckResult]:
    """Failure rate of DNF-to-CNF at star rate ``1/(2t)`` against ``2^{-s-1}``."""

    def run():
        out = []
        for t in ts:
            for s in ss:
                (rate, limit), bad = _dnf_switch_config(t, s, dnfs, trials, seed, n, budget)
                ok = rate <= limit and bad == 0
                out.append(CheckResult(f"dnf-switch-t{t}-s{s}", _status(ok),
                                       {"t": t, "s": s, "dnfs": dnfs, "trials": trials,
                                        "worst_failure_rate": rate, "limit": round(limit, 9),
                                        "equivalence_violations": bad}))
        return out

    return guard("dnf-switch", run)


def verify_z_oracle(instances: int = 300, seed: int = 0, n: int = 5, k: int = 3,
                    budget: int = 20) -> list[CheckResult]:
    """Fast clique-implication set equals the brute-force definitional one."""

    def run():
        out = []
        full = Restriction.all_star(5)
        ex = three_clause_example()
        expected = {(0, 1, 3), (0, 1, 4), (0, 2, 3)}
        fixtures = [
            ("fixture-indicator", clique_indicator(5, 3), full, None),
            ("fixture-false", FlatDNF(5, ()), full, set()),
            ("fixture-three-clause", ex, full, expected),
        ]
        for name, f, rho, want in fixtures:
            fast = clique_implication_set(f, rho, 3)
            slow = clique_implication_set_definitional(f, rho, 3, budget)
            if want is None:
                want = set(combinations(range(5), 3))
            ok = fast == slow and set(fast.members) == want
            out.append(CheckResult(name, _status(ok), {"size": len(fast)},
                                   "" if ok else f"fast={fast.sorted()} slow={slow.sorted()}"))
        gen = _gen(seed, 11)
        mismatch = witness_missing = 0
        sizes = []
        for _ in range(instances):
            f = random_circuit(n, gen, gates=int(gen.integers(2, 9)), const_prob=0.1)
            rho = random_restriction(n, float(gen.uniform(0.3, 1.0)), gen)
            fast = clique_implication_set(f, rho, k)
            slow = clique_implication_set_definitional(f, rho, k, budget)
            mismatch += fast != slow
            sizes.append(len(fast))
            for a in combinations(range(n), k):
                if a not in slow and non_implication_witness(f, rho, a) is None:
                    witness_missing += 1
        out.append(CheckResult("z-oracle-random", _status(mismatch == 0 and witness_missing == 0),
                               {"instances": instances, "mismatches": mismatch,
                                "missing_witnesses": witness_missing,
                                "mean_size": round(float(np.mean(sizes)), 6)}))
        return out

    return guard("z-oracle", run)


def recount_maximal(n: int, k: int) -> int:
    """Independent count: per-graph backtracking clique search, pure Python."""
    m = num_edges(n)
    count = 0
    for mask in range(1 << m):
        if is_maximal_clique_free(Graph(n, mask), k):
            count += 1
    return count


def verify_clique_cnf(pairs=((4, 3), (5, 3), (6, 3), (6, 4)),
                      recount=((3, 3), (4, 3), (5, 3), (5, 4), (4, 4)),
                      lift_max_n: int = 5, max_edges: int = 21) -> list[CheckResult]:
    """Depth-2 AND-of-clauses CLIQUE, maximal-family counts and the extension."""

    def run():
        out = []
        for n, k in pairs:
            cnf = clique_cnf(n, k, max_edges)
            dnf = clique_indicator(n, k)
            same = np.array_equal(truth_table(cnf, budget=max_edges), truth_table(dnf, budget=max_edges))
            out.append(CheckResult(f"clique-cnf-n{n}-k{k}", _status(same),
                                   {"clauses": len(cnf.clauses), "graphs": 1 << num_edges(n)}))
        for n, k in recount:
            fast = len(enumerate_maximal_clique_free(n, k, max_edges))
            slow = recount_maximal(n, k)
            out.append(CheckResult(f"maximal-count-n{n}-k{k}", _status(fast == slow),
                                   {"enumerated": fast, "recount": slow}))
        lifted = bad = 0
        for n in range(2, lift_max_n):
            for k in range(2, n + 1):
                for h in enumerate_maximal_clique_free(n, k, max_edges).as_graphs():
                    for k2 in range(k, k + lift_max_n - n + 1):
                        g = extend_maximal(h, k, k2)
                        lifted += 1
                        if g.n <= 7:
                            fam = enumerate_maximal_clique_free(g.n, k2, max_edges)
                            bad += g.edges not in fam.graphs
                        else:
                            bad += not is_maximal_clique_free(g, k2)
        out.append(CheckResult("extension-maximal", _status(bad == 0 and lifted > 0),
                               {"lifted": lifted, "violations": bad}))
        return out

    return guard("clique-cnf", run)


def verify_pipeline(runs: int = 1000, seed: int = 0, t: int = 2, s: int = 1, k: int = 3,
                    suite_seed: int = 2024, suite_size: int = 20, budget: int = 20) -> list[CheckResult]:
    """Integrity of completed traces and abort frequency on the toy suite."""

    def run():
        out = []
        for ci, circuit in enumerate(toy_pipeline_suite(suite_seed, suite_size)):
            lc = normalize_alternating(circuit)
            params = PipelineParams(n=circuit.n, k=k, t=t, s=s, seed=seed)
            aborts = below_bad = ledger_bad = e2e_bad = disjoint_bad = count_bad = 0
            for r in range(runs):
                tr = run_pipeline(lc, params, RngStream(seed, 100_000 * ci + r))
                if not tr.completed:
                    aborts += 1
                    continue
                rho = tr.restriction
                tf = truth_table(circuit, rho, budget)
                tg = truth_table(tr.final, rho, budget)
                below_bad += bool((tg & ~tf).any())
                ledger_bad += not tr.ledger.sound()
                lost = len(clique_implication_set(circuit, rho, k) - clique_implication_set(tr.final, rho, k))
                e2e_bad += lost > tr.ledger.total_bound
                sel = select_disjoint_monomials(tr.final, rho, k)
                disjoint_bad += not sel.pairwise_disjoint()
                count_bad += sel.x < sel.lower_bound
            gates = dnf_switch_gate_count(lc)
            predicted = min(1.0, gates * 2.0 ** (-s - 1))
            rate = aborts / runs
            abort_ok = rate <= predicted + sigma3(rate, runs)
            ok = abort_ok and not (below_bad or ledger_bad or e2e_bad or disjoint_bad or count_bad)
            out.append(CheckResult(f"pipeline-toy{ci:02d}", _status(ok), {
                "n": circuit.n, "layered_depth": lc.depth, "dnf_gates": gates, "runs": runs,
                "abort_rate": rate, "abort_prediction": predicted,
                "below_violations": below_bad, "ledger_violations": ledger_bad,
                "end_to_end_loss_violations": e2e_bad, "disjoint_violations": disjoint_bad,
                "selection_count_violations": count_bad}))
        return out

    return guard("pipeline", run)


def verify_distributions(seed: int = 0, samples: int = 100_000,
                         pairs=((0.1, 0.5), (0.5, 0.5), (0.9, 0.9)),
                         clique_trials: int = 10_000) -> list[CheckResult]:
    """Composed star rates, the ER correspondence and the clique union bound."""

    def run():
        out = []
        n = 1
        while num_edges(n) < samples:
            n += 1
        universe = (1 << num_edges(n)) - 1
        for i, (p, q) in enumerate(pairs):
            rho = sample_restriction(n, universe, p, RngStream(seed, 20 + 2 * i))
            sigma = sample_restriction(n, rho.stars, q, RngStream(seed, 21 + 2 * i))
            both = compose(rho, sigma)
            m = num_edges(n)
            rate = popcount(both.stars) / m
            tol = 3 * math.sqrt(p * q * (1 - p * q) / m)
            out.append(CheckResult(f"compose-p{p}-q{q}", _status(abs(rate - p * q) <= tol),
                                   {"edges": m, "star_rate": rate, "expected": p * q, "tolerance": tol}))
        n_er, p = 100, 0.3
        rho = sample_restriction(n_er, (1 << num_edges(n_er)) - 1, p, RngStream(seed, 30))
        g = restriction_to_graph(rho)
        m = num_edges(n_er)
        dens = len(g) / m
        tol = 3 * math.sqrt(p * (1 - p) / m)
        out.append(CheckResult("er-density", _status(abs(dens - (1 - p)) <= tol),
                               {"n": n_er, "density": dens, "expected": 1 - p, "tolerance": tol}))
        for j, pc in enumerate((0.5, 0.8)):
            bound = clique_appearance_bound(12, 4, pc)
            rep = clique_gap_experiment([], 12, 4, pc, clique_trials, RngStream(seed, 40 + j))
            freq = rep.clique.p_hat
            limit = float(bound) + sigma3(freq, clique_trials)
            out.append(CheckResult(f"clique-bound-p{pc}", _status(freq <= limit),
                                   {"frequency": freq, "bound": float(bound), "limit": limit,
                                    "trials": clique_trials}))
        return out

    return guard("distributions", run)


SUITES = {
    "verify-lemma3": verify_cnf_switch,
    "verify-claim7": verify_tree_relations,
    "verify-lemma4": verify_dnf_switch,
    "verify-z-oracle": verify_z_oracle,
    "verify-clique-cnf": verify_clique_cnf,
    "verify-pipeline": verify_pipeline,
    "verify-distributions": verify_distributions,
}
