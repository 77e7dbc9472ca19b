"""Command-line front end for the verification suites and experiments.

Every subcommand writes a deterministic ``report.json`` plus ``summary.csv``
into ``--out`` (timings go to a separate ``timings.json`` so that reruns with
the same seed are byte-identical). Exit status: 0 all checks pass, 1 a check
failed, 2 usage or validation error, 3 a check was skipped for exhausting a
resource budget.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import numpy as np

from .checks import FAIL, PASS, SKIPPED, SUITES, CheckResult, guard, recount_maximal, sigma3
from .circuits import FlatCNF, MonotoneCircuit, truth_table
from .cliques import clique_cnf, clique_implication_set, enumerate_maximal_clique_free
from .errors import DomainError, ResourceError
from .formats import circuit_from_json, flat_from_json, flat_to_json, maximal_to_text, restriction_to_text
from .generators import toy_pipeline_suite
from .graphs import RngStream, edge_table, iter_bits, num_edges
from .pipeline import (
    PipelineParams,
    asymptotic_schedule,
    clique_appearance_bound,
    clique_gap_experiment,
    run_pipeline,
    select_disjoint_monomials,
)

REPORT_SCHEMA = "cliqueswitch.report/1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

SUITE_COMMANDS = tuple(SUITES)
COMMANDS = SUITE_COMMANDS + ("enumerate-maximal", "run-pipeline", "theorem1-experiment", "acceptance")

HELP = {
    "verify-lemma3": "CNF-to-DNF switch: one-sided error and clique loss",
    "verify-claim7": "tree relations on the three-clause example and random CNFs",
    "verify-lemma4": "DNF-to-CNF switch: failure rate and equivalence",
    "verify-z-oracle": "fast vs brute-force clique-implication sets",
    "verify-clique-cnf": "depth-2 clique CNF and maximal clique-free graphs",
    "verify-pipeline": "pipeline integrity on the toy circuit suite",
    "verify-distributions": "restriction composition, ER density, clique union bound",
    "enumerate-maximal": "list maximal K_k-free graphs on n vertices",
    "run-pipeline": "run the switching pipeline on one circuit",
    "theorem1-experiment": "compare a CNF family with k-CLIQUE on random graphs",
    "acceptance": "run every verification suite at full size",
}

# acceptance criterion label -> suite command, in criterion order
ACCEPTANCE = (
    ("cnf-switch-soundness-and-loss", "verify-lemma3"),
    ("tree-relations", "verify-claim7"),
    ("dnf-switch-failure-rate", "verify-lemma4"),
    ("z-oracle-equivalence", "verify-z-oracle"),
    ("depth2-clique-representation", "verify-clique-cnf"),
    ("pipeline-integrity", "verify-pipeline"),
    ("distributions", "verify-distributions"),
)


def tool_version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


@dataclass
class ExperimentConfig:
    """Validated run configuration; ``None`` fields take the command's default."""

    command: str
    n: int | None = None
    k: int | None = None
    s: int | None = None
    t: int | None = None
    c_d: int | None = None
    c_s: int | None = None
    p: float | None = None
    trials: int | None = None
    instances: int | None = None
    seed: int = 0
    budget_nodes: int = 200_000
    budget_ttable: int = 20
    circuit: str | None = None
    out: str | None = None

    def validate(self) -> list[str]:
        errs = []
        if self.command not in COMMANDS:
            errs.append(f"command: unknown command {self.command!r}")
        for name in ("s", "t", "trials", "instances", "budget_nodes", "budget_ttable"):
            v = getattr(self, name)
            if v is not None and v < 1:
                errs.append(f"{name}: must be positive, got {v}")
        for name in ("c_d", "c_s", "seed"):
            v = getattr(self, name)
            if v is not None and v < 0:
                errs.append(f"{name}: must be non-negative, got {v}")
        if self.p is not None and not 0 <= self.p <= 1:
            errs.append(f"p: probability must lie in [0, 1], got {self.p}")
        if self.n is not None and self.n < 2:
            errs.append(f"n: need at least 2 vertices, got {self.n}")
        if self.k is not None and self.k < 2:
            errs.append(f"k: need k >= 2, got {self.k}")
        if self.n is not None and self.k is not None and self.k > self.n:
            errs.append(f"k: need k <= n, got k={self.k}, n={self.n}")
        if (self.c_d is None) != (self.c_s is None):
            errs.append("c_d/c_s: give both schedule constants or neither")
        return errs

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> ExperimentConfig:
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise DomainError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**d)


class ConfigError(DomainError):
    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


@dataclass
class RunReport:
    config: ExperimentConfig
    checks: list[CheckResult]
    artifacts: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    tool_version: str = field(default_factory=tool_version)

    @property
    def exit_code(self) -> int:
        statuses = {c.status for c in self.checks}
        if FAIL in statuses:
            return EXIT_FAIL
        if SKIPPED in statuses:
            return EXIT_BUDGET
        return EXIT_OK

    def to_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "tool_version": self.tool_version,
            # the output directory is excluded so reruns elsewhere stay byte-identical
            "config": {k: v for k, v in self.config.to_dict().items() if k != "out"},
            "checks": [asdict(c) for c in self.checks],
            "artifacts": dict(sorted(self.artifacts.items())),
            "exit_code": self.exit_code,
        }


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    raise TypeError(f"not serializable: {type(x).__name__}")


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True, default=_jsonable) + "\n"


def summary_csv(checks: list[CheckResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["check", "status", "metrics", "detail"])
    for c in checks:
        w.writerow([c.name, c.status, json.dumps(c.metrics, sort_keys=True, default=_jsonable), c.detail])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cliqueswitch", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")
    for name in COMMANDS:
        sp = sub.add_parser(name, help=HELP[name])
        sp.add_argument("--config", help="JSON config file; command-line flags override it")
        sp.add_argument("--n", type=int)
        sp.add_argument("--k", type=int)
        sp.add_argument("--s", type=int)
        sp.add_argument("--t", type=int)
        sp.add_argument("--cd", dest="c_d", type=int, help="depth constant for the width schedule")
        sp.add_argument("--cs", dest="c_s", type=int, help="size exponent for the width schedule")
        sp.add_argument("--p", type=float, help="edge or star probability")
        sp.add_argument("--trials", type=int)
        sp.add_argument("--instances", type=int)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--budget-nodes", dest="budget_nodes", type=int)
        sp.add_argument("--budget-ttable", dest="budget_ttable", type=int,
                        help="maximum free inputs for an exhaustive truth table")
        sp.add_argument("--circuit", help="circuit or flat-form JSON (run-pipeline, theorem1-experiment)")
        sp.add_argument("--out", help="output directory")
    return ap


def parse_config(argv: list[str] | None = None) -> ExperimentConfig:
    """Parse flags (and an optional config file) into a validated config.

    Raises ``ConfigError`` carrying every validation message.
    """
    ns = build_parser().parse_args(argv)
    base: dict = {}
    if ns.config:
        try:
            base = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError([f"config: cannot read {ns.config}: {exc}"]) from None
        if base.get("command", ns.command) != ns.command:
            raise ConfigError([f"command: config file is for {base['command']!r}"])
    base["command"] = ns.command
    for f in fields(ExperimentConfig):
        v = getattr(ns, f.name, None)
        if f.name != "command" and v is not None:
            base[f.name] = v
    try:
        cfg = ExperimentConfig.from_dict(base)
    except (DomainError, TypeError) as exc:
        raise ConfigError([str(exc)]) from None
    errs = cfg.validate()
    if errs:
        raise ConfigError(errs)
    return cfg


def _kw(cfg: ExperimentConfig, **mapping) -> dict:
    return {dst: getattr(cfg, src) for dst, src in mapping.items() if getattr(cfg, src) is not None}


def _suite_kwargs(cfg: ExperimentConfig) -> dict:
    c = cfg.command
    if c == "verify-lemma3":
        return _kw(cfg, instances="instances", seed="seed", n_max="n", s_max="s", star_cap="budget_ttable")
    if c == "verify-claim7":
        return _kw(cfg, instances="instances", seed="seed", n="n", s_max="s",
                   budget="budget_ttable", node_budget="budget_nodes")
    if c == "verify-lemma4":
        kw = _kw(cfg, trials="trials", seed="seed", n="n", dnfs="instances", budget="budget_ttable")
        if cfg.t is not None:
            kw["ts"] = (cfg.t,)
        if cfg.s is not None:
            kw["ss"] = (cfg.s,)
        return kw
    if c == "verify-z-oracle":
        return _kw(cfg, instances="instances", seed="seed", n="n", k="k", budget="budget_ttable")
    if c == "verify-clique-cnf":
        kw = {}
        if cfg.n is not None and cfg.k is not None:
            kw["pairs"] = ((cfg.n, cfg.k),)
            kw["recount"] = ((cfg.n, cfg.k),)
        return kw
    if c == "verify-pipeline":
        return _kw(cfg, runs="trials", seed="seed", t="t", s="s", k="k",
                   suite_size="instances", budget="budget_ttable")
    if c == "verify-distributions":
        return _kw(cfg, seed="seed", clique_trials="trials")
    return {}


def _write(out: Path | None, name: str, text: str, artifacts: dict):
    if out is None:
        return
    (out / name).write_text(text)
    artifacts[name.split(".")[0]] = name


def _enumerate_maximal(cfg: ExperimentConfig, out: Path | None, artifacts: dict) -> list[CheckResult]:
    n, k = cfg.n or 3, cfg.k or 3

    def run():
        if num_edges(n) > cfg.budget_ttable:
            raise ResourceError(f"2^{num_edges(n)} graphs exceed the truth-table budget")
        fam = enumerate_maximal_clique_free(n, k, cfg.budget_ttable)
        _write(out, "maximal.txt", maximal_to_text(fam), artifacts)
        recount = recount_maximal(n, k) if num_edges(n) <= 15 else None
        ok = recount is None or recount == len(fam)
        return [CheckResult(f"maximal-n{n}-k{k}", PASS if ok else FAIL,
                            {"count": len(fam), "recount": recount})]

    return guard("enumerate-maximal", run)


def _load_circuit(path: str | None):
    if path is None:
        return None
    text = Path(path).read_text()
    schema = json.loads(text).get("schema", "")
    return circuit_from_json(text) if schema.endswith("circuit/1") else flat_from_json(text)


def _pipeline_params(cfg: ExperimentConfig, n: int) -> PipelineParams:
    k = cfg.k or 3
    if cfg.c_d is not None:
        sched = asymptotic_schedule(n, k, cfg.c_d, cfg.c_s)
        return PipelineParams(n=n, k=k, t=cfg.t or sched.t, s=cfg.s or sched.s,
                              p_layer=cfg.p or sched.p_layer, c_d=cfg.c_d, c_s=cfg.c_s,
                              seed=cfg.seed, target_p=sched.target_p,
                              variant_target_p=sched.variant_target_p)
    return PipelineParams(n=n, k=k, t=cfg.t or 2, s=cfg.s or 1, p_layer=cfg.p, seed=cfg.seed)


def _run_pipeline(cfg: ExperimentConfig, out: Path | None, artifacts: dict) -> list[CheckResult]:
    """Run the pipeline ``trials`` times on one circuit and check each completed trace."""

    def run():
        loaded = _load_circuit(cfg.circuit)
        circuits = [loaded] if loaded is not None else toy_pipeline_suite()[:1]
        f = circuits[0]
        if not isinstance(f, MonotoneCircuit):
            f = f.to_circuit()
        params = _pipeline_params(cfg, f.n)
        runs = cfg.trials or 1
        rows = []
        bad = 0
        first = None
        for r in range(runs):
            tr = run_pipeline(f, params, RngStream(cfg.seed, r))
            row = {"run": r, "outcome": tr.outcome, "stages": len(tr.stages),
                   "stars": len(tr.restriction.star_list()),
                   "nominal_star_rate": tr.nominal_star_rate,
                   "ledger_bound": tr.ledger.total_bound, "ledger_exact": tr.ledger.total_exact}
            if tr.completed:
                rho = tr.restriction
                if len(rho.star_list()) > cfg.budget_ttable:
                    raise ResourceError("final star count exceeds the truth-table budget")
                below = not (truth_table(tr.final, rho, cfg.budget_ttable)
                             & ~truth_table(f, rho, cfg.budget_ttable)).any()
                lost = len(clique_implication_set(f, rho, params.k)
                           - clique_implication_set(tr.final, rho, params.k))
                sel = select_disjoint_monomials(tr.final, rho, params.k)
                row |= {"final_monomials": len(tr.final.monomials), "below": below,
                        "exact_loss": lost, "selected": sel.x,
                        "selection_lower_bound": sel.lower_bound,
                        "disjoint": sel.pairwise_disjoint()}
                ok = below and tr.ledger.sound() and lost <= tr.ledger.total_bound and sel.pairwise_disjoint()
                bad += not ok
                if first is None:
                    first = tr
            else:
                row["witness"] = [list(edge_table(f.n)[e]) for e in iter_bits(tr.witness.witness)]
            rows.append(row)
        if first is not None:
            _write(out, "final_dnf.json", flat_to_json(first.final), artifacts)
            _write(out, "restriction.txt", restriction_to_text(first.restriction), artifacts)
        _write(out, "runs.json", dumps(rows), artifacts)
        completed = sum(r["outcome"] == "completed" for r in rows)
        metrics = {"runs": runs, "completed": completed, "aborted": runs - completed,
                   "t": params.t, "s": params.s, "p_layer": params.p_layer, "k": params.k,
                   "target_p": params.target_p, "variant_target_p": params.variant_target_p,
                   "violations": bad}
        return [CheckResult("pipeline-traces", PASS if bad == 0 else FAIL, metrics)]

    return guard("run-pipeline", run)


def _clique_clause_groups(n: int, k: int, max_edges: int) -> list[FlatCNF]:
    cnf = clique_cnf(n, k, max_edges)
    return [FlatCNF(n, (c,)) for c in cnf.clauses]


def _theorem1(cfg: ExperimentConfig, out: Path | None, artifacts: dict) -> list[CheckResult]:
    """Compare all-true frequency of a circuit family with the clique frequency."""
    n, k = cfg.n or 5, cfg.k or 3
    p = 0.5 if cfg.p is None else cfg.p
    trials = cfg.trials or 10_000

    def run():
        loaded = _load_circuit(cfg.circuit)
        if loaded is not None:
            fams, exhaustive = [loaded], False
        else:
            if num_edges(n) > cfg.budget_ttable:
                raise ResourceError("clique CNF enumeration exceeds the truth-table budget")
            fams, exhaustive = _clique_clause_groups(n, k, cfg.budget_ttable), num_edges(n) <= 10
        rep = clique_gap_experiment(fams, n, k, p, trials, RngStream(cfg.seed, 0), exhaustive=exhaustive)
        bound = clique_appearance_bound(n, k, p)
        # exhaustive runs weight every graph by its ER probability, so no sampling slack
        if exhaustive:
            freq, slack = rep.exact_clique, 1e-12
        else:
            freq, slack = rep.clique.p_hat, sigma3(rep.clique.p_hat, rep.trials)
        checks = [CheckResult("clique-frequency-bound", PASS if freq <= float(bound) + slack else FAIL,
                              {"frequency": freq, "bound": float(bound), "trials": rep.trials})]
        metrics = {"conjunction": asdict(rep.conjunction), "clique": asdict(rep.clique),
                   "gap": rep.gap, "exhaustive": exhaustive,
                   "exact_conjunction": rep.exact_conjunction, "exact_clique": rep.exact_clique,
                   "witness": None if rep.witness is None else
                   [list(edge_table(n)[e]) for e in iter_bits(rep.witness)]}
        if loaded is None:
            same = rep.conjunction.successes == rep.clique.successes
            checks.append(CheckResult("clause-family-matches-clique", PASS if same else FAIL, metrics))
        else:
            checks.append(CheckResult("gap-report", PASS, metrics))
        return checks

    return guard("theorem1-experiment", run)


def execute(cfg: ExperimentConfig) -> RunReport:
    errs = cfg.validate()
    if errs:
        raise ConfigError(errs)
    out = Path(cfg.out) if cfg.out else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    artifacts: dict = {}
    timings: dict = {}
    checks: list[CheckResult] = []
    t0 = time.perf_counter()
    if cfg.command in SUITES:
        checks = SUITES[cfg.command](**_suite_kwargs(cfg))
    elif cfg.command == "enumerate-maximal":
        checks = _enumerate_maximal(cfg, out, artifacts)
    elif cfg.command == "run-pipeline":
        checks = _run_pipeline(cfg, out, artifacts)
    elif cfg.command == "theorem1-experiment":
        checks = _theorem1(cfg, out, artifacts)
    elif cfg.command == "acceptance":
        for label, command in ACCEPTANCE:
            t1 = time.perf_counter()
            sub = SUITES[command](**_suite_kwargs(ExperimentConfig(command, seed=cfg.seed)))
            timings[label] = round(time.perf_counter() - t1, 3)
            worst = FAIL if any(c.status == FAIL for c in sub) else (
                SKIPPED if any(c.status == SKIPPED for c in sub) else PASS)
            checks.append(CheckResult(label, worst, {"command": command, "checks": len(sub),
                                                     "passed": sum(c.passed for c in sub)},
                                      "; ".join(f"{c.name}: {c.status}" for c in sub if not c.passed)))
    timings["total"] = round(time.perf_counter() - t0, 3)
    report = RunReport(cfg, checks, artifacts, timings)
    if out is not None:
        report.artifacts |= {"report": "report.json", "summary": "summary.csv", "timings": "timings.json"}
        (out / "summary.csv").write_text(summary_csv(checks))
        (out / "timings.json").write_text(dumps(timings))
        (out / "report.json").write_text(dumps(report.to_dict()))
    return report


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    except ConfigError as exc:
        for e in exc.errors:
            print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = execute(cfg)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for c in report.checks:
        line = f"{c.status.upper():7s} {c.name}"
        print(line + (f"  ({c.detail})" if c.detail else ""))
    print(f"exit {report.exit_code}  total {report.timings['total']:.1f}s")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
