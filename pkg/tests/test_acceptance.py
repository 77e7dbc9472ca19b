"""Acceptance suite: eight criteria at full size, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script.
"""
import subprocess
import sys
import time

import pytest

from cliqueswitch.checks import (
    verify_clique_cnf,
    verify_cnf_switch,
    verify_distributions,
    verify_dnf_switch,
    verify_pipeline,
    verify_tree_relations,
    verify_z_oracle,
)

# (number, label, suite call, time limit in seconds)
CRITERIA = [
    (1, "CNF-to-DNF soundness and clique loss, 500 CNFs",
     lambda: verify_cnf_switch(instances=500, n_max=8, s_max=3, clauses_max=6, star_cap=20), 300),
    (2, "tree relations, three-clause example + 100 random",
     lambda: verify_tree_relations(instances=100, n=5), 120),
    (3, "DNF-to-CNF failure rate and equivalence, 20 (t,s) configs x 1e4 draws",
     lambda: verify_dnf_switch(trials=10_000, ts=(1, 2, 3, 4), ss=(1, 2, 3, 4, 5)), 600),
    (4, "fast vs definitional clique-implication oracle, 300 instances + fixtures",
     lambda: verify_z_oracle(instances=300, n=5, k=3), 600),
    (5, "depth-2 clique CNF, maximal-family recount, extension",
     lambda: verify_clique_cnf(pairs=((4, 3), (5, 3), (6, 3), (6, 4)), lift_max_n=5), 600),
    (6, "pipeline integrity on 20 toy circuits x 1000 runs",
     lambda: verify_pipeline(runs=1000, suite_size=20), 600),
    (7, "composition rate, ER density, clique union bound",
     lambda: verify_distributions(samples=100_000, pairs=((0.1, 0.5), (0.5, 0.5), (0.9, 0.9)),
                                  clique_trials=10_000), 600),
]

# commands rerun twice through the CLI for the determinism criterion
RERUN = [
    ["verify-claim7"],
    ["verify-z-oracle"],
    ["verify-distributions"],
    ["run-pipeline", "--trials", "50", "--seed", "11"],
]


def _line(num: int, ok: bool, label: str, elapsed: float, note: str = "") -> str:
    return f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {label} ({elapsed:.1f}s){' - ' + note if note else ''}"


def run_criterion(num, label, call, limit):
    t0 = time.perf_counter()
    results = call()
    elapsed = time.perf_counter() - t0
    bad = [r for r in results if not r.passed]
    ok = not bad and elapsed < limit
    note = "; ".join(f"{r.name}: {r.status} {r.detail}".strip() for r in bad)
    if elapsed >= limit:
        note = (note + "; " if note else "") + f"over the {limit}s limit"
    return ok, _line(num, ok, label, elapsed, note)


def run_determinism(tmp_root):
    t0 = time.perf_counter()
    diffs = []
    for args in RERUN:
        outs = []
        for rep in ("a", "b"):
            out = tmp_root / f"{args[0]}-{rep}"
            subprocess.run([sys.executable, "-m", "cliqueswitch", *args, "--out", str(out)],
                           check=False, capture_output=True)
            outs.append(out)
        for name in ("report.json", "summary.csv"):
            a, b = (o / name for o in outs)
            if not (a.exists() and a.read_bytes() == b.read_bytes()):
                diffs.append(f"{args[0]}/{name}")
    ok = not diffs
    return ok, _line(8, ok, f"byte-identical reruns of {len(RERUN)} commands", time.perf_counter() - t0,
                     ", ".join(diffs))


@pytest.mark.parametrize("num,label,call,limit", CRITERIA, ids=[f"criterion{c[0]}" for c in CRITERIA])
def test_criterion(num, label, call, limit, capsys):
    ok, line = run_criterion(num, label, call, limit)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def test_criterion8_determinism(tmp_path, capsys):
    ok, line = run_determinism(tmp_path)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    all_ok = True
    for crit in CRITERIA:
        ok, line = run_criterion(*crit)
        print(line, flush=True)
        all_ok &= ok
    with tempfile.TemporaryDirectory() as d:
        ok, line = run_determinism(Path(d))
    print(line)
    sys.exit(0 if all_ok and ok else 1)
