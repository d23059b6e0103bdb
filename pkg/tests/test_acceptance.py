"""Exit criteria. Each test prints one PASS/FAIL line; run with ``-m acceptance -s``
to see them inline (they also appear in the terminal summary).

Reports and figures from the mining runs are written to ``artifacts/``.
"""

import itertools
import math
import random
from pathlib import Path

import pytest

from satreduce.compat import run_pipeline
from satreduce.encoder import build_system
from satreduce.formula import CnfFormula, dnf_expansion_satisfiable, evaluate
from satreduce.harness import Contradiction, GenParams, extract_model, generate, mine, permutation_sensitivity
from satreduce.oracle import brute_force_sat, brute_force_system
from satreduce.plotting import render_report
from satreduce.reducer import TwoSatInstance, reduce_to_1sat, reduce_to_2sat, solve_2sat

pytestmark = pytest.mark.acceptance

EXHAUSTIVE = GenParams(3, 3, 3)
RANDOM = GenParams(8, 10, 3, mode="random", seed=20240601, sample_count=10_000)
ARTIFACTS = Path(__file__).resolve().parent.parent / "artifacts"

RESULTS = []


def report_line(criterion, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


@pytest.fixture(scope="module")
def corpus():
    return list(generate(EXHAUSTIVE))


@pytest.fixture(scope="module")
def random_corpus():
    return list(generate(RANDOM))


@pytest.fixture(scope="module")
def exhaustive_run(corpus):
    records = []
    report = mine(EXHAUSTIVE, formulas=corpus, on_record=records.append)
    return report, records


@pytest.fixture(scope="module")
def random_run(random_corpus):
    records = []
    report = mine(RANDOM, on_record=records.append)
    return report, records


def test_1_encoder_equivalence(corpus):
    bad = [f for f in corpus if brute_force_system(build_system(f)).verdict != brute_force_sat(f).verdict]
    assert report_line(1, not bad, f"indicator system agrees with oracle on {len(corpus) - len(bad)}/{len(corpus)}")


def test_2_dnf_characterization(corpus):
    bad = [f for f in corpus if dnf_expansion_satisfiable(f) != brute_force_sat(f).sat]
    assert report_line(2, not bad, f"DNF expansion agrees with oracle on {len(corpus) - len(bad)}/{len(corpus)}")


def test_3_unsat_soundness(exhaustive_run, random_run):
    n = len(exhaustive_run[1]) + len(random_run[1])
    violations = exhaustive_run[0].totals["su"] + random_run[0].totals["su"]
    assert len(random_run[1]) >= 10_000
    assert report_line(3, violations == 0, f"{violations} pipeline-UNSAT/oracle-SAT cases over {n} instances")


def test_4_shapes(corpus, random_corpus):
    checked = boxes_ok = 0
    onesat_bad = []
    for f in itertools.chain(corpus, random_corpus):
        res = run_pipeline(f)
        n = res.system.n
        if n >= 2 and (res.verdict.early_step is None or res.verdict.early_step > res.system.m):
            checked += 1
            S = res.S
            e = 9 * math.comb(n, 2)
            if (
                S is not None
                and len(S.boxes) == math.comb(n, 2)
                and all(b.shape == (3, 3) for b in S.boxes.values())
                and S.element_count == e
            ):
                boxes_ok += 1
        one = reduce_to_1sat(f, res)
        if not (one.is_false or one.t <= 9):
            onesat_bad.append(f)
    ok = boxes_ok == checked and not onesat_bad
    assert report_line(
        4, ok, f"box matrix shape exact on {boxes_ok}/{checked} instances with n>=2; 1-SAT bound violated {len(onesat_bad)} times"
    )


def all_two_sat_instances():
    """Every clause set over 1-2 variables, every set of <=4 clauses over 3 variables,
    and 3000 seeded instances over 4..10 variables."""
    for nv, max_k in ((1, None), (2, None), (3, 4)):
        lits = [s * v for v in range(1, nv + 1) for s in (1, -1)]
        alphabet = [(a,) for a in lits] + [
            (a, b) for a, b in itertools.combinations(lits, 2) if abs(a) != abs(b)
        ]
        for k in range(0, (max_k or len(alphabet)) + 1):
            for cs in itertools.combinations(alphabet, k):
                yield nv, list(cs)
    rng = random.Random(11)
    for _ in range(3000):
        nv = rng.randint(4, 10)
        cs = [
            tuple(rng.choice((1, -1)) * v for v in rng.sample(range(1, nv + 1), rng.randint(1, 2)))
            for _ in range(rng.randint(1, 3 * nv))
        ]
        yield nv, cs


def test_5_emitted_two_sat(corpus, random_corpus):
    emitted = unsat_emitted = 0
    for f in itertools.chain(corpus, random_corpus):
        red = reduce_to_2sat(f)
        if isinstance(red, TwoSatInstance):
            emitted += 1
            unsat_emitted += not solve_2sat(red).sat
    total = disagree = 0
    for nv, cs in all_two_sat_instances():
        total += 1
        res = solve_2sat(TwoSatInstance(nv, tuple(cs)))
        truth = brute_force_sat(CnfFormula.from_ints(cs, nv)).sat if cs else True
        if res.sat != truth or (res.sat and not all(any(res.model[abs(x)] == (x > 0) for x in c) for c in cs)):
            disagree += 1
    ok = unsat_emitted == 0 and disagree == 0
    assert report_line(
        5, ok, f"{emitted - unsat_emitted}/{emitted} emitted instances SAT; solver matches brute force on {total - disagree}/{total}"
    )


def test_6_claim_ledger(exhaustive_run, random_run):
    ARTIFACTS.mkdir(exist_ok=True)
    lines = []
    for name, (report, _) in (("exhaustive", exhaustive_run), ("random", random_run)):
        (ARTIFACTS / f"mining_{name}.json").write_text(report.dumps())
        render_report(report, ARTIFACTS / f"figures_{name}")
        lines.append(
            f"{name}: totals={report.totals} R-criterion counterexamples={report.totals['us']} "
            f"iff violations={report.iff_claim_violations}"
        )
    ok = all(r.soundness_violations == 0 for r, _ in (exhaustive_run, random_run))
    assert report_line(6, ok, "; ".join(lines))


def test_6_permutation_sensitivity(corpus):
    counts = permutation_sensitivity(corpus)
    print(f"[INFO] permutation sensitivity on exhaustive corpus: {counts}")


def test_7_model_extraction(corpus, random_corpus, exhaustive_run, random_run):
    silent = models = 0
    contradictions = []
    for fs, (report, records) in ((corpus, exhaustive_run), (random_corpus, random_run)):
        for f, rec in zip(fs, records):
            if rec.pair != "ss":
                continue
            got = extract_model(f)
            if isinstance(got, Contradiction):
                witness = got.locate_witness()
                # the witness must be a pipeline-SAT/oracle-UNSAT case, the kind counted in the ledger
                if witness is None or not run_pipeline(witness).sat:
                    silent += 1
                contradictions.append(got)
            elif evaluate(f, got):
                models += 1
            else:
                silent += 1
    ledger_us = exhaustive_run[0].totals["us"] + random_run[0].totals["us"]
    ok = silent == 0 and (not contradictions or ledger_us > 0)
    assert report_line(
        7, ok, f"{models} verified models, {len(contradictions)} contradictions traced to missed-UNSAT residuals, {silent} silent failures"
    )


def test_8_determinism(random_run):
    again = mine(RANDOM).dumps()
    assert report_line(8, again == random_run[0].dumps(), f"seeded mine rerun byte-identical ({len(again)} bytes)")
