import json

import pytest

from satreduce.formula import CnfFormula, Outcome, evaluate, parse_dimacs
from satreduce.harness import (
    Contradiction,
    GenParams,
    SoundnessViolation,
    SpaceCapExceeded,
    clause_alphabet,
    compare,
    exhaustive_size,
    extract_model,
    generate,
    mine,
    permutation_sensitivity,
)
from satreduce.compat import run_pipeline

from conftest import naive_sat

F = CnfFormula.from_ints

# pipeline SAT, oracle UNSAT: x2, x3 true and x4 false falsify the first clause
MISSED_UNSAT = F([[4, -2, -3], [-4], [3], [2]])


def test_generate_smallest_space():
    fs = list(generate(GenParams(1, 1, 1)))
    assert [f.to_ints() for f in fs] == [[[1]], [[-1]]]


def test_clause_alphabet_two_vars():
    alpha = clause_alphabet(2, 2)
    assert len(alpha) == 8
    assert [c.to_ints() for c in alpha[4:]] == [[1, 2], [1, -2], [-1, 2], [-1, -2]]
    params = GenParams(2, 2, 2)
    assert exhaustive_size(params) == 8 + 8**2 == len(list(generate(params)))


def test_exhaustive_corpus_size():
    # 26 clauses over three variables; sequences of length 1..3
    assert exhaustive_size(GenParams(3, 3, 3)) == 26 + 26**2 + 26**3


def test_space_cap():
    with pytest.raises(SpaceCapExceeded):
        next(generate(GenParams(3, 3, 3, space_cap=1000)))


def test_random_stream_is_seeded():
    p = GenParams(6, 5, 3, mode="random", seed=42, sample_count=50)
    a = [f.to_ints() for f in generate(p)]
    assert a == [f.to_ints() for f in generate(p)]
    assert a != [f.to_ints() for f in generate(GenParams(6, 5, 3, mode="random", seed=43, sample_count=50))]
    assert all(1 <= len(c) <= 3 for f in a for c in f)


def test_compare_complementary_units():
    rec = compare(F([[1], [-1]]))
    assert (rec.oracle, rec.pipeline, rec.twosat, rec.onesat) == (Outcome.UNSAT,) * 4
    assert rec.early_stage == 1 and rec.reduction == "singular-false"
    assert all(rec.flags.values())


def test_compare_single_clause():
    rec = compare(F([[1, 2]]))
    assert rec.oracle is rec.pipeline is Outcome.SAT
    assert rec.reduction == "singular-1sat" and all(rec.flags.values())


def test_compare_missed_unsat():
    rec = compare(MISSED_UNSAT)
    assert rec.pair == "us"
    assert rec.reduction == "emitted" and rec.twosat is Outcome.SAT
    assert rec.flags == {"pipeline": False, "twosat_iff": False, "onesat": False}


def test_mine_small_exhaustive():
    report = mine(GenParams(2, 2, 2))
    assert report.soundness_violations == 0
    assert report.processed == 72
    assert report.totals["su"] == 0


def test_mine_empty_stream():
    report = mine(GenParams(2, 2, 2), formulas=[])
    assert report.totals == {"ss": 0, "su": 0, "us": 0, "uu": 0}
    assert report.to_json()["counterexamples"] == []


def test_mine_collects_counterexamples():
    report = mine(GenParams(4, 4, 3), formulas=[MISSED_UNSAT, F([[1], [-1]])])
    assert report.totals == {"ss": 0, "su": 0, "us": 1, "uu": 1}
    assert report.iff_claim_violations == 1
    (cx,) = report.counterexamples
    assert parse_dimacs(cx["dimacs"]) == MISSED_UNSAT
    assert (cx["oracle"], cx["pipeline"], cx["twosat"], cx["stage"]) == ("UNSAT", "SAT", "SAT", "final")


def test_mine_counterexample_cap():
    report = mine(GenParams(4, 4, 3), counterexample_cap=2, formulas=[MISSED_UNSAT] * 5)
    assert len(report.counterexamples) == 2 and report.totals["us"] == 5


def test_mine_json_fields_and_determinism():
    p = GenParams(5, 6, 3, mode="random", seed=9, sample_count=200)
    a, b = mine(p).dumps(), mine(p).dumps()
    assert a == b
    doc = json.loads(a)
    assert list(doc) == ["params", "totals", "iffClaimViolations", "soundnessViolations", "counterexamples", "version"]
    assert set(doc["totals"]) == {"ss", "su", "us", "uu"}
    assert doc["params"]["seed"] == 9


def test_soundness_violation_is_fatal(monkeypatch):
    from satreduce import harness
    from satreduce.compat import Verdict

    real = harness.run_pipeline

    def broken(f):
        res = real(f)
        res.verdict = Verdict(Outcome.UNSAT, early_step=1)
        return res

    monkeypatch.setattr(harness, "run_pipeline", broken)
    with pytest.raises(SoundnessViolation):
        mine(GenParams(1, 1, 1))


def test_extract_model_examples():
    f = F([[1, 2], [-1, 2]])
    a = extract_model(f)
    assert evaluate(f, a) and a.bindings == {1: True, 2: True}
    # constant true after the first binding
    assert extract_model(F([[1, 2]])).bindings == {1: True, 2: False}


def test_extract_model_skips_absent_variables():
    f = F([[3]], 4)
    a = extract_model(f)
    assert a.is_total and evaluate(f, a)


def test_extract_model_contradiction_points_at_missed_unsat():
    f = F([[5, 1], [-3, -4], [3], [-5, 4, 2], [4, 5], [-2, -1], [2, 4, 1], [3, 1, 5]])
    assert naive_sat(f.to_ints(), 5) and run_pipeline(f).sat
    got = extract_model(f)
    assert isinstance(got, Contradiction)
    assert not evaluate(f, got.assignment)
    witness = got.locate_witness()
    assert witness is not None
    assert run_pipeline(witness).sat and not naive_sat(witness.to_ints(), 5)


def test_extract_model_on_small_corpus(small_corpus):
    for f in small_corpus:
        if run_pipeline(f).sat:
            got = extract_model(f)
            if isinstance(got, Contradiction):
                assert got.locate_witness() is not None
            else:
                assert evaluate(f, got)


def test_permutation_sensitivity_counts(small_corpus):
    counts = permutation_sensitivity(small_corpus[:100])
    assert counts["instances"] == 100
    assert counts.get("verdict_changed", 0) <= 100
