"""Instance generation, oracle-vs-pipeline comparison, counterexample mining
and the self-reducibility model-extraction loop."""

from __future__ import annotations

import itertools
import json
import random
import time
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Union

from . import __version__
from .compat import run_pipeline
from .formula import (
    Assignment,
    Clause,
    CnfFormula,
    Literal,
    Outcome,
    evaluate,
    serialize_dimacs,
    simplify,
)
from .oracle import DEFAULT_VAR_LIMIT, brute_force_sat
from .reducer import Singular, reduce_to_1sat, reduce_to_2sat, two_sat_verdict

DEFAULT_SPACE_CAP = 1_000_000
DEFAULT_COUNTEREXAMPLE_CAP = 100


@dataclass(frozen=True)
class GenParams:
    max_vars: int
    max_clauses: int
    max_width: int
    mode: str = "exhaustive"  # or "random"
    seed: int = 0
    sample_count: int = 0
    space_cap: int = DEFAULT_SPACE_CAP

    def __post_init__(self):
        if self.mode not in ("exhaustive", "random"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if min(self.max_vars, self.max_clauses, self.max_width) < 1:
            raise ValueError("maxVars, maxClauses and maxWidth must be >= 1")
        if self.mode == "exhaustive" and self.max_width > self.max_vars:
            object.__setattr__(self, "max_width", self.max_vars)

    def echo(self) -> dict:
        return {
            "maxVars": self.max_vars,
            "maxClauses": self.max_clauses,
            "maxWidth": self.max_width,
            "mode": self.mode,
            "seed": self.seed,
            "sampleCount": self.sample_count,
        }


class SpaceCapExceeded(ValueError):
    pass


def clause_alphabet(max_vars: int, max_width: int) -> list[Clause]:
    """All clauses over distinct variables, sorted by variable, ordered by width, variables, then signs."""
    out = []
    for w in range(1, min(max_width, max_vars) + 1):
        for vs in itertools.combinations(range(1, max_vars + 1), w):
            for signs in itertools.product((False, True), repeat=w):
                out.append(Clause(tuple(Literal(v, neg) for v, neg in zip(vs, signs))))
    return out


def exhaustive_size(params: GenParams) -> int:
    a = len(clause_alphabet(params.max_vars, params.max_width))
    return sum(a**k for k in range(1, params.max_clauses + 1))


def _formula(clauses) -> CnfFormula:
    clauses = tuple(clauses)
    return CnfFormula(clauses, max(lit.var for c in clauses for lit in c))


def generate(params: GenParams) -> Iterator[CnfFormula]:
    """Exhaustive mode yields every clause sequence of length 1..maxClauses over
    the canonical alphabet (repeats allowed, order significant). Random mode
    draws clause count, widths and literals uniformly from ``seed``."""
    if params.mode == "exhaustive":
        size = exhaustive_size(params)
        if size > params.space_cap:
            raise SpaceCapExceeded(f"{size} formulas exceed cap {params.space_cap}")
        alphabet = clause_alphabet(params.max_vars, params.max_width)
        for k in range(1, params.max_clauses + 1):
            for seq in itertools.product(alphabet, repeat=k):
                yield _formula(seq)
        return
    rng = random.Random(params.seed)
    for _ in range(params.sample_count):
        clauses = []
        for _ in range(rng.randint(1, params.max_clauses)):
            width = rng.randint(1, params.max_width)
            lits = [rng.randint(1, params.max_vars) * rng.choice((1, -1)) for _ in range(width)]
            clauses.append(Clause.from_ints(lits))
        yield _formula(clauses)


@dataclass
class ComparisonRecord:
    instance: str
    m: int
    n: int
    oracle: Outcome
    pipeline: Outcome
    twosat: Outcome
    onesat: Outcome
    early_stage: Optional[int]
    stage: str
    reduction: str
    onesat_size: int
    timings: dict = field(default_factory=dict)

    @property
    def flags(self) -> dict[str, bool]:
        return {
            "pipeline": self.pipeline == self.oracle,
            "twosat_iff": self.twosat == self.oracle,
            "onesat": self.onesat == self.oracle,
        }

    @property
    def pair(self) -> str:
        """Two-letter verdict pair: oracle first, pipeline second."""
        return ("s" if self.oracle is Outcome.SAT else "u") + ("s" if self.pipeline is Outcome.SAT else "u")

    def to_json(self) -> dict:
        return {
            "instance": self.instance,
            "m": self.m,
            "n": self.n,
            "oracle": self.oracle.value,
            "pipeline": self.pipeline.value,
            "twosat": self.twosat.value,
            "onesat": self.onesat.value,
            "earlyStage": self.early_stage,
            "stage": self.stage,
            "reduction": self.reduction,
            "onesatSize": self.onesat_size,
            "agreement": self.flags,
            "timings": self.timings,
        }


def compare(f: CnfFormula, var_limit: int = DEFAULT_VAR_LIMIT) -> ComparisonRecord:
    timings = {}
    t = time.perf_counter()
    oracle = brute_force_sat(f, var_limit)
    timings["oracle"] = time.perf_counter() - t
    t = time.perf_counter()
    res = run_pipeline(f)
    timings["pipeline"] = time.perf_counter() - t
    t = time.perf_counter()
    two = reduce_to_2sat(f, res)
    two_verdict = two_sat_verdict(two)
    timings["twosat"] = time.perf_counter() - t
    one = reduce_to_1sat(f, res)
    return ComparisonRecord(
        instance=serialize_dimacs(f),
        m=f.m,
        n=res.system.n,
        oracle=oracle.verdict,
        pipeline=res.verdict.outcome,
        twosat=two_verdict,
        onesat=one.verdict,
        early_stage=res.verdict.early_step,
        stage=res.verdict.stage,
        reduction=two.value if isinstance(two, Singular) else "emitted",
        onesat_size=one.t,
        timings=timings,
    )


@dataclass
class Contradiction:
    """The extraction loop ended on an assignment that falsifies the formula.

    ``kept`` lists every residual formula the loop accepted on a SAT pipeline
    verdict, starting with the input; at least one of them must be a
    pipeline-SAT/oracle-UNSAT instance.
    """

    formula: CnfFormula
    assignment: Assignment
    kept: list[CnfFormula]

    def locate_witness(self, var_limit: int = DEFAULT_VAR_LIMIT) -> Optional[CnfFormula]:
        for g in self.kept:
            if not brute_force_sat(g, var_limit).sat:
                return g
        return None


def extract_model(f: CnfFormula) -> Union[Assignment, Contradiction]:
    """Fix variables in ascending order, keeping ``True`` whenever the
    pipeline still answers SAT on the simplified residual."""
    bindings: dict[int, bool] = {}
    current: Union[CnfFormula, bool] = f
    kept = [f]
    for v in range(1, f.num_vars + 1):
        if current is True or current is False:
            bindings[v] = False
            continue
        if v not in current.variables():
            bindings[v] = True
            continue
        trial = simplify(current, Assignment({v: True}, f.num_vars))
        if trial is True or (trial is not False and run_pipeline(trial).sat):
            bindings[v] = True
            current = trial
            if trial is not True:
                kept.append(trial)
        else:
            bindings[v] = False
            current = simplify(current, Assignment({v: False}, f.num_vars))
    a = Assignment(bindings, f.num_vars)
    if evaluate(f, a):
        return a
    return Contradiction(f, a, kept)


class SoundnessViolation(RuntimeError):
    """The pipeline answered UNSAT on a satisfiable instance: the engine itself is wrong."""

    def __init__(self, record: ComparisonRecord):
        super().__init__("pipeline UNSAT on an oracle-SAT instance:\n" + record.instance)
        self.record = record


@dataclass
class MiningReport:
    params: dict
    totals: dict = field(default_factory=lambda: {"ss": 0, "su": 0, "us": 0, "uu": 0})
    iff_claim_violations: int = 0
    soundness_violations: int = 0
    counterexamples: list = field(default_factory=list)
    counterexample_cap: int = DEFAULT_COUNTEREXAMPLE_CAP
    # in-memory only; not part of the JSON artifact
    by_clause_count: dict = field(default_factory=lambda: defaultdict(Counter))
    contradictions: list = field(default_factory=list)

    @property
    def processed(self) -> int:
        return sum(self.totals.values())

    def add(self, rec: ComparisonRecord) -> None:
        self.totals[rec.pair] += 1
        row = self.by_clause_count[rec.m]
        row[rec.pair] += 1
        if rec.pair == "su":
            self.soundness_violations += 1
        if not rec.flags["twosat_iff"]:
            self.iff_claim_violations += 1
            row["iff"] += 1
        if (rec.pair == "us" or not rec.flags["twosat_iff"]) and len(self.counterexamples) < self.counterexample_cap:
            self.counterexamples.append(
                {
                    "dimacs": rec.instance,
                    "oracle": rec.oracle.value,
                    "pipeline": rec.pipeline.value,
                    "twosat": rec.twosat.value,
                    "stage": rec.stage,
                }
            )

    def to_json(self) -> dict:
        return {
            "params": self.params,
            "totals": dict(self.totals),
            "iffClaimViolations": self.iff_claim_violations,
            "soundnessViolations": self.soundness_violations,
            "counterexamples": self.counterexamples,
            "version": __version__,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"


def mine(
    params: GenParams,
    counterexample_cap: int = DEFAULT_COUNTEREXAMPLE_CAP,
    extract: bool = False,
    formulas: Iterable[CnfFormula] | None = None,
    on_record: Callable[[ComparisonRecord], None] | None = None,
) -> MiningReport:
    """Fold :func:`compare` over the generated stream.

    Raises SoundnessViolation on the first pipeline-UNSAT/oracle-SAT instance.
    With ``extract`` the model-extraction loop also runs on every instance both
    sides call SAT and its contradictions are kept on the report.
    """
    report = MiningReport(params.echo(), counterexample_cap=counterexample_cap)
    stream = generate(params) if formulas is None else formulas
    for f in stream:
        rec = compare(f)
        if on_record:
            on_record(rec)
        report.add(rec)
        if rec.pair == "su":
            raise SoundnessViolation(rec)
        if extract and rec.pair == "ss":
            got = extract_model(f)
            if isinstance(got, Contradiction):
                report.contradictions.append(got)
    return report


def permutation_sensitivity(formulas: Iterable[CnfFormula]) -> dict:
    """Count pipeline verdict changes caused by moving the two shortest clauses last."""
    from .compat import run_with_permutation

    counts = Counter(dict.fromkeys(("instances", "verdict_changed", "shrink_claim_applicable", "shrink_claim_observed"), 0))
    for f in formulas:
        base = run_pipeline(f).verdict.outcome
        perm = run_with_permutation(f)
        counts["instances"] += 1
        if perm.result.verdict.outcome != base:
            counts["verdict_changed"] += 1
        if perm.shrink_observed is not None:
            counts["shrink_claim_applicable"] += 1
            counts["shrink_claim_observed"] += int(perm.shrink_observed)
    return dict(counts)
