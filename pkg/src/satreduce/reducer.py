"""Emission of the 2-SAT instance (exclusions plus one unit per box cell) and
the 1-SAT description of the final matrix, plus an implication-graph 2-SAT
solver used to check them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Union

from .compat import PipelineResult, run_pipeline
from .formula import CnfFormula, Outcome


class Singular(str, Enum):
    FALSE = "singular-false"
    ONE_SAT = "singular-1sat"


@dataclass(frozen=True)
class CellRef:
    var: int
    box: tuple[int, int]
    cell: tuple[int, int]
    value: bool


@dataclass(frozen=True)
class TwoSatInstance:
    """Clauses of width 1 or 2 over DIMACS-numbered variables.

    For emitted reductions the first ``len(exclusions)`` clauses are the NAND
    clauses and the rest are units over fresh variables described by ``mapping``.
    """

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]
    mapping: tuple[CellRef, ...] = ()
    indicator_names: dict = field(default_factory=dict)

    def to_dimacs(self) -> str:
        out = [f"c ind {v} = {name}\n" for v, name in sorted(self.indicator_names.items())]
        for ref in self.mapping:
            out.append(
                f"c map b{ref.var} = box({ref.box[0]},{ref.box[1]}) "
                f"cell({ref.cell[0]},{ref.cell[1]}) val({int(ref.value)})\n"
            )
        out.append(f"p cnf {self.num_vars} {len(self.clauses)}\n")
        out.extend(" ".join(map(str, c)) + " 0\n" for c in self.clauses)
        return "".join(out)


def reduce_to_2sat(f: CnfFormula, pipeline: PipelineResult | None = None) -> Union[TwoSatInstance, Singular]:
    res = pipeline or run_pipeline(f)
    system = res.system
    if system.n == 0:
        return Singular.ONE_SAT
    if res.verdict.early_step is not None and res.verdict.early_step <= system.m:
        return Singular.FALSE
    clauses = [(-system.flat_var(p.first), -system.flat_var(p.second)) for p in system.exclusions]
    base = system.formula.num_vars + len(system.dense_index)
    mapping = []
    if res.S is not None:
        for i, (mu, nu, r, s, val) in enumerate(res.S.elements(), start=1):
            mapping.append(CellRef(base + i, (mu, nu), (r, s), val))
            clauses.append((base + i,) if val else (-(base + i),))
    names = {system.flat_var(x): str(x) for x in system.indicators}
    return TwoSatInstance(base + len(mapping), tuple(clauses), tuple(mapping), names)


@dataclass(frozen=True)
class TwoSatResult:
    verdict: Outcome
    model: Optional[dict[int, bool]] = None

    @property
    def sat(self) -> bool:
        return self.verdict is Outcome.SAT


def _tarjan(nodes: Sequence[int], succ: dict[int, list[int]]) -> dict[int, int]:
    """Component id per node; ids are assigned in reverse topological order."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    comp: dict[int, int] = {}
    stack: list[int] = []
    on_stack: set[int] = set()
    counter = 0
    n_comp = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ.get(w, ()))))
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    u = work[-1][0]
                    low[u] = min(low[u], low[v])
                if low[v] == index[v]:
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp[w] = n_comp
                        if w == v:
                            break
                    n_comp += 1
    return comp


def solve_2sat(inst: TwoSatInstance) -> TwoSatResult:
    succ: dict[int, list[int]] = {}
    for c in inst.clauses:
        if not 1 <= len(c) <= 2:
            raise ValueError(f"2-SAT clause must have 1 or 2 literals, got {c}")
        a, b = (c[0], c[0]) if len(c) == 1 else c
        succ.setdefault(-a, []).append(b)
        succ.setdefault(-b, []).append(a)
    nodes = [x for v in range(1, inst.num_vars + 1) for x in (v, -v)]
    comp = _tarjan(nodes, succ)
    model = {}
    for v in range(1, inst.num_vars + 1):
        if comp[v] == comp[-v]:
            return TwoSatResult(Outcome.UNSAT)
        # lower id = nearer the sinks of the implication order
        model[v] = comp[v] < comp[-v]
    return TwoSatResult(Outcome.SAT, model)


def two_sat_verdict(reduction: Union[TwoSatInstance, Singular]) -> Outcome:
    """Literal-reading verdict of a reduction; singular cases are decided directly."""
    if reduction is Singular.FALSE:
        return Outcome.UNSAT
    if reduction is Singular.ONE_SAT:
        return Outcome.SAT
    return solve_2sat(reduction).verdict


@dataclass(frozen=True)
class OneSatInstance:
    """Unit literals over fresh variables 1..t, or the constant false (``literals is None``)."""

    literals: Optional[tuple[int, ...]]
    mapping: tuple[tuple[int, int], ...] = ()  # z_i -> 1-based cell (r, s) of the final matrix
    shape: Optional[tuple[int, int]] = None

    @property
    def is_false(self) -> bool:
        return self.literals is None

    @property
    def t(self) -> int:
        return 0 if self.literals is None else len(self.literals)

    @property
    def verdict(self) -> Outcome:
        return Outcome.of(not self.is_false)

    def to_dimacs(self) -> str:
        if self.is_false:
            return "c FALSE\np cnf 0 1\n0\n"
        out = [
            f"c map z{i} = cell({r},{s}) val({int(lit > 0)})\n"
            for i, ((r, s), lit) in enumerate(zip(self.mapping, self.literals), start=1)
        ]
        out.append(f"p cnf {self.t} {self.t}\n")
        out.extend(f"{lit} 0\n" for lit in self.literals)
        return "".join(out)


def reduce_to_1sat(f: CnfFormula, pipeline: PipelineResult | None = None) -> OneSatInstance:
    res = pipeline or run_pipeline(f)
    if not res.sat:
        return OneSatInstance(None)
    if res.R is None:
        # no final matrix (no exclusions): the empty conjunction
        return OneSatInstance(())
    rows, cols = res.R.shape
    cells = [(r + 1, s + 1) for r in range(rows) for s in range(cols)]
    lits = tuple((i if res.R[r - 1, s - 1] else -i) for i, (r, s) in enumerate(cells, start=1))
    return OneSatInstance(lits, tuple(cells), (rows, cols))
