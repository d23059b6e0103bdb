"""Compatibility-matrix elimination over an indicator constraint system.

Every constraint is represented by its satisfying rows (its "true rows").
For each ordered pair of constraints a < b there is a Boolean matrix whose
cell (r, s) says that row r of a and row s of b agree on shared indicators.
Constraints are eliminated in order; eliminating k keeps a cell (a, b) of
the pair (i, j) only if some row of k is compatible with both a and b. An
all-false matrix proves the system unsatisfiable. After the clause block is
eliminated only exclusion-vs-exclusion matrices remain (the box matrix);
the last surviving matrix decides the verdict.

The elimination rule is a reconstruction: it is sound for UNSAT but not
complete, and the harness measures how often it answers SAT wrongly.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .encoder import (
    Constraint,
    ConstraintSystem,
    ExactlyOne,
    ExclusionPair,
    IndicatorId,
    build_system,
)
from .formula import CnfFormula, Outcome

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrueRows:
    constraint: Constraint
    rows: tuple[tuple[bool, ...], ...]

    @property
    def scope(self) -> tuple[IndicatorId, ...]:
        return self.constraint.scope

    def __len__(self):
        return len(self.rows)


def true_rows(c: Constraint) -> TrueRows:
    if isinstance(c, ExactlyOne):
        k = len(c.indicators)
        rows = tuple(tuple(i == j for j in range(k)) for i in range(k))
    elif isinstance(c, ExclusionPair):
        rows = ((False, False), (False, True), (True, False))
    else:
        raise TypeError(f"unsupported constraint {c!r}")
    return TrueRows(c, rows)


@dataclass
class CompatMatrix:
    i: int  # 1-based constraint indices, i < j
    j: int
    cells: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.cells.shape

    def any(self) -> bool:
        return bool(self.cells.any())


def initial_matrix(a: Constraint, b: Constraint, i: int = 0, j: int = 0) -> CompatMatrix:
    """Cell (r, s) is true iff row r of ``a`` and row s of ``b`` agree on shared indicators."""
    ra, rb = true_rows(a), true_rows(b)
    pos_b = {x: k for k, x in enumerate(rb.scope)}
    shared = [(ka, pos_b[x]) for ka, x in enumerate(ra.scope) if x in pos_b]
    cells = np.array(
        [[all(r[ka] == s[kb] for ka, kb in shared) for s in rb.rows] for r in ra.rows],
        dtype=bool,
    )
    return CompatMatrix(i, j, cells)


@dataclass
class BoxMatrix:
    """Upper-triangular collection of exclusion-vs-exclusion matrices.

    Keys are 1-based positions (mu, nu) within the exclusion block.
    """

    n: int
    boxes: dict[tuple[int, int], np.ndarray]

    @property
    def element_count(self) -> int:
        return sum(b.size for b in self.boxes.values())

    def elements(self):
        """Yield ``(mu, nu, r, s, value)`` in canonical order: boxes lexicographic, cells row-major."""
        for (mu, nu) in sorted(self.boxes):
            box = self.boxes[(mu, nu)]
            for r in range(box.shape[0]):
                for s in range(box.shape[1]):
                    yield mu, nu, r + 1, s + 1, bool(box[r, s])


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    early_step: Optional[int] = None  # None means decided by the final matrix
    witness: Optional[tuple[int, int]] = None

    @property
    def sat(self) -> bool:
        return self.outcome is Outcome.SAT

    @property
    def stage(self) -> str:
        return "final" if self.early_step is None else f"early:{self.early_step}"


@dataclass(frozen=True)
class StepTrace:
    k: int
    pairs: int
    cleared: int
    all_false: bool
    true_cells: int

    def __str__(self):
        return f"step {self.k}: pairs={self.pairs} cleared={self.cleared} allfalse?={self.all_false}"


class AllFalseMatrix(Exception):
    def __init__(self, step: int, pair: tuple[int, int], trace: StepTrace | None = None):
        super().__init__(f"matrix {pair} all false after step {step}")
        self.step, self.pair, self.trace = step, pair, trace


class EliminationState:
    """Dense store of all pairwise matrices for one system.

    ``cells[a, b]`` (0-based, padded to the widest row table) holds the matrix
    of the pair (a, b); ``cells[b, a]`` is its transpose. Padded rows are
    always false. Mutated in place by :func:`eliminate_step`.
    """

    def __init__(self, system: ConstraintSystem):
        self.system = system
        self.constraints = system.constraints
        self.rows = [true_rows(c) for c in self.constraints]
        self.size = len(self.constraints)
        self.eliminated = 0
        self.cells = self._initial_cells()

    def _initial_cells(self) -> np.ndarray:
        K = self.size
        R = max((len(r) for r in self.rows), default=1)
        index = self.system.dense_index
        N = len(index)
        values = np.zeros((K, R, N), dtype=np.float32)
        outside = np.zeros((K, R, N), dtype=np.float32)
        valid = np.zeros((K, R), dtype=bool)
        for c, tr in enumerate(self.rows):
            cols = [index[x] for x in tr.scope]
            for r, row in enumerate(tr.rows):
                valid[c, r] = True
                for col, v in zip(cols, row):
                    values[c, r, col] = v
                    outside[c, r, col] = not v
        # disagreements on shared indicators, counted by a matmul over indicators
        X = values.reshape(K * R, N)
        Y = outside.reshape(K * R, N)
        P = X @ Y.T
        agree = ((P + P.T) == 0).reshape(K, R, K, R).transpose(0, 2, 1, 3)
        cells = agree & valid[:, None, :, None] & valid[None, :, None, :]
        cells[np.arange(K), np.arange(K)] = False
        self.width = R
        return cells

    def row_count(self, c: int) -> int:
        return len(self.rows[c - 1])

    def matrix(self, i: int, j: int) -> CompatMatrix:
        """Current matrix of the 1-based pair (i, j), trimmed to real rows."""
        if not i < j:
            raise ValueError("need i < j")
        cells = self.cells[i - 1, j - 1, : self.row_count(i), : self.row_count(j)].copy()
        return CompatMatrix(i, j, cells)

    def live_pairs(self) -> list[tuple[int, int]]:
        lo = self.eliminated + 1
        return [(i, j) for i in range(lo, self.size + 1) for j in range(i + 1, self.size + 1)]

    def true_cell_count(self) -> int:
        lo = self.eliminated
        sub = self.cells[lo:, lo:]
        iu = np.triu_indices(self.size - lo, 1)
        return int(sub[iu].sum())


def eliminate_step(state: EliminationState, k: int) -> StepTrace:
    """Eliminate constraint ``k`` (1-based); it must be the first live one.

    Raises AllFalseMatrix when a surviving matrix loses its last true cell.
    """
    if k != state.eliminated + 1:
        raise ValueError(f"constraint {k} is not next to eliminate (expected {state.eliminated + 1})")
    K, R = state.size, state.width
    rest = K - k
    A = state.cells[k - 1, k:]  # (rest, R_k, R_i): rows of k vs rows of i
    B = A.transpose(0, 2, 1).reshape(rest * R, R).astype(np.float32)
    support = ((B @ B.T) > 0).reshape(rest, R, rest, R).transpose(0, 2, 1, 3)
    before = state.cells[k:, k:]
    after = before & support
    iu = np.triu_indices(rest, 1)
    cleared = int((before[iu] & ~after[iu]).sum())
    state.cells[k:, k:] = after
    state.eliminated = k
    alive = after[iu].reshape(len(iu[0]), -1).any(axis=1)
    trace = StepTrace(k, len(iu[0]), cleared, not bool(alive.all()), int(after[iu].sum()))
    log.debug("%s", trace)
    if trace.all_false:
        t = int(np.flatnonzero(~alive)[0])
        raise AllFalseMatrix(k, (int(iu[0][t]) + k + 1, int(iu[1][t]) + k + 1), trace)
    return trace


@dataclass
class PipelineResult:
    system: ConstraintSystem
    verdict: Verdict
    S: Optional[BoxMatrix] = None
    R: Optional[np.ndarray] = None
    trace: list[StepTrace] = field(default_factory=list)

    @property
    def sat(self) -> bool:
        return self.verdict.sat


def _snapshot_boxes(state: EliminationState) -> BoxMatrix:
    m, n = state.system.m, state.system.n
    boxes = {}
    for mu in range(1, n + 1):
        for nu in range(mu + 1, n + 1):
            boxes[(mu, nu)] = state.matrix(m + mu, m + nu).cells
    return BoxMatrix(n, boxes)


def run_simplified(system: ConstraintSystem, on_step: Callable[[StepTrace], None] | None = None) -> PipelineResult:
    m, n = system.m, system.n
    if n == 0:
        # no complementary pairs: every exactly-one constraint is independently satisfiable
        return PipelineResult(system, Verdict(Outcome.SAT))
    state = EliminationState(system)
    result = PipelineResult(system, Verdict(Outcome.SAT))
    K = state.size
    for k in range(1, K - 1):
        try:
            t = eliminate_step(state, k)
        except AllFalseMatrix as exc:
            result.trace.append(exc.trace)
            if on_step:
                on_step(exc.trace)
            result.verdict = Verdict(Outcome.UNSAT, early_step=exc.step)
            return result
        result.trace.append(t)
        if on_step:
            on_step(t)
        if k == m and n >= 2:
            result.S = _snapshot_boxes(state)
    R = state.matrix(K - 1, K).cells
    result.R = R
    hits = np.argwhere(R)
    if len(hits):
        result.verdict = Verdict(Outcome.SAT, witness=(int(hits[0][0]) + 1, int(hits[0][1]) + 1))
    else:
        result.verdict = Verdict(Outcome.UNSAT)
    return result


def run_pipeline(f: CnfFormula) -> PipelineResult:
    return run_simplified(build_system(f))


def shortest_last(f: CnfFormula) -> tuple[CnfFormula, list[int]]:
    """Move the two shortest clauses (earliest on ties) to the end, keeping relative order."""
    if f.m < 2:
        return f, list(range(f.m))
    ranked = sorted(range(f.m), key=lambda i: (len(f.clauses[i]), i))
    tail = sorted(ranked[:2])
    order = [i for i in range(f.m) if i not in tail] + tail
    return CnfFormula(tuple(f.clauses[i] for i in order), f.num_vars), order


@dataclass
class PermutationRun:
    formula: CnfFormula
    order: list[int]
    result: PipelineResult
    r_shape: Optional[tuple[int, int]]
    # None when the shrink claim does not apply (last two clauses not both short)
    shrink_observed: Optional[bool]


def run_with_permutation(f: CnfFormula) -> PermutationRun:
    g, order = shortest_last(f)
    res = run_pipeline(g)
    shape = tuple(res.R.shape) if res.R is not None else None
    claim = None
    if g.m >= 2 and all(len(c) < 3 for c in g.clauses[-2:]):
        claim = shape is not None and shape[0] * shape[1] < 9
    return PermutationRun(g, order, res, shape, claim)
