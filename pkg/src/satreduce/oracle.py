"""Exhaustive-enumeration referee.

Assignments are integers: bit ``v-1`` holds the value of variable ``v``.
Enumeration runs in ascending order in numpy chunks, so the first model
found is the least one in that order.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .encoder import ConstraintSystem
from .formula import Assignment, CnfFormula, Outcome, evaluate

DEFAULT_VAR_LIMIT = 26
CHUNK_BITS = 16


class VariableLimitExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleResult:
    verdict: Outcome
    model: Optional[Assignment]
    model_count: Optional[int]
    elapsed: float

    @property
    def sat(self) -> bool:
        return self.verdict is Outcome.SAT


def _chunks(nbits: int):
    total = 1 << nbits
    step = min(total, 1 << CHUNK_BITS)
    for start in range(0, total, step):
        yield np.arange(start, start + step, dtype=np.int64)


def _enumerate(nbits: int, accept, count: bool) -> tuple[Optional[int], Optional[int]]:
    first, n_models = None, 0
    for chunk in _chunks(nbits):
        ok = accept(chunk)
        hits = np.flatnonzero(ok)
        if len(hits):
            if first is None:
                first = int(chunk[hits[0]])
            if not count:
                return first, None
            n_models += len(hits)
    return first, (n_models if count else None)


def brute_force_sat(f: CnfFormula, var_limit: int = DEFAULT_VAR_LIMIT, count: bool = False) -> OracleResult:
    if f.num_vars > var_limit:
        raise VariableLimitExceeded(f"{f.num_vars} variables exceed limit {var_limit}")
    t0 = time.perf_counter()
    masks = []
    for c in f.clauses:
        pos = neg = 0
        for lit in c:
            if lit.negated:
                neg |= 1 << (lit.var - 1)
            else:
                pos |= 1 << (lit.var - 1)
        masks.append((pos, neg))

    def accept(a):
        ok = np.ones(a.shape, dtype=bool)
        for pos, neg in masks:
            ok &= ((a & pos) != 0) | ((~a & neg) != 0)
        return ok

    first, n_models = _enumerate(f.num_vars, accept, count)
    model = None
    if first is not None:
        model = Assignment({v: bool(first >> (v - 1) & 1) for v in range(1, f.num_vars + 1)}, f.num_vars)
        assert evaluate(f, model)
    return OracleResult(Outcome.of(first is not None), model, n_models, time.perf_counter() - t0)


@dataclass(frozen=True)
class SystemResult:
    verdict: Outcome
    solution: Optional[frozenset]  # chosen indicators of the first solution
    solution_count: Optional[int]
    elapsed: float

    @property
    def sat(self) -> bool:
        return self.verdict is Outcome.SAT


def brute_force_system(system: ConstraintSystem, var_limit: int = DEFAULT_VAR_LIMIT, count: bool = False) -> SystemResult:
    """Enumerate indicator assignments against every exactly-one and NAND constraint."""
    index = system.dense_index
    if len(index) > var_limit:
        raise VariableLimitExceeded(f"{len(index)} indicators exceed limit {var_limit}")
    t0 = time.perf_counter()
    eo_masks = [sum(1 << index[x] for x in eo.indicators) for eo in system.exactly_one]
    nand_masks = [(1 << index[p.first]) | (1 << index[p.second]) for p in system.exclusions]

    def accept(a):
        ok = np.ones(a.shape, dtype=bool)
        for mask in eo_masks:
            x = a & mask
            ok &= (x != 0) & ((x & (x - 1)) == 0)
        for mask in nand_masks:
            ok &= (a & mask) != mask
        return ok

    first, n = _enumerate(len(index), accept, count)
    chosen = None
    if first is not None:
        chosen = frozenset(x for x, k in index.items() if first >> k & 1)
    return SystemResult(Outcome.of(first is not None), chosen, n, time.perf_counter() - t0)
