"""Indicator encoding of a CNF formula.

Each literal occurrence gets an indicator ``ξ(i, j)`` ("literal j of clause i
is the pick"). Every clause contributes an exactly-one constraint over its
indicators; every pair of complementary occurrences in distinct clauses
contributes a NAND. Solutions of the combined system are exactly the
non-contradictory terms of the formula's DNF expansion.
"""

from __future__ import annotations

import math
from functools import cached_property
from dataclasses import dataclass
from typing import Iterable, Union

from .formula import Assignment, CnfFormula, Literal, dnf_term_count


@dataclass(frozen=True, order=True)
class IndicatorId:
    clause: int  # 1-based
    position: int  # 1-based

    def __str__(self):
        return f"ξ({self.clause},{self.position})"


@dataclass(frozen=True)
class ExactlyOne:
    indicators: tuple[IndicatorId, ...]

    @property
    def scope(self) -> tuple[IndicatorId, ...]:
        return self.indicators

    def __str__(self):
        return "EO " + " ".join(map(str, self.indicators))


@dataclass(frozen=True)
class ExclusionPair:
    first: IndicatorId
    second: IndicatorId

    def __post_init__(self):
        if self.first.clause >= self.second.clause:
            raise ValueError("exclusion pair must span clauses i < j")

    @property
    def scope(self) -> tuple[IndicatorId, ...]:
        return (self.first, self.second)

    def __str__(self):
        return f"NAND {self.first} {self.second}"


Constraint = Union[ExactlyOne, ExclusionPair]


@dataclass(frozen=True)
class ConstraintSystem:
    """Exactly-one block (one per clause) followed by the exclusion block."""

    formula: CnfFormula
    exactly_one: tuple[ExactlyOne, ...]
    exclusions: tuple[ExclusionPair, ...]

    @property
    def m(self) -> int:
        return len(self.exactly_one)

    @property
    def n(self) -> int:
        return len(self.exclusions)

    @property
    def constraints(self) -> tuple[Constraint, ...]:
        return self.exactly_one + self.exclusions

    @property
    def indicators(self) -> tuple[IndicatorId, ...]:
        return tuple(x for eo in self.exactly_one for x in eo.indicators)

    @cached_property
    def dense_index(self) -> dict[IndicatorId, int]:
        return {x: k for k, x in enumerate(self.indicators)}

    def flat_var(self, ind: IndicatorId) -> int:
        """DIMACS number of an indicator: placed after the original variables."""
        return self.formula.num_vars + 1 + self.dense_index[ind]

    def literal_of(self, ind: IndicatorId) -> Literal:
        return self.formula.clauses[ind.clause - 1].literals[ind.position - 1]

    def dump(self) -> str:
        return "".join(f"{c}\n" for c in self.constraints)


@dataclass(frozen=True)
class SizeReport:
    m: int
    indicator_count: int
    n: int
    t1: int
    t2: int
    p: int
    e: int


def complementary_pairs(f: CnfFormula) -> list[ExclusionPair]:
    pairs = []
    cs = f.clauses
    for i in range(len(cs)):
        for j in range(i + 1, len(cs)):
            for mu, a in enumerate(cs[i].literals, start=1):
                for nu, b in enumerate(cs[j].literals, start=1):
                    if a.complements(b):
                        pairs.append(ExclusionPair(IndicatorId(i + 1, mu), IndicatorId(j + 1, nu)))
    return pairs


def build_system(f: CnfFormula) -> ConstraintSystem:
    eo = tuple(
        ExactlyOne(tuple(IndicatorId(i, j) for j in range(1, len(c) + 1)))
        for i, c in enumerate(f.clauses, start=1)
    )
    return ConstraintSystem(f, eo, tuple(complementary_pairs(f)))


def size_report(f: CnfFormula) -> SizeReport:
    widths = sorted(f.widths(), reverse=True)
    n = len(complementary_pairs(f))
    return SizeReport(
        m=f.m,
        indicator_count=sum(widths),
        n=n,
        t1=widths[0] if widths else 0,
        t2=widths[1] if len(widths) > 1 else 0,
        p=dnf_term_count(f),
        e=9 * math.comb(n, 2),
    )


class IndicatorConflict(ValueError):
    def __init__(self, first: IndicatorId, second: IndicatorId, var: int):
        super().__init__(f"{first} and {second} pick complementary literals of x{var}")
        self.first, self.second, self.var = first, second, var


def indicators_to_assignment(chosen: Iterable[IndicatorId], f: CnfFormula) -> Assignment:
    """Partial assignment making every picked literal true.

    Raises IndicatorConflict on the first complementary pick pair.
    """
    chosen = sorted(chosen)
    if [x.clause for x in chosen] != list(range(1, f.m + 1)):
        raise ValueError("need exactly one indicator per clause")
    bound: dict[int, tuple[bool, IndicatorId]] = {}
    for ind in chosen:
        lit = f.clauses[ind.clause - 1].literals[ind.position - 1]
        value = not lit.negated
        prev = bound.get(lit.var)
        if prev is not None and prev[0] != value:
            raise IndicatorConflict(prev[1], ind, lit.var)
        bound.setdefault(lit.var, (value, ind))
    return Assignment({v: val for v, (val, _) in bound.items()}, f.num_vars)
