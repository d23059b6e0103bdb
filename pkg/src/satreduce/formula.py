"""CNF data model, DIMACS I/O, evaluation and the DNF-expansion check."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence, Union


class Outcome(str, Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"

    @classmethod
    def of(cls, sat: bool) -> "Outcome":
        return cls.SAT if sat else cls.UNSAT


@dataclass(frozen=True, order=True)
class Literal:
    var: int
    negated: bool = False

    def __post_init__(self):
        if self.var < 1:
            raise ValueError(f"variable index must be >= 1, got {self.var}")

    @classmethod
    def from_int(cls, lit: int) -> "Literal":
        if lit == 0:
            raise ValueError("0 is not a literal")
        return cls(abs(lit), lit < 0)

    def to_int(self) -> int:
        return -self.var if self.negated else self.var

    def __neg__(self) -> "Literal":
        return Literal(self.var, not self.negated)

    def complements(self, other: "Literal") -> bool:
        return self.var == other.var and self.negated != other.negated

    def satisfied_by(self, value: bool) -> bool:
        return value != self.negated

    def __str__(self):
        return f"{'¬' if self.negated else ''}x{self.var}"


@dataclass(frozen=True)
class Clause:
    literals: tuple[Literal, ...]

    def __post_init__(self):
        if not self.literals:
            raise ValueError("empty clause")

    @classmethod
    def from_ints(cls, lits: Iterable[int]) -> "Clause":
        # order-preserving dedup
        return cls(tuple(dict.fromkeys(Literal.from_int(x) for x in lits)))

    def __len__(self):
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)

    def __getitem__(self, i):
        return self.literals[i]

    def to_ints(self) -> list[int]:
        return [lit.to_int() for lit in self.literals]

    def __str__(self):
        return "(" + " ∨ ".join(map(str, self.literals)) + ")"


@dataclass(frozen=True)
class CnfFormula:
    """Ordered conjunction of clauses.

    ``num_vars`` is the size of the variable universe 1..num_vars; DIMACS
    input keeps the declared count so serialization round-trips exactly.
    """

    clauses: tuple[Clause, ...]
    num_vars: int

    def __post_init__(self):
        top = max((lit.var for c in self.clauses for lit in c), default=0)
        if top > self.num_vars:
            raise ValueError(f"literal x{top} exceeds num_vars={self.num_vars}")

    @classmethod
    def from_ints(cls, clauses: Iterable[Iterable[int]], num_vars: int | None = None) -> "CnfFormula":
        cs = tuple(Clause.from_ints(c) for c in clauses)
        if num_vars is None:
            num_vars = max((lit.var for c in cs for lit in c), default=0)
        return cls(cs, num_vars)

    @property
    def m(self) -> int:
        return len(self.clauses)

    def widths(self) -> list[int]:
        return [len(c) for c in self.clauses]

    def to_ints(self) -> list[list[int]]:
        return [c.to_ints() for c in self.clauses]

    def variables(self) -> set[int]:
        return {lit.var for c in self.clauses for lit in c}

    def __str__(self):
        return " ∧ ".join(map(str, self.clauses)) or "⊤"


@dataclass(frozen=True)
class Assignment:
    bindings: Mapping[int, bool]
    num_vars: int

    def __post_init__(self):
        bad = [v for v in self.bindings if not 1 <= v <= self.num_vars]
        if bad:
            raise ValueError(f"assignment binds unknown variables {sorted(bad)}")
        object.__setattr__(self, "bindings", dict(sorted(self.bindings.items())))

    @property
    def is_total(self) -> bool:
        return len(self.bindings) == self.num_vars

    def __getitem__(self, var: int) -> bool:
        return self.bindings[var]

    def get(self, var: int, default=None):
        return self.bindings.get(var, default)

    def extended(self, var: int, value: bool) -> "Assignment":
        return Assignment({**self.bindings, var: value}, self.num_vars)

    def to_ints(self) -> list[int]:
        return [v if val else -v for v, val in self.bindings.items()]


@dataclass(frozen=True)
class DnfTerm:
    picks: tuple[Literal, ...]

    def is_contradictory(self) -> bool:
        seen: dict[int, bool] = {}
        for lit in self.picks:
            if seen.setdefault(lit.var, lit.negated) != lit.negated:
                return True
        return False


Simplified = Union[CnfFormula, bool]


class DimacsParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class MalformedHeader(DimacsParseError):
    pass


class EmptyClause(DimacsParseError):
    pass


class LiteralOutOfRange(DimacsParseError):
    pass


class MissingTerminator(DimacsParseError):
    pass


class InvalidToken(DimacsParseError):
    pass


class ClauseCountMismatch(DimacsParseError):
    pass


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF text, one zero-terminated clause per line.

    Duplicate literals inside a clause are dropped (first occurrence wins);
    duplicate clauses are kept.
    """
    header: tuple[int, int] | None = None
    clauses: list[Clause] = []
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise MalformedHeader(lineno, "duplicate problem line")
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise MalformedHeader(lineno, f"expected 'p cnf <vars> <clauses>', got {line!r}")
            try:
                nv, nc = int(parts[2]), int(parts[3])
            except ValueError:
                raise MalformedHeader(lineno, f"non-integer counts in {line!r}") from None
            if nv < 0 or nc < 0:
                raise MalformedHeader(lineno, "negative counts")
            header = (nv, nc)
            continue
        if header is None:
            raise MalformedHeader(lineno, "clause before problem line")
        lits: list[int] = []
        terminated = False
        for tok in line.split():
            if terminated:
                raise InvalidToken(lineno, f"unexpected token {tok!r} after terminating 0")
            try:
                x = int(tok)
            except ValueError:
                raise InvalidToken(lineno, f"not an integer: {tok!r}") from None
            if x == 0:
                terminated = True
            elif abs(x) > header[0]:
                raise LiteralOutOfRange(lineno, f"literal {x} exceeds declared {header[0]} variables")
            else:
                lits.append(x)
        if not terminated:
            raise MissingTerminator(lineno, "clause not terminated by 0")
        if not lits:
            raise EmptyClause(lineno, "empty clause")
        clauses.append(Clause.from_ints(lits))
    if header is None:
        raise MalformedHeader(lineno + 1, "missing problem line")
    if len(clauses) != header[1]:
        raise ClauseCountMismatch(lineno, f"header declares {header[1]} clauses, found {len(clauses)}")
    return CnfFormula(tuple(clauses), header[0])


def serialize_dimacs(f: CnfFormula, comments: Sequence[str] = ()) -> str:
    out = [f"c {c}\n" for c in comments]
    out.append(f"p cnf {f.num_vars} {f.m}\n")
    for c in f.clauses:
        out.append(" ".join(map(str, c.to_ints())) + " 0\n")
    return "".join(out)


def evaluate(f: CnfFormula, a: Assignment) -> bool:
    if not a.is_total or a.num_vars < f.num_vars:
        raise ValueError("evaluate needs a total assignment")
    return all(any(lit.satisfied_by(a[lit.var]) for lit in c) for c in f.clauses)


def simplify(f: CnfFormula, p: Assignment) -> Simplified:
    """Apply a partial assignment. Returns True/False when the formula collapses."""
    residual: list[Clause] = []
    for c in f.clauses:
        kept = []
        for lit in c:
            val = p.get(lit.var)
            if val is None:
                kept.append(lit)
            elif lit.satisfied_by(val):
                break
        else:
            if not kept:
                return False
            residual.append(Clause(tuple(kept)))
    if not residual:
        return True
    return CnfFormula(tuple(residual), f.num_vars)


class TermBudgetExceeded(RuntimeError):
    pass


def dnf_term_count(f: CnfFormula) -> int:
    return math.prod(f.widths())


def dnf_terms(f: CnfFormula) -> Iterable[DnfTerm]:
    for picks in itertools.product(*(c.literals for c in f.clauses)):
        yield DnfTerm(picks)


def dnf_expansion_satisfiable(f: CnfFormula, term_budget: int = 1_000_000) -> bool:
    """True iff some term of the full DNF expansion is free of complementary picks."""
    p = dnf_term_count(f)
    if p > term_budget:
        raise TermBudgetExceeded(f"{p} DNF terms exceed budget {term_budget}")
    return any(not t.is_contradictory() for t in dnf_terms(f))
