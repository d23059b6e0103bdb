"""SAT → 2-SAT / 1-SAT reduction pipeline with a brute-force referee."""

__version__ = "0.1.0"

from .formula import (  # noqa: E402
    Assignment,
    Clause,
    CnfFormula,
    Literal,
    Outcome,
    evaluate,
    parse_dimacs,
    serialize_dimacs,
    simplify,
)
from .encoder import build_system, complementary_pairs, size_report  # noqa: E402
from .compat import run_pipeline, run_simplified, run_with_permutation  # noqa: E402
from .oracle import brute_force_sat, brute_force_system  # noqa: E402
from .reducer import reduce_to_1sat, reduce_to_2sat, solve_2sat  # noqa: E402
