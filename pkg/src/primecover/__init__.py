"""Exact two-level Boolean minimization by canonical partition of the primes.

The pipeline: :func:`complete_primes` and :func:`build_universe` index the
products, :func:`build_table` records their covering relationships,
:func:`partition` splits the non-free primes into independent components and
:func:`minimize` solves each component exactly.
"""

__version__ = "0.1.0"

from .ancestors import AncestorSet, Partition, ancestor_set, independent_batch, independent_batch_fast, parents, partition
from .cover import CostFunction, CoverSolution, MinimizeResult, min_cost_cover, minimize, span_basis_shortcut, split_independent_prime
from .cube import Cube, Literal, format_cube, parse_cube
from .errors import BudgetExceeded, ConfigurationError, OracleLimitError, ParseError, PrimeCoverError, ResourceLimitError
from .primes import ProductUniverse, SumOfProducts, build_universe, complete_primes, essential_primes, loose_consensus_closure
from .triples import Triple, TriplesTable, build_table, cascade, prune, span

__all__ = [
    "__version__",
    "AncestorSet",
    "Partition",
    "ancestor_set",
    "independent_batch",
    "independent_batch_fast",
    "parents",
    "partition",
    "CostFunction",
    "CoverSolution",
    "MinimizeResult",
    "min_cost_cover",
    "minimize",
    "span_basis_shortcut",
    "split_independent_prime",
    "Cube",
    "Literal",
    "format_cube",
    "parse_cube",
    "BudgetExceeded",
    "ConfigurationError",
    "OracleLimitError",
    "ParseError",
    "PrimeCoverError",
    "ResourceLimitError",
    "ProductUniverse",
    "SumOfProducts",
    "build_universe",
    "complete_primes",
    "essential_primes",
    "loose_consensus_closure",
    "Triple",
    "TriplesTable",
    "build_table",
    "cascade",
    "prune",
    "span",
]
