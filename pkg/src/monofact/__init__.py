"""Factor nonnegative unimodular matrices by permissible elementary operations.

A triple ``(A, v, w = A^-1 v)`` is reduced to the identity by a two-phase
script: column additions and row swaps, then row subtractions. Scripts
translate into towers of monomial blowups.
"""

from .core import (
    ColAdd,
    ColSub,
    OpScript,
    RowSub,
    RowSwap,
    Triple,
    apply_op,
    build_triple,
    is_permissible,
    replay,
    replay_trace,
)
from .exactreal import DecimalScalar, RadicalScalar, combine, compare, floor_quotient, radical, sign
from .factorizer import factorize, to_column_subtraction_script
from .geometry import FactorizationDiagram, translate, valuation_trace, verify_diagram
from .testkit import GeneratorConfig, bfs_factor, gen_random_triple, invariant_audit

__version__ = "0.1.0"

__all__ = [
    "ColAdd",
    "ColSub",
    "DecimalScalar",
    "FactorizationDiagram",
    "GeneratorConfig",
    "OpScript",
    "RadicalScalar",
    "RowSub",
    "RowSwap",
    "Triple",
    "apply_op",
    "bfs_factor",
    "build_triple",
    "combine",
    "compare",
    "factorize",
    "floor_quotient",
    "gen_random_triple",
    "invariant_audit",
    "is_permissible",
    "radical",
    "replay",
    "replay_trace",
    "sign",
    "to_column_subtraction_script",
    "translate",
    "valuation_trace",
    "verify_diagram",
]
