"""
Surjectivity Bound
Effective constant C_K,S beyond which mod p Galois representations of
elliptic curves over a totally real Galois field K, semistable outside S,
are surjective (up to a finite list of CM-type eigenforms).
"""

__version__ = "0.1.0"
__author__ = "Surjectivity Bound Team"

# Import core components
from .numfield import NumberField, AlgebraicInteger, IntegralIdeal, make_quadratic_field, make_field_from_config
from .irreducibility import IrreducibilityBound, SignPattern, bound_B, irreducibility_threshold
from .levels import LevelData, compute_levels
from .forms import EigenformRecord, FormDataset, load_dataset
from .characters import QuadraticCharacter, enumerate_characters
from .elimination import BoundReport, EliminationSieve, assemble_constant

# Import supporting components
from .forms_client import FormsClient
from .worker_pool import WorkerPool
from .report_mapper import ReportMapper
from .run_config import RunConfig
from .pipeline import SurjectivityPipeline
from .exceptions import SurjectivityBoundError

# Import CLI
from .cli import main

__all__ = [
    "NumberField",
    "AlgebraicInteger",
    "IntegralIdeal",
    "make_quadratic_field",
    "make_field_from_config",
    "IrreducibilityBound",
    "SignPattern",
    "bound_B",
    "irreducibility_threshold",
    "LevelData",
    "compute_levels",
    "EigenformRecord",
    "FormDataset",
    "load_dataset",
    "QuadraticCharacter",
    "enumerate_characters",
    "BoundReport",
    "EliminationSieve",
    "assemble_constant",
    "FormsClient",
    "WorkerPool",
    "ReportMapper",
    "RunConfig",
    "SurjectivityPipeline",
    "SurjectivityBoundError",
    "main",
]
