"""Exact computations with wedge, symmetric and Schur powers of chain
complexes over Q, and the filtration of a power of the middle term of a short
exact sequence."""

from .complexes import ChainMap, Complex, cone, homology, schur_split, tensor
from .errors import CapExceeded, EngineError, InapplicableError
from .filtration import filtration_report, verify_main_theorem
from .group_algebra import GroupAlgebraElement, central_idempotent, idempotent_system
from .linalg import Matrix
from .powers import kimura_profile, schur_power, sym_power, wedge_power
from .symgroup import Partition, Permutation

__version__ = "0.1.0"

__all__ = [
    "CapExceeded", "ChainMap", "Complex", "EngineError", "GroupAlgebraElement", "InapplicableError",
    "Matrix", "Partition", "Permutation", "central_idempotent", "cone", "filtration_report", "homology",
    "idempotent_system", "kimura_profile", "schur_power", "schur_split", "sym_power", "tensor",
    "verify_main_theorem", "wedge_power",
]
