"""
gns-entropy
Entanglement entropy of states restricted to matrix subalgebras, computed through the
GNS construction
"""

from .algebra import MatrixAlgebra, block_structure, commutant, generate_algebra
from .exceptions import GnsEntropyError, SchemaError
from .gns import DecompositionMode, build_gns, decompose, gns_entropy, verify_gns
from .quantum_state import canonical_entropy, restrict, state_from_density, state_from_vector

__version__ = "1.0.0"

__all__ = [
    "MatrixAlgebra", "block_structure", "commutant", "generate_algebra",
    "GnsEntropyError", "SchemaError",
    "DecompositionMode", "build_gns", "decompose", "gns_entropy", "verify_gns",
    "canonical_entropy", "restrict", "state_from_density", "state_from_vector",
]
