"""
Error types for the GNS entropy engine
Every failure raised by the package derives from GnsEntropyError
"""

from typing import Optional


class GnsEntropyError(Exception):
    """Base class for all engine errors"""


class DimensionMismatch(GnsEntropyError, ValueError):
    """Operands have incompatible shapes"""


class NonHermitian(GnsEntropyError, ValueError):
    """A matrix required to be hermitian is not"""


class NotDensity(GnsEntropyError, ValueError):
    """Matrix is not a positive unit-trace density"""


class ZeroVector(GnsEntropyError, ValueError):
    """A vector with zero norm cannot be normalized"""


class NotPositive(GnsEntropyError):
    """Functional is not positive on the algebra (Gram matrix has negative eigenvalues)"""


class NotUnital(GnsEntropyError):
    """Span has no unit element"""


class DegenerateSplit(GnsEntropyError):
    """Random splitting element produced colliding eigenvalues on every attempt"""


class SizeOverflow(GnsEntropyError, ValueError):
    """Requested space exceeds the configured size cap"""


class NotUnitary(GnsEntropyError, ValueError):
    pass


class NonPositiveQ(GnsEntropyError, ValueError):
    """Deformation parameter must be real and strictly positive"""


class RankIncrease(GnsEntropyError):
    """Positive maps cannot increase the rank of a state"""


class InvalidParity(GnsEntropyError, ValueError):
    pass


class CornerViolation(GnsEntropyError, ValueError):
    """Supplied corner projectors fail their relations"""


class NotProjector(GnsEntropyError, ValueError):
    pass


class SchemaError(GnsEntropyError, ValueError):
    """Scenario document failed validation"""

    def __init__(self, message: str, field_path: Optional[str] = None):
        self.field_path = field_path
        if field_path:
            message = f"{field_path}: {message}"
        super().__init__(message)
