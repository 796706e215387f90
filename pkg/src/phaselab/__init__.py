"""phaselab: exact comparison of the stabiliser qubit theory and the toy-bit
relational theory as dagger-compositional theories.

Everything is computed in exact arithmetic: cyclotomic integers with
square-root-of-two denominators for amplitudes, booleans for the relational
theory, fractions for probabilities.  No floats enter any result.
"""

__version__ = "0.1.0"

DEFAULT_SEED = 1729

from .scalars import BoolScalar, CycloScalar, RingError, squared_modulus
from .morphisms import Morphism, ShapeError, TheoryObject

__all__ = [
    "BoolScalar",
    "CycloScalar",
    "DEFAULT_SEED",
    "Morphism",
    "RingError",
    "ShapeError",
    "TheoryObject",
    "squared_modulus",
    "__version__",
]
