"""Exception types shared across the package."""


class EntgenError(Exception):
    """Base class for all package-specific errors."""


class StructureError(EntgenError):
    """Malformed circuit or state structure: bad qubit index, arity, or dimension."""


class ParameterCountError(StructureError):
    """Bound parameter vector does not match the circuit's symbolic parameter count."""


class ShapeError(StructureError):
    """Input array has the wrong length or dimensionality."""


class NumericalStateError(EntgenError):
    """State or density matrix violates a numerical tolerance (norm, trace)."""


class CapacityError(EntgenError):
    """Exact computation refused because it would not scale; use a surrogate estimator."""


class DegenerateInputError(EntgenError):
    """Input is empty, all-zero, or single-class where variation is required."""


class ConfigError(EntgenError):
    """Run configuration is unparsable or contains unknown/invalid entries."""
