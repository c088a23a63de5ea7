"""Exception types shared across the package."""


class StructureError(ValueError):
    """Fragment is structurally malformed (dimension mismatch, missing label)."""


class InvalidNoiseError(ValueError):
    """Noise map is unusable, e.g. it does not fix the unit effect."""


class DegenerateConeError(ValueError):
    """Every supplied cone generator is zero."""


class SpanDimensionError(ValueError):
    """Generator span has the wrong dimension for the requested routine."""


class AssemblyError(ValueError):
    """Facet matrices, fragment and noise map do not fit together."""


class SolverStalledError(RuntimeError):
    """Simplex pivoting exceeded its iteration cap or lost feasibility."""


class InternalConsistencyError(RuntimeError):
    """A guarantee of the built-in noise maps failed; indicates a bug."""


class CertificateCorruptionError(RuntimeError):
    """An optimal certificate produced a negative epistemic weight."""


class NotParameterizableError(ValueError):
    """Data table does not match the four-preparation symmetry pattern."""
