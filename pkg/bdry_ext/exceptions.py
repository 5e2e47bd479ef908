class BdryExtError(Exception):
    """Base class of every error raised by bdry_ext."""

    pass


class ValidationError(BdryExtError):
    """Raised when an input violates the contract of an operation. The CLI exits with code 1."""

    pass


class NumericalError(BdryExtError):
    """Raised when a numerical routine breaks down. The CLI exits with code 2."""

    pass


class BadConfigError(ValidationError):
    """Raised when the configuration is invalid."""

    pass


class InvalidGeometryError(ValidationError):
    """Raised when a geometry has inconsistent parameters (a >= b, R <= 0, N negative or not an integer)."""

    pass


class DimensionMismatchError(ValidationError):
    """Raised when vectors or arrays live on boundary spaces of different dimension."""

    pass


class NotUnitaryError(ValidationError):
    """Raised when a boundary array fails the unitarity check."""

    pass


class NotHermitianError(ValidationError):
    """Raised when a boundary operator M or L fails the Hermiticity check."""

    pass


class DomainError(ValidationError):
    """Raised when a function lies outside the domain an operation requires."""

    pass


class BesselEnvelopeError(ValidationError):
    """Raised for Bessel evaluations outside the supported order/argument envelope."""

    pass


class UnknownPresetError(ValidationError):
    """Raised when a preset name is not one of the known extensions."""

    pass


class CountMismatchError(ValidationError):
    """Raised when two spectra do not provide enough values to be compared."""

    pass


class EigenvalueOneError(NumericalError):
    """Raised by the inverse Cayley transform when 1 is (numerically) an eigenvalue.

    The caller must split off the eigenspace of 1 first (see `unitary_to_param`).
    """

    pass


class EigensolverError(NumericalError):
    """Raised when the dense or shift-invert FEM eigensolver fails."""

    pass


class RankDeficiencyError(NumericalError):
    """Raised when a basis that must have full column rank is numerically rank deficient."""

    pass


class RootNotFoundError(NumericalError):
    """Raised when an energy is not within the acceptance tolerance of a secular root."""

    pass
