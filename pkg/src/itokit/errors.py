"""Exception hierarchy shared by all itokit modules."""


class ItoError(Exception):
    """Base class for every error raised by itokit."""


class DimensionError(ItoError, ValueError):
    """An element or matrix does not match the algebra's dimension."""


class ParameterError(ItoError, ValueError):
    """A builder received parameters outside its admissible range."""


class AxiomError(ItoError):
    """An operation that requires a valid Ito algebra got one failing check_axioms."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotFaithfulError(ItoError):
    """The algebra has a nontrivial null ideal; quotient it first."""


class RepresentationError(ItoError):
    """Internal consistency failure while building a representation.

    Usually means the tolerance is too coarse (or too fine) for the input.
    """


class NonMinimalError(ItoError):
    """A Krein representation is non-minimal or has a non-Euclidean central block."""


class NoQuotientIdentityError(ItoError):
    """The operator algebra i(a) is nonzero but has no identity."""


class PresentationError(ItoError):
    """A vacuum/thermal presentation tag is inconsistent with its algebra."""


class AliasingError(ItoError):
    """Too few Fourier modes: the discrete orthogonality relation wraps around."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class IncompleteIrrepsError(ItoError, ValueError):
    """The supplied irreducible representations do not exhaust the group."""


class DimensionCapError(ItoError, ValueError):
    """A toy-Fock configuration exceeds the dense-matrix dimension cap."""


class DocumentError(ItoError, ValueError):
    """Malformed JSON input; carries line and column when known."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class SchemaError(DocumentError):
    """A well-formed document has a field of the wrong shape or type."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class AxiomWarning(UserWarning):
    """Emitted when a parsed or built algebra fails check_axioms."""
