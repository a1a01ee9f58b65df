"""Exception hierarchy shared across the package."""


class ToricstabError(Exception):
    """Base class for all package errors."""


class ValidationError(ToricstabError):
    """Invalid input data (polytope description, PL function, file content)."""


class UnboundedError(ValidationError):
    """The facet normals do not positively span, so the region is unbounded."""


class EmptyOrDegenerateError(ValidationError):
    """The region is lower-dimensional, or a normal supports no facet."""


class NonPrimitiveNormalError(ValidationError):
    """A facet normal is not a primitive integer vector."""


class DuplicateNormalError(ValidationError):
    """The same facet normal appears twice."""


class NotReflexiveError(ValidationError):
    """Vertices are not all lattice points although reflexivity was required."""


class DegenerateSimplexError(ToricstabError):
    """A simplex with affinely dependent vertices was passed to a kernel."""


class DimensionMismatchError(ToricstabError):
    """Vector dimensions disagree."""


class CapacityExceededError(ToricstabError):
    """A lattice enumeration would exceed the configured point budget."""


class ToleranceNotMetError(ToricstabError):
    """Adaptive quadrature hit its subdivision budget above tolerance."""


class NoConvergenceError(ToricstabError):
    """Newton iteration did not reach the requested residual."""

    def __init__(self, message, iterations=None, residual=None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class RNotDominatingError(ToricstabError):
    """The offset R does not dominate max_P u."""


class BetaOutOfRangeError(ToricstabError):
    """The cone-angle parameter exceeds the admissible bound."""


class TauOutsidePolytopeError(ToricstabError):
    """The weighted barycenter lies outside the open polytope."""


class AllSamplesDegenerateError(ToricstabError):
    """Every sampled PL function normalized to zero."""


class ParseError(ValidationError):
    """Malformed input file; carries location context where available."""

    def __init__(self, message, *, path=None, field=None, line=None):
        ctx = []
        if path is not None:
            ctx.append(str(path))
        if line is not None:
            ctx.append(f"line {line}")
        if field is not None:
            ctx.append(f"field {field!r}")
        if ctx:
            message = f"{message} ({', '.join(ctx)})"
        super().__init__(message)
        self.path = path
        self.field = field
        self.line = line


class NotFoundError(ToricstabError, LookupError):
    """Catalog lookup for an unknown name."""
