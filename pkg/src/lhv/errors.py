"""Exception hierarchy.

Every failure mode that callers are expected to branch on gets its own
class; all inherit from :class:`LhvError` so blanket handling stays easy.
"""


class LhvError(Exception):
    """Base class for all library errors."""


class BackendMismatch(LhvError):
    """Two values from incompatible scalar backends were combined."""


class ZeroScalar(LhvError):
    """A nonzero scalar was required."""


class NotInGamma(LhvError):
    """A field element is not an integer combination of the generators."""


class NotInScalingGroup(LhvError):
    """The scalar does not map the generator lattice onto itself."""


class BoxTooSmall(LhvError):
    """The truncation box cannot host the requested computation."""


class ConfigMismatch(LhvError):
    """Elements of two different algebra configurations were combined."""


class SupportOutsideBox(LhvError):
    """An element has basis terms outside the required box."""


class ZeroDegree(LhvError):
    """A nonzero homogeneity degree was required."""


class NotADerivation(LhvError):
    """The map fails the Leibniz identity on the box."""


class DisagreementAfterWitness(LhvError):
    """The computed inner witness does not reproduce the map on the box."""


class NotDegreeZero(LhvError):
    """The derivation table is not homogeneous of degree zero."""


class NonZeroResidual(LhvError):
    """Decomposition left a nonzero residual table."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NoWitnessForAnchorPair(LhvError):
    """No witness derivation matches the table at the anchor pair."""


class ResidualNonZero(LhvError):
    """The anchor witness does not reproduce the table at every sample."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class NotABiderivation(LhvError):
    """The bilinear table fails a biderivation identity."""


class NonInnerResidual(LhvError):
    """The bilinear table is not a scalar multiple of the bracket."""


class NotCommuting(LhvError):
    """The linear table fails the commuting-map identity."""


class NonCentralResidual(LhvError):
    """The non-scalar part of a commuting map has a non-central image."""


class InvalidParams(LhvError):
    """Automorphism parameters violate their invariants."""


class NotMonomialShape(LhvError):
    """An automorphism image is not a single basis monomial."""


class LawViolation(LhvError):
    """Extracted automorphism data violates the multiplicativity laws."""


class RoundTripMismatch(LhvError):
    """Re-applying extracted parameters does not reproduce the input."""


class UnknownSuite(LhvError):
    """No verification suite under that name."""


class ConfigError(LhvError):
    """Malformed configuration file or JSON payload."""


class ExprSyntaxError(LhvError):
    """Malformed expression or literal string.

    ``position`` is the 1-based column of the offending character.
    """

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} at column {position}"
        super().__init__(message)
        self.position = position
