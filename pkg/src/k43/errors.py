"""Exception types shared across the package."""


class K43Error(Exception):
    """Base class for all package-specific errors."""


class SingularMatrixError(K43Error):
    """Exact inversion of a singular matrix was requested."""


class GroupOrderExceededError(K43Error):
    """Group closure grew past the configured bound (bad generators?)."""


class NotInGroupError(K43Error):
    """A matrix was expected to lie in an enumerated group but does not."""


class ParityError(K43Error):
    """A sign vector has an odd number of -1 entries (not in Omega)."""


class DistanceMismatchError(K43Error):
    """Triples passed to the transporter do not have matching distances."""


class IllegalTypeError(K43Error):
    """Not one of the five legal Hamming types."""


class PoleError(K43Error):
    """Evaluation requested at a pole of the gamma function."""


class ConvergenceError(K43Error):
    """A series or quadrature failed to reach the requested tolerance."""


class ContourError(K43Error):
    """No straight vertical line separates the two pole ladders."""


class DegeneratePointError(K43Error):
    """Parameter point too close to a zero/pole locus of a coefficient."""


class NumericError(K43Error):
    """A non-finite intermediate value surfaced during evaluation."""
