"""Exception types shared across the package."""


class NcresError(Exception):
    """Base class for all library errors."""


class DimensionMismatchError(NcresError):
    """Operands live on different tori or carry different matrix sizes."""


class TruncationFloorError(NcresError):
    """A homogeneous component below the exactness floor was requested."""


class RealPoleError(NcresError):
    """A rational function has a pole on (or too close to) the real axis."""

    def __init__(self, pole):
        super().__init__(f"pole at {pole} lies on or too close to the real axis")
        self.pole = pole


class MembershipError(NcresError):
    """A rational factor violates its half-plane/growth class."""


class TransmissionError(NcresError):
    """Interior symbol fails the transmission (parity) condition."""


class GradingError(NcresError):
    """Operator-matrix entries violate the declared order/type grading."""


class MissingComponentError(NcresError):
    """A required homogeneous component is absent from the data."""


class TailBoundError(NcresError):
    """The certified truncation tail exceeds the requested tolerance."""


class ResourceCapError(NcresError):
    """A mode-count or memory budget would be exceeded; nothing was allocated."""


class IllConditionedFitError(NcresError):
    """Least-squares design matrix too ill-conditioned to trust."""


class WindowError(NcresError):
    """Data window too small for the requested functional."""


class ConfigError(NcresError):
    """Invalid job configuration; message carries the location."""
