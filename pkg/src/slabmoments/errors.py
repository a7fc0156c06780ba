"""Exception hierarchy shared across the library."""


class SlabMomentsError(Exception):
    """Base class for all library errors."""


class NonPositiveDensity(SlabMomentsError):
    """Normalization requested for a moment vector with u_0 <= 0."""


class OrderTooLow(SlabMomentsError):
    """A moment vector lacks an entry required by the requested operation."""


class NotRealizable(SlabMomentsError):
    """The moment vector has no non-negative representing density."""


class ReconstructionFailed(SlabMomentsError):
    """Atomic-measure reconstruction produced invalid atoms or densities."""


class NoConvergence(SlabMomentsError):
    """The dual Newton iteration exceeded its iteration budget.

    Carries the iteration trace (list of gradient norms) in ``trace``.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace) if trace is not None else []


class BoundaryMoment(SlabMomentsError):
    """Moment vector too close to the realizability boundary for the dual solve."""


class DegenerateState(SlabMomentsError):
    """Eigenstructure requested where it is discontinuous or undefined."""


class RealizabilityLost(SlabMomentsError):
    """A solver step left a cell outside the realizable set beyond rescue."""

    def __init__(self, message, cell=None, slack=None):
        super().__init__(message)
        self.cell = cell
        self.slack = slack


class GridMismatch(SlabMomentsError):
    """Two runs cannot be compared because their grids are incompatible."""


class ConfigError(SlabMomentsError):
    """Base class for CLI configuration errors."""


class ParseError(ConfigError):
    """Malformed config text; carries the offending line number."""

    def __init__(self, message, line):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ValidationError(ConfigError):
    """A config field failed validation; carries the field name."""

    def __init__(self, message, field):
        super().__init__(f"{field}: {message}")
        self.field = field
