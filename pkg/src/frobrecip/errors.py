"""Exception hierarchy shared by every module."""


class VerificationError(Exception):
    """Base class for all library errors."""


class GroupMismatch(VerificationError):
    pass


class DerivativeFailure(VerificationError):
    pass


class BoundaryViolation(VerificationError):
    pass


class ArityMismatch(VerificationError):
    pass


class SpaceMismatch(VerificationError):
    pass


class RankAmbiguity(VerificationError):
    """Singular values fall inside the band where numeric rank is undecidable."""


class GaugeChartMiss(VerificationError):
    """The gauge-fixing coordinate is too close to zero at the requested point."""


class LevelViolation(VerificationError):
    pass


class EmptyCatalog(VerificationError):
    pass


class NonFreePoint(VerificationError):
    pass


class UnknownScenario(VerificationError):
    pass


class ConfigError(VerificationError):
    pass
