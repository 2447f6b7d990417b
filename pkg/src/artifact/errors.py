"""Exception types raised across the package."""


class ArtifactError(Exception):
    """Base class for all package errors."""


class NonUnitInverse(ArtifactError, ZeroDivisionError):
    pass


class LevelError(ArtifactError, ValueError):
    pass


class NonConvergence(ArtifactError, RuntimeError):
    pass


class ValuationError(ArtifactError, ValueError):
    pass


class DomainError(ArtifactError, ValueError):
    pass


class NonIntegralResult(ArtifactError, ValueError):
    pass


class IdentityFailure(ArtifactError, AssertionError):
    pass


class EnumerationTooLarge(ArtifactError, ValueError):
    pass


class InvalidCharacter(ArtifactError, ValueError):
    pass


class InconsistentMultiplicities(ArtifactError, ValueError):
    pass


class MembershipError(ArtifactError, ValueError):
    pass


class BackendUnsupported(ArtifactError, ValueError):
    pass


class StabilityFailure(ArtifactError, RuntimeError):
    pass


class NotASubgroupPair(ArtifactError, ValueError):
    pass


class NotNormalizing(ArtifactError, ValueError):
    pass


class CheckFailure(ArtifactError, AssertionError):
    pass
