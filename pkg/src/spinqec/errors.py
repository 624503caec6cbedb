"""Exception types raised across the package."""


class SpinQECError(Exception):
    """Base class for all package errors."""


class NoRootInBracket(SpinQECError, ValueError):
    """No sign change of the target phase equation inside the scan bracket."""


class UnknownLabel(SpinQECError, LookupError):
    pass


class DuplicateLabel(SpinQECError, ValueError):
    pass


class LabelMismatch(SpinQECError, ValueError):
    pass


class InvalidChannel(SpinQECError, ValueError):
    pass


class InvalidDistance(SpinQECError, ValueError):
    pass


class TooLarge(SpinQECError, ValueError):
    """Register would exceed the dense-engine qubit cap."""


class WeightMismatch(SpinQECError, ValueError):
    pass


class UnknownSupport(SpinQECError, LookupError):
    pass


class BadRegisterSize(SpinQECError, ValueError):
    pass


class ZeroProbabilityReadout(SpinQECError, ArithmeticError):
    """The requested read-out branch has (numerically) zero probability."""


class Indeterminate(SpinQECError, ArithmeticError):
    pass


class InvalidTime(SpinQECError, ValueError):
    pass


class ConfigParse(SpinQECError, ValueError):
    """Malformed or invalid run configuration."""
