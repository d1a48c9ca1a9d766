"""Exception hierarchy shared by the library, the CLI and the service."""


class SpiraCertError(Exception):
    """
    Base class. Not a ValueError subclass: pydantic re-raises these from
    validators unwrapped.
    """


class NonAdmissibleKappa(SpiraCertError):
    pass


class RegimeViolation(SpiraCertError):
    pass


class SignViolation(SpiraCertError):
    pass


class InvalidSpiralParams(SpiraCertError):
    pass


class InvalidRtauParams(SpiraCertError):
    pass


class SeriesNotConverged(SpiraCertError):
    pass


class ScanSpecError(SpiraCertError):
    pass


class GoldenFileError(SpiraCertError):
    pass


class ZeroDenominator(SpiraCertError):
    def __init__(self, message: str, point: complex | None = None):
        super().__init__(message)
        self.point = point
