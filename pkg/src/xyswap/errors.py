"""Exception hierarchy shared by all modules."""


class XySwapError(Exception):
    """Base class for all package errors."""


class EmptySeriesError(XySwapError):
    """Requested expansion window ends below the leading order."""


class TruncationError(XySwapError):
    """A series operation would need terms beyond the known truncation."""

    def __init__(self, message, achievable=None):
        super().__init__(message)
        self.achievable = achievable


class CurveError(XySwapError):
    """Spectral curve rejected by validation."""


class NonRationalRamification(CurveError):
    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


class UnsupportedRamificationProfile(CurveError):
    pass


class AssumptionViolated(CurveError):
    pass


class ConvergenceError(XySwapError):
    """Newton iteration for the local involution did not converge quadratically."""


class DependencyError(XySwapError):
    """Required correlator table entries are missing."""

    def __init__(self, missing):
        super().__init__("missing table entries: " + ", ".join(f"({g},{n})" for g, n in missing))
        self.missing = list(missing)


class UnsupportedGraphError(XySwapError):
    pass


class IdentificationError(XySwapError):
    """No valid expansion point for the moment/cumulant identification."""


class ParseError(XySwapError):
    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} at byte {offset}"
        super().__init__(message)
        self.offset = offset
