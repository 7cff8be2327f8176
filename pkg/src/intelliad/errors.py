"""Exception types raised across the toolchain."""


class IntelliAdError(Exception):
    """Base class for all errors raised by this package."""


# ad catalog / inspector

class MalformedCatalog(IntelliAdError):
    pass


class UnreadableInput(IntelliAdError):
    def __init__(self, path, reason=""):
        self.path = str(path)
        super().__init__(f"cannot read {self.path}" + (f": {reason}" if reason else ""))


class DexParseError(IntelliAdError):
    pass


class UnsupportedInputKind(IntelliAdError):
    pass


# trace profiler

class MalformedLine(IntelliAdError):
    def __init__(self, line_no, detail=""):
        self.line_no = line_no
        super().__init__(f"malformed line {line_no}" + (f": {detail}" if detail else ""))


class NonMonotonicTimestamp(IntelliAdError):
    def __init__(self, line_no):
        self.line_no = line_no
        super().__init__(f"timestamp decreases at line {line_no}")


class ZeroDuration(IntelliAdError):
    pass


class EmptyRunList(IntelliAdError):
    pass


class InvalidSession(IntelliAdError):
    pass


# power model

class NoFrequencyBin(IntelliAdError):
    pass


class NegativeRate(IntelliAdError):
    pass


class UtilizationOutOfRange(IntelliAdError):
    pass


class DegenerateDesign(IntelliAdError):
    pass


class InvalidPowerModel(IntelliAdError):
    pass


# review miner

class DimensionMismatch(IntelliAdError):
    pass


class TooFewPoints(IntelliAdError):
    pass


class UnmappedApp(IntelliAdError):
    def __init__(self, app_id):
        self.app_id = app_id
        super().__init__(f"app {app_id!r} has no scheme mapping")


class InvalidReview(IntelliAdError):
    pass


# analytics

class ZeroRequests(IntelliAdError):
    pass


class ZeroImpressions(IntelliAdError):
    pass


class LengthMismatch(IntelliAdError):
    pass


class ConstantSeries(IntelliAdError):
    pass


class TooFewSchemes(IntelliAdError):
    pass


# simdevice / cli

class InvalidPlan(IntelliAdError):
    pass


class ConfigError(IntelliAdError):
    pass
