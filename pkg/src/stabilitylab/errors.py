"""Exception hierarchy shared by every module."""


class StabilityLabError(Exception):
    pass


class SizeExceeded(StabilityLabError):
    """Instance is above the exact-solver or enumeration cap."""


class UnsupportedLaw(StabilityLabError):
    pass


class BlockOutOfRange(StabilityLabError):
    pass


class ContinuousSpace(StabilityLabError):
    """Near-optimal enumeration requested for a continuous parameter space."""


class OddVertexCount(StabilityLabError):
    pass


class NoConvergence(StabilityLabError):
    pass


class NoFiniteMGF(StabilityLabError):
    pass


class PopulationCap(StabilityLabError):
    pass


class ExtinctTree(StabilityLabError):
    pass


class ZeroDensityAtStart(StabilityLabError):
    pass


class EmptyInput(StabilityLabError):
    pass


class TooFewSamples(StabilityLabError):
    pass


class ParseError(StabilityLabError):
    pass


class ValidationError(StabilityLabError):
    pass


class DegenerateEigenspace(UserWarning):
    """Extreme eigenvalue gap below tolerance; the eigenvector is not well defined."""
