"""Exception types shared across gerrylab modules."""


class GerrylabError(Exception):
    """Base class for all gerrylab domain errors."""


class InvalidPartitionError(GerrylabError):
    """A cell partition violates a structural precondition."""


class UnknownDistrictError(GerrylabError):
    """A district id is outside {1..k} or owns no cells."""


class ElectorateError(GerrylabError):
    """An electorate is malformed (range, overlap, bad lattice parameters)."""


class InfeasibleError(GerrylabError):
    """The requested operation cannot succeed for these inputs."""


class FileFormatError(GerrylabError):
    """A plan, electorate, or report file does not parse."""
