"""Exception taxonomy shared across the package.

CLI exit codes map onto these groups: config/parse problems exit 2,
insufficient-data conditions exit 3, self-check failures exit 4.
"""


class AeromapError(Exception):
    """Base class for all package errors."""


class ConfigError(AeromapError):
    """Invalid configuration: bad polygon, bad plan, unparseable file."""


class OutsideRoomError(AeromapError):
    """A queried point or pose lies outside the room polygon."""


class RobotHaltedError(AeromapError):
    """Motion command issued while the robot is in the halted state."""


class RayCastError(AeromapError):
    """Internal failure to find a wall hit inside a closed polygon."""


class DegenerateClusterError(AeromapError):
    """Cluster has no usable spread in its independent coordinate, or the
    fitted slope exceeds the parameterization bound (signals mislabeling)."""


class ParallelLinesError(AeromapError):
    """Intersection requested for two lines of the same orientation class."""


class NumericalDegeneracyError(AeromapError):
    """Line intersection system is numerically singular."""


class InsufficientDataError(AeromapError):
    """Not enough usable points to proceed (e.g. every point rejected)."""


class InsufficientGeometryError(AeromapError):
    """Fewer than two wall lines per orientation, or no closed corner ring."""


class TopologyMismatchError(AeromapError):
    """Estimated and true corner rings have different corner counts."""

    def __init__(self, estimated: int, truth: int):
        super().__init__(
            f"corner count mismatch: estimated {estimated}, truth {truth}"
        )
        self.estimated = estimated
        self.truth = truth


class NoRuleFiredError(AeromapError):
    """Fuzzy aggregate is identically zero; no rule fired for the frame."""


class SchemaError(AeromapError):
    """Wire document violates the frame schema; `field` names the offender."""

    def __init__(self, field: str, detail: str = ""):
        msg = f"schema error: {field}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.field = field
