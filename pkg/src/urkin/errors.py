"""Exception types shared across the kinematics modules."""


class KinematicsError(Exception):
    """Base class for solver-level failures."""


class UnreachableError(KinematicsError):
    """The requested pose lies outside the arm's workspace (or inside the
    shoulder cylinder), so the analytic branch has no real solution."""


class WristSingularityError(KinematicsError):
    """sin(q5) is (numerically) zero: the last joint angle is undefined in
    closed form and the Jacobian loses rank."""


class NotAntisymmetricError(ValueError):
    """A matrix handed to the vee operator is not antisymmetric within
    tolerance."""


class ModelFormatError(ValueError):
    """A robot model document could not be parsed."""


class ModelStructureError(ValueError):
    """Parsed model data violates a structural requirement (row count,
    finiteness, limit ordering, or the closed-form geometry pattern)."""


class FrameRangeError(ValueError):
    """A partial-chain request used frame indices outside 0..6 or in the
    wrong order."""


class DegenerateDirectionError(ValueError):
    """Insertion and target points coincide; no approach direction exists."""
