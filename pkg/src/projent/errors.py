"""Exception types raised when an operation's precondition is not met."""


class ProjentError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(ProjentError, ValueError):
    pass


class NestedPair(ProjentError):
    """Two members chosen for an elementary compression are nested."""


class InstanceTooLarge(ProjentError):
    pass


class NotACover(ProjentError):
    pass


class NotUniformCover(ProjentError):
    pass


class NotComparable(ProjentError):
    """The second family is not a compression of the first."""


class EmptySet(ProjentError, ValueError):
    pass


class NotInSumset(ProjentError):
    pass


class NonCommutative(ProjentError):
    pass


class UnorderedContext(ProjentError):
    """The group carries no translation-invariant total order (it has torsion)."""


class CNotContained(ProjentError):
    pass
