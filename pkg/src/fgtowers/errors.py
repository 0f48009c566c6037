"""Exception hierarchy shared by all modules."""


class GroupError(Exception):
    """Base class for errors raised by fgtowers."""


class ParseError(GroupError, ValueError):
    pass


class TrivialWord(GroupError, ValueError):
    """An operation needs a nontrivial element and got the identity."""


class RankMismatch(GroupError, ValueError):
    pass


class UnboundVariable(GroupError, KeyError):
    pass


class NotSaturated(GroupError):
    pass


class InvalidRay(GroupError, ValueError):
    pass


class PresentationMismatch(GroupError, ValueError):
    pass


class ZeroLength(GroupError, ValueError):
    pass


class UnsupportedRegime(GroupError):
    pass


class NotIsomorphicStar(GroupError):
    pass


class TooFewRays(GroupError, ValueError):
    pass


class InvalidTower(GroupError, ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations) or "invalid tower")


class UnsupportedTowerShape(GroupError):
    pass


class SingularMatrix(GroupError, ValueError):
    pass


class SingularClosure(SingularMatrix):
    pass


class FloorMismatch(GroupError, ValueError):
    pass


class DimensionMismatch(GroupError, ValueError):
    pass


class GeneratorCollision(GroupError, ValueError):
    pass
