"""Exception hierarchy. Everything derives from ValueError so callers can catch broadly."""


class KleinError(ValueError):
    pass


# projective primitives
class CoincidentPoints(KleinError):
    pass


class ZeroTuple(KleinError):
    pass


class NotIncident(KleinError):
    pass


class EqualLines(KleinError):
    pass


class RankDeficient(KleinError):
    pass


# reductions
class ConstraintViolation(KleinError):
    pass


class NotOnSurface(KleinError):
    pass


class CollinearInput(KleinError):
    pass


class ZeroVector(KleinError):
    pass


class ExprSyntaxError(KleinError):
    """Malformed expression; ``position`` is the 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownVariable(KleinError):
    pass


# audits and statistics
class NonCanonicalInput(KleinError):
    pass


class CoincidentLines(KleinError):
    pass


class TooFewLines(KleinError):
    pass


class InconsistentReport(KleinError):
    pass


class CoverageFailure(KleinError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


# clifford
class DegenerateRotor(KleinError):
    pass


class Antipodal(KleinError):
    pass


class RankUnexpected(KleinError):
    pass


# point generation
class InvalidSpec(KleinError):
    pass
