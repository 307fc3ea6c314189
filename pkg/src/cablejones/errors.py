"""Exception hierarchy shared by all modules."""


class CableJonesError(Exception):
    """Base class for every error raised by this package."""


class InvalidParams(CableJonesError, ValueError):
    """Parameters violate a structural constraint (coprimality, sign, ...)."""


class NotDivisible(CableJonesError, ArithmeticError):
    """Exact division left a nonzero remainder."""


class DivisionByZeroPoly(CableJonesError, ZeroDivisionError):
    pass


class BetaZero(CableJonesError, ValueError):
    """q1 == p1*p2*q2, so the analytic machinery is undefined."""


class NotApplicable(CableJonesError, ValueError):
    """The integral representation needs beta*gamma > 0."""


class AngleOutOfBand(CableJonesError, ValueError):
    """Contour angle outside the band where the Gaussian kernel decays."""


class PoleHit(CableJonesError, ArithmeticError):
    """Evaluation point lies on a genuine pole."""


class ContourThroughPole(CableJonesError, ArithmeticError):
    pass


class NotPositiveDefinite(CableJonesError, ValueError):
    pass


class InsufficientData(CableJonesError, ValueError):
    pass
