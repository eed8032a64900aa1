"""Exception types raised by the library."""


class EllintError(Exception):
    """Base class for all library errors."""


class InvalidParameter(EllintError, ValueError):
    pass


class InvalidModulus(InvalidParameter):
    pass


class NonConvergent(EllintError, ArithmeticError):
    """A series could not reach the requested accuracy within the term cap."""


class DivisionByZeroSeries(EllintError, ZeroDivisionError):
    pass


class RadiusGuard(EllintError, ValueError):
    """Evaluation point lies outside the declared safe radius of a series."""


class UnknownFunction(EllintError, LookupError):
    pass


class ParamRequired(EllintError, ValueError):
    pass


class ParamOutOfRange(EllintError, ValueError):
    pass


class UnknownFamily(EllintError, LookupError):
    pass


class NoSuchClaim(EllintError, LookupError):
    pass


class HarnessSelfTestError(EllintError, RuntimeError):
    """A negative control passed, so the checker itself cannot be trusted."""
