"""Exception types shared across the package."""


class CoxHeckeError(Exception):
    """Base class; `kind` is the stable name reported by the CLI."""

    @property
    def kind(self) -> str:
        return type(self).__name__


class MatrixError(CoxHeckeError, ValueError):
    pass


class ResourceLimit(CoxHeckeError):
    pass


class BallExceeded(CoxHeckeError):
    """A product or neighbor left the length-L ball."""


class NotExpressible(CoxHeckeError, ValueError):
    pass


class NotAQPolynomial(CoxHeckeError, ValueError):
    pass


class NotInOmega(CoxHeckeError):
    pass


class EmptyLambda(CoxHeckeError):
    pass


class NoSuchParabolic(CoxHeckeError):
    pass


class UnknownSuite(CoxHeckeError, KeyError):
    pass


class MissingPrerequisite(CoxHeckeError):
    pass


class CacheMismatch(CoxHeckeError):
    pass
