"""Exception and warning types shared across the kernel."""


class HelixForgeError(Exception):
    """Base class for all kernel errors."""


# field
class DivisionByZero(HelixForgeError, ZeroDivisionError):
    pass


class DiscriminantMismatch(HelixForgeError, ValueError):
    """Two surd quantities over different quadratic fields were combined."""


class BothZero(HelixForgeError, ValueError):
    pass


class PoleAtParameter(HelixForgeError, ValueError):
    pass


# curves
class DegenerateIndicatrix(HelixForgeError):
    pass


class DenominatorRootInDomain(HelixForgeError):
    pass


class DependentTangentField(HelixForgeError):
    pass


class OracleDegenerate(HelixForgeError):
    pass


class ZeroSpeedCurve(HelixForgeError):
    pass


# helix
class NotHelical(HelixForgeError):
    pass


class PlanarCurve(HelixForgeError):
    pass


class DegenerateAngle(HelixForgeError):
    pass


class NotCoprime(HelixForgeError):
    pass


# hermite
class PoleTangent(HelixForgeError):
    pass


class SystemSingular(HelixForgeError):
    pass


class NoPositiveWeights(HelixForgeError):
    """Raised when the interpolating Bezier needs a non-positive weight.

    The offending solution is attached as ``solution``.
    """

    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution


# rmf
class RemezStagnation(HelixForgeError):
    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


# surface
class DomainMismatch(HelixForgeError):
    pass


class SingularPoint(HelixForgeError):
    pass


# warnings
class KernelWarning(UserWarning):
    pass


class ZeroSpeedWarning(KernelWarning):
    pass


class NotPythagorean(KernelWarning):
    pass


class CuspDetected(KernelWarning):
    pass


class CuspInInterval(KernelWarning):
    pass


class DomainWarning(KernelWarning):
    """A precondition fails at isolated parameters inside [0, 1]."""


class DegenerateMesh(KernelWarning):
    """Some mesh quads collapse (zero profile, cusps)."""
