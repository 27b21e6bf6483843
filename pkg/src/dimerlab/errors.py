"""Exception hierarchy shared by all dimerlab modules."""


class DimerError(Exception):
    """Base class for every error raised by dimerlab."""


class ZeroPolynomial(DimerError, ValueError):
    pass


class NonSquare(DimerError, ValueError):
    pass


class NotDivisible(DimerError, ArithmeticError):
    pass


class Infeasible(DimerError):
    """A GF(2) system has no solution.

    ``certificate`` lists row indices whose left-hand sides sum to zero while
    their targets sum to one.
    """

    def __init__(self, certificate):
        self.certificate = tuple(certificate)
        super().__init__(f"infeasible parity system; rows {list(self.certificate)} sum to 0 = 1")


class TGSyntaxError(DimerError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", col {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class ValidationError(DimerError, ValueError):
    """A torus graph violates a structural invariant.

    ``invariant`` is a short machine-readable code such as
    ``EulerCharacteristic`` or ``NotBipartite``.
    """

    def __init__(self, invariant, message=""):
        self.invariant = invariant
        super().__init__(f"{invariant}: {message}" if message else invariant)


class NonPrimitiveClass(DimerError, ValueError):
    pass


class NonClosing(DimerError, ValueError):
    pass


class DegeneratePolygon(DimerError, ValueError):
    pass


class NoOrientation(DimerError):
    pass


class ZeroDeterminant(DimerError, ValueError):
    pass


class CheckFailed(DimerError, AssertionError):
    pass


class NotQuadrilateral(DimerError, ValueError):
    pass


class NotTrivalent(DimerError, ValueError):
    pass


class NonzeroFaceOffsets(DimerError, ValueError):
    pass


class SingularTransform(DimerError, ZeroDivisionError):
    pass


class InconsistentSeed(DimerError, ValueError):
    pass
