"""Exception hierarchy shared by all kvstar modules."""


class KvStarError(Exception):
    """Base class for every error raised by kvstar."""


class ParseError(KvStarError, ValueError):
    pass


class DimensionMismatch(KvStarError, ValueError):
    pass


class LieAlgebraError(KvStarError, ValueError):
    pass


class AntisymmetryViolation(LieAlgebraError):
    def __init__(self, i, j, k, message=None):
        self.i, self.j, self.k = i, j, k
        super().__init__(message or f"antisymmetry violated at c_{i}{j}^{k}")


class JacobiViolation(LieAlgebraError):
    def __init__(self, i, j, l, m, residual):
        self.i, self.j, self.l, self.m = i, j, l, m
        self.residual = residual
        super().__init__(
            f"Jacobi identity fails for (i,j,l)=({i},{j},{l}), component m={m}: "
            f"residual {residual}"
        )


class NonzeroConstantTerm(KvStarError, ValueError):
    pass


class NonUnipotentConstantTerm(KvStarError, ValueError):
    pass


class InsufficientTruncationOrder(KvStarError, ValueError):
    pass


class SizeLimitExceeded(KvStarError, ValueError):
    pass


class SingularTriangularSystem(KvStarError, ArithmeticError):
    pass


class SeriesInversionFailure(KvStarError, ArithmeticError):
    pass


class NotInvariant(KvStarError, ValueError):
    pass


class InconsistentSystem(KvStarError, ArithmeticError):
    pass
