"""Exception types raised by sepgamma."""


class SepGammaError(Exception):
    """Base class for all package errors."""


class ValidationError(SepGammaError, ValueError):
    """Input failed a structural or numerical validity check."""


class DimensionMismatch(ValidationError):
    pass


class NotSquare(ValidationError):
    pass


class NotHermitian(ValidationError):
    def __init__(self, deviation):
        self.deviation = float(deviation)
        super().__init__(f"matrix is not Hermitian (max |m - m^dag| = {self.deviation:.3e})")


class NotPositive(ValidationError):
    def __init__(self, min_eigenvalue):
        self.min_eigenvalue = float(min_eigenvalue)
        super().__init__(f"matrix is not positive (min eigenvalue = {self.min_eigenvalue:.3e})")


class TraceNotOne(ValidationError):
    def __init__(self, trace):
        self.trace = complex(trace)
        super().__init__(f"trace is {self.trace.real:.12g}{self.trace.imag:+.3e}j, expected 1")


class NotNormalized(ValidationError):
    def __init__(self, norm):
        self.norm = float(norm)
        super().__init__(f"vector norm is {self.norm:.12g}, expected 1")


class CostTooHigh(SepGammaError):
    """Decomposition cost is too far above 1 to be turned into a separable one."""

    def __init__(self, cost, limit):
        self.cost = float(cost)
        self.limit = float(limit)
        super().__init__(f"decomposition cost {self.cost:.10g} exceeds {self.limit:.10g}")
