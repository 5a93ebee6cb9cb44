"""Exception hierarchy shared by the library and the CLI."""


class SaddleCertError(Exception):
    """Base class for every error raised by saddlecert."""


class ValidationError(SaddleCertError):
    """Input data violates a structural requirement."""


class SystemFileSyntaxError(ValidationError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class OrderingViolation(ValidationError):
    """Eigenvalues are not sorted ascending."""


class SignViolation(ValidationError):
    """A stable eigenvalue is >= 0 or an unstable one is <= 0."""


class OrderTooSmall(ValidationError):
    """Requested truncation order is below what the theory needs."""


class ResonanceDetected(SaddleCertError):
    """An exact relation m.lambda = lambda_i (or the unstable mirror) holds."""

    def __init__(self, m, i, side, relation):
        self.m = tuple(m)
        self.i = i
        self.side = side
        self.relation = relation
        super().__init__(f"resonance on the {side} side: {relation}")


class InconclusiveInterval(SaddleCertError):
    """An interval that has to exclude zero does not."""


class NonpositiveOmega(SaddleCertError):
    pass


class DegenerateWindow(SaddleCertError):
    """Fewer than two nonzero majorant coefficients in the fit window."""


class TailDiverges(SaddleCertError):
    """The geometric majorant of the analytic tail of F does not converge."""


class MaxIterationsExceeded(SaddleCertError):
    pass
