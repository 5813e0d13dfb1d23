"""Exception hierarchy."""


class FloError(Exception):
    """Base class for every error raised by this package."""


class NotHermitian(FloError, ValueError):
    pass


class NotPSD(FloError, ValueError):
    pass


class NotSymmetric(FloError, ValueError):
    pass


class NotAntisymmetric(FloError, ValueError):
    pass


class IndexOutOfRange(FloError, IndexError):
    pass


class OutOfRange(FloError, ValueError):
    pass


class NotEven(FloError, ValueError):
    """Operator or state does not commute with the parity operator."""


class NotGaussian(FloError, ValueError):
    pass


class MixedParity(FloError, ValueError):
    pass


class MixedSector(FloError, ValueError):
    pass


class WrongModeCount(FloError, ValueError):
    pass


class WrongSector(FloError, ValueError):
    pass


class TooManyModes(FloError, ValueError):
    pass


class TooManyBranches(FloError, ValueError):
    pass


class InvalidGuard(FloError, ValueError):
    pass


class WrongAncillaModes(FloError, ValueError):
    pass


class NotConvexGaussian(FloError, ValueError):
    """Ancilla state fails the convex-Gaussianity criterion."""

    def __init__(self, c_plus: float, c_minus: float):
        self.c_plus = c_plus
        self.c_minus = c_minus
        super().__init__(
            f"ancilla is not convex-Gaussian: C+ = {c_plus:.10g}, C- = {c_minus:.10g}"
            f" (exact: {c_plus:.17g}, {c_minus:.17g})"
        )


class FileFormatError(FloError, ValueError):
    """Malformed state, circuit or report file; message carries line/field context."""
