"""Exception hierarchy shared by every module of the package."""


class RSAVError(Exception):
    """Base class for all errors raised by this package."""


class GridError(RSAVError, ValueError):
    """Invalid grid dimensions or domain lengths."""


class ShapeError(RSAVError, ValueError):
    """Array shape does not match the grid or a companion array."""


class CatalogError(RSAVError, KeyError):
    """Unknown model name or variant."""


class IllPosedQError(RSAVError, ArithmeticError):
    """The radicand of an auxiliary variable Q_i(phi) is not strictly positive."""

    def __init__(self, index, radicand):
        self.index = index
        self.radicand = radicand
        super().__init__(
            f"auxiliary variable {index}: radicand {radicand!r} is not positive; "
            "increase C_i or adjust gamma_i"
        )


class SolverError(RSAVError, ArithmeticError):
    """Linear solve could not be performed (non-positive resolvent, singular system)."""


class NumericalError(RSAVError, ArithmeticError):
    """A simulation produced an unusable numerical state."""


class DivergenceError(NumericalError):
    """A non-finite value appeared during time stepping."""

    def __init__(self, step, what="state"):
        self.step = step
        super().__init__(f"non-finite {what} at step {step}")


class EnergyLawViolation(NumericalError):
    """A discrete energy law residual exceeded its tolerance."""

    def __init__(self, step, residual, tol):
        self.step = step
        self.residual = residual
        self.tol = tol
        super().__init__(
            f"energy law violated at step {step}: residual {residual:.3e} > {tol:.3e}"
        )


class InvariantError(RSAVError, AssertionError):
    """An internal invariant that should hold analytically failed."""


class ConfigError(RSAVError, ValueError):
    """Malformed or invalid run configuration."""

    def __init__(self, message, key=None, line=None):
        self.key = key
        self.line = line
        where = []
        if key is not None:
            where.append(f"key '{key}'")
        if line is not None:
            where.append(f"line {line}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
