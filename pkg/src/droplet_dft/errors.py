"""Exception hierarchy for droplet-dft."""


class DropletDFTError(Exception):
    """Base class for all droplet-dft errors."""


class DomainError(DropletDFTError, ValueError):
    """An argument lies outside the domain of the operation."""


class NoStableSolution(DropletDFTError):
    """The self-consistent dipolar coupling has no root with eps_dd' <= 1.

    Raised below the critical density, where the renormalization cannot pull
    the effective dipolar strength back to one.
    """

    def __init__(self, message: str, density: float | None = None, eps_dd: float | None = None):
        super().__init__(message)
        self.density = density
        self.eps_dd = eps_dd


class NoDropletError(DropletDFTError):
    """The scattering lengths do not admit a self-bound equilibrium."""


class IterationLimitError(DropletDFTError):
    """An iterative solver hit its iteration limit before converging."""

    def __init__(self, message: str, residual_history: list[float] | None = None):
        super().__init__(message)
        self.residual_history = list(residual_history or [])

    @property
    def residual(self) -> float | None:
        """Last recorded residual, if any."""
        return self.residual_history[-1] if self.residual_history else None


class ConfigError(DropletDFTError):
    """The run configuration is invalid."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


class ReferenceDataError(DropletDFTError):
    """A reference dataset could not be parsed or validated."""

    def __init__(self, message: str, line_number: int | None = None):
        super().__init__(message)
        self.line_number = line_number
