"""Exception hierarchy shared across the package.

`ConfigError` maps to exit code 1 in the CLI, `NumericsError` to exit
code 2.
"""


class ConfigError(ValueError):
    """Invalid configuration file or CLI usage."""


class NumericsError(RuntimeError):
    """A numerical operation failed (singular solve, degeneracy, overflow)."""


class DegenerateSteadyState(NumericsError):
    """The Liouvillian null space has dimension > 1 within tolerance."""

    def __init__(self, null_dim: int, tol: float):
        self.null_dim = null_dim
        super().__init__(
            f"steady state is not unique: null-space dimension {null_dim} "
            f"(tolerance {tol:g})"
        )
