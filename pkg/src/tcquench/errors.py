"""Exception types shared across the package.

Validation errors signal bad user input or unusable parameter combinations;
numerical errors signal a solver or algorithm failure on otherwise valid
input.  The command line maps them to exit codes 2 and 3 respectively.
"""


class ValidationError(ValueError):
    """Invalid parameters, configuration, or incompatible inputs."""


class NumericalError(RuntimeError):
    """A numerical routine failed (non-convergence, broken invariant, ...)."""
