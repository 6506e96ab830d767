"""Exception types shared across the simulator."""


class SchemeMismatchError(TypeError):
    """An operation received a level scheme of the wrong variant."""


class GridResolutionError(ValueError):
    """A shift or mode index is not representable on the given grid."""


class ConvergenceError(RuntimeError):
    """A fixed-step integration failed its convergence check."""
