"""Exception hierarchy shared by all specbound modules."""


class SpecboundError(Exception):
    """Base class for all errors raised by specbound."""


class RejectedInput(SpecboundError, ValueError):
    """Input violates a documented precondition (shape, finiteness, kind)."""


class GaugeError(SpecboundError):
    """Vector potential construction failed (quadrature non-convergence)."""


class EstimatorError(SpecboundError):
    """An asymptotic estimator could not produce a usable value."""


class DiscretizationError(SpecboundError):
    """Channel potential is not finite at a grid node."""


class SolverError(SpecboundError):
    """Eigenvalue extraction failed or was refused."""


class StateError(SpecboundError):
    """A grid state violates admissibility (boundary mass, support escape)."""


class ConfigError(SpecboundError):
    """Scenario configuration is malformed."""
