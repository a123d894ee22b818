"""Exception types shared across the toolkit.

Report-level outcomes (vacuous windows, inconclusive windows, truncated
horizons) are statuses on the reports, not exceptions; only conditions
that make a requested computation meaningless raise.
"""


class InvalidInput(ValueError):
    """Arguments violate a documented precondition."""


class UnsupportedConfiguration(InvalidInput):
    """Particle count / dimension outside the implemented range."""


class SingularResolvent(InvalidInput):
    """Resolvent requested at (or too close to) a pole of the symbol."""


class TooLarge(InvalidInput):
    """Dense-path operation requested above the dense size threshold."""


class SpectralBoundError(RuntimeError):
    """Chebyshev filtering could not certify a spectral enclosure."""


class PartitionConstructionFailure(RuntimeError):
    """Graf partition failed post-hoc verification of its support rules."""


class DecayViolation(InvalidInput):
    """Potential fails the requested decay certificate."""


class UncertifiedPotential(InvalidInput):
    """Operator assembly requested with a potential lacking a certificate."""


class PropagationAccuracy(RuntimeError):
    """Propagator unitarity or Richardson control exceeded tolerance."""


class OutOfBox(InvalidInput):
    """A shift or packet would leave the certified interior of the box."""


class SolverFailure(RuntimeError):
    """Iterative solver did not converge."""
