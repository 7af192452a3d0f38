class LatticeMismatchError(ValueError):
    """Two measures do not share a lattice pitch (or offsets cannot be added exactly)."""


class DegenerateScaleError(ValueError):
    pass


class MarginalMismatchError(ValueError):
    """A transport plan's marginals differ from its source or target measure."""


class UnsupportedInstanceError(ValueError):
    """The instance exceeds what the exact solvers accept."""


class PreconditionError(ValueError):
    """Inputs violate a mathematical precondition (e.g. a nonzero barycenter)."""
