"""Exception hierarchy shared by all modules."""


class SimplexFlowsError(Exception):
    """Base class for every error raised by this package."""


class RankDeficient(SimplexFlowsError):
    """A linear system or affine dependency is degenerate beyond tolerance."""


class InvalidConfiguration(SimplexFlowsError):
    """The point set does not embed the requested skeleton."""


class DegenerateCone(SimplexFlowsError):
    pass


class DegenerateSimplex(SimplexFlowsError):
    pass


class SingularInput(SimplexFlowsError):
    """Matrix too close to singular for the inverse square root."""


class DimensionError(SimplexFlowsError):
    pass


class OutOfRange(SimplexFlowsError):
    pass


class DomainError(SimplexFlowsError):
    pass


class NotGated(SimplexFlowsError):
    """The greatest solid angle does not exceed half of V, so no wide face exists."""


class NonConvergence(SimplexFlowsError):
    def __init__(self, message, potential=None, residual=None):
        super().__init__(message)
        self.potential = potential
        self.residual = residual


class EmbeddingViolated(SimplexFlowsError):
    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class ClassificationUnstable(SimplexFlowsError):
    pass
