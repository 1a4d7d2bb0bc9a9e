"""Exception hierarchy shared by all dynsub modules."""


class DynsubError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(DynsubError):
    """Operands have incompatible or non-square-decomposable dimensions."""


class HermiticityError(DynsubError):
    """A matrix required to be Hermitian deviates beyond tolerance."""


class PositivityError(DynsubError):
    """A matrix required to be positive semidefinite has a negative eigenvalue."""


class TraceError(DynsubError):
    """A matrix violates its trace normalization."""


class DomainError(DynsubError):
    """A scalar argument lies outside its admissible interval."""


class UnitarityError(DynsubError):
    """A matrix required to be unitary is not, beyond tolerance."""


class StochasticityError(DynsubError):
    """A matrix is not column-stochastic within tolerance."""


class BistochasticityError(DynsubError):
    """A matrix is not bistochastic within tolerance."""


class NonUniqueInvariantError(DynsubError):
    """The invariant probability vector of a stochastic matrix is not unique."""


class NumericalError(DynsubError):
    """A numerically computed object failed its sanity bounds."""


class ClassError(DynsubError):
    """A bipartite state is outside the required marginal class."""


class ConstraintError(DynsubError):
    """A quasi-free map violates its operator-interval constraint."""


class NormError(DynsubError):
    """An operator exceeds its required norm bound."""


class ProjectorError(DynsubError):
    """A matrix required to be an orthogonal projector is not one."""


class BlockFormError(DynsubError):
    """A bipartite symbol is not in the expected block form."""


class ModeLimitError(DynsubError):
    """Mode count exceeds the supported explicit construction range."""


class SingularSymbolError(DynsubError):
    """A symbol with unit eigenvalues is not a projector; no density form."""


class ConvergenceError(DynsubError):
    """An iterative normalization failed to converge."""
