"""Exception types shared across the toolkit."""


class ReductionLabError(Exception):
    """Base class for all toolkit errors."""


class MalformedInputError(ReductionLabError):
    """Input data is structurally invalid (shape mismatch, NaN/Inf entries, bad file)."""


class SingularMatrixError(ReductionLabError):
    """A matrix required to be invertible is singular at the rank tolerance."""


class NotPositiveError(ReductionLabError):
    """A matrix required to be positive semidefinite has a genuinely negative eigenvalue."""


class DegenerateSubspaceError(ReductionLabError):
    """A nonzero subspace was required but the zero subspace was supplied."""


class NotComplementaryError(ReductionLabError):
    """Two subspaces do not form a direct-sum decomposition of the ambient space."""


class StructurePreconditionError(ReductionLabError):
    """An algebraic precondition (semisimplicity, unitality, commutativity, ...) fails."""


class InvalidWitnessError(ReductionLabError):
    """A subspace offered as invariant is not invariant under the algebra."""


class NotComplementableError(ReductionLabError):
    """The invariant subspace admits no module complement."""


class MalformedDerivationError(ReductionLabError):
    """A putative derivation violates the derivation identity."""


class FamilyTooLargeError(ReductionLabError):
    """Closure of an idempotent family under symmetric differences exceeded the cap."""


class NumericalDegeneracyError(ReductionLabError):
    """A randomized splitting step failed repeatedly; results would be unreliable."""


class MalformedGraphError(ReductionLabError):
    """A digraph is not reflexive or not transitive."""
