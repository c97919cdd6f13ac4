"""Exception types raised across the package."""


class CoarseqmError(Exception):
    """Base class for all domain errors."""


class NonHermitianInput(CoarseqmError, ValueError):
    """Matrix flagged Hermitian fails the Hermitian tolerance check."""


class ConvergenceFailure(CoarseqmError, RuntimeError):
    """Iterative kernel exceeded its sweep/iteration budget."""


class MetricValidationError(CoarseqmError, ValueError):
    """Candidate distance matrix violates metric axioms.

    Carries the full list of violations, each naming the offending points.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations[:8])
        more = "" if len(self.violations) <= 8 else f" (+{len(self.violations) - 8} more)"
        super().__init__(f"not a metric: {lines}{more}")


class NotACover(CoarseqmError, ValueError):
    """Family of sets fails to cover the space or violates cover invariants."""


class CoverInvalid(NotACover):
    """Cover unusable for the cutting procedure (coloring/disjointness)."""


class EmptyBox(CoarseqmError, ValueError):
    """Grid box contains no lattice points."""


class DomainMismatch(CoarseqmError, ValueError):
    """Element does not live in the seminorm's domain."""


class DimensionMismatch(CoarseqmError, ValueError):
    """Operands have incompatible shapes."""


class LPInfeasible(CoarseqmError, RuntimeError):
    """Linear program has no feasible point (malformed state/marginals)."""


class LPUnbounded(CoarseqmError, RuntimeError):
    """Linear program objective is unbounded over the feasible set."""


class GapExceeded(CoarseqmError, RuntimeError):
    """Primal and dual transport values disagree beyond tolerance."""


class UnsupportedComponentSeminorm(CoarseqmError, TypeError):
    """Union component carries a seminorm with no exact inner solver."""


class BudgetZero(CoarseqmError, ValueError):
    """Randomized search invoked with an empty trial budget."""


class SupportsNotDisjoint(CoarseqmError, ValueError):
    """Bump supports fail the required pairwise separation."""


class CutoffOutOfRange(CoarseqmError, ValueError):
    """Tail cutoff does not lie inside the truncated ray."""


class NotAState(CoarseqmError, ValueError):
    """Functional is not positive and unital."""


class NonpositiveWidth(CoarseqmError, ValueError):
    """Normalizing-function width must be positive."""


class ProfileInvalid(CoarseqmError, ValueError):
    """Fourier profile violates its grid/endpoint invariants."""


class UsageError(CoarseqmError, ValueError):
    """Command-line input malformed; message names the file and field."""
