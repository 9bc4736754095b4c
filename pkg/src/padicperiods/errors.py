"""Exception hierarchy shared by all modules."""


class PadicError(Exception):
    """Base class for all library errors."""


# -- arithmetic core ---------------------------------------------------------

class ContextMismatch(PadicError):
    """Operands live in incompatible tower contexts."""


class DivisionByZeroClass(PadicError):
    """Division by an element indistinguishable from zero at working precision."""


class ZeroClassInput(PadicError):
    """An input that must be nonzero is a zero class."""


class NonUnitInput(PadicError):
    """An input that must be a unit has nonzero valuation."""


class ValuationNotDivisible(PadicError):
    """n-th root requested of an element whose valuation is not divisible by n."""


class NoRootInField(PadicError):
    """The requested root does not exist in the ambient field."""


class PrecisionExhausted(PadicError):
    """Roots could not be separated at working precision."""


class SingularJacobian(PadicError):
    """Newton iteration aborted: Jacobian not invertible at the current point."""


class NoConvergence(PadicError):
    """Newton iteration budget exceeded without reaching the target precision."""


# -- number fields and lattice reduction -------------------------------------

class DivisionByZero(PadicError):
    """Division by zero in exact number-field arithmetic."""


class NoSimpleResidueRoot(PadicError):
    """The minimal polynomial has no simple root at the requested residue."""


class DependentRows(PadicError):
    """LLL input rows are linearly dependent."""


class InsufficientPrecision(PadicError):
    """Not enough p-adic digits for the requested recognition bounds."""


class NotFound(PadicError):
    """A search-type operation exhausted its bounds without success."""


# -- Mumford-curve pipeline --------------------------------------------------

class NonConvergent(PadicError):
    """Theta series does not converge for the given half-periods."""


class DegenerateTheta(PadicError):
    """A theta value needed in a denominator vanishes at working precision."""


class RamifiedResidue(PadicError):
    """A value expected to descend to the unramified layer has ramified part."""


class SeedNotFound(PadicError):
    """No admissible Newton seed was found for the half-period system."""


class NotMumfordReduction(PadicError):
    """The sextic's residue pattern is neither (2,2,2) nor (2,2,1,1)."""


class RootsNotInField(PadicError):
    """The sextic does not split over the ambient field."""


class ZeroEntry(PadicError):
    """A matrix entry that must be nonzero is zero (or a zero class)."""


class InvariantViolation(PadicError):
    """A domain-type invariant (e.g. period valuation signs) is violated."""


# -- Igusa-Clebsch invariants -------------------------------------------------

class RepeatedRoot(PadicError):
    """Weierstrass roots are not pairwise distinct."""


class ZeroDiscriminant(PadicError):
    """I10 vanishes; the curve is singular."""


# -- L-invariants -------------------------------------------------------------

class SingularOrd(PadicError):
    """The ord-pairing matrix is not invertible over Q."""


class NoConsistentConvention(PadicError):
    """No action convention satisfies the defining identity on all entries."""


# -- CLI ----------------------------------------------------------------------

class SchemaError(PadicError):
    """Input JSON does not match the expected schema."""

    def __init__(self, message, pointer=""):
        super().__init__(message)
        self.pointer = pointer


class UnknownCommand(PadicError):
    """CLI invoked with an unrecognized command."""
