"""Exception types shared across the package."""


class TorskitError(Exception):
    """Base class for all errors raised by this package."""


# -- lattice engine ----------------------------------------------------------

class NotALattice(TorskitError):
    """Some pair of elements has no unique meet or join."""


class NotCJI(TorskitError):
    """Element is not completely join-irreducible (lower cover count != 1)."""


class NotCMI(TorskitError):
    """Element is not completely meet-irreducible (upper cover count != 1)."""


class NoUniqueMax(TorskitError):
    """kappa candidate set has two or more maximal elements."""


class NoUniqueMin(TorskitError):
    """kappa_star candidate set has two or more minimal elements."""


class NotJoinSemidistributive(TorskitError):
    """A cover of x admits two minimal join complements; CJR undefined."""


class KappaUndefined(TorskitError):
    """kappa_bar cannot be evaluated (CJR or kappa failed underneath)."""


# -- quiver-spec parsing -----------------------------------------------------

class AlgebraSyntaxError(TorskitError):
    """Malformed quiver-spec input; carries line and column."""

    def __init__(self, message, line, column=1):
        super().__init__(f"line {line}, col {column}: {message}")
        self.line = line
        self.column = column


class UndefinedArrow(TorskitError):
    """Arrow name or arrow endpoint not declared."""


class NonParallelRelation(TorskitError):
    """Paths in one relation do not share source and target."""


class NonAdmissibleRelation(TorskitError):
    """Relation has a path of length < 2, or the ideal is not admissible."""


class NonPrimeField(TorskitError):
    """Field characteristic is not prime."""


class NotHereditary(TorskitError):
    """Operation requires a hereditary algebra."""


# -- budgets and catalog -----------------------------------------------------

class BudgetExceeded(TorskitError):
    """Enumeration search space exceeds the configured budget."""


class CapExceeded(TorskitError):
    """A per-operation cap (submodules, Ext classes, ...) was exceeded."""


class EndTooLarge(TorskitError):
    """p^dim End exceeds the endomorphism enumeration cap."""


class HomTooLarge(TorskitError):
    """p^dim Hom exceeds the isomorphism-test cap."""


class NotInCatalog(TorskitError):
    """An indecomposable summand matches no catalog entry."""

    def __init__(self, message, dims=None):
        super().__init__(message)
        self.dims = dims


class IncompleteCatalog(TorskitError):
    """Closure produced a module outside the enumerated catalog."""


# -- torsion engine ----------------------------------------------------------

class LabelNotUnique(TorskitError):
    """A cover relation admits zero or several brick labels."""


class NotWide(TorskitError):
    """Subcategory fails the wide (kernel/cokernel/extension) closure check."""
