"""Exception types raised across the package.

Class names double as stable error identifiers in CLI output, so they
carry no ``Error`` suffix.
"""


class QosingError(Exception):
    """Base class for all package-specific errors."""


# -- lattice arithmetic -------------------------------------------------

class RankDeficient(QosingError):
    """Generator list spans a subgroup of rank < d."""


class NotASublattice(QosingError):
    """Containment required by an index computation fails."""


class NoMultiple(QosingError):
    """No positive multiple of the vector lies in the lattice."""


# -- fractional series --------------------------------------------------

class EmptySeries(QosingError):
    """The zero series has no Newton polyhedron."""


class NotAUnit(QosingError):
    """A twist factor has zero constant term."""


class PreconditionViolated(QosingError):
    """An operation's documented precondition does not hold."""


# -- branches -----------------------------------------------------------

class NotTotallyOrdered(QosingError):
    """Two exponents are incomparable in the componentwise order."""


class NotStrict(QosingError):
    """Two exponents coincide."""


class DegenerateExponent(QosingError):
    """Some exponent already lies in the previous lattice (index 1)."""


class ShapeViolation(QosingError):
    """Discarded coordinates do not match the expected padding shape."""


class Reducible(QosingError):
    """gcd(N, B) > 1, the binomial defines a reducible germ."""


class Smooth(QosingError):
    """The data defines a smooth germ where a singular one is required."""


class NotNormalized(QosingError):
    """Reconstructed exponents violate the normalization condition."""


# -- semigroups ---------------------------------------------------------

class NotInLattice(QosingError):
    """Element is outside the lattice generated by the semigroup."""


class NoUniqueMinimum(QosingError):
    """Two incomparable minimal candidates; greedy recovery is stuck."""


class AmbiguousDecomposition(QosingError):
    """A capped decomposition step has zero or several valid residues."""


# -- semiroots ----------------------------------------------------------

class ValuationMismatch(QosingError):
    """A semiroot evaluation has the wrong dominating exponent."""


class InIdeal(QosingError):
    """Polynomial reduces to zero modulo the defining polynomial."""


# -- toric --------------------------------------------------------------

class NotInFan(QosingError):
    """The subdivision center is not a face of any cone of the fan."""


# -- plane sections and recovery ----------------------------------------

class NonIntegral(QosingError):
    """A quantity that must clear to an integer fails to do so."""


class AmbiguousRecovery(QosingError):
    """Recovery case logic cannot single out a unique answer."""
