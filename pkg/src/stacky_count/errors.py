"""Exception hierarchy shared by every module.

All library errors derive from :class:`StackyError` so the CLI can map them to
a single usage/error exit code.
"""


class StackyError(Exception):
    """Base class for every error raised by this package."""


class NonPrime(StackyError, ValueError):
    """A characteristic (or field size) is not a prime (power)."""


class DegreeOutOfRange(StackyError, ValueError):
    """Extension degree outside the supported range."""


class CardinalityCap(StackyError, ValueError):
    """Requested field is larger than the enumeration-safety cap."""


class DivisionByZero(StackyError, ZeroDivisionError):
    """Inverse of the zero element requested."""


class ZeroElement(StackyError, ValueError):
    """Operation undefined on the zero element (e.g. multiplicative order)."""


class PartitionOutOfRange(StackyError, ValueError):
    """Bad (index, total) partition request."""


class WildCharacteristic(StackyError, ValueError):
    """The characteristic divides one of the weights."""


class DegreeNonPositive(StackyError, ValueError):
    """Degree parameter n must be at least 1."""


class BudgetExceeded(StackyError, RuntimeError):
    """Enumeration would exceed the configured tuple budget."""


class WeightMismatch(StackyError, ValueError):
    """Number of bundle summands differs from the number of weights."""


class DegreeTooSmall(StackyError, ValueError):
    """n is below the stable bound 2g."""


class UnstableRange(StackyError, ValueError):
    """Stable model requested outside its range of validity."""


class MissingLPolynomial(StackyError, ValueError):
    """A numeric trace needs curve eigenvalue data that was not supplied."""


class GenusMismatch(StackyError, ValueError):
    """L-polynomial genus differs from the genus of the table."""


class UnknownModuli(StackyError, KeyError):
    """Name not present in the moduli registry."""

    def __str__(self):  # KeyError quotes its argument; keep messages plain
        return str(self.args[0]) if self.args else ""
