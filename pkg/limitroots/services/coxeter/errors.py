"""Exceptions raised by the root system engine.

Every computation error derives from LimitRootsError so the CLI can map
the whole family to a single exit code.
"""


class LimitRootsError(Exception):
    """Base class for computation errors."""


class InvalidModule(LimitRootsError):
    """Gram matrix or simple roots violate the based root system axioms."""


class IsotropicMirror(LimitRootsError):
    """Reflection requested in a vector with q(v) = 0."""


class DepthOverflow(LimitRootsError):
    """Root coordinates grew past the configured magnitude guard."""


class AllOrthogonal(LimitRootsError):
    """Every pairing B(alpha, rho) in the table vanishes."""


class NotPositivelyIndependent(LimitRootsError):
    """Some nonzero nonnegative combination of the simple roots is zero."""


class OnKernel(LimitRootsError):
    """Vector lies on the kernel of the cutting functional."""


class CoincidentPoints(LimitRootsError):
    """A line through two points was requested with the points equal."""


class KernelCrossing(LimitRootsError):
    """A partial image of a word action left the normalizable domain."""


class EmptySet(LimitRootsError):
    """A set metric was asked for an empty point set."""


class EmptyQuadric(LimitRootsError):
    """The form is positive definite, the isotropic cone is {0}."""


class CanonicalPairNotInTable(LimitRootsError):
    """The canonical simple pair of a dihedral subsystem is deeper than the table."""


class InvalidSimpleSystem(LimitRootsError):
    """Roots proposed as a simple system fail the based root system axioms."""


class UnsupportedRank(LimitRootsError):
    """Rendering is only available in rank 2, 3 and 4."""


class LimitSetUnknown(LimitRootsError):
    """No exact description of the limit set is available for this system."""


class UnknownSystem(LimitRootsError):
    """A named preset system does not exist."""


class DimensionMismatch(LimitRootsError, ValueError):
    """Vector lengths do not match the module's ambient dimension."""
