"""Exception types shared across the package."""


class TorusDbarError(Exception):
    """Base class for all errors raised by this package."""


class SingularLattice(TorusDbarError):
    """Generators do not span R^{2d}, or the period matrix is too ill-conditioned."""


class NonImaginaryInput(TorusDbarError):
    """An argument that must be purely imaginary has a real part above tolerance."""


class DimensionMismatch(TorusDbarError):
    """Objects built over tori of different complex dimension were combined."""


class BidegreeOverflow(TorusDbarError):
    """Attempted to raise the anti-holomorphic degree of a form past d."""


class BidegreeUnderflow(TorusDbarError):
    """Attempted to lower the anti-holomorphic degree of a form below 0."""


class CutoffTooSmall(TorusDbarError):
    """A frequency minimiser landed on the enumeration boundary even after retries."""


class TrivialBundle(TorusDbarError):
    """Operation undefined for the holomorphically trivial bundle (c = 0)."""


class TrivialTwist(TorusDbarError):
    """The twist (p, q) = (0, 0) was supplied where a nontrivial bundle is required."""


class ResourceLimit(TorusDbarError):
    """A dense/sparse solve was requested beyond the configured desk-scale limits."""


class PoleAtLattice(TorusDbarError):
    """Evaluation point coincides with a lattice point (pole of zeta/kernel)."""


class DiagonalPole(TorusDbarError):
    """Kernel evaluated on the diagonal z - xi in the lattice."""


class CoverGap(TorusDbarError):
    """The open cover leaves some grid point uncovered."""


class NotACocycle(TorusDbarError):
    """A degree-1 cochain fails the cocycle identity on triple overlaps."""
