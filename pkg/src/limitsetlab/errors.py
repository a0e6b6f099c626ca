"""Exception types raised across the package."""


class LimitSetLabError(Exception):
    """Base class for all package errors."""


# --- moebius ---------------------------------------------------------------

class PoleAt(LimitSetLabError):
    """Derivative requested at the pole of the map."""


class EllipticInput(LimitSetLabError):
    """Translation length is undefined for elliptic maps."""


class CoincidentFixedPoints(LimitSetLabError):
    """An axis needs two distinct ideal endpoints."""


class IdentityInput(LimitSetLabError):
    """Fixed points of the identity are not isolated."""


class EmptySet(LimitSetLabError):
    """Set distance needs nonempty regions."""


# --- groups ----------------------------------------------------------------

class EllipticGenerator(LimitSetLabError):
    """Cyclic groups are built from loxodromic or parabolic maps only."""


class OverlappingDisks(LimitSetLabError):
    """Schottky data requires pairwise disjoint disk closures."""


# --- combine ---------------------------------------------------------------

class KleinHypothesisFails(LimitSetLabError):
    """int(F0) ∪ int(F1) = H^3 could not be certified."""


class PoleInsideRegion(LimitSetLabError):
    """sup |h'| is infinite: the pole of h meets the region."""


class ZeroDistance(LimitSetLabError):
    """The two regions touch; the ratio is undefined."""


class NoSeparatingDisks(LimitSetLabError):
    """No free round disk separates the groups' fundamental data."""


class DisksNotInDomain(LimitSetLabError):
    """The paired disks do not lie in the ambient fundamental domain."""


class NonLoxodromic(LimitSetLabError):
    """The conjugating element must be loxodromic."""


class DivergentSeries(LimitSetLabError):
    """The power series does not converge for these parameters."""


# --- limitset --------------------------------------------------------------

class ExplosionGuard(LimitSetLabError):
    """Word enumeration exceeded the configured node cap."""

    def __init__(self, count):
        super().__init__(f"enumeration cap exceeded after {count} nodes")
        self.count = count


class EmptyCloud(LimitSetLabError):
    """Rendering needs at least one point."""


# --- dimension -------------------------------------------------------------

class DegenerateCloud(LimitSetLabError):
    """Box counting needs a cloud of positive diameter."""


class InsufficientScales(LimitSetLabError):
    """Box counting needs at least five usable scales."""


class OutOfRange(LimitSetLabError):
    """Dimension argument outside [0, 2]."""


class GeometricBoundViolated(LimitSetLabError):
    """Some tree edge has r(child) > rho * r(parent)."""


class AlphaOutOfRange(LimitSetLabError):
    """The covering argument needs alpha in (1, 2]."""


class TrivialTree(LimitSetLabError):
    """The tree has no edges to measure."""


# --- booktree --------------------------------------------------------------

class AngleOutOfRange(LimitSetLabError):
    """Broken-geodesic angle must lie in (0, pi]."""


class SegmentTooShort(LimitSetLabError):
    """A chain segment is not longer than K(theta)."""


class AngleTooSharp(LimitSetLabError):
    """A measured bend angle is below the stated minimum."""


class BadChainLength(LimitSetLabError):
    """The chain-distance bound needs n >= 2 and k > K >= 0."""


class ParamsOutOfRange(LimitSetLabError):
    """Book parameters outside the supported range."""


class NodeCapExceeded(LimitSetLabError):
    """Circle-tree generation exceeded the node cap."""
