"""Möbius transformations and hyperbolic geometry in the upper half-space model.

Conventions fixed here and used everywhere else:

* matrices are normalized to determinant 1, with the square-root branch
  chosen so the trace has nonnegative real part (ties broken
  deterministically); equality is always up to global sign;
* the point at infinity is the tagged singleton ``INFINITY``, never a
  large float;
* boundary points live in the extended complex plane, interior points are
  ``UpperHalfSpacePoint(z, t)`` with t > 0;
* Euclidean set distances are taken in the closed ball model, reached
  through the Cayley transform sending (0, 1) to the origin.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np
from scipy.spatial import cKDTree

from .config import LIMITS, TOL
from .errors import (
    CoincidentFixedPoints,
    EllipticInput,
    EmptySet,
    IdentityInput,
    PoleAt,
)


class _Infinity:
    """Tagged point at infinity of the extended plane."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()

ExtendedPoint = Union[complex, _Infinity]

IDENTITY_CLASS = "identity"
PARABOLIC = "parabolic"
ELLIPTIC = "elliptic"
LOXODROMIC = "loxodromic"


def is_infinity(z: ExtendedPoint) -> bool:
    return z is INFINITY


def _canonical_sign(a: complex, b: complex, c: complex, d: complex):
    """Pick the sign representative: Re tr >= 0, with deterministic tie-breaks."""
    for key in (a + d, a, b, c, d):
        if abs(key.real) > TOL.normalization:
            s = 1.0 if key.real > 0 else -1.0
            return a * s, b * s, c * s, d * s
        if abs(key.imag) > TOL.normalization:
            s = 1.0 if key.imag > 0 else -1.0
            return a * s, b * s, c * s, d * s
    return a, b, c, d


class MoebiusMap:
    """A normalized element of PSL(2, C) acting on the sphere and on H^3."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        a, b, c, d = complex(a), complex(b), complex(c), complex(d)
        det = a * d - b * c
        if det == 0:
            raise ValueError("singular matrix is not a Moebius map")
        if not all(math.isfinite(v) for z in (a, b, c, d) for v in (z.real, z.imag)):
            raise ValueError("matrix entries must be finite")
        # skip the no-op division so reconstruction is bit-stable
        if abs(det - 1.0) > 1e-14:
            s = cmath.sqrt(det)
            a, b, c, d = a / s, b / s, c / s, d / s
        self.a, self.b, self.c, self.d = _canonical_sign(a, b, c, d)

    # -- basic protocol ------------------------------------------------

    def __repr__(self):
        return f"MoebiusMap({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"

    def __eq__(self, other):
        if not isinstance(other, MoebiusMap):
            return NotImplemented
        return self.distance_to(other) < TOL.geometry

    def __hash__(self):
        raise TypeError("MoebiusMap compares with tolerance; not hashable")

    def distance_to(self, other: "MoebiusMap") -> float:
        """Entrywise distance up to global sign."""
        plus = max(
            abs(self.a - other.a), abs(self.b - other.b),
            abs(self.c - other.c), abs(self.d - other.d),
        )
        minus = max(
            abs(self.a + other.a), abs(self.b + other.b),
            abs(self.c + other.c), abs(self.d + other.d),
        )
        return min(plus, minus)

    @property
    def trace(self) -> complex:
        return self.a + self.d

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return compose(self, other)

    def __call__(self, z: ExtendedPoint) -> ExtendedPoint:
        return apply(self, z)


def identity() -> MoebiusMap:
    return MoebiusMap(1, 0, 0, 1)


def translation(b) -> MoebiusMap:
    """z -> z + b."""
    return MoebiusMap(1, b, 0, 1)


def compose(f: MoebiusMap, g: MoebiusMap) -> MoebiusMap:
    """Matrix product; (f o g) as sphere maps."""
    return MoebiusMap(
        f.a * g.a + f.b * g.c,
        f.a * g.b + f.b * g.d,
        f.c * g.a + f.d * g.c,
        f.c * g.b + f.d * g.d,
    )


def apply(f: MoebiusMap, z: ExtendedPoint) -> ExtendedPoint:
    """Evaluate (az+b)/(cz+d) with the usual infinity conventions."""
    if is_infinity(z):
        if f.c == 0:
            return INFINITY
        return f.a / f.c
    den = f.c * z + f.d
    if den == 0:
        return INFINITY
    return (f.a * z + f.b) / den


def pole(f: MoebiusMap) -> ExtendedPoint:
    """The point sent to infinity."""
    if f.c == 0:
        return INFINITY
    return -f.d / f.c


@dataclass(frozen=True)
class UpperHalfSpacePoint:
    """Point of H^3: boundary coordinate z, height t > 0."""

    z: complex
    t: float

    def __post_init__(self):
        if not (self.t > 0):
            raise ValueError("height must be positive")


def apply_h3(f: MoebiusMap, x: UpperHalfSpacePoint) -> UpperHalfSpacePoint:
    """Poincaré extension of the boundary action to H^3."""
    z, t = x.z, x.t
    num = (f.a * z + f.b) * (f.c * z + f.d).conjugate() + f.a * f.c.conjugate() * t * t
    den = abs(f.c * z + f.d) ** 2 + abs(f.c) ** 2 * t * t
    return UpperHalfSpacePoint(num / den, t / den)


def conformal_factor_h3(f: MoebiusMap, x: UpperHalfSpacePoint) -> float:
    """Euclidean norm of the derivative of the extension at an interior point."""
    return 1.0 / (abs(f.c * x.z + f.d) ** 2 + abs(f.c) ** 2 * x.t * x.t)


def derivative_norm(f: MoebiusMap, z: complex) -> float:
    """|f'(z)| = 1/|cz+d|^2 for the normalized matrix."""
    den = f.c * complex(z) + f.d
    if den == 0:
        raise PoleAt(f"derivative is infinite at the pole {z}")
    return 1.0 / abs(den) ** 2


def _is_identity(f: MoebiusMap, tol: float) -> bool:
    return (
        abs(f.b) <= tol and abs(f.c) <= tol
        and (abs(f.a - 1) <= tol and abs(f.d - 1) <= tol
             or abs(f.a + 1) <= tol and abs(f.d + 1) <= tol)
    )


def classify(f: MoebiusMap) -> str:
    """Trace classification: identity, parabolic, elliptic, or loxodromic."""
    tol = TOL.classify
    if _is_identity(f, tol):
        return IDENTITY_CLASS
    tr2 = f.trace * f.trace
    if abs(tr2 - 4) <= tol:
        return PARABOLIC
    if abs(tr2.imag) <= tol and -tol <= tr2.real < 4:
        return ELLIPTIC
    return LOXODROMIC


def _eigenvalues(f: MoebiusMap):
    """Eigenvalue pair (big, small) with |big| >= 1 >= |small|."""
    tr = f.trace
    disc = cmath.sqrt(tr * tr - 4)
    lam1 = (tr + disc) / 2
    lam2 = (tr - disc) / 2
    if abs(lam1) >= abs(lam2):
        return lam1, lam2
    return lam2, lam1


def translation_length(f: MoebiusMap) -> float:
    """Hyperbolic distance moved along the axis; 0 for parabolic/identity.

    Equals 2*arccosh(|tr|/2) in the rotation-free case.
    """
    kind = classify(f)
    if kind == ELLIPTIC:
        raise EllipticInput("translation length undefined for elliptic maps")
    if kind in (IDENTITY_CLASS, PARABOLIC):
        return 0.0
    big, _ = _eigenvalues(f)
    return 2.0 * math.log(abs(big))


def rotation_angle(f: MoebiusMap) -> float:
    """Rotation about the axis, in (-pi, pi], up to the PSL sign ambiguity."""
    if classify(f) != LOXODROMIC:
        raise EllipticInput("rotation angle defined for loxodromic maps here")
    big, _ = _eigenvalues(f)
    theta = 2.0 * cmath.phase(big)
    theta = (theta + math.pi) % (2 * math.pi) - math.pi
    return theta


def fixed_points(f: MoebiusMap):
    """Roots of cz^2 + (d-a)z - b; attracting first for loxodromics."""
    if _is_identity(f, TOL.classify):
        raise IdentityInput("every point is fixed")
    a, b, c, d = f.a, f.b, f.c, f.d
    kind = classify(f)
    if abs(c) <= TOL.classify * max(1.0, abs(a), abs(d)):
        # infinity is fixed
        if kind == PARABOLIC or abs(a - d) <= TOL.classify:
            return (INFINITY,)
        other = b / (d - a)
        if kind == LOXODROMIC and abs(a) < abs(d):
            return (other, INFINITY)
        return (INFINITY, other)
    if kind == PARABOLIC:
        return ((a - d) / (2 * c),)
    big, small = _eigenvalues(f)
    z_attract = (big - d) / c
    z_repel = (small - d) / c
    if kind == LOXODROMIC:
        return (z_attract, z_repel)
    return (z_attract, z_repel)


def _to_zero_infinity(p: ExtendedPoint, q: ExtendedPoint) -> MoebiusMap:
    """Map with p -> 0, q -> infinity."""
    if is_infinity(p):
        return MoebiusMap(0, 1, 1, -q)
    if is_infinity(q):
        return MoebiusMap(1, -p, 0, 1)
    return MoebiusMap(1, -p, 1, -q)


def loxodromic_with_axis(p: ExtendedPoint, q: ExtendedPoint,
                         length: float, rotation: float = 0.0) -> MoebiusMap:
    """Loxodromic with attracting point p, repelling point q.

    Translation length ``length`` > 0 along the axis and screw rotation
    ``rotation`` (radians).
    """
    same = (is_infinity(p) and is_infinity(q)) or (
        not is_infinity(p) and not is_infinity(q) and abs(p - q) == 0)
    if same:
        raise CoincidentFixedPoints("axis endpoints must differ")
    if not (length > 0):
        raise ValueError("translation length must be positive")
    half = (length + 1j * rotation) / 2.0
    core = MoebiusMap(cmath.exp(-half), 0, 0, cmath.exp(half))
    t = _to_zero_infinity(p, q)
    return compose(t.inverse(), compose(core, t))


def hyp_distance(x: UpperHalfSpacePoint, y: UpperHalfSpacePoint) -> float:
    """cosh d = 1 + (|z1-z2|^2 + (t1-t2)^2) / (2 t1 t2)."""
    num = abs(x.z - y.z) ** 2 + (x.t - y.t) ** 2
    return math.acosh(1.0 + num / (2.0 * x.t * y.t))


# --------------------------------------------------------------------------
# Round disks on the sphere at infinity
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RoundDisk:
    """Oriented generalized circle: a circle (center, radius) or a line
    (base, unit direction), with ``inside`` flagging the designated side.

    For circles ``inside=True`` designates the bounded disk; ``False`` the
    unbounded side including infinity.  For lines ``inside=True`` designates
    the left side of the direction vector; either side includes infinity.
    """

    center: complex = 0j
    radius: float = 0.0
    base: complex = 0j
    direction: complex = 0j
    is_circle: bool = True
    inside: bool = True

    @classmethod
    def circle(cls, center, radius, inside=True) -> "RoundDisk":
        if not (radius > 0):
            raise ValueError("radius must be positive")
        return cls(center=complex(center), radius=float(radius),
                   is_circle=True, inside=bool(inside))

    @classmethod
    def halfplane(cls, base, direction, inside=True) -> "RoundDisk":
        d = complex(direction)
        if abs(d) == 0:
            raise ValueError("direction must be nonzero")
        return cls(base=complex(base), direction=d / abs(d),
                   is_circle=False, inside=bool(inside))

    # -- membership ----------------------------------------------------

    def signed_offset(self, z: complex) -> float:
        """Negative strictly inside the designated side, 0 on the boundary."""
        if self.is_circle:
            off = abs(z - self.center) - self.radius
            return off if self.inside else -off
        cross = ((z - self.base) / self.direction).imag
        return -cross if self.inside else cross

    def contains(self, z: ExtendedPoint, closed: bool = True) -> bool:
        if is_infinity(z):
            return self.contains_infinity(closed)
        off = self.signed_offset(z)
        return off <= 0 if closed else off < 0

    def contains_infinity(self, closed: bool = True) -> bool:
        if self.is_circle:
            return not self.inside
        return closed

    def complement(self) -> "RoundDisk":
        if self.is_circle:
            return RoundDisk.circle(self.center, self.radius, not self.inside)
        return RoundDisk.halfplane(self.base, self.direction, not self.inside)

    def boundary_points(self, n: int) -> list:
        """n points on the boundary circle/line (line uses a tan-grid)."""
        if self.is_circle:
            return [self.center + self.radius * cmath.exp(2j * math.pi * k / n)
                    for k in range(n)]
        ss = np.tan(np.linspace(-math.pi / 2, math.pi / 2, n + 2)[1:-1])
        return [self.base + float(s) * self.direction for s in ss]

    def interior_witness(self, depth: float = 1.0) -> complex:
        """A finite point strictly inside the designated side.

        Varying ``depth`` > 0 moves the witness, so callers can dodge a pole.
        """
        if self.is_circle:
            if self.inside:
                return self.center + (0.9 * self.radius / (1.0 + depth)) * cmath.exp(0.7j)
            return self.center + (1.0 + depth) * self.radius * cmath.exp(0.3j)
        normal = 1j * self.direction if self.inside else -1j * self.direction
        return self.base + depth * normal


@dataclass(frozen=True)
class HalfSpace:
    """Closed hyperbolic half-space whose ideal boundary is the disk."""

    disk: RoundDisk


def _circle_through(p1: complex, p2: complex, p3: complex):
    """Circumcircle of three points, or None if (numerically) collinear."""
    ax, ay = p1.real, p1.imag
    bx, by = p2.real, p2.imag
    cx, cy = p3.real, p3.imag
    det = 2.0 * ((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))
    scale = max(abs(p2 - p1), abs(p3 - p1), abs(p3 - p2))
    if scale == 0:
        raise ValueError("degenerate point triple")
    if abs(det) <= 1e-13 * scale * scale:
        return None
    b1 = (bx * bx - ax * ax) + (by * by - ay * ay)
    b2 = (cx * cx - ax * ax) + (cy * cy - ay * ay)
    ux = ((cy - ay) * b1 - (by - ay) * b2) / det
    uy = ((bx - ax) * b2 - (cx - ax) * b1) / det
    center = complex(ux, uy)
    return center, abs(center - p1)


def circle_points(disk: RoundDisk, offsets=(0.0, 2.0 * math.pi / 3, 4.0 * math.pi / 3)):
    """Three marked boundary points (angles for circles, shifts for lines)."""
    if disk.is_circle:
        return [disk.center + disk.radius * cmath.exp(1j * t) for t in offsets]
    return [disk.base, disk.base + disk.direction, disk.base - disk.direction]


def map_disk(f: MoebiusMap, disk: RoundDisk) -> RoundDisk:
    """Image disk with orientation transported (three-point method)."""
    pl = pole(f)
    scale = disk.radius if disk.is_circle else 1.0

    pts = None
    for shift in (0.0, 0.35, 0.7, 1.1):
        if disk.is_circle:
            cand = circle_points(disk, (shift, shift + 2 * math.pi / 3,
                                        shift + 4 * math.pi / 3))
        else:
            cand = [disk.base + (s + shift) * disk.direction for s in (-1.0, 0.5, 2.0)]
        if is_infinity(pl) or min(abs(p - pl) for p in cand) > 1e-9 * max(1.0, scale):
            pts = cand
            break
    if pts is None:
        raise ValueError("could not avoid the pole on the boundary")

    images = [apply(f, p) for p in pts]
    finite = [w for w in images if not is_infinity(w)]
    geom = _circle_through(*images) if len(finite) == 3 else None
    if geom is None:
        # pole on (or numerically on) the boundary: the image is a line
        out = RoundDisk.halfplane(finite[0], finite[1] - finite[0], inside=True)
    else:
        center, radius = geom
        out = RoundDisk.circle(center, radius, inside=True)

    # transport the orientation with an interior witness, dodging the pole
    for depth in (1.0, 2.0, 0.5, 3.0):
        w = disk.interior_witness(depth)
        if is_infinity(pl) or abs(w - pl) > 1e-12 * max(1.0, scale):
            break
    fw = apply(f, w)
    if is_infinity(fw):
        inside_ok = out.contains_infinity(closed=False)
    else:
        inside_ok = out.signed_offset(fw) < 0
    return out if inside_ok else out.complement()


# --------------------------------------------------------------------------
# Ball-model Euclidean distances
# --------------------------------------------------------------------------

def ball_point(z: ExtendedPoint, t: float = 0.0) -> np.ndarray:
    """Cayley transform of the half-space model point (z, t) into the ball.

    (0, 1) goes to the origin, the boundary plane to the unit sphere,
    infinity to the south pole.
    """
    if is_infinity(z):
        return np.array([0.0, 0.0, -1.0])
    x, y = z.real, z.imag
    den = x * x + y * y + (t + 1.0) ** 2
    return np.array([2.0 * x / den, 2.0 * y / den, -1.0 + 2.0 * (t + 1.0) / den])


def _disk_plane_samples(disk: RoundDisk, n_bound: int, n_grid: int):
    """Sample points (z, 0) of the designated planar region."""
    pts = list(disk.boundary_points(n_bound))
    if disk.is_circle:
        radii = disk.radius * np.sqrt(np.linspace(0.04, 0.96, n_grid))
        angs = np.linspace(0.0, 2.0 * math.pi, 2 * n_grid, endpoint=False)
        inner = [disk.center + float(r) * cmath.exp(1j * float(a))
                 for r in radii for a in angs]
        if disk.inside:
            pts.extend(inner)
        else:
            # invert the interior grid through the circle to cover the outside
            for w in inner:
                d = w - disk.center
                if abs(d) > 1e-12 * disk.radius:
                    pts.append(disk.center + disk.radius ** 2 / d.conjugate())
            pts.append(INFINITY)
    else:
        normal = 1j * disk.direction if disk.inside else -1j * disk.direction
        ss = np.tan(np.linspace(-math.pi / 2, math.pi / 2, n_grid + 2)[1:-1])
        us = np.tan(np.linspace(0.0, math.pi / 2, n_grid + 1)[:-1])
        for s in ss:
            along = disk.base + float(s) * disk.direction
            pts.extend(along + float(u) * normal for u in us)
        pts.append(INFINITY)
    return pts


def _halfspace_dome_samples(disk: RoundDisk, n_grid: int):
    """Sample the geodesic plane over the disk boundary (the dome)."""
    out = []
    if disk.is_circle:
        radii = disk.radius * np.sqrt(np.linspace(0.02, 0.995, n_grid))
        angs = np.linspace(0.0, 2.0 * math.pi, 2 * n_grid, endpoint=False)
        for r in radii:
            h = math.sqrt(max(disk.radius ** 2 - float(r) ** 2, 0.0))
            for a in angs:
                z = disk.center + float(r) * cmath.exp(1j * float(a))
                out.append((z, h))
    else:
        ss = np.tan(np.linspace(-math.pi / 2, math.pi / 2, 2 * n_grid + 2)[1:-1])
        hs = np.tan(np.linspace(0.0, math.pi / 2, n_grid + 1)[1:])
        for s in ss:
            z = disk.base + float(s) * disk.direction
            for h in hs:
                out.append((z, float(h)))
    return out


RegionLike = Union[RoundDisk, HalfSpace, complex, _Infinity]


def _region_ball_samples(region: RegionLike, n_bound: int, n_grid: int) -> np.ndarray:
    if isinstance(region, HalfSpace):
        disk = region.disk
        pts = [ball_point(z) for z in _disk_plane_samples(disk, n_bound, n_grid)]
        pts.extend(ball_point(z, t) for z, t in _halfspace_dome_samples(disk, n_grid))
        return np.array(pts)
    if isinstance(region, RoundDisk):
        return np.array([ball_point(z)
                         for z in _disk_plane_samples(region, n_bound, n_grid)])
    return ball_point(region).reshape(1, 3)


def _disks_closures_intersect(a: RoundDisk, b: RoundDisk) -> bool:
    """Exact test on circle/line data for the designated closed regions."""
    if a.is_circle and b.is_circle:
        dist = abs(a.center - b.center)
        if a.inside and b.inside:
            return dist <= a.radius + b.radius
        if a.inside and not b.inside:
            return dist + a.radius >= b.radius
        if not a.inside and b.inside:
            return dist + b.radius >= a.radius
        return True  # two unbounded closures always share infinity
    if not a.is_circle and not b.is_circle:
        return True  # half-plane closures share infinity
    line, disk = (a, b) if not a.is_circle else (b, a)
    if not disk.is_circle:  # pragma: no cover - handled above
        return True
    if not disk.inside:
        return True  # unbounded disk closure meets any half-plane closure
    cross = ((disk.center - line.base) / line.direction).imag
    signed = -cross if line.inside else cross
    # signed < 0: center on the designated side
    return signed <= disk.radius


def _region_disk(region: RegionLike):
    if isinstance(region, HalfSpace):
        return region.disk
    if isinstance(region, RoundDisk):
        return region
    return None


def euclidean_set_distance(A: Iterable[RegionLike], B: Iterable[RegionLike],
                           n_bound: int | None = None,
                           n_grid: int | None = None) -> float:
    """Euclidean distance between closed regions, in the closed ball model.

    Inputs are finite unions of round disks, half-spaces, and boundary
    points.  Intersections are detected exactly from the disk data; the
    positive distances are estimated by sampling the regions at the
    configured resolution.
    """
    A = list(A)
    B = list(B)
    if not A or not B:
        raise EmptySet("set distance needs nonempty collections")
    n_bound = n_bound or LIMITS.distance_boundary_samples
    n_grid = n_grid or LIMITS.distance_grid

    for ra in A:
        for rb in B:
            da, db = _region_disk(ra), _region_disk(rb)
            if da is not None and db is not None:
                if _disks_closures_intersect(da, db):
                    return 0.0
            elif da is None and db is None:
                if (is_infinity(ra) and is_infinity(rb)) or \
                        (not is_infinity(ra) and not is_infinity(rb)
                         and ra == rb):
                    return 0.0
            else:
                disk, pt = (da, rb) if da is not None else (db, ra)
                if disk.contains(pt):
                    return 0.0

    pa = np.vstack([_region_ball_samples(r, n_bound, n_grid) for r in A])
    pb = np.vstack([_region_ball_samples(r, n_bound, n_grid) for r in B])
    tree = cKDTree(pb)
    dmin, _ = tree.query(pa, k=1)
    return float(dmin.min())
