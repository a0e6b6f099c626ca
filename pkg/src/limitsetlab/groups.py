"""Constructors for the Kleinian groups manipulated by the lab.

Each constructor packages its generators with fundamental-domain disk
data where ping-pong certifies freeness: a ``PingPong`` record means the
generator maps the exterior of ``source`` onto the interior of ``target``
(interior/exterior in the sense of the disks' orientation flags).
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

from . import moebius as mo
from .config import TOL
from .errors import EllipticGenerator, OverlappingDisks


@dataclass(frozen=True)
class PingPong:
    label: str
    source: mo.RoundDisk
    target: mo.RoundDisk


@dataclass(frozen=True)
class SurfaceGroupParams:
    boundary_length: float

    def __post_init__(self):
        if not (self.boundary_length > 0):
            raise ValueError("boundary length must be positive")


@dataclass(frozen=True)
class GroupSpec:
    """Finitely generated group: labeled generators plus optional disk data."""

    generators: tuple
    pingpong: tuple = ()
    parabolic_labels: frozenset = frozenset()
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        labels = [lab for lab, _ in self.generators]
        if len(set(labels)) != len(labels):
            raise ValueError("generator labels must be unique")
        if not self.parabolic_labels <= set(labels):
            raise ValueError("parabolic labels must name generators")
        for pp in self.pingpong:
            g = self.generator(pp.label)
            image = mo.map_disk(g, pp.source.complement())
            if _disk_mismatch(image, pp.target) > TOL.geometry:
                raise ValueError(
                    f"generator {pp.label!r} does not realize its disk pairing")

    # -- access ----------------------------------------------------------

    def labels(self):
        return [lab for lab, _ in self.generators]

    def generator(self, label: str) -> mo.MoebiusMap:
        for lab, g in self.generators:
            if lab == label:
                return g
        raise KeyError(label)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def pingpong_for(self, label: str):
        for pp in self.pingpong:
            if pp.label == label:
                return pp
        return None

    def all_disks(self):
        """Every ping-pong disk, sources then targets, in generator order."""
        out = []
        for pp in self.pingpong:
            out.append(pp.source)
            out.append(pp.target)
        return out

    # -- serialization -----------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(group_to_dict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "GroupSpec":
        return group_from_dict(json.loads(text))


def _disk_mismatch(a: mo.RoundDisk, b: mo.RoundDisk) -> float:
    """Geometric gap between two oriented disks (inf if types differ)."""
    if a.is_circle != b.is_circle:
        return math.inf
    if a.is_circle:
        gap = abs(a.center - b.center) + abs(a.radius - b.radius)
        gap /= max(1.0, b.radius)
    else:
        cross = abs(((a.base - b.base) / b.direction).imag)
        align = min(abs(a.direction - b.direction), abs(a.direction + b.direction))
        gap = cross + align
    if a.inside != b.inside:
        same_region = (not a.is_circle) and abs(a.direction + b.direction) < 1e-9
        if not same_region:
            return math.inf
    return gap


def _complex_pair(z: complex):
    # +0.0 canonicalizes negative zeros so round-trips are byte-stable
    return [z.real + 0.0, z.imag + 0.0]


def _disk_to_dict(d: mo.RoundDisk) -> dict:
    if d.is_circle:
        return {"type": "circle", "center": _complex_pair(d.center),
                "radius": d.radius, "inside": d.inside}
    return {"type": "line", "base": _complex_pair(d.base),
            "direction": _complex_pair(d.direction), "inside": d.inside}


def _disk_from_dict(data: dict) -> mo.RoundDisk:
    if data["type"] == "circle":
        return mo.RoundDisk.circle(complex(*data["center"]), data["radius"],
                                   data["inside"])
    return mo.RoundDisk.halfplane(complex(*data["base"]),
                                  complex(*data["direction"]), data["inside"])


def group_to_dict(g: GroupSpec) -> dict:
    return {
        "generators": [
            {"label": lab, "a": _complex_pair(m.a), "b": _complex_pair(m.b),
             "c": _complex_pair(m.c), "d": _complex_pair(m.d)}
            for lab, m in g.generators
        ],
        "pingpong": [
            {"label": pp.label, "source": _disk_to_dict(pp.source),
             "target": _disk_to_dict(pp.target)}
            for pp in g.pingpong
        ],
        "parabolic": sorted(g.parabolic_labels),
        "meta": g.meta,
    }


def group_from_dict(data: dict) -> GroupSpec:
    gens = tuple(
        (entry["label"], mo.MoebiusMap(complex(*entry["a"]), complex(*entry["b"]),
                                       complex(*entry["c"]), complex(*entry["d"])))
        for entry in data["generators"]
    )
    pps = tuple(
        PingPong(entry["label"], _disk_from_dict(entry["source"]),
                 _disk_from_dict(entry["target"]))
        for entry in data.get("pingpong", [])
    )
    return GroupSpec(gens, pps, frozenset(data.get("parabolic", [])),
                     dict(data.get("meta", {})))


# ---------------------------------------------------------------------------
# cyclic groups
# ---------------------------------------------------------------------------

def isometric_disk(g: mo.MoebiusMap) -> mo.RoundDisk:
    """Disk bounded by the isometric circle |cz+d| = 1 (requires c != 0)."""
    if abs(g.c) == 0:
        raise ValueError("isometric circle undefined: the map fixes infinity")
    return mo.RoundDisk.circle(-g.d / g.c, 1.0 / abs(g.c))


def cyclic_group(gamma: mo.MoebiusMap, label: str = "g") -> GroupSpec:
    """Group generated by one loxodromic or parabolic element.

    For a loxodromic not fixing infinity the ping-pong disks are the
    isometric disks of gamma and of its inverse, recorded only when their
    closures are disjoint.
    """
    kind = mo.classify(gamma)
    if kind in (mo.ELLIPTIC, mo.IDENTITY_CLASS):
        raise EllipticGenerator(f"cyclic generator is {kind}")
    if kind == mo.PARABOLIC:
        return GroupSpec(((label, gamma),), (), frozenset([label]))
    pingpong = ()
    if abs(gamma.c) > 0:
        src = isometric_disk(gamma)
        tgt = isometric_disk(gamma.inverse())
        if abs(src.center - tgt.center) > src.radius + tgt.radius:
            pingpong = (PingPong(label, src, tgt),)
    return GroupSpec(((label, gamma),), pingpong, frozenset())


# ---------------------------------------------------------------------------
# Schottky groups
# ---------------------------------------------------------------------------

def _to_01inf(z1: complex, z2: complex, z3: complex) -> mo.MoebiusMap:
    """Moebius map sending (z1, z2, z3) to (0, 1, infinity)."""
    return mo.MoebiusMap(z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1))


def _through_points(src, tgt) -> mo.MoebiusMap:
    return mo.compose(_to_01inf(*tgt).inverse(), _to_01inf(*src))


def pairing_map(d_src: mo.RoundDisk, d_tgt: mo.RoundDisk) -> mo.MoebiusMap:
    """Map taking the exterior of d_src onto the interior of d_tgt.

    The choice is fixed by matching three marked boundary points, with the
    target traversal reversed when needed to swap sides.
    """
    src_pts = mo.circle_points(d_src)
    tgt_pts = mo.circle_points(d_tgt)
    for ordering in (tgt_pts, [tgt_pts[0], tgt_pts[2], tgt_pts[1]]):
        g = _through_points(src_pts, ordering)
        image = mo.map_disk(g, d_src.complement())
        if _disk_mismatch(image, d_tgt) <= TOL.geometry:
            return g
    raise ValueError("no orientation of the marked points realizes the pairing")


def schottky_group(pairs, labels=None) -> GroupSpec:
    """Free group certified by disjoint disk pairs (classical Schottky)."""
    pairs = list(pairs)
    if labels is None:
        labels = [chr(ord("a") + i) for i in range(len(pairs))]
    disks = []
    for d_src, d_tgt in pairs:
        disks.extend([d_src, d_tgt])
    for i in range(len(disks)):
        for j in range(i + 1, len(disks)):
            if mo._disks_closures_intersect(disks[i], disks[j]):
                raise OverlappingDisks(
                    f"disk closures {i} and {j} are not disjoint")
    gens = []
    pps = []
    for lab, (d_src, d_tgt) in zip(labels, pairs):
        g = pairing_map(d_src, d_tgt)
        gens.append((lab, g))
        pps.append(PingPong(lab, d_src, d_tgt))
    return GroupSpec(tuple(gens), tuple(pps), frozenset())


# ---------------------------------------------------------------------------
# Fuchsian one-holed torus pages
# ---------------------------------------------------------------------------

def _commutator(a: mo.MoebiusMap, b: mo.MoebiusMap) -> mo.MoebiusMap:
    return mo.compose(mo.compose(a, b), mo.compose(a.inverse(), b.inverse()))


def _symmetric_pair(t: float):
    """Equal-trace hyperbolic pair with perpendicular axes through i."""
    a = mo.MoebiusMap(math.exp(t / 2), 0, 0, math.exp(-t / 2))
    b = mo.MoebiusMap(math.cosh(t / 2), math.sinh(t / 2),
                      math.sinh(t / 2), math.cosh(t / 2))
    return a, b


def _comm_trace_raw(t: float) -> float:
    """SL(2,R) commutator trace of the symmetric pair (canonical lift)."""
    ch, sh = math.cosh(t / 2), math.sinh(t / 2)
    ep, em = math.exp(t / 2), math.exp(-t / 2)
    a = [[ep, 0.0], [0.0, em]]
    b = [[ch, sh], [sh, ch]]
    ai = [[em, 0.0], [0.0, ep]]
    bi = [[ch, -sh], [-sh, ch]]

    def mul(x, y):
        return [
            [x[0][0] * y[0][0] + x[0][1] * y[1][0],
             x[0][0] * y[0][1] + x[0][1] * y[1][1]],
            [x[1][0] * y[0][0] + x[1][1] * y[1][0],
             x[1][0] * y[0][1] + x[1][1] * y[1][1]],
        ]

    k = mul(mul(a, b), mul(ai, bi))
    return k[0][0] + k[1][1]


def fuchsian_one_holed_torus(params: SurfaceGroupParams) -> GroupSpec:
    """One-holed torus group with boundary geodesic of the given length.

    Real generators A, B preserving the upper half-plane; the commutator
    [A, B] is the boundary element, conjugated so its axis is the vertical
    line over 0 with all other boundary lifts over the positive reals.
    """
    ell = params.boundary_length
    target = -2.0 * math.cosh(ell / 2)

    # bisection: the SL(2) commutator trace decreases from 2 toward -infinity
    lo, hi = 1e-6, 1.0
    while _comm_trace_raw(hi) > target:
        hi *= 2.0
        if hi > 64:
            raise ValueError("commutator trace never reaches the target")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _comm_trace_raw(mid) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15 * hi:
            break
    t = 0.5 * (lo + hi)

    a, b = _symmetric_pair(t)
    delta = _commutator(a, b)
    fps = mo.fixed_points(delta)
    u, v = fps[0], fps[1]
    conj = mo.MoebiusMap(1, -u.real, 1, -v.real)
    a = mo.compose(conj, mo.compose(a, conj.inverse()))
    b = mo.compose(conj, mo.compose(b, conj.inverse()))
    delta = _commutator(a, b)

    # put the convex-core side on the positive reals;
    # z -> -1/z preserves the half-plane and swaps the sides of the axis
    other_axis = mo.compose(a, mo.compose(delta, a.inverse()))
    probe = mo.fixed_points(other_axis)[0]
    if probe.real < 0:
        flip = mo.MoebiusMap(0, -1, 1, 0)
        a = mo.compose(flip, mo.compose(a, flip.inverse()))
        b = mo.compose(flip, mo.compose(b, flip.inverse()))
        delta = _commutator(a, b)

    measured = mo.translation_length(delta)
    if abs(measured - ell) > TOL.page_boundary:
        raise ValueError(
            f"boundary length verification failed: {measured} vs {ell}")
    return GroupSpec((("a", a), ("b", b)), (), frozenset(),
                     meta={"page": {"ell": ell, "trace_param": t}})


# ---------------------------------------------------------------------------
# rank-2 parabolic (thickened torus cusp) groups
# ---------------------------------------------------------------------------

def rank2_parabolic(mu0: float, d: float, m: int) -> GroupSpec:
    """Two commuting parabolics fixing infinity: z+mu0 and z+i*m*d."""
    if not (mu0 > 0 and d > 0 and m >= 1):
        raise ValueError("need mu0 > 0, d > 0, m >= 1")
    u = mo.translation(mu0)
    v = mo.translation(1j * m * d)
    return GroupSpec((("u", u), ("v", v)), (), frozenset(["u", "v"]),
                     meta={"lattice": {"mu0": mu0, "d": d, "m": m}})
