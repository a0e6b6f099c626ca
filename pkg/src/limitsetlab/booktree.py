"""Books of I-bundles over solid-torus bindings: group construction, the
circle tree of flats, separation estimates, and the binding-length sweep.

The book group is assembled from one-holed-torus pages rotated around the
common binding axis (the vertical line over 0), ``2*pi*j/(m*q)`` apart,
plus a binding screw motion when q > 1.  The circle tree records, per
flat, the ideal arc of the half-plane it hangs from; children of a node
are images of the page's core-side arc under coset representatives of the
boundary stabilizer composed with the dihedral rotations.
"""

from __future__ import annotations

import cmath
import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import moebius as mo
from .config import LIMITS, TOL
from .errors import (
    AngleOutOfRange,
    AngleTooSharp,
    BadChainLength,
    NodeCapExceeded,
    ParamsOutOfRange,
    SegmentTooShort,
    TrivialTree,
)
from .groups import GroupSpec, SurfaceGroupParams, _commutator, fuchsian_one_holed_torus


# ---------------------------------------------------------------------------
# broken geodesics
# ---------------------------------------------------------------------------

def broken_geodesic_K(theta: float) -> float:
    """Chain constant K with cosh^2(K/2) = 2/(1 - cos theta), theta in (0, pi]."""
    if not (0.0 < theta <= math.pi):
        raise AngleOutOfRange(f"theta {theta} outside (0, pi]")
    val = 2.0 / (1.0 - math.cos(theta))
    return 2.0 * math.acosh(math.sqrt(val)) if val > 1.0 else 0.0


def dist_lower_bound(n: int, k: float, K: float) -> float:
    """Chain-distance bound (n-2)(k-K) + k - K/2 along n successively
    adjacent flats."""
    if n < 2:
        raise BadChainLength("need a chain of at least 2 flats")
    if not (k > K >= 0):
        raise BadChainLength("need segment length k > K >= 0")
    return (n - 2) * (k - K) + k - K / 2.0


def _geodesic_endpoints(x: mo.UpperHalfSpacePoint, y: mo.UpperHalfSpacePoint):
    """Ideal endpoints of the geodesic through two interior points."""
    dz = y.z - x.z
    if abs(dz) < 1e-13 * max(x.t, y.t):
        return x.z, mo.INFINITY
    tau = (abs(dz) ** 2 + y.t ** 2 - x.t ** 2) / (2.0 * abs(dz) ** 2)
    center = x.z + tau * dz
    radius = math.sqrt(abs(x.z - center) ** 2 + x.t ** 2)
    u = center - radius * dz / abs(dz)
    v = center + radius * dz / abs(dz)
    return u, v


def bisecting_plane(x: mo.UpperHalfSpacePoint,
                    y: mo.UpperHalfSpacePoint) -> mo.RoundDisk:
    """Boundary circle of the plane orthogonal to segment xy at its midpoint."""
    u, v = _geodesic_endpoints(x, y)
    t = mo._to_zero_infinity(u, v)
    h1 = mo.apply_h3(t, x).t
    h2 = mo.apply_h3(t, y).t
    mid = math.sqrt(h1 * h2)
    return mo.map_disk(t.inverse(), mo.RoundDisk.circle(0.0, mid))


def _plane_inversive_product(a: mo.RoundDisk, b: mo.RoundDisk) -> float:
    """|<a, b>| for the hyperbolic planes over two generalized circles:
    < 1 crossing, = 1 tangent, > 1 disjoint at distance arccosh of it."""

    def line_normal_offset(d: mo.RoundDisk):
        n = 1j * d.direction
        return n, (d.base.real * n.real + d.base.imag * n.imag)

    if a.is_circle and b.is_circle:
        num = a.radius ** 2 + b.radius ** 2 - abs(a.center - b.center) ** 2
        return abs(num / (2.0 * a.radius * b.radius))
    if a.is_circle != b.is_circle:
        line, circ = (a, b) if not a.is_circle else (b, a)
        n, off = line_normal_offset(line)
        signed = circ.center.real * n.real + circ.center.imag * n.imag - off
        return abs(signed) / circ.radius
    na, oa = line_normal_offset(a)
    nb, ob = line_normal_offset(b)
    dot = na.real * nb.real + na.imag * nb.imag
    if abs(abs(dot) - 1.0) > 1e-12:
        return abs(dot)  # crossing lines
    return math.inf if abs(oa - ob) > 1e-12 else 1.0


def _plane_side(plane: mo.RoundDisk, x: mo.UpperHalfSpacePoint) -> float:
    """Signed side of an interior point relative to the plane over the circle."""
    if plane.is_circle:
        return abs(x.z - plane.center) ** 2 + x.t ** 2 - plane.radius ** 2
    n = 1j * plane.direction
    return ((x.z - plane.base).real * n.real + (x.z - plane.base).imag * n.imag)


def _chain_angles(points):
    """Interior bend angles via the hyperbolic law of cosines."""
    out = []
    for i in range(1, len(points) - 1):
        b = mo.hyp_distance(points[i - 1], points[i])
        c = mo.hyp_distance(points[i], points[i + 1])
        a = mo.hyp_distance(points[i - 1], points[i + 1])
        cosang = (math.cosh(b) * math.cosh(c) - math.cosh(a)) / (
            math.sinh(b) * math.sinh(c))
        out.append(math.acos(max(-1.0, min(1.0, cosang))))
    return out


def verify_separation(points, theta_min: float, slack: float = 1e-9) -> bool:
    """Check the broken-geodesic conclusions on a chain of H^3 points:
    bisecting planes pairwise disjoint, linearly ordered, and consecutive
    plane distances at least (k_i + k_{i+1})/2 - K(theta_min) - slack."""
    if len(points) < 3:
        raise BadChainLength("need at least two segments")
    K = broken_geodesic_K(theta_min)
    lengths = [mo.hyp_distance(points[i], points[i + 1])
               for i in range(len(points) - 1)]
    for i, k in enumerate(lengths):
        if k <= K:
            raise SegmentTooShort(f"segment {i} has length {k} <= K = {K}")
    for i, ang in enumerate(_chain_angles(points)):
        if ang < theta_min - 1e-6:
            raise AngleTooSharp(f"bend {i} measures {ang} < {theta_min}")

    planes = [bisecting_plane(points[i], points[i + 1])
              for i in range(len(points) - 1)]
    mids = []
    for i in range(len(planes)):
        u, v = points[i], points[i + 1]
        t = mo._to_zero_infinity(*_geodesic_endpoints(u, v))
        h_mid = math.sqrt(mo.apply_h3(t, u).t * mo.apply_h3(t, v).t)
        mids.append(mo.apply_h3(t.inverse(), mo.UpperHalfSpacePoint(0.0, h_mid)))

    n = len(planes)
    for i in range(n):
        for j in range(i + 1, n):
            if _plane_inversive_product(planes[i], planes[j]) <= 1.0 - 1e-12:
                return False
    for j in range(n):
        before = [_plane_side(planes[j], mids[i]) for i in range(j)]
        after = [_plane_side(planes[j], mids[k]) for k in range(j + 1, n)]
        if before and after:
            if max(b * a for b in before for a in after) >= 0:
                return False
        if any(b * bb <= 0 for b in before for bb in before):
            return False
        if any(a * aa <= 0 for a in after for aa in after):
            return False
    for i in range(n - 1):
        prod = _plane_inversive_product(planes[i], planes[i + 1])
        dist = math.acosh(max(prod, 1.0))
        bound = 0.5 * (lengths[i] + lengths[i + 1]) - K
        if dist < bound - slack:
            return False
    return True


def make_chain(start: mo.UpperHalfSpacePoint, lengths, angles, azimuths):
    """Broken geodesic with prescribed segment lengths, interior bend
    angles, and azimuthal twists; returns the H^3 point list."""
    if not (len(lengths) - 1 == len(angles) == len(azimuths)):
        raise ValueError("need one angle and azimuth per interior vertex")
    frame = mo.MoebiusMap(math.sqrt(start.t), start.z / math.sqrt(start.t),
                          0.0, 1.0 / math.sqrt(start.t))
    points = [start]
    for i, k in enumerate(lengths):
        step = mo.MoebiusMap(math.exp(k / 2.0), 0, 0, math.exp(-k / 2.0))
        frame = mo.compose(frame, step)
        points.append(mo.apply_h3(frame, mo.UpperHalfSpacePoint(0.0, 1.0)))
        if i < len(angles):
            phi = math.pi - angles[i]
            beta = azimuths[i]
            spin = mo.MoebiusMap(cmath.exp(1j * beta / 2), 0, 0,
                                 cmath.exp(-1j * beta / 2))
            bend = mo.MoebiusMap(math.cos(phi / 2), math.sin(phi / 2),
                                 -math.sin(phi / 2), math.cos(phi / 2))
            frame = mo.compose(frame, mo.compose(spin, bend))
    return points


# ---------------------------------------------------------------------------
# earrings
# ---------------------------------------------------------------------------

def earring_radii(r1: float, n_max: int):
    """Radii of the tangent-circle family whose inversions are equally
    spaced parallel lines: r(D_n) = r1/n exactly."""
    if not (r1 > 0):
        raise ValueError("outermost radius must be positive")
    if n_max < 1:
        raise ValueError("need n_max >= 1")
    return [r1 / n for n in range(1, n_max + 1)]


# ---------------------------------------------------------------------------
# book parameters and group
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BookParams:
    m: int
    ell: float
    p: int = 0
    q: int = 1
    depth: int = 4

    def __post_init__(self):
        if self.m < 2:
            raise ParamsOutOfRange("need at least two pages")
        if self.q < 1:
            raise ParamsOutOfRange("binding slope needs q >= 1")
        if math.gcd(abs(self.p), self.q) != 1:
            raise ParamsOutOfRange("binding slope (p, q) must be coprime")
        if not (0 < self.ell <= LIMITS.max_book_ell):
            raise ParamsOutOfRange(
                f"binding length must lie in (0, {LIMITS.max_book_ell}]")
        if self.depth < 1:
            raise ParamsOutOfRange("tree depth must be at least 1")

    @property
    def theta0(self) -> float:
        return 2.0 * math.pi / (self.m * self.q)


def _rotation_about_vertical(theta: float) -> mo.MoebiusMap:
    return mo.MoebiusMap(cmath.exp(1j * theta / 2), 0, 0,
                         cmath.exp(-1j * theta / 2))


def build_book_group(params: BookParams) -> GroupSpec:
    """Holonomy generators for the book: page groups rotated around the
    binding axis, plus the binding screw motion when q > 1."""
    page = fuchsian_one_holed_torus(SurfaceGroupParams(params.ell))
    a, b = page.generator("a"), page.generator("b")
    delta = _commutator(a, b)
    gens = []
    for j in range(params.m):
        rj = _rotation_about_vertical(2.0 * math.pi * j / (params.m * params.q))
        gens.append((f"a{j}", mo.compose(rj, mo.compose(a, rj.inverse()))))
        gens.append((f"b{j}", mo.compose(rj, mo.compose(b, rj.inverse()))))
    if params.q > 1:
        binding = mo.loxodromic_with_axis(
            0.0, mo.INFINITY, params.ell / params.q,
            2.0 * math.pi * params.p / params.q)
        # match the contraction direction of the page boundary
        if mo.is_infinity(mo.fixed_points(delta)[0]):
            binding = binding.inverse()
        gens.append(("t", binding))

    ell_measured = mo.translation_length(delta)
    if abs(ell_measured - params.ell) > TOL.page_boundary:
        raise ParamsOutOfRange("page boundary length failed verification")
    meta = {"book": {"m": params.m, "q": params.q, "p": params.p,
                     "ell": params.ell, "depth": params.depth}}
    return GroupSpec(tuple(gens), (), frozenset(), meta)


# ---------------------------------------------------------------------------
# the circle tree
# ---------------------------------------------------------------------------

@dataclass
class CircleNode:
    word: str
    r: float
    kind: str  # "root" | "type1" | "type2"
    geom: dict | None = None
    children: list = field(default_factory=list)


@dataclass
class CircleTree:
    root: CircleNode
    params: dict = field(default_factory=dict)

    def levels(self):
        out = [[self.root]]
        while True:
            nxt = [c for node in out[-1] for c in node.children]
            if not nxt:
                return out
            out.append(nxt)

    def edges(self):
        stack = [self.root]
        while stack:
            node = stack.pop()
            for child in node.children:
                yield node, child
                stack.append(child)

    @property
    def depth(self) -> int:
        return len(self.levels()) - 1

    def node_count(self) -> int:
        return sum(len(level) for level in self.levels())

    def to_json(self) -> str:
        nodes = []
        ids = {}

        def visit(node, parent_id):
            ids[id(node)] = len(nodes)
            nodes.append({"id": len(nodes), "parent": parent_id,
                          "word": node.word, "r": node.r, "kind": node.kind})
            for child in node.children:
                visit(child, ids[id(node)])

        visit(self.root, None)
        return json.dumps({"params": self.params, "nodes": nodes},
                          indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "CircleTree":
        data = json.loads(text)
        made = {}
        root = None
        for entry in data["nodes"]:
            node = CircleNode(entry["word"], entry["r"], entry["kind"])
            made[entry["id"]] = node
            if entry["parent"] is None:
                root = node
            else:
                made[entry["parent"]].children.append(node)
        if root is None:
            raise ValueError("tree JSON has no root")
        return cls(root, dict(data.get("params", {})))


def self_similar_tree(branching: int, ratio: float, depth: int,
                      r0: float = 1.0) -> CircleTree:
    """Synthetic exact tree: every node has `branching` children of radius
    exactly ratio * r(parent)."""
    root = CircleNode("C0", r0, "root")
    level = [root]
    for _ in range(depth):
        nxt = []
        for node in level:
            for i in range(branching):
                child = CircleNode(f"{node.word}.{i}", node.r * ratio, "type1")
                node.children.append(child)
                nxt.append(child)
        level = nxt
    return CircleTree(root, {"synthetic": {"b": branching, "ratio": ratio}})


def measure_rho(tree: CircleTree) -> float:
    """Largest child/parent radius ratio over all edges."""
    worst = None
    for parent, child in tree.edges():
        ratio = child.r / parent.r
        worst = ratio if worst is None else max(worst, ratio)
    if worst is None:
        raise TrivialTree("tree has no edges")
    return worst


# -- arc geometry ------------------------------------------------------------

def _arc_geom(p_start: complex, p_mid: complex, p_end: complex):
    """Arc through three points: circle data plus angular interval."""
    chord = max(abs(p_start - p_end), abs(p_start - p_mid), abs(p_mid - p_end))
    geom = mo._circle_through(p_start, p_mid, p_end)
    # near-collinear triples give unstable circumcircles; the chord is the
    # honest diameter at that point
    if geom is None or geom[1] > 1e5 * chord:
        return {"shape": "segment", "r": chord,
                "points": (p_start, p_mid, p_end)}
    center, radius = geom
    a1 = cmath.phase(p_start - center)
    am = cmath.phase(p_mid - center)
    a2 = cmath.phase(p_end - center)
    ccw_span = (a2 - a1) % (2.0 * math.pi)
    ccw_mid = (am - a1) % (2.0 * math.pi)
    if ccw_mid <= ccw_span:
        start, span = a1, ccw_span
    else:
        start, span = a2, (a1 - a2) % (2.0 * math.pi)
    r = 2.0 * radius if span >= math.pi else abs(p_start - p_end)
    return {"shape": "arc", "center": center, "radius": radius,
            "start": start, "span": span, "r": r,
            "points": (p_start, p_mid, p_end)}


def _angle_in_arc(geom, phi: float, pad: float = 0.0) -> bool:
    rel = (phi - geom["start"]) % (2.0 * math.pi)
    return -pad <= rel <= geom["span"] + pad


def arcs_disjoint(g1, g2, tol: float = 1e-9) -> bool:
    """Exact circle-intersection test for two arc/circle geometries."""
    if g1.get("shape") == "circle" or g2.get("shape") == "circle":
        circ, other = (g1, g2) if g1.get("shape") == "circle" else (g2, g1)
        if other.get("shape") == "circle":
            d = abs(circ["center"] - other["center"])
            return (d > circ["radius"] + other["radius"] + tol
                    or d < abs(circ["radius"] - other["radius"]) - tol)
        return not _arc_hits_circle(other, circ, tol)
    if g1["shape"] == "segment" or g2["shape"] == "segment":
        return _segment_far(g1, g2, tol)
    c1, r1 = g1["center"], g1["radius"]
    c2, r2 = g2["center"], g2["radius"]
    d = abs(c1 - c2)
    same_circle = d <= tol * max(r1, r2) and abs(r1 - r2) <= tol * max(r1, r2)
    if same_circle:
        # angular interval overlap on the common circle
        for phi_edge in (g2["start"], (g2["start"] + g2["span"]) % (2 * math.pi)):
            if _angle_in_arc(g1, phi_edge, pad=-1e-7):
                return False
        for phi_edge in (g1["start"], (g1["start"] + g1["span"]) % (2 * math.pi)):
            if _angle_in_arc(g2, phi_edge, pad=-1e-7):
                return False
        mid1 = g1["start"] + 0.5 * g1["span"]
        mid2 = g2["start"] + 0.5 * g2["span"]
        return not (_angle_in_arc(g2, mid1) or _angle_in_arc(g1, mid2))
    if d > r1 + r2 + tol or d < abs(r1 - r2) - tol:
        return True
    # intersection points of the two circles
    a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    h2 = r1 * r1 - a * a
    h = math.sqrt(max(h2, 0.0))
    base = c1 + a * (c2 - c1) / d
    offs = 1j * (c2 - c1) / d * h
    for p in (base + offs, base - offs):
        on1 = _angle_in_arc(g1, cmath.phase(p - c1), pad=tol / max(r1, 1e-12))
        on2 = _angle_in_arc(g2, cmath.phase(p - c2), pad=tol / max(r2, 1e-12))
        if on1 and on2:
            return False
    return True


def _arc_hits_circle(arc, circ, tol):
    if arc["shape"] == "segment":
        return False  # conservative; segments do not arise in book trees
    d = abs(arc["center"] - circ["center"])
    if d > arc["radius"] + circ["radius"] + tol:
        return False
    if d < abs(arc["radius"] - circ["radius"]) - tol:
        return False
    a = (d * d + arc["radius"] ** 2 - circ["radius"] ** 2) / (2.0 * d)
    h = math.sqrt(max(arc["radius"] ** 2 - a * a, 0.0))
    base = arc["center"] + a * (circ["center"] - arc["center"]) / d
    offs = 1j * (circ["center"] - arc["center"]) / d * h
    return any(_angle_in_arc(arc, cmath.phase(p - arc["center"]))
               for p in (base + offs, base - offs))


def _segment_far(g1, g2, tol):
    pts1 = g1["points"]
    pts2 = g2["points"]
    return min(abs(p - q) for p in pts1 for q in pts2) > tol


# -- tree generation ---------------------------------------------------------

def _axis_crossing(a: mo.MoebiusMap, b: mo.MoebiusMap) -> complex:
    """Crossing point in the upper half-plane of two real-axis geodesics."""

    def axis_data(g):
        fps = mo.fixed_points(g)
        fin = [p.real for p in fps if not mo.is_infinity(p)]
        if len(fin) == 2:
            c = 0.5 * (fin[0] + fin[1])
            return ("circle", c, abs(fin[1] - fin[0]) / 2.0)
        return ("line", fin[0], None)

    ka, ca, ra = axis_data(a)
    kb, cb, rb = axis_data(b)
    if ka == "circle" and kb == "circle":
        x = (ca * ca - cb * cb - ra * ra + rb * rb) / (2.0 * (ca - cb))
        y2 = ra * ra - (x - ca) ** 2
    elif ka == "line":
        x = ca
        y2 = rb * rb - (x - cb) ** 2
    else:
        x = cb
        y2 = ra * ra - (x - ca) ** 2
    if y2 <= 0:
        raise ValueError("axes do not cross")
    return complex(x, math.sqrt(y2))


def generate_flat_tree(group: GroupSpec, depth: int,
                       max_word_len: int = 3,
                       min_radius: float | None = None,
                       node_cap: int | None = None) -> CircleTree:
    """Circle tree of flats for a book group, root normalized to the unit
    circle around a thick-part basepoint of page 0.

    Children of a node sit at the boundary-geodesic lifts of its page
    (coset representatives up to ``max_word_len``), one per dihedral
    rotation; branches below ``min_radius`` are pruned.  When no floor is
    given one is probed from the first two levels so the dominant branch
    reaches the requested depth.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    book = group.meta.get("book")
    if not book:
        raise ParamsOutOfRange("group does not carry book construction data")
    cap = node_cap or LIMITS.node_cap
    mq = book["m"] * book["q"]
    if min_radius is None:
        probe = generate_flat_tree(group, min(2, depth), max_word_len,
                                   min_radius=0.0, node_cap=cap)
        levels = probe.levels()
        r1 = max(node.r for node in levels[1])
        if len(levels) > 2 and depth > 1:
            ratio2 = max(child.r / parent.r for parent in levels[1]
                         for child in parent.children)
            min_radius = 0.1 * r1 * ratio2 ** (depth - 1)
        else:
            min_radius = 0.1 * r1
        # below ~1e-10 the composed maps outrun double precision
        min_radius = max(min_radius, 1e-10)

    a0, b0 = group.generator("a0"), group.generator("b0")
    zstar = _axis_crossing(a0, b0)
    n2 = mo.MoebiusMap(1, -zstar, 1, -zstar.conjugate())
    n2i = n2.inverse()

    def conj(g):
        return mo.compose(n2, mo.compose(g, n2i))

    abar, bbar = conj(a0), conj(b0)
    n_zero = mo.apply(n2, 0.0)
    n_inf = mo.apply(n2, mo.INFINITY)
    core_pts = (n_zero, mo.apply(n2, 1.0), n_inf)  # core-side arc of the page
    rotations = [conj(_rotation_about_vertical(2.0 * math.pi * t / mq))
                 for t in range(1, mq)]

    # coset representatives of the boundary stabilizer: reduced words in the
    # page generators, deduplicated by the axis-endpoint pair they move
    reps = []
    seen_axes = {}
    letters = [("a", abar), ("a'", abar.inverse()),
               ("b", bbar), ("b'", bbar.inverse())]
    frontier = [("e", mo.identity(), None)]
    for _ in range(max_word_len):
        nxt = []
        for word, gmap, last in frontier:
            for sym, lmap in letters:
                if last is not None and sym == _inverse_symbol(last):
                    continue
                new = mo.compose(gmap, lmap)
                nxt.append((f"{word}.{sym}" if word != "e" else sym, new, sym))
        frontier = nxt
        for word, gmap, _ in frontier:
            u, v = mo.apply(gmap, n_zero), mo.apply(gmap, n_inf)
            key = _axis_key(u, v)
            if key not in seen_axes:
                seen_axes[key] = (word, gmap)
    root_axis_key = _axis_key(n_zero, n_inf)
    reps = sorted(((w, g) for key, (w, g) in seen_axes.items()
                   if key != root_axis_key),
                  key=lambda item: (len(item[0]), item[0]))
    id_rep = ("e", mo.identity())

    root = CircleNode("C0", 2.0, "root",
                      geom={"shape": "circle", "center": 0j, "radius": 1.0})
    count = 1
    level = [(root, mo.identity(), True)]
    for _ in range(depth):
        nxt = []
        for node, gmap, is_root in level:
            rep_list = ([id_rep] + reps) if is_root else reps
            for w_word, w_map in rep_list:
                stem = mo.compose(gmap, w_map)
                for t, q_map in enumerate(rotations, start=1):
                    child_map = mo.compose(stem, q_map)
                    pts = [mo.apply(child_map, p) for p in core_pts]
                    if any(mo.is_infinity(p) for p in pts):
                        continue
                    geom = _arc_geom(*pts)
                    if geom["r"] < min_radius:
                        continue
                    count += 1
                    if count > cap:
                        raise NodeCapExceeded(f"tree exceeded {cap} nodes")
                    word = f"{node.word}|{w_word}.q{t}"
                    child = CircleNode(word, geom["r"], "type1", geom=geom)
                    node.children.append(child)
                    nxt.append((child, child_map, False))
        level = nxt
    return CircleTree(root, {"book": dict(book), "depth": depth,
                             "max_word_len": max_word_len,
                             "min_radius": min_radius})


def _inverse_symbol(sym: str) -> str:
    return sym[:-1] if sym.endswith("'") else sym + "'"


def _axis_key(u: complex, v: complex):
    pu = (round(u.real, 9), round(u.imag, 9))
    pv = (round(v.real, 9), round(v.imag, 9))
    return (min(pu, pv), max(pu, pv))


# ---------------------------------------------------------------------------
# the binding-length sweep
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    ell: float
    m: int
    q: int
    depth: int
    rho: float
    certified: bool
    alpha: float
    box_estimate: float
    r2: float
    n_points: int
    wall_ms: float


def sweep_ell(alpha_target: float, m: int, ell_grid, depth: int,
              constants="empirical", p: int = 0, q: int = 1,
              box_depth: int | None = None,
              tree_kwargs: dict | None = None):
    """Build the book at each binding length, measure rho, run the
    covering certificate at alpha_target, and box-count the sampled limit
    set; returns rows sorted by decreasing binding length."""
    from .dimension import box_counting, certify_dimension_upper
    from .limitset import sample_limit_set

    if not (1.0 < alpha_target <= 2.0):
        from .errors import AlphaOutOfRange

        raise AlphaOutOfRange("sweep target must lie in (1, 2]")
    tree_kwargs = tree_kwargs or {}
    if box_depth is None:
        box_depth = 6 if m == 2 else 5
    rows = []
    for ell in sorted(ell_grid, reverse=True):
        t0 = time.perf_counter()
        params = BookParams(m=m, ell=ell, p=p, q=q, depth=depth)
        group = build_book_group(params)
        tree = generate_flat_tree(group, depth, **tree_kwargs)
        rho = measure_rho(tree)
        certified = False
        if rho < 0.5:
            ok, _ = certify_dimension_upper(tree, alpha_target, rho, constants)
            certified = ok
        cloud = sample_limit_set(group, box_depth)
        est = box_counting(cloud.as_array())
        wall_ms = (time.perf_counter() - t0) * 1000.0
        rows.append(SweepRow(ell=ell, m=m, q=q, depth=depth, rho=rho,
                             certified=certified, alpha=alpha_target,
                             box_estimate=est.value, r2=est.r2,
                             n_points=len(cloud), wall_ms=wall_ms))
    return rows


def largest_certified_ell(rows) -> float | None:
    certified = [row.ell for row in rows if row.certified]
    return max(certified) if certified else None


def sweep_csv(rows, header: str = "", include_timing: bool = True) -> str:
    """CSV per the sweep interface; timing column omitted in comparison
    mode so identical configurations give byte-identical output."""
    lines = []
    if header:
        lines.append(f"# {header}")
    cols = "ell,m,q,depth,rho,certified,alpha,box_estimate,r2,n_points"
    lines.append(cols + (",wall_ms" if include_timing else ""))
    for row in rows:
        body = (f"{row.ell!r},{row.m},{row.q},{row.depth},{row.rho!r},"
                f"{str(row.certified).lower()},{row.alpha!r},"
                f"{row.box_estimate!r},{row.r2!r},{row.n_points}")
        if include_timing:
            body += f",{row.wall_ms:.1f}"
        lines.append(body)
    return "\n".join(lines)
