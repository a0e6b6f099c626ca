"""Klein combination with verified hypotheses, and pull-apart sweeps.

The Klein check uses the sufficient disk form used throughout the source
construction: with each fundamental polyhedron presented as the complement
of half-spaces over round disks, ``int(F0) ∪ int(F1) = H^3`` is certified
when every complement disk of one datum has closure disjoint from every
complement disk of the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import moebius as mo
from .config import TOL
from .errors import (
    DisksNotInDomain,
    KleinHypothesisFails,
    NonLoxodromic,
    NoSeparatingDisks,
    PoleInsideRegion,
    ZeroDistance,
)
from .groups import GroupSpec, PingPong, isometric_disk


@dataclass(frozen=True)
class PolyhedronData:
    """Fundamental polyhedron: H^3 minus the half-spaces over these disks."""

    complement_disks: tuple

    def __post_init__(self):
        disks = self.complement_disks
        for i in range(len(disks)):
            for j in range(i + 1, len(disks)):
                if mo._disks_closures_intersect(disks[i], disks[j]):
                    raise ValueError(
                        f"complement disks {i} and {j} have intersecting closures")

    def halfspaces(self):
        return [mo.HalfSpace(d) for d in self.complement_disks]


def polyhedron_of(group: GroupSpec) -> PolyhedronData:
    """Polyhedron carried by a group: recorded disks, else ping-pong disks."""
    recorded = group.meta.get("polyhedron")
    if recorded:
        from .groups import _disk_from_dict
        return PolyhedronData(tuple(_disk_from_dict(d) for d in recorded))
    disks = group.all_disks()
    if not disks:
        raise NoSeparatingDisks("group carries no fundamental disk data")
    return PolyhedronData(tuple(disks))


@dataclass(frozen=True)
class PullApartTrace:
    k: int
    ratio: float
    set_distance: float
    sup_derivative: float
    combined: GroupSpec

    def __post_init__(self):
        if not (self.set_distance > 0):
            raise ValueError("pull-apart trace needs positive set distance")
        if not math.isclose(self.ratio, self.sup_derivative / self.set_distance,
                            rel_tol=1e-12):
            raise ValueError("ratio must equal sup_derivative / set_distance")


def verify_klein(f0: PolyhedronData, f1: PolyhedronData) -> bool:
    """True iff F1^c ⊂ int(F0) and F0^c ⊂ int(F1) in the disk form."""
    for d0 in f0.complement_disks:
        for d1 in f1.complement_disks:
            if mo._disks_closures_intersect(d0, d1):
                return False
    return True


def _relabel(label: str, taken: set) -> str:
    if label not in taken:
        return label
    i = 1
    while f"{label}.{i}" in taken:
        i += 1
    return f"{label}.{i}"


def combine(g0: GroupSpec, f0: PolyhedronData,
            g1: GroupSpec, f1: PolyhedronData) -> GroupSpec:
    """Klein combination: generator union with the polyhedron intersection."""
    if not g1.generators:
        return g0
    if not g0.generators:
        return g1
    if not verify_klein(f0, f1):
        raise KleinHypothesisFails("int(F0) ∪ int(F1) = H^3 not certified")
    taken = set(g0.labels())
    gens = list(g0.generators)
    pps = list(g0.pingpong)
    parabolic = set(g0.parabolic_labels)
    for lab, gen in g1.generators:
        new = _relabel(lab, taken)
        taken.add(new)
        gens.append((new, gen))
        pp = g1.pingpong_for(lab)
        if pp is not None:
            pps.append(PingPong(new, pp.source, pp.target))
        if lab in g1.parabolic_labels:
            parabolic.add(new)
    from .groups import _disk_to_dict
    meta = {"polyhedron": [_disk_to_dict(d) for d in
                           f0.complement_disks + f1.complement_disks],
            "free_product": True}
    return GroupSpec(tuple(gens), tuple(pps), frozenset(parabolic), meta)


# ---------------------------------------------------------------------------
# the Patterson ratio
# ---------------------------------------------------------------------------

def _sup_derivative_on_disk(h: mo.MoebiusMap, disk: mo.RoundDisk) -> float:
    """sup of the conformal derivative of h over the closed half-space on disk.

    The extension's derivative decreases with height, and |cz+d| has no
    interior minimum on the pole-free closed disk, so the supremum sits on
    the boundary circle; sampling is refined there until stable.
    """
    pl = mo.pole(h)
    if not mo.is_infinity(pl) and disk.contains(pl):
        raise PoleInsideRegion(f"pole {pl} lies in the closed region")
    if abs(h.c) == 0:
        return abs(h.a) ** 2  # affine: constant derivative norm
    best_exact = 0.0
    if disk.is_circle and not mo.is_infinity(pl):
        # boundary point nearest the pole realizes the supremum
        offset = pl - disk.center
        if abs(offset) > 0:
            z_star = disk.center + disk.radius * offset / abs(offset)
            best_exact = mo.derivative_norm(h, z_star)
    n = 64
    prev = None
    while True:
        vals = []
        for z in disk.boundary_points(n):
            try:
                vals.append(mo.derivative_norm(h, z))
            except mo.PoleAt:  # pragma: no cover - pole excluded above
                continue
        cur = max(max(vals), best_exact)
        if prev is not None and abs(cur - prev) <= TOL.sup_refine * cur:
            return cur
        prev = cur
        n *= 2
        if n > 1 << 16:
            return cur


def patterson_ratio(f0: PolyhedronData, f1: PolyhedronData, h: mo.MoebiusMap):
    """(sup |h'| over F1^c, ball-model d(F0^c, h F1^c), their ratio)."""
    sup_derivative = max(_sup_derivative_on_disk(h, d)
                         for d in f1.complement_disks)
    image_disks = [mo.map_disk(h, d) for d in f1.complement_disks]
    set_distance = mo.euclidean_set_distance(
        f0.halfspaces(), [mo.HalfSpace(d) for d in image_disks])
    if set_distance == 0:
        raise ZeroDistance("F0^c touches h(F1^c)")
    return sup_derivative, set_distance, sup_derivative / set_distance


# ---------------------------------------------------------------------------
# pull-apart constructions
# ---------------------------------------------------------------------------

def _free_disk_around(z: complex, obstacles) -> mo.RoundDisk:
    """Largest comfortable round disk about z avoiding the obstacle disks."""
    gap = math.inf
    for d in obstacles:
        if d.is_circle:
            if d.inside:
                gap = min(gap, abs(z - d.center) - d.radius)
            else:
                gap = min(gap, d.radius - abs(z - d.center))
        else:
            gap = min(gap, abs(((z - d.base) / d.direction).imag))
    if not (gap > 0):
        raise NoSeparatingDisks(f"{z} is not interior to the free region")
    if math.isinf(gap):
        gap = 1.0
    return mo.RoundDisk.circle(z, 0.5 * gap)


def _disk_strictly_inside(inner: mo.RoundDisk, outer: mo.RoundDisk) -> bool:
    if not (inner.is_circle and outer.is_circle):
        return False
    return abs(inner.center - outer.center) + inner.radius < outer.radius


def pull_apart_amalgam(g0: GroupSpec, g1: GroupSpec,
                       z0: complex, z1: complex, k: int) -> PullApartTrace:
    """Combine g0 with g1 conjugated by the k-th power of a separating
    loxodromic attracting at z0 and repelling at z1."""
    if k < 1:
        raise ValueError("k must be at least 1")
    f0 = polyhedron_of(g0)
    f1 = polyhedron_of(g1)
    all_disks = list(f0.complement_disks) + list(f1.complement_disks)
    d0 = _free_disk_around(complex(z0), all_disks)
    _free_disk_around(complex(z1), all_disks)  # z1 must also be free

    gamma = None
    length = 0.5
    for _ in range(24):
        cand = mo.loxodromic_with_axis(z0, z1, length)
        if _disk_strictly_inside(mo.map_disk(cand, d0), d0):
            gamma = cand
            break
        length *= 2.0
    if gamma is None:
        raise NoSeparatingDisks("no power-of-two length certifies the pull")

    h = mo.identity()
    for _ in range(k):
        h = mo.compose(h, gamma)
    sup_derivative, set_distance, ratio = patterson_ratio(f0, f1, h)

    conj_gens = tuple(
        (lab, mo.compose(h, mo.compose(g, h.inverse())))
        for lab, g in g1.generators)
    conj_pps = tuple(
        PingPong(pp.label, mo.map_disk(h, pp.source), mo.map_disk(h, pp.target))
        for pp in g1.pingpong)
    g1_conj = GroupSpec(conj_gens, conj_pps, g1.parabolic_labels, dict(g1.meta))
    f1_conj = PolyhedronData(tuple(mo.map_disk(h, d)
                                   for d in f1.complement_disks))
    if not verify_klein(f0, f1_conj):
        raise KleinHypothesisFails(f"k={k} does not separate the polyhedra")
    combined = combine(g0, f0, g1_conj, f1_conj)
    return PullApartTrace(k, ratio, set_distance, sup_derivative, combined)


def pull_apart_hnn(g0: GroupSpec, gamma: mo.MoebiusMap, k: int) -> PullApartTrace:
    """Adjoin gamma^k to g0; fundamental polyhedron F0 ∩ F_k with
    F_k^c = H0 ∪ gamma^(k-1)(H1) over gamma's paired disks."""
    if k < 1:
        raise ValueError("k must be at least 1 (k=0 adds the identity)")
    if mo.classify(gamma) != mo.LOXODROMIC:
        raise NonLoxodromic("the HNN element must be loxodromic")
    f0 = polyhedron_of(g0)
    d0 = isometric_disk(gamma)
    d1 = isometric_disk(gamma.inverse())
    for d in (d0, d1):
        for existing in f0.complement_disks:
            if mo._disks_closures_intersect(d, existing):
                raise DisksNotInDomain(
                    "paired disks meet the fundamental data of g0")
    if mo._disks_closures_intersect(d0, d1):
        raise DisksNotInDomain("the paired disks themselves must be disjoint")

    gk_minus = mo.identity()
    for _ in range(k - 1):
        gk_minus = mo.compose(gk_minus, gamma)
    fk = PolyhedronData((d0, mo.map_disk(gk_minus, d1)))
    if not verify_klein(f0, fk):
        raise KleinHypothesisFails(f"k={k} does not separate the polyhedra")

    gk = mo.compose(gk_minus, gamma)
    label = _relabel("t", set(g0.labels()))
    adjoined = GroupSpec(((label, gk),),
                         (PingPong(label, d0, mo.map_disk(gk_minus, d1)),),
                         frozenset())
    combined = combine(g0, f0, adjoined, fk)

    set_distance = mo.euclidean_set_distance(f0.halfspaces(), fk.halfspaces())
    if set_distance == 0:
        raise ZeroDistance("F0^c touches F_k^c")
    # the hypothesis quantity here is the conjugation power series at s=1
    w = mo.UpperHalfSpacePoint(0, 1.0)
    series = power_series_sum(gamma, w, 1.0, k)
    return PullApartTrace(k, series / set_distance, set_distance, series,
                          combined)


def power_series_sum(gamma: mo.MoebiusMap, w: mo.UpperHalfSpacePoint,
                     s: float, k: int) -> float:
    """Sum of |((gamma^k)^j)'(w)|^s over j != 0.

    Ball-model derivative norms of loxodromic powers decay like
    exp(-|j| k l(gamma)); the sum is evaluated exactly from the
    diagonalized form and truncated at relative 1e-15.
    """
    if mo.classify(gamma) != mo.LOXODROMIC:
        raise NonLoxodromic("power series defined for loxodromic elements")
    if not (s > 0):
        raise ValueError("s must be positive")
    if k < 1:
        raise ValueError("k must be at least 1")
    fps = mo.fixed_points(gamma)
    for p in fps:
        if not mo.is_infinity(p) and abs(p - w.z) < 1e-12 and w.t < 1e-12:
            raise ValueError("base point must avoid the axis endpoints")
    ell = mo.translation_length(gamma)
    q = math.exp(-s * k * ell)
    total = 0.0
    term = q
    j = 1
    while True:
        total += 2.0 * term  # j and -j contribute equally
        term *= q
        j += 1
        if term <= TOL.series_tail * max(total, 1e-300) or j > 10_000_000:
            break
    return total
