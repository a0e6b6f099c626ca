"""Limit-set sampling: word enumeration with geometric pruning, point
clouds, and deterministic raster/vector rendering."""

from __future__ import annotations

import hashlib
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import moebius as mo
from .config import LIMITS, TOL
from .errors import EmptyCloud, ExplosionGuard
from .groups import GroupSpec

Word = tuple  # of (label, sign) letters, freely reduced


@dataclass(frozen=True)
class PointCloud:
    points: tuple
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.points)

    def as_array(self) -> np.ndarray:
        return np.array(self.points, dtype=complex)


def _letters(group: GroupSpec):
    """Signed generator list with the matching maps and pruning disks."""
    out = []
    for lab, g in group.generators:
        pp = group.pingpong_for(lab)
        out.append(((lab, 1), g, pp.target if pp else None))
        out.append(((lab, -1), g.inverse(), pp.source if pp else None))
    return out


def enumerate_maps(group: GroupSpec, max_depth: int, prune_eps: float = 0.0,
                   node_cap: int | None = None):
    """Depth-first stream of (word, map) over freely reduced words.

    With ping-pong data a branch is cut when the image of its nested disk
    has Euclidean radius below ``prune_eps``; otherwise pruning is by depth
    only.  Each reduced word is yielded exactly once.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    cap = node_cap or LIMITS.enum_cap
    letters = _letters(group)
    count = 0

    def descend(word, gmap, last):
        nonlocal count
        for letter, lmap, disk in letters:
            lab, s = letter
            if last is not None and last[0] == lab and last[1] == -s:
                continue
            new_map = mo.compose(gmap, lmap)
            count += 1
            if count > cap:
                raise ExplosionGuard(count)
            new_word = word + (letter,)
            yield new_word, new_map
            if len(new_word) < max_depth:
                if disk is not None and prune_eps > 0:
                    image = mo.map_disk(new_map, disk)
                    if image.is_circle and image.radius < prune_eps:
                        continue
                yield from descend(new_word, new_map, letter)

    yield from descend((), mo.identity(), None)


def _fixes_infinity_nonelliptically(g: mo.MoebiusMap) -> bool:
    if abs(g.c) > TOL.classify:
        return False
    return mo.classify(g) in (mo.PARABOLIC, mo.LOXODROMIC)


def _probe_points(group: GroupSpec, depth: int = 2):
    """Finite fixed points of short words, as a limit-set probe."""
    pts = []
    for _, gmap in enumerate_maps(group, depth):
        if mo.classify(gmap) in (mo.LOXODROMIC, mo.PARABOLIC):
            for p in mo.fixed_points(gmap):
                if not mo.is_infinity(p):
                    pts.append(p)
    return pts


def _limit_chart(group: GroupSpec):
    """Möbius chart z -> 1/(z - p) pulling infinity to a finite point when
    it is a limit point, for a recorded non-limit base point p."""
    elements = [g for _, g in group.generators]
    for i, (_, gi) in enumerate(group.generators):
        for _, gj in list(group.generators)[i + 1:]:
            comm = mo.compose(mo.compose(gi, gj),
                              mo.compose(gi.inverse(), gj.inverse()))
            elements.append(comm)
    if not any(_fixes_infinity_nonelliptically(g) for g in elements):
        return mo.identity(), False, None
    probe = _probe_points(group)
    for p in (-1.0 + 0j, 1 + 1j, 2 - 1j, 0.5 + 2j, -3 + 0.5j):
        if all(abs(q - p) > 0.3 for q in probe):
            return mo.MoebiusMap(0, 1, 1, -p), True, p
    p = 1 + 1j
    return mo.MoebiusMap(0, 1, 1, -p), True, p


def sample_limit_set(group: GroupSpec, max_depth: int,
                     prune_eps: float = 0.0,
                     node_cap: int | None = None) -> PointCloud:
    """Deterministic limit-set sample, deduplicated on the configured grid.

    Points are the attracting fixed points of the enumerated loxodromics
    (and parabolic fixed points), plus images of ping-pong disk centers at
    the deepest words as proxies for the truncated subtrees.
    """
    chart, charted, chart_base = _limit_chart(group)
    centers = {}
    for pp in group.pingpong:
        if pp.target.is_circle:
            centers[(pp.label, 1)] = pp.target.center
        if pp.source.is_circle:
            centers[(pp.label, -1)] = pp.source.center

    raw = []

    def add(z):
        if charted:
            z = mo.apply(chart, z)
        if not mo.is_infinity(z):
            raw.append(complex(z))

    for word, gmap in enumerate_maps(group, max_depth, prune_eps, node_cap):
        kind = mo.classify(gmap)
        if kind in (mo.LOXODROMIC, mo.PARABOLIC):
            add(mo.fixed_points(gmap)[0])
        if len(word) == max_depth:
            center = centers.get(word[-1])
            if center is not None:
                add(mo.apply(gmap, center))

    res = TOL.dedup
    seen = {}
    for z in raw:
        key = (round(z.real / res), round(z.imag / res))
        if key not in seen:
            seen[key] = z
    points = tuple(sorted(seen.values(), key=lambda z: (z.real, z.imag)))
    spec_hash = hashlib.sha256(group.to_json().encode()).hexdigest()[:16]
    meta = {"spec_hash": spec_hash, "depth": max_depth,
            "prune_eps": prune_eps, "charted": charted,
            "chart_base": (chart_base.real, chart_base.imag) if charted else None}
    return PointCloud(points, meta)


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _auto_window(points: np.ndarray):
    re, im = points.real, points.imag
    dx = max(re.max() - re.min(), 1e-6)
    dy = max(im.max() - im.min(), 1e-6)
    pad = 0.05 * max(dx, dy)
    return (re.min() - pad, re.max() + pad, im.min() - pad, im.max() + pad)


def render(cloud: PointCloud, width: int = 800, height: int = 800,
           window=None) -> np.ndarray:
    """Splat the cloud onto a fixed-palette RGB raster (uint8 array)."""
    if len(cloud) == 0:
        raise EmptyCloud("render needs at least one point")
    pts = cloud.as_array()
    if window is None:
        window = _auto_window(pts)
    x0, x1, y0, y1 = window
    img = np.zeros((height, width, 3), dtype=np.uint8)
    img[:, :] = (10, 10, 30)  # fixed background
    xs = (pts.real - x0) / (x1 - x0) * (width - 1)
    ys = (y1 - pts.imag) / (y1 - y0) * (height - 1)
    keep = (xs >= 0) & (xs <= width - 1) & (ys >= 0) & (ys <= height - 1)
    if not keep.any():
        warnings.warn("window excludes every point; image is blank")
        return img
    ix = np.round(xs[keep]).astype(int)
    iy = np.round(ys[keep]).astype(int)
    img[iy, ix] = (235, 235, 90)  # fixed point color
    return img


def save_png(image: np.ndarray, path: str) -> None:
    from PIL import Image

    Image.fromarray(image, mode="RGB").save(path, format="PNG")


def image_digest(image: np.ndarray) -> str:
    """Stable digest of the raw pixel array (container-independent)."""
    return hashlib.sha256(image.tobytes()).hexdigest()


def circle_orbit(group: GroupSpec, max_depth: int, prune_eps: float = 1e-3,
                 node_cap: int | None = None):
    """Image circles of the ping-pong disks under the enumerated words."""
    disks = [pp.target for pp in group.pingpong]
    disks += [pp.source for pp in group.pingpong]
    out = [d for d in disks if d.is_circle]
    for _, gmap in enumerate_maps(group, max_depth, prune_eps, node_cap):
        for d in disks:
            image = mo.map_disk(gmap, d)
            if image.is_circle:
                out.append(image)
    return out


def render_svg(group: GroupSpec, max_depth: int, prune_eps: float = 1e-3,
               width: int = 800, height: int = 800) -> str:
    """Deterministic vector rendering of the disk orbit (needs ping-pong
    data)."""
    if not group.pingpong:
        raise EmptyCloud("SVG rendering needs ping-pong disk data")
    circles = circle_orbit(group, max_depth, prune_eps)
    xs = [c.center.real for c in circles]
    ys = [c.center.imag for c in circles]
    rs = [c.radius for c in circles]
    x0 = min(x - r for x, r in zip(xs, rs))
    x1 = max(x + r for x, r in zip(xs, rs))
    y0 = min(y - r for y, r in zip(ys, rs))
    y1 = max(y + r for y, r in zip(ys, rs))
    span = max(x1 - x0, y1 - y0, 1e-9)
    scale = min(width, height) / (1.1 * span)

    def sx(x):
        return (x - 0.5 * (x0 + x1)) * scale + width / 2

    def sy(y):
        return height / 2 - (y - 0.5 * (y0 + y1)) * scale

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="#0a0a1e"/>',
    ]
    for c in circles:
        lines.append(
            f'<circle cx="{sx(c.center.real):.3f}" cy="{sy(c.center.imag):.3f}" '
            f'r="{c.radius * scale:.3f}" fill="none" stroke="#ebeb5a" '
            f'stroke-width="0.6"/>')
    lines.append("</svg>")
    return "\n".join(lines)
