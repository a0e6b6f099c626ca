"""Hausdorff-dimension estimation and the covering-mass certificate.

Two routes are provided and kept independent: a box-counting estimator on
sampled point clouds, and the circle-tree covering certificate that
assigns radii ``eps(C)`` down the tree by

    eps(child) = r(child) / (rho * r(parent)) * eps(parent),
    eps(root)  = rho^k * r(root),

sums the per-node masses ``a3 * r(C) * eps(C)^(alpha-1)`` over levels
0..k, and certifies dimension <= alpha when the masses decay and
``rho^(alpha-1) < 1/A(alpha)`` with ``A = a0*a3*zeta(alpha)/(2^(alpha-1)-1)``
(clamped to at least 2).
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .config import TOL
from .errors import (
    AlphaOutOfRange,
    DegenerateCloud,
    GeometricBoundViolated,
    InsufficientScales,
    OutOfRange,
)


@dataclass(frozen=True)
class DimensionEstimate:
    method: str  # "box_count" | "certificate"
    value: float
    r2: float | None = None
    diagnostics: tuple = ()
    warning: str | None = None


@dataclass(frozen=True)
class CoveringMass:
    k: int
    alpha: float
    rho: float
    eps0: float
    Mk: float
    A_alpha: float
    condition_holds: bool


# ---------------------------------------------------------------------------
# zeta by direct summation with an integral tail
# ---------------------------------------------------------------------------

def zeta_sum(alpha: float, tol: float | None = None) -> float:
    """zeta(alpha) for alpha > 1: direct summation plus the midpoint
    integral tail, accurate to the configured tolerance."""
    if alpha <= 1:
        raise AlphaOutOfRange("zeta diverges at and below 1")
    tol = tol or TOL.zeta_tail
    # midpoint tail error is O(N^-(alpha+1)); pick N accordingly
    n_terms = int(max(1000, (1.0 / tol) ** (1.0 / (alpha + 1.0)))) + 1
    n = np.arange(1, n_terms + 1, dtype=float)
    head = float(np.sum(n ** (-alpha)))
    tail = (n_terms + 0.5) ** (1.0 - alpha) / (alpha - 1.0)
    return head + tail


def earring_mass_bound(r1: float, c0: float, alpha: float) -> float:
    """Upper bound c0^alpha * zeta(alpha) * r1^alpha for the alpha-power sum
    over one earring of tangent circles."""
    if alpha < 1 + 1e-6:
        raise AlphaOutOfRange("earring sum needs alpha bounded away from 1")
    if r1 < 0:
        raise ValueError("outermost radius must be nonnegative")
    if r1 == 0:
        return 0.0
    return c0 ** alpha * zeta_sum(alpha) * r1 ** alpha


# ---------------------------------------------------------------------------
# Sullivan's formula
# ---------------------------------------------------------------------------

def lambda0_from_dim(d: float) -> float:
    """Bottom of the Laplace spectrum from the limit-set dimension:
    1 when d < 1, else d(2-d)."""
    if not (0.0 <= d <= 2.0):
        raise OutOfRange(f"dimension {d} outside [0, 2]")
    if d < 1.0:
        return 1.0
    return d * (2.0 - d)


# ---------------------------------------------------------------------------
# box counting
# ---------------------------------------------------------------------------

def _count_boxes(pts: np.ndarray, eps: float) -> int:
    ix = np.floor(pts.real / eps).astype(np.int64)
    iy = np.floor(pts.imag / eps).astype(np.int64)
    return len(np.unique(ix + (iy << 32)))


def box_counting(points, scales=None, n_scales: int = 12) -> DimensionEstimate:
    """Least-squares slope of log N(eps) against log(1/eps).

    The scale window defaults to [10 x median nearest-neighbor spacing,
    diameter / 10].  An r^2 below 0.99 is reported as a warning, not an
    error.
    """
    pts = np.asarray(points, dtype=complex)
    if pts.size < 2:
        raise DegenerateCloud("box counting needs at least two points")
    diam = max(pts.real.max() - pts.real.min(), pts.imag.max() - pts.imag.min())
    if diam <= 0:
        raise DegenerateCloud("all points coincide")

    if scales is None:
        from scipy.spatial import cKDTree

        xy = np.column_stack([pts.real, pts.imag])
        tree = cKDTree(xy)
        nn, _ = tree.query(xy, k=2)
        spacing = float(np.median(nn[:, 1]))
        lo = max(spacing * 10.0, diam * 1e-9)
        hi = diam / 10.0
        if lo >= hi:
            lo = hi / 100.0
        scales = np.geomspace(lo, hi, n_scales)
    scales = np.asarray(sorted(scales, reverse=True), dtype=float)
    if scales.size < 5:
        raise InsufficientScales("need at least five scales")

    counts = np.array([_count_boxes(pts, e) for e in scales])
    logs = np.log(1.0 / scales)
    logn = np.log(counts)
    slope, intercept = np.polyfit(logs, logn, 1)
    pred = slope * logs + intercept
    ss_res = float(np.sum((logn - pred) ** 2))
    ss_tot = float(np.sum((logn - logn.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    warning = None
    if r2 < 0.99:
        warning = f"poor scaling fit (r^2 = {r2:.4f})"
        warnings.warn(warning)
    value = float(np.clip(slope, 0.0, 2.0))
    diag = tuple((float(e), int(n)) for e, n in zip(scales, counts))
    return DimensionEstimate("box_count", value, r2=float(r2),
                             diagnostics=diag, warning=warning)


# ---------------------------------------------------------------------------
# covering certificate on circle trees
# ---------------------------------------------------------------------------

def _tree_levels(tree):
    """Lists of nodes per level, root first."""
    levels = [[tree.root]]
    while True:
        nxt = [child for node in levels[-1] for child in node.children]
        if not nxt:
            return levels
        levels.append(nxt)


def _check_edges(tree, rho: float):
    for parent, child in tree.edges():
        if child.r > rho * parent.r * (1 + 1e-12):
            raise GeometricBoundViolated(
                f"edge {parent.word!r} -> {child.word!r}: "
                f"{child.r} > {rho} * {parent.r}")


def _a_alpha(alpha: float, a0: float, a3: float) -> float:
    raw = a0 * a3 * zeta_sum(alpha) / (2.0 ** (alpha - 1.0) - 1.0)
    return max(raw, 2.0)  # the argument assumes A >= 2


def measure_power_sum_constant(tree, alpha: float, rho: float) -> float:
    """Tightest a0 with sum_children r^alpha <= a0 rho^(alpha-1)
    zeta(alpha)/(2^(alpha-1)-1) r(C)^alpha on every node of the tree."""
    denom_base = rho ** (alpha - 1.0) * zeta_sum(alpha) / (2.0 ** (alpha - 1.0) - 1.0)
    worst = 0.0
    for level in _tree_levels(tree):
        for node in level:
            if not node.children:
                continue
            s = sum(c.r ** alpha for c in node.children)
            worst = max(worst, s / (denom_base * node.r ** alpha))
    return worst


def covering_certificate(tree, alpha: float, rho: float,
                         constants=None, k: int | None = None) -> CoveringMass:
    """Total alpha-mass M_k of the level-(0..k) covering with
    eps0 = rho^k r(root), and the decay condition on rho and A(alpha).

    ``constants`` is a mapping with a0, a3, c0 (all default 1); pass
    ``"empirical"`` to use the tightest a0 the tree satisfies.
    """
    if not (1.0 < alpha <= 2.0):
        raise AlphaOutOfRange(f"alpha {alpha} outside (1, 2]")
    if not (0.0 < rho < 1.0):
        raise ValueError("rho must lie in (0, 1)")
    levels = _tree_levels(tree)
    depth = len(levels) - 1
    if k is None:
        k = depth
    if k < 0 or depth < k:
        raise ValueError(f"tree depth {depth} is smaller than k={k}")
    _check_edges(tree, rho)

    if constants == "empirical":
        a0 = measure_power_sum_constant(tree, alpha, rho)
        a3, c0 = 1.0, 1.0
    else:
        constants = constants or {}
        a0 = float(constants.get("a0", 1.0))
        a3 = float(constants.get("a3", 1.0))
        c0 = float(constants.get("c0", 1.0))

    r0 = tree.root.r
    eps0 = rho ** k * r0
    total = 0.0
    eps = {id(tree.root): eps0}
    for level in levels[: k + 1]:
        for node in level:
            e = eps[id(node)]
            total += a3 * node.r * e ** (alpha - 1.0)
            for child in node.children:
                eps[id(child)] = child.r / (rho * node.r) * e
                # paper invariant: eps never grows down the tree
                assert eps[id(child)] <= e * (1 + 1e-9)
    a_alpha = _a_alpha(alpha, a0, a3)
    condition = rho ** (alpha - 1.0) < 1.0 / a_alpha
    return CoveringMass(k=k, alpha=alpha, rho=rho, eps0=eps0, Mk=total,
                        A_alpha=a_alpha, condition_holds=condition)


def certify_dimension_upper(tree, alpha: float, rho: float,
                            constants=None, k_max: int | None = None):
    """(certified?, estimate): true iff M_k decreases monotonically over
    k = k_max/2 .. k_max and rho^(alpha-1) < 1/A(alpha)."""
    levels = _tree_levels(tree)
    depth = len(levels) - 1
    if k_max is None:
        k_max = depth
    ks = list(range(max(k_max // 2, 0), k_max + 1))
    masses = []
    condition = False
    a_alpha = math.nan
    for k in ks:
        cm = covering_certificate(tree, alpha, rho, constants, k)
        masses.append((k, cm.Mk))
        condition = cm.condition_holds
        a_alpha = cm.A_alpha
    decreasing = all(m2 < m1 for (_, m1), (_, m2) in zip(masses, masses[1:]))
    ok = bool(decreasing and condition)
    est = DimensionEstimate(
        "certificate", alpha, r2=None,
        diagnostics=tuple(masses),
        warning=None if ok else "certificate conditions not met")
    return ok, est


def certificate_report(cm: CoveringMass, mk_series) -> str:
    """Canonical JSON report for a certificate run."""
    payload = {
        "alpha": cm.alpha,
        "rho": cm.rho,
        "k": cm.k,
        "eps0": cm.eps0,
        "Mk_series": [[int(k), float(m)] for k, m in mk_series],
        "A_alpha": cm.A_alpha,
        "condition_holds": cm.condition_holds,
    }
    return json.dumps(payload, indent=2, sort_keys=True)


def box_report(estimate: DimensionEstimate, header: str = "") -> str:
    """CSV of (eps, N(eps)) plus a summary line."""
    lines = []
    if header:
        lines.append(f"# {header}")
    lines.append("eps,count")
    for eps, count in estimate.diagnostics:
        lines.append(f"{eps!r},{count}")
    lines.append(
        f"# dimension={estimate.value!r} r2={estimate.r2!r} "
        f"lambda0={lambda0_from_dim(estimate.value)!r}")
    return "\n".join(lines)
