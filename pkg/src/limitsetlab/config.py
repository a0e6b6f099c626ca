"""Named numeric tolerances and resource caps, in one place."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # |ad - bc - 1| after normalization
    normalization: float = 1e-12
    # geometric identities (isometry, chain rule, disk transport)
    geometry: float = 1e-9
    # trace-based classification margins
    classify: float = 1e-9
    # limit-set point dedup grid
    dedup: float = 1e-7
    # relative refinement stop for sup |h'| sampling
    sup_refine: float = 1e-3
    # relative truncation for the conjugation power series
    series_tail: float = 1e-15
    # absolute target for direct zeta summation
    zeta_tail: float = 1e-12
    # boundary-length verification for the one-holed torus page
    page_boundary: float = 1e-6


@dataclass(frozen=True)
class Limits:
    # word-enumeration node cap (raises ExplosionGuard)
    enum_cap: int = 10_000_000
    # circle-tree node cap (raises NodeCapExceeded)
    node_cap: int = 1_000_000
    # boundary samples per region for set-distance sampling
    distance_boundary_samples: int = 256
    # radial x angular interior grid per region
    distance_grid: int = 24
    # safety threshold on the binding length of a book group
    max_book_ell: float = 2.0


TOL = Tolerances()
LIMITS = Limits()
