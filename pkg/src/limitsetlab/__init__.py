"""Computational laboratory for Kleinian groups.

Möbius arithmetic in the upper half-space model, verified Klein
combination with pull-apart sweeps, limit-set sampling/rendering, and
Hausdorff-dimension estimation (box counting plus a covering-mass
certificate driven by circle trees of flats).
"""

__version__ = "0.1.0"
