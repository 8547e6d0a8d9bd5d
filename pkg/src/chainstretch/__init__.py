"""Delaunay stretch factor via chains of circles.

Robust planar predicates, incremental Delaunay triangulation, graph stretch
factors, the chain-of-circles model (arcs, rubber band, arc paths, potential)
and a Lipschitz verifier for the four closing inequalities.
"""
from __future__ import annotations

from .chain import (
    Arcs,
    ArcPath,
    Chain,
    RubberBand,
    TerminalPair,
    arc_path,
    arcs,
    chain_from_triangulation,
    chain_stretch,
    make_chain,
    reverse,
    rubber_band,
    stab_order,
)
from .constants import DEFAULT_CONSTANTS, LAMBDA, RHO, PotentialConstants, phi_from
from .delaunay import Triangulation, Violation, crossed_triangles, triangulate, validate_delaunay
from .errors import (
    ChainError,
    DegenerateSegmentError,
    GeometryError,
    PropertyOneError,
    PropertyTwoError,
    TerminalError,
)
from .geomcore import Circle, Location, Point, circle_intersection, circumcircle, incircle_test, orient2d
from .potential import PeakDecomposition, peak_decomposition, potential, upsilon
from .stretch import EdgeGraph, StretchReport, shortest_path_length, stretch_factor
from .verifier import (
    BoundOutcome,
    CertificateReport,
    VerifierConfig,
    bound,
    certify,
    f_eval,
    g_eval,
    gamma_plus,
    lipschitz_spot_check,
)

__version__ = "0.1.0"

__all__ = [
    "arc_path",
    "ArcPath",
    "Arcs",
    "arcs",
    "bound",
    "BoundOutcome",
    "CertificateReport",
    "certify",
    "Chain",
    "chain",
    "chain_from_triangulation",
    "chain_stretch",
    "ChainError",
    "Circle",
    "circle_intersection",
    "circumcircle",
    "constants",
    "crossed_triangles",
    "DEFAULT_CONSTANTS",
    "DegenerateSegmentError",
    "delaunay",
    "EdgeGraph",
    "errors",
    "f_eval",
    "g_eval",
    "gamma_plus",
    "geomcore",
    "GeometryError",
    "incircle_test",
    "LAMBDA",
    "lipschitz_spot_check",
    "Location",
    "make_chain",
    "orient2d",
    "peak_decomposition",
    "PeakDecomposition",
    "phi_from",
    "Point",
    "potential",
    "PotentialConstants",
    "PropertyOneError",
    "PropertyTwoError",
    "reverse",
    "RHO",
    "rubber_band",
    "RubberBand",
    "shortest_path_length",
    "stab_order",
    "stretch",
    "stretch_factor",
    "StretchReport",
    "TerminalError",
    "TerminalPair",
    "triangulate",
    "Triangulation",
    "upsilon",
    "validate_delaunay",
    "verifier",
    "VerifierConfig",
    "Violation",
]
