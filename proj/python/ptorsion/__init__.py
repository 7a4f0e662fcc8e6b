"""Planar anisotropic p-torsion: rigidity, L_q torsional measures, and
discrete L_q Minkowski solvers."""

from ._ptorsion import (
    ConvexPolygon,
    Error,
    Norm,
    beta_constant,
    compute_torsion,
    hausdorff_distance,
    lq_measure,
    regular_polygon,
    scale,
    solve_minkowski,
    tau_scaling_exponent,
    translate,
    wulff_shape,
)

__all__ = [
    "ConvexPolygon",
    "Error",
    "Norm",
    "beta_constant",
    "compute_torsion",
    "hausdorff_distance",
    "lq_measure",
    "regular_polygon",
    "scale",
    "solve_minkowski",
    "tau_scaling_exponent",
    "translate",
    "wulff_shape",
]
