"""Hamiltonian second variation and stability of Lagrangian submanifolds in
flat pseudo- and para-Kahler ambients, with the curved-ambient example
families as closed-form functionals."""

from .analyzer import (
    StabilityVerdict,
    assemble_form,
    classify,
    compute_tube_table,
    hyperbola_matrix_analysis,
    scaling_probe,
    spectral_criterion,
    torus_mode_value,
    wirtinger_bound,
)
from .catalog import (
    CurveData,
    make_geodesic_tube,
    make_hyperbola_product,
    make_lagrangian_plane,
    make_rank_one_bundle,
    make_torus,
    resolve,
)
from .geometry import AmbientFlat, ParaComplex, Signature, inner, pc_exp_tau, pc_mul, symplectic_form
from .immersion import (
    AxisDomain,
    LagrangianChart,
    check_h_minimal,
    check_lagrangian,
    induced_geometry,
    trisymmetry_residual,
)
from .quadrature import GridSpec, integrate
from .variation import (
    MetricField,
    bochner_residual,
    gradient,
    laplacian,
    reilly_residual,
    second_variation,
    second_variation_raw,
)

__version__ = "0.1.0"

__all__ = [
    "AmbientFlat",
    "AxisDomain",
    "CurveData",
    "GridSpec",
    "LagrangianChart",
    "MetricField",
    "ParaComplex",
    "Signature",
    "StabilityVerdict",
    "assemble_form",
    "bochner_residual",
    "check_h_minimal",
    "check_lagrangian",
    "classify",
    "compute_tube_table",
    "gradient",
    "hyperbola_matrix_analysis",
    "induced_geometry",
    "inner",
    "integrate",
    "laplacian",
    "make_geodesic_tube",
    "make_hyperbola_product",
    "make_lagrangian_plane",
    "make_rank_one_bundle",
    "make_torus",
    "pc_exp_tau",
    "pc_mul",
    "reilly_residual",
    "resolve",
    "scaling_probe",
    "second_variation",
    "second_variation_raw",
    "spectral_criterion",
    "symplectic_form",
    "torus_mode_value",
    "trisymmetry_residual",
    "wirtinger_bound",
]
