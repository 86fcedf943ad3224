"""Numerical ranges of contractions, their unitary dilations, and compressed shifts on model spaces."""

from .dilation import (
    Dilation,
    DefectData,
    PartialIsometry,
    build_tilde,
    defect_data,
    dilation_from_omega,
    dilation_with_eigenvalues,
    eigenvalue_multiplicity,
    extend_toward_eigenvalue,
    hull_meets_range,
    unitary_eig,
)
from .errors import NRangeError
from .inner import (
    Arc,
    Atom,
    EndpointClass,
    InnerFunction,
    Verdict,
    ZeroTail,
    classify_endpoint,
    component_arcs,
    dilation_eigenvalues_on_arc,
    envelope_boundary,
    envelope_region,
    eval_theta_hat,
    full_chord_check,
    make_arc,
    model_region,
    psi,
    psi_prime,
    tau,
)
from .model_matrix import (
    ModelMatrix,
    build_model_matrix,
    divisor_inclusion_check,
    intersection_formula_check,
    poncelet_check,
)
from .numrange import (
    ConvexRegion,
    SupportLine,
    corner_defect,
    hausdorff,
    intersect_regions,
    range_region,
    support_value,
)
from .sweep import dilation_sweep

__all__ = [
    "Arc",
    "Atom",
    "ConvexRegion",
    "DefectData",
    "Dilation",
    "EndpointClass",
    "InnerFunction",
    "ModelMatrix",
    "NRangeError",
    "PartialIsometry",
    "SupportLine",
    "Verdict",
    "ZeroTail",
    "build_model_matrix",
    "build_tilde",
    "classify_endpoint",
    "component_arcs",
    "corner_defect",
    "defect_data",
    "dilation_eigenvalues_on_arc",
    "dilation_from_omega",
    "dilation_sweep",
    "dilation_with_eigenvalues",
    "divisor_inclusion_check",
    "eigenvalue_multiplicity",
    "envelope_boundary",
    "envelope_region",
    "eval_theta_hat",
    "extend_toward_eigenvalue",
    "full_chord_check",
    "hausdorff",
    "hull_meets_range",
    "intersect_regions",
    "intersection_formula_check",
    "make_arc",
    "model_region",
    "poncelet_check",
    "psi",
    "psi_prime",
    "range_region",
    "support_value",
    "tau",
    "unitary_eig",
]
