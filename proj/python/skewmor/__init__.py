"""Structure-preserving model order reduction for skew-gradient systems."""

from ._core import (
    ReducedModel,
    System,
    apply_kron_transpose,
    central_difference_operators,
    deim_select,
    initial_profile,
    l2_error,
    pod_basis,
    projection_residual,
    quadratic_invariant_condition,
    read_matrix,
    reduce,
    run_pipeline,
    svd_thin,
    unvec,
    vec,
    write_matrix,
)

__all__ = [
    "ReducedModel",
    "System",
    "apply_kron_transpose",
    "central_difference_operators",
    "deim_select",
    "initial_profile",
    "l2_error",
    "pod_basis",
    "projection_residual",
    "quadratic_invariant_condition",
    "read_matrix",
    "reduce",
    "run_pipeline",
    "svd_thin",
    "unvec",
    "vec",
    "write_matrix",
]
