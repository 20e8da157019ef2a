"""Second-order cone programming by a short-step interior-point method
on the homogeneous self-dual embedding, with warm-start diagnostics."""

from .cones import (ConeSpec, ScalingMatrix, apply_scaling, arrow_matrix,
                    jordan_product, membership, nt_scaling,
                    random_automorphism, r_matrix, spectral_bounds,
                    t_scaling_matrix, u_p_matrices, unit_element, w_vector)
from .errors import (ConeSpecMismatch, DimensionMismatch, EmptyAdmissibleSet,
                     InvalidParams, InvalidPoint, MaxIterationsExceeded,
                     NotInterior, ParseError, SingularSystem, SocpathError,
                     StartOutsideNeighborhood)
from .geometry import (Classification, HatPoint, HsdPoint, NeighborhoodParams,
                       classify_status, d2, dinf, hat_pack, hat_unpack,
                       in_neighborhood, mu)
from .kkt import (KktSystem, NewtonDirection, assemble,
                  scaled_increment_diagnostics, solve_direction, step_point)
from .problem import (Residuals, SocpProblem, ValidationReport,
                      compute_residuals, embed_residual_constants,
                      validate_problem)
from .solver import (SolveResult, SolveTrace, SolverParams, TraceRow,
                     centering_nu, predicted_iterations, solve,
                     validate_params)
from .warmstart import (WarmStartDiagnostics, choose_omega, cold_start,
                        diagnostics, warm_start_point)

__version__ = "0.1.0"

__all__ = [
    "ConeSpec", "ScalingMatrix", "apply_scaling", "arrow_matrix",
    "jordan_product", "membership", "nt_scaling", "random_automorphism",
    "r_matrix", "spectral_bounds", "t_scaling_matrix", "u_p_matrices",
    "unit_element", "w_vector",
    "ConeSpecMismatch", "DimensionMismatch", "EmptyAdmissibleSet",
    "InvalidParams", "InvalidPoint", "MaxIterationsExceeded", "NotInterior",
    "ParseError", "SingularSystem", "SocpathError",
    "StartOutsideNeighborhood",
    "Classification", "HatPoint", "HsdPoint", "NeighborhoodParams",
    "classify_status", "d2", "dinf", "hat_pack", "hat_unpack",
    "in_neighborhood", "mu",
    "KktSystem", "NewtonDirection", "assemble",
    "scaled_increment_diagnostics", "solve_direction", "step_point",
    "Residuals", "SocpProblem", "ValidationReport", "compute_residuals",
    "embed_residual_constants", "validate_problem",
    "SolveResult", "SolveTrace", "SolverParams", "TraceRow", "centering_nu",
    "predicted_iterations", "solve", "validate_params",
    "WarmStartDiagnostics", "choose_omega", "cold_start", "diagnostics",
    "warm_start_point",
]
