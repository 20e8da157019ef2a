"""Short-step interior-point loop on the self-dual embedding.

The centering parameter nu = 1 - delta/sqrt(2(k+1)) is fixed before the
loop and every step is a full Newton step, so mu and both residual norms
contract by exactly nu per iteration and the iteration count is known in
closed form before solving.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .cones import ConeSpec, ScalingMatrix, nt_scaling, spectral_bounds
from .errors import (InvalidParams, MaxIterationsExceeded,
                     StartOutsideNeighborhood)
from .geometry import (Classification, HsdPoint, NeighborhoodParams,
                       classify_status, d2, dinf, in_neighborhood, mu)
from .kkt import assemble, solve_direction, step_point
from .problem import SocpProblem, compute_residuals

SCALINGS = ("identity", "nt")
STOP_MODES = ("relative", "unified")


@dataclass
class SolverParams:
    gamma: float = 0.08
    delta: float = 0.03
    epsilon: float = 1e-6
    scaling: str = "identity"
    max_iterations: Optional[int] = None
    trace_enabled: bool = True
    stop_mode: str = "relative"
    collect_directions: bool = False

    def __post_init__(self):
        self.scaling = str(self.scaling).lower()
        self.stop_mode = str(self.stop_mode).lower()
        if not (0.0 < self.gamma < 1.0):
            raise InvalidParams("gamma must lie in (0,1)")
        if not (0.0 < self.delta < 1.0):
            raise InvalidParams("delta must lie in (0,1)")
        if self.scaling not in SCALINGS:
            raise InvalidParams(f"scaling must be one of {SCALINGS}")
        if self.stop_mode not in STOP_MODES:
            raise InvalidParams(f"stop_mode must be one of {STOP_MODES}")
        if self.stop_mode == "relative":
            if not (0.0 < self.epsilon < 1.0):
                raise InvalidParams("epsilon must lie in (0,1)")
        elif self.epsilon <= 0.0:
            raise InvalidParams("epsilon must be positive")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise InvalidParams("max_iterations must be positive")


@dataclass
class TraceRow:
    iteration: int
    mu: float
    d2: float
    dinf: float
    rp_norm: float
    rd_norm: float
    rg_abs: float
    tau: float
    kappa: float
    lambda_min_x: float
    lambda_min_s: float
    orth_defect: float
    kkt_residual: float


@dataclass
class SolveTrace:
    start_mu: float
    start_rp_norm: float
    start_rd_norm: float
    start_rg_abs: float
    rows: List[TraceRow] = field(default_factory=list)
    neighborhood_violations: int = 0


@dataclass
class SolveResult:
    status: Classification
    point: HsdPoint
    solution: Optional[Tuple[np.ndarray, np.ndarray, np.ndarray]]
    iterations: int
    trace: Optional[SolveTrace]
    directions: Optional[list] = None
    predicted: Optional[int] = None


def centering_nu(delta: float, k: int) -> float:
    """Fixed centering parameter 1 - delta/sqrt(2(k+1))."""
    return 1.0 - delta / math.sqrt(2.0 * (k + 1))


def validate_params(gamma: float, delta: float, k: int) -> Tuple[bool, float]:
    """Admissibility of (gamma, delta) for cone rank k.

    Evaluates the worst-case post-step centrality coefficient
    G = [4(gamma^2+delta^2)/(1-3gamma)^2] / nu and returns
    (G < gamma, gamma - G).
    """
    nu = centering_nu(delta, k)
    coeff = 4.0 * (gamma * gamma + delta * delta) / (1.0 - 3.0 * gamma) ** 2 / nu
    return coeff < gamma, gamma - coeff


def centrality_coefficient(gamma: float, delta: float, k: int) -> float:
    """The post-step coefficient checked by validate_params."""
    ok, margin = validate_params(gamma, delta, k)
    return gamma - margin


def predicted_iterations(start: HsdPoint, problem: SocpProblem,
                         params: SolverParams,
                         eps_mode: Optional[str] = None) -> int:
    """Closed-form iteration count for the configured stop criterion.

    relative: ceil(log eps / log nu); the same count governs mu and both
    residual norms.  unified: ceil of log(max(||r_p||, ||r_d||, mu)/eps_u)
    over -log nu, and 0 when the start already meets the criterion.
    """
    mode = (eps_mode or params.stop_mode).lower()
    if mode not in STOP_MODES:
        raise InvalidParams(f"eps_mode must be one of {STOP_MODES}")
    nu = centering_nu(params.delta, problem.cones.k)
    if mode == "relative":
        return math.ceil(math.log(params.epsilon) / math.log(nu))
    res = compute_residuals(problem, start)
    worst = max(res.rp_norm, res.rd_norm, mu(start, problem.cones))
    if worst <= params.epsilon:
        return 0
    return math.ceil(math.log(worst / params.epsilon) / (-math.log(nu)))


def _stopped(params: SolverParams, res, m: float, start) -> bool:
    if params.stop_mode == "unified":
        return max(res.rp_norm, res.rd_norm, m) <= params.epsilon
    eps = params.epsilon
    mu0, rp0, rd0 = start
    ok_p = rp0 == 0.0 or res.rp_norm <= eps * rp0
    ok_d = rd0 == 0.0 or res.rd_norm <= eps * rd0
    return ok_p and ok_d and m <= eps * mu0


def solve(problem: SocpProblem, start: HsdPoint,
          params: SolverParams) -> SolveResult:
    """Run the fixed-step loop from `start` until the stop criterion holds."""
    problem.check_shapes()
    spec = problem.cones
    k = spec.k
    ok, margin = validate_params(params.gamma, params.delta, k)
    if not ok:
        raise InvalidParams(
            f"(gamma, delta) inadmissible for k={k}: margin {margin:.3e}")
    region = NeighborhoodParams(params.gamma, "2")
    if not in_neighborhood(start, spec, region):
        raise StartOutsideNeighborhood(
            "start must lie in the 2-norm neighborhood of the central path")
    nu = centering_nu(params.delta, k)
    z = start.copy()
    m0 = mu(z, spec)
    res0 = compute_residuals(problem, z)
    start_norms = (m0, res0.rp_norm, res0.rd_norm)
    predicted = predicted_iterations(start, problem, params)
    max_iter = params.max_iterations
    if max_iter is None:
        max_iter = 2 * predicted + 100
    trace = SolveTrace(m0, res0.rp_norm, res0.rd_norm, res0.rg_abs) \
        if params.trace_enabled else None
    directions = [] if params.collect_directions else None
    identity = ScalingMatrix.identity(spec)
    iters = 0
    while True:
        res = compute_residuals(problem, z)
        m = mu(z, spec)
        if _stopped(params, res, m, start_norms):
            break
        if iters >= max_iter:
            raise MaxIterationsExceeded(f"no convergence in {max_iter} steps")
        D = identity if params.scaling == "identity" \
            else nt_scaling(z.x, z.s, spec)
        system = assemble(problem, z, D, nu, m)
        direction = solve_direction(system)
        if directions is not None:
            directions.append((z.copy(), direction, m))
        z = step_point(z, direction, 1.0)
        iters += 1
        if trace is not None:
            res_new = compute_residuals(problem, z)
            m_new = mu(z, spec)
            dist2 = d2(z, spec)
            if dist2 > params.gamma * m_new:
                trace.neighborhood_violations += 1
            trace.rows.append(TraceRow(
                iteration=iters, mu=m_new, d2=dist2, dinf=dinf(z, spec),
                rp_norm=res_new.rp_norm, rd_norm=res_new.rd_norm,
                rg_abs=res_new.rg_abs, tau=z.tau, kappa=z.kappa,
                lambda_min_x=float(spectral_bounds(z.x, spec)[:, 0].min()),
                lambda_min_s=float(spectral_bounds(z.s, spec)[:, 0].min()),
                orth_defect=direction.orthogonality_defect,
                kkt_residual=direction.system_residual))
    status = classify_status(z, problem, params.epsilon)
    solution = (status.x, status.y, status.s) if status.status == "optimal" \
        else None
    return SolveResult(status=status, point=z, solution=solution,
                       iterations=iters, trace=trace, directions=directions,
                       predicted=predicted)
