"""Command-line interface: solve, warmstart, check, bench.

Exit codes: 0 solved or classified, 2 input error, 3 numerical failure.
All failures print a one-line JSON error document to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np

from .cones import ConeSpec, membership
from .errors import (ConeSpecMismatch, DimensionMismatch, EmptyAdmissibleSet,
                     InvalidParams, InvalidPoint, MaxIterationsExceeded,
                     NotInterior, ParseError, SingularSystem,
                     StartOutsideNeighborhood)
from .fileio import (parse_point, parse_problem, write_problem,
                     write_solution, write_trace)
from .geometry import NeighborhoodParams, d2, dinf, in_neighborhood, mu
from .problem import SocpProblem, compute_residuals
from .solver import SolverParams, SolveResult, solve
from .warmstart import (choose_omega, cold_start, diagnostics,
                        warm_start_point)

NUMERICAL_ERRORS = (SingularSystem, MaxIterationsExceeded,
                    StartOutsideNeighborhood, NotInterior)
INPUT_ERRORS = (ParseError, DimensionMismatch, ConeSpecMismatch,
                InvalidParams, InvalidPoint, ValueError, OSError, KeyError)


def _finite_or_none(v: float) -> Optional[float]:
    return float(v) if math.isfinite(v) else None


def _emit_error(exc: BaseException) -> None:
    doc: Dict = {"error": {"type": type(exc).__name__, "message": str(exc)}}
    if isinstance(exc, ParseError):
        ctx = exc.context()
        if ctx:
            doc["error"]["context"] = ctx
    sys.stderr.write(json.dumps(doc) + "\n")


def _load_problem(path: str) -> SocpProblem:
    return parse_problem(Path(path).read_text())


def _solver_params(args, stop_mode: str) -> SolverParams:
    return SolverParams(gamma=args.gamma, delta=args.delta,
                        epsilon=args.epsilon, scaling=args.scaling,
                        max_iterations=args.max_iter,
                        stop_mode=stop_mode, trace_enabled=True)


def cmd_solve(args) -> int:
    problem = _load_problem(args.problem)
    params = _solver_params(args, args.stop_mode)
    start = cold_start(problem.cones, p=problem.p)
    result = solve(problem, start, params)
    Path(args.output).write_text(write_solution(problem, result, params))
    if args.trace:
        Path(args.trace).write_text(write_trace(result.trace))
    sys.stdout.write(
        f"status={result.status.status} iterations={result.iterations}\n")
    return 0


def diagnostics_document(diag) -> Dict:
    return {
        "c_A": diag.c_a, "c_b": diag.c_b, "c_p": diag.c_p,
        "c_AT": diag.c_at, "c_c": diag.c_c, "c_d": diag.c_d,
        "c_mu": diag.c_mu, "c_xs": diag.c_xs,
        "psi_o": diag.psi_o, "rho": diag.rho, "rho_raw": diag.rho_raw,
        "xi_o": diag.xi_o, "xi_o_raw": diag.xi_o_raw,
        "omega_min": diag.omega_min, "infeasible": diag.infeasible,
        "gamma_o": _finite_or_none(diag.gamma_o),
        "c_w": _finite_or_none(diag.c_w),
        "predicted_saving": diag.predicted_saving,
        "primal_vacuous": diag.primal_vacuous,
        "dual_vacuous": diag.dual_vacuous,
        "conditions_hold": diag.conditions_hold,
        "omega_eval": diag.omega_eval,
    }


def cmd_warmstart(args) -> int:
    prev_problem = _load_problem(args.prev_problem)
    new_problem = _load_problem(args.problem)
    sol = parse_point(Path(args.prev_solution).read_text())
    if sol.tau <= 0.0:
        raise InvalidPoint("previous solution must have tau > 0")
    prev = (sol.x / sol.tau, sol.y / sol.tau, sol.s / sol.tau)
    params = _solver_params(args, args.stop_mode)
    spec = new_problem.cones
    diag = diagnostics(prev_problem, new_problem, prev, gamma=args.gamma,
                       omega_eval=1.0, delta=args.delta)
    fallback: Optional[str] = None
    omega = 0.0
    if args.omega == "auto":
        try:
            omega = choose_omega(diag)
        except EmptyAdmissibleSet:
            fallback = "empty admissible set"
    else:
        # a literal flag is a direct override, not run through the
        # clamping policy, so omega=0 can reproduce the cold run
        omega = float(args.omega)
        if not 0.0 <= omega <= 1.0:
            raise ValueError("omega must lie in [0,1] or be 'auto'")
    region = NeighborhoodParams(args.gamma, "2")
    start = None
    if fallback is None:
        start = warm_start_point(prev, omega, spec, p=new_problem.p)
        if not in_neighborhood(start, spec, region):
            fallback = "outside neighborhood"
    if fallback is not None:
        omega = 0.0
        start = cold_start(spec, p=new_problem.p)
    cold_result = solve(new_problem, cold_start(spec, p=new_problem.p), params)
    warm_result = cold_result if omega == 0.0 \
        else solve(new_problem, start, params)
    Path(args.output).write_text(
        write_solution(new_problem, warm_result, params))
    diag_at = diag.at_omega(omega) if omega > 0.0 else diag
    if args.report:
        report = {
            "omega": omega,
            "fallback": fallback,
            "cold_iterations": cold_result.iterations,
            "warm_iterations": warm_result.iterations,
            "measured_saving": cold_result.iterations - warm_result.iterations,
            "predicted_saving": diag_at.predicted_saving if omega > 0.0 else 0,
            "status": warm_result.status.status,
            "diagnostics": diagnostics_document(diag_at),
        }
        Path(args.report).write_text(json.dumps(report, indent=2) + "\n")
    sys.stdout.write(
        f"status={warm_result.status.status} omega={omega:.4f} "
        f"cold={cold_result.iterations} warm={warm_result.iterations}\n")
    return 0


def cmd_check(args) -> int:
    problem = _load_problem(args.problem)
    z = parse_point(Path(args.point).read_text())
    if z.x.shape != (problem.n,) or z.s.shape != (problem.n,):
        raise DimensionMismatch(
            f"point has cone dimension {z.x.shape[0]}, expected {problem.n}")
    if z.y.shape != (problem.p,):
        raise DimensionMismatch(
            f"point has {z.y.shape[0]} dual entries, expected {problem.p}")
    spec = problem.cones
    res = compute_residuals(problem, z)
    interior = (z.kappa > 0.0 and z.tau > 0.0
                and membership(z.x, spec, strict=True)
                and membership(z.s, spec, strict=True))
    m = mu(z, spec)
    dist2 = d2(z, spec) if interior else math.nan
    distinf = dinf(z, spec) if interior else math.nan
    lines = [
        f"mu={m:.17g}",
        f"d2={dist2:.17g}",
        f"dinf={distinf:.17g}",
        f"rp_norm={res.rp_norm:.17g}",
        f"rd_norm={res.rd_norm:.17g}",
        f"rg_abs={res.rg_abs:.17g}",
        f"interior={'true' if interior else 'false'}",
        f"in_n2={'true' if in_neighborhood(z, spec, NeighborhoodParams(args.gamma, '2')) else 'false'}",
        f"in_ninf={'true' if in_neighborhood(z, spec, NeighborhoodParams(args.gamma, 'inf')) else 'false'}",
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def perturb_problem(problem: SocpProblem, bound_a: float, bound_b: float,
                    bound_c: float, rng: np.random.Generator) -> SocpProblem:
    """Additive Gaussian drift projected to the requested norm bounds.

    Matrix noise is applied to the stored nonzero pattern of A only and
    projected to the spectral-norm bound; b and c get dense noise
    projected to the Euclidean bound.  A zero bound leaves the term
    untouched.
    """
    A = problem.A.copy()
    if bound_a > 0.0:
        mask = A != 0.0
        E = rng.standard_normal(A.shape) * mask
        norm = float(np.linalg.norm(E, 2)) if np.any(E) else 0.0
        if norm > bound_a:
            E *= bound_a / norm
        A = A + E
    b = problem.b.copy()
    if bound_b > 0.0:
        eb = rng.standard_normal(b.shape)
        norm = float(np.linalg.norm(eb))
        if norm > bound_b:
            eb *= bound_b / norm
        b = b + eb
    c = problem.c.copy()
    if bound_c > 0.0:
        ec = rng.standard_normal(c.shape)
        norm = float(np.linalg.norm(ec))
        if norm > bound_c:
            ec *= bound_c / norm
        c = c + ec
    return SocpProblem(A, b, c, problem.cones, name=problem.name)


def run_bench(base: SocpProblem, steps: int, perturb_a: float,
              perturb_b: float, perturb_c: float, seed: int,
              gamma: float = 0.08, delta: float = 0.03,
              epsilon: float = 1e-3,
              omega_policy: Union[str, float] = "max-admissible") -> Dict:
    """Drift sequence benchmark: cold vs warm iteration counts.

    Each step perturbs the previous instance within the given bounds,
    solves it cold under the unified stop at `epsilon`, and warm-starts
    from the previous instance's cold solution when diagnostics admit
    an omega.  Fully deterministic for a given seed.
    """
    rng = np.random.default_rng(seed)
    params = SolverParams(gamma=gamma, delta=delta, epsilon=epsilon,
                          stop_mode="unified", trace_enabled=False)
    region = NeighborhoodParams(gamma, "2")
    prev_problem = base
    prev_result = solve(base, cold_start(base.cones, p=base.p), params)
    baseline_iterations = prev_result.iterations
    rows = []
    for step in range(1, steps + 1):
        new_problem = perturb_problem(prev_problem, perturb_a, perturb_b,
                                      perturb_c, rng)
        cold_result = solve(new_problem, cold_start(new_problem.cones,
                                                    p=new_problem.p), params)
        row: Dict = {
            "step": step,
            "status": cold_result.status.status,
            "cold_iterations": cold_result.iterations,
            "omega": None,
            "c_w": None,
            "predicted_saving": None,
            "warm_iterations": None,
            "measured_saving": None,
            "fallback": None,
        }
        z = prev_result.point
        if prev_result.status.status != "optimal" or z.tau <= 0.0:
            row["fallback"] = "previous solve not optimal"
        else:
            prev = (z.x / z.tau, z.y / z.tau, z.s / z.tau)
            diag = diagnostics(prev_problem, new_problem, prev, gamma=gamma,
                               omega_eval=1.0, delta=delta)
            if isinstance(omega_policy, (int, float)):
                omega: Optional[float] = float(omega_policy)
            else:
                try:
                    omega = choose_omega(diag, policy=omega_policy)
                except EmptyAdmissibleSet:
                    omega = None
                    row["fallback"] = "empty admissible set"
            if omega is not None:
                start = warm_start_point(prev, omega, new_problem.cones,
                                         p=new_problem.p)
                if not in_neighborhood(start, new_problem.cones, region):
                    row["fallback"] = "outside neighborhood"
                else:
                    warm_result = cold_result if omega == 0.0 \
                        else solve(new_problem, start, params)
                    diag_at = diag.at_omega(omega)
                    row["omega"] = omega
                    row["c_w"] = _finite_or_none(diag_at.c_w)
                    row["predicted_saving"] = diag_at.predicted_saving
                    row["warm_iterations"] = warm_result.iterations
                    row["measured_saving"] = (cold_result.iterations
                                              - warm_result.iterations)
        rows.append(row)
        prev_problem, prev_result = new_problem, cold_result
    return {
        "base": base.name,
        "steps": steps,
        "seed": seed,
        "epsilon": epsilon,
        "gamma": gamma,
        "delta": delta,
        "perturb": {"a": perturb_a, "b": perturb_b, "c": perturb_c},
        "omega_policy": omega_policy if isinstance(omega_policy, str)
        else float(omega_policy),
        "baseline_iterations": baseline_iterations,
        "rows": rows,
    }


def cmd_bench(args) -> int:
    base = _load_problem(args.base_problem)
    policy: Union[str, float]
    if args.omega == "auto":
        policy = "max-admissible"
    else:
        policy = float(args.omega)
    report = run_bench(base, args.steps, args.perturb_a, args.perturb_b,
                       args.perturb_c, args.seed, gamma=args.gamma,
                       delta=args.delta, epsilon=args.epsilon,
                       omega_policy=policy)
    Path(args.report).write_text(json.dumps(report, indent=2) + "\n")
    header = (f"{'step':>4} {'cold':>6} {'warm':>6} {'omega':>8} "
              f"{'c_w':>10} {'pred':>5} {'meas':>5} fallback")
    lines = [header]
    for row in report["rows"]:
        warm = row["warm_iterations"]
        lines.append(
            f"{row['step']:>4} {row['cold_iterations']:>6} "
            f"{warm if warm is not None else '-':>6} "
            f"{format(row['omega'], '.4f') if row['omega'] is not None else '-':>8} "
            f"{format(row['c_w'], '.4e') if row['c_w'] is not None else '-':>10} "
            f"{row['predicted_saving'] if row['predicted_saving'] is not None else '-':>5} "
            f"{row['measured_saving'] if row['measured_saving'] is not None else '-':>5} "
            f"{row['fallback'] or '-'}")
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="socpath",
        description="Second-order cone programming by a short-step "
                    "interior-point method on the self-dual embedding.")
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="solve a problem from the cold start")
    ps.add_argument("--problem", required=True)
    ps.add_argument("--gamma", type=float, default=0.08)
    ps.add_argument("--delta", type=float, default=0.03)
    ps.add_argument("--epsilon", type=float, default=1e-6)
    ps.add_argument("--scaling", choices=("identity", "nt"),
                    default="identity")
    ps.add_argument("--output", required=True)
    ps.add_argument("--trace")
    ps.add_argument("--max-iter", type=int, default=None)
    ps.add_argument("--stop-mode", choices=("relative", "unified"),
                    default="relative")
    ps.set_defaults(func=cmd_solve)

    pw = sub.add_parser("warmstart",
                        help="solve a perturbed problem from a warm start")
    pw.add_argument("--prev-problem", required=True)
    pw.add_argument("--prev-solution", required=True)
    pw.add_argument("--problem", required=True)
    pw.add_argument("--omega", default="auto",
                    help="'auto' or a fixed weight in [0,1]")
    pw.add_argument("--gamma", type=float, default=0.08)
    pw.add_argument("--delta", type=float, default=0.03)
    pw.add_argument("--epsilon", type=float, default=1e-6)
    pw.add_argument("--scaling", choices=("identity", "nt"),
                    default="identity")
    pw.add_argument("--output", required=True)
    pw.add_argument("--report")
    pw.add_argument("--max-iter", type=int, default=None)
    pw.add_argument("--stop-mode", choices=("relative", "unified"),
                    default="unified")
    pw.set_defaults(func=cmd_warmstart)

    pc = sub.add_parser("check", help="evaluate a point against a problem")
    pc.add_argument("--problem", required=True)
    pc.add_argument("--point", required=True)
    pc.add_argument("--gamma", type=float, default=0.08)
    pc.set_defaults(func=cmd_check)

    pb = sub.add_parser("bench",
                        help="cold vs warm iteration counts on a drift "
                             "sequence of perturbed problems")
    pb.add_argument("--base-problem", required=True)
    pb.add_argument("--steps", type=int, required=True)
    pb.add_argument("--perturb-a", type=float, default=0.0)
    pb.add_argument("--perturb-b", type=float, default=0.0)
    pb.add_argument("--perturb-c", type=float, default=0.0)
    pb.add_argument("--seed", type=int, default=0)
    pb.add_argument("--report", required=True)
    pb.add_argument("--epsilon", type=float, default=1e-3)
    pb.add_argument("--gamma", type=float, default=0.08)
    pb.add_argument("--delta", type=float, default=0.03)
    pb.add_argument("--omega", default="auto")
    pb.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NUMERICAL_ERRORS as exc:
        _emit_error(exc)
        return 3
    except INPUT_ERRORS as exc:
        _emit_error(exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
