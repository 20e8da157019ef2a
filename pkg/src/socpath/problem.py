"""Problem data, validation, and residuals of the self-dual embedding."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .cones import ConeSpec, check_vector
from .errors import DimensionMismatch


@dataclass
class SocpProblem:
    """Conic program  min c'x  s.t.  Ax = b,  x in K.

    Construction only normalizes array types; structural checks are
    reported by validate_problem and enforced at operation boundaries.
    """

    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    cones: ConeSpec
    name: str = ""

    def __post_init__(self):
        self.A = np.atleast_2d(np.asarray(self.A, dtype=float))
        self.b = np.asarray(self.b, dtype=float).ravel()
        self.c = np.asarray(self.c, dtype=float).ravel()

    @property
    def p(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    def check_shapes(self) -> None:
        if self.A.ndim != 2:
            raise DimensionMismatch("A must be a matrix")
        if self.n != self.cones.n:
            raise DimensionMismatch(
                f"A has {self.n} columns but the cone has dimension {self.cones.n}")
        if self.b.shape != (self.p,):
            raise DimensionMismatch(
                f"b has length {self.b.shape[0]}, expected {self.p}")
        if self.c.shape != (self.n,):
            raise DimensionMismatch(
                f"c has length {self.c.shape[0]}, expected {self.n}")


@dataclass
class ValidationReport:
    ok: bool
    findings: List[Tuple[str, str]]
    sigma_max: Optional[float] = None
    sigma_min: Optional[float] = None
    rank_estimate: Optional[int] = None

    def messages(self) -> List[str]:
        return [f"{kind}: {msg}" for kind, msg in self.findings]


def validate_problem(problem: SocpProblem) -> ValidationReport:
    """Report-based structural checks; never raises.

    Findings cover dimension consistency, p <= n, and numerical row rank
    of A (smallest singular value above 1e-10 times the largest).
    """
    findings: List[Tuple[str, str]] = []
    A, b, c, spec = problem.A, problem.b, problem.c, problem.cones
    p, n = A.shape
    if n != spec.n:
        findings.append(("dimension",
                         f"A has {n} columns but the cone has dimension {spec.n}"))
    if b.shape != (p,):
        findings.append(("dimension", f"b has length {b.shape[0]}, expected {p}"))
    if c.shape != (n,):
        findings.append(("dimension", f"c has length {c.shape[0]}, expected {n}"))
    if p > n:
        findings.append(("rank", f"more rows than columns ({p} > {n})"))
    sigma_max = sigma_min = None
    rank_estimate = None
    if p >= 1 and n >= 1 and np.all(np.isfinite(A)):
        sv = np.linalg.svd(A, compute_uv=False)
        sigma_max = float(sv[0])
        sigma_min = float(sv[min(p, n) - 1])
        if sigma_max == 0.0:
            findings.append(("rank", "A is identically zero"))
            rank_estimate = 0
        else:
            rank_estimate = int(np.sum(sv > 1e-10 * sigma_max))
            if p <= n and sigma_min <= 1e-10 * sigma_max:
                findings.append(
                    ("rank",
                     f"rows are numerically dependent "
                     f"(sigma_min/sigma_max = {sigma_min / sigma_max:.3e})"))
    elif not np.all(np.isfinite(A)):
        findings.append(("value", "A contains non-finite entries"))
    return ValidationReport(ok=not findings, findings=findings,
                            sigma_max=sigma_max, sigma_min=sigma_min,
                            rank_estimate=rank_estimate)


@dataclass
class Residuals:
    """Embedding residuals at a point; norms are cached at construction.

    r_p = A x - tau b,  r_d = A' y + s - tau c,  r_g = b'y - c'x - kappa.
    """

    r_p: np.ndarray
    r_d: np.ndarray
    r_g: float
    rp_norm: float = field(init=False)
    rd_norm: float = field(init=False)
    rg_abs: float = field(init=False)

    def __post_init__(self):
        self.r_p = np.asarray(self.r_p, dtype=float)
        self.r_d = np.asarray(self.r_d, dtype=float)
        self.r_g = float(self.r_g)
        self.rp_norm = float(np.linalg.norm(self.r_p))
        self.rd_norm = float(np.linalg.norm(self.r_d))
        self.rg_abs = abs(self.r_g)


def compute_residuals(problem: SocpProblem, z) -> Residuals:
    """Residuals of the embedding at an HSD point z = (x, y, s, kappa, tau)."""
    problem.check_shapes()
    x = check_vector(z.x, problem.cones)
    s = check_vector(z.s, problem.cones)
    y = np.asarray(z.y, dtype=float).ravel()
    if y.shape != (problem.p,):
        raise DimensionMismatch(f"y has length {y.shape[0]}, expected {problem.p}")
    r_p = problem.A @ x - z.tau * problem.b
    r_d = problem.A.T @ y + s - z.tau * problem.c
    r_g = float(problem.b @ y - problem.c @ x - z.kappa)
    return Residuals(r_p, r_d, r_g)


def embed_residual_constants(problem: SocpProblem, z0, nu0: float = 1.0):
    """Normalized embedding constants of the start point.

    Returns (rt_p, rt_d, rt_g, beta_t) with
        rt_p = (A x0 - b tau0)/nu0,
        rt_d = (-A'y0 + c tau0 - s0)/nu0   (dual residual enters negated),
        rt_g = (b'y0 - c'x0 - kappa0)/nu0,
        beta_t = -(rt_p'y0 + rt_d'x0 + rt_g tau0).
    """
    if nu0 <= 0.0:
        raise ValueError("nu0 must be positive")
    res = compute_residuals(problem, z0)
    rt_p = res.r_p / nu0
    rt_d = -res.r_d / nu0
    rt_g = res.r_g / nu0
    beta_t = -(rt_p @ np.asarray(z0.y, dtype=float)
               + rt_d @ np.asarray(z0.x, dtype=float)
               + rt_g * z0.tau)
    return rt_p, rt_d, rt_g, float(beta_t)
