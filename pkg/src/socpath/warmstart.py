"""Warm-start construction between neighboring problem instances.

A previous primal-dual pair (x_o, y_o, s_o) is blended with the cold
start along omega in [0,1]; the diagnostics quantify how the blend's
residuals, duality gap, and centrality relate to a cold start on the
new instance, and bound the iteration savings under the unified stop
criterion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np

from .cones import ConeSpec, check_vector, membership, unit_element, w_vector
from .errors import (ConeSpecMismatch, DimensionMismatch, EmptyAdmissibleSet,
                     NotInterior)
from .geometry import HsdPoint
from .problem import SocpProblem
from .solver import centering_nu

OMEGA_GRID = 1e-4


def cold_start(spec: ConeSpec, p: int = 0) -> HsdPoint:
    """The canonical start (e, 0, e, 1, 1); `p` sizes the dual vector."""
    e = unit_element(spec)
    return HsdPoint(e, np.zeros(p), e.copy(), kappa=1.0, tau=1.0)


def warm_start_point(prev, omega: float, spec: ConeSpec,
                     p: Optional[int] = None) -> HsdPoint:
    """Blend of the previous pair with the cold start at weight omega.

    kappa is set to x_w's_w/k and tau to 1, which puts the blend's
    kappa*tau coordinate exactly at its own mu.
    """
    x_o, y_o, s_o = prev
    x_o = check_vector(x_o, spec)
    s_o = check_vector(s_o, spec)
    y_o = np.asarray(y_o, dtype=float).ravel()
    if p is not None and y_o.shape != (p,):
        raise DimensionMismatch(f"y_o has length {y_o.shape[0]}, expected {p}")
    if not (0.0 <= omega <= 1.0):
        raise ValueError("omega must lie in [0,1]")
    if not membership(x_o, spec) or not membership(s_o, spec):
        raise NotInterior("previous pair must lie in the cone")
    if omega == 1.0 and not (membership(x_o, spec, strict=True)
                             and membership(s_o, spec, strict=True)):
        raise NotInterior("omega=1 requires a strictly interior previous pair")
    e = unit_element(spec)
    x_w = omega * x_o + (1.0 - omega) * e
    s_w = omega * s_o + (1.0 - omega) * e
    kappa = float(x_w @ s_w) / spec.k
    return HsdPoint(x_w, omega * y_o, s_w, kappa=kappa, tau=1.0)


@dataclass
class _DiagnosticsCore:
    """Omega-independent ingredients of the diagnostics."""

    spec: ConeSpec
    k: int
    gamma: float
    delta: float
    c_a: float
    c_b: float
    c_p: float
    c_at: float
    c_c: float
    c_d: float
    primal_vacuous: bool
    dual_vacuous: bool
    mu_o: float
    psi_o: float
    gamma_o: float
    dev_norm: float        # ||(x_o+s_o) - psi_o e||
    s_o_norm: float
    soc_first: np.ndarray  # first components of SOC blocks with nonzero tail
    soc_beta: np.ndarray   # their beta values

    def rho_at(self, omega: float) -> Tuple[float, float]:
        """(clamped rho, raw signed value) of the tail-projector bound."""
        if self.soc_first.size == 0:
            return 0.0, 0.0
        x1, beta_o = self.soc_first, self.soc_beta
        beta_w = np.sqrt(omega * omega * beta_o * beta_o
                         + 2.0 * omega * (1.0 - omega) * x1
                         + (1.0 - omega) ** 2)
        frac = (2.0 * omega * x1 + 1.0 - omega) / (beta_w + omega * beta_o)
        raw = float(np.max(1.0 - frac))
        return max(0.0, float(np.max(frac - 1.0))), raw

    def evaluate(self, omega: float) -> "WarmStartDiagnostics":
        rho, rho_raw = self.rho_at(omega)
        bracket = self.dev_norm + rho * self.s_o_norm
        xi_o = math.sqrt(2.0) * bracket - self.gamma * self.psi_o
        xi_o_raw = bracket - self.gamma * self.psi_o
        infeasible = False
        if xi_o <= 0.0:
            omega_min: Optional[float] = 0.0
        elif self.gamma > self.gamma_o:
            omega_min = xi_o / (xi_o + (self.gamma - self.gamma_o) * self.mu_o)
        else:
            omega_min = None
            infeasible = True
        c_xs = (1.0 - omega) * (self.psi_o + 1.0)
        bounds: List[float] = []
        conditions_hold = True
        if not self.primal_vacuous:
            if self.c_a + self.c_b + self.c_p <= 1.0:
                bounds.append(1.0 - omega * (1.0 - (self.c_a + self.c_b + self.c_p)))
            else:
                conditions_hold = False
        if not self.dual_vacuous:
            if self.c_at + self.c_c + self.c_d <= 1.0:
                bounds.append(1.0 - omega * (1.0 - (self.c_at + self.c_c + self.c_d)))
            else:
                conditions_hold = False
        if self.mu_o + c_xs <= 1.0:
            bounds.append(omega * omega * self.mu_o + c_xs)
        else:
            conditions_hold = False
        c_w = max(bounds) if (conditions_hold and bounds) else math.inf
        nu = centering_nu(self.delta, self.k)
        if conditions_hold and 0.0 < c_w < 1.0:
            predicted_saving = math.floor(-math.log(c_w) / (-math.log(nu)))
        else:
            predicted_saving = 0
        return WarmStartDiagnostics(
            c_a=self.c_a, c_b=self.c_b, c_p=self.c_p,
            c_at=self.c_at, c_c=self.c_c, c_d=self.c_d,
            c_mu=self.mu_o, c_xs=c_xs,
            psi_o=self.psi_o, rho=rho, rho_raw=rho_raw,
            xi_o=xi_o, xi_o_raw=xi_o_raw,
            omega_min=omega_min, infeasible=infeasible,
            gamma_o=self.gamma_o, c_w=c_w,
            predicted_saving=predicted_saving,
            primal_vacuous=self.primal_vacuous,
            dual_vacuous=self.dual_vacuous,
            conditions_hold=conditions_hold,
            gamma=self.gamma, delta=self.delta, omega_eval=omega,
            _core=self)


@dataclass
class WarmStartDiagnostics:
    """Sufficient-condition constants evaluated at a stated omega.

    rho and xi_o carry the clamped values used by the admissibility
    dichotomy; the raw signed evaluations are reported alongside.
    omega_min is None exactly when `infeasible` is set (gamma <= gamma_o
    with xi_o > 0).
    """

    c_a: float
    c_b: float
    c_p: float
    c_at: float
    c_c: float
    c_d: float
    c_mu: float
    c_xs: float
    psi_o: float
    rho: float
    rho_raw: float
    xi_o: float
    xi_o_raw: float
    omega_min: Optional[float]
    infeasible: bool
    gamma_o: float
    c_w: float
    predicted_saving: int
    primal_vacuous: bool
    dual_vacuous: bool
    conditions_hold: bool
    gamma: float
    delta: float
    omega_eval: float
    _core: Optional[_DiagnosticsCore] = field(default=None, repr=False)

    def at_omega(self, omega: float) -> "WarmStartDiagnostics":
        return self._core.evaluate(omega)


def _pair_centrality(x_o, s_o, spec: ConeSpec) -> Tuple[float, float]:
    """(mu, gamma) of a primal-dual pair; inf when not strictly interior."""
    mu_o = float(x_o @ s_o) / spec.k
    if not (membership(x_o, spec, strict=True)
            and membership(s_o, spec, strict=True)):
        return mu_o, math.inf
    w = w_vector(x_o, s_o, spec)
    dev = w - mu_o * unit_element(spec)
    d2_pair = math.sqrt(2.0) * float(np.linalg.norm(dev))
    return mu_o, d2_pair / mu_o


def diagnostics(prev_p: SocpProblem, new_p: SocpProblem, prev,
                gamma: float, omega_eval: float = 1.0,
                delta: float = 0.03) -> WarmStartDiagnostics:
    """Evaluate the warm-start sufficient conditions at omega_eval.

    `prev` is the previous instance's pair (x_o, y_o, s_o), already
    scaled back from the embedding (tau divided out).  delta feeds the
    contraction rate used for predicted_saving.
    """
    if prev_p.cones != new_p.cones:
        raise ConeSpecMismatch("problems must share a cone structure")
    prev_p.check_shapes()
    new_p.check_shapes()
    if prev_p.A.shape != new_p.A.shape:
        raise DimensionMismatch("problems must share matrix dimensions")
    if not (0.0 <= omega_eval <= 1.0):
        raise ValueError("omega_eval must lie in [0,1]")
    spec = new_p.cones
    x_o, y_o, s_o = prev
    x_o = check_vector(x_o, spec)
    s_o = check_vector(s_o, spec)
    y_o = np.asarray(y_o, dtype=float).ravel()
    if y_o.shape != (new_p.p,):
        raise DimensionMismatch(f"y_o has length {y_o.shape[0]}, expected {new_p.p}")

    dA = new_p.A - prev_p.A
    db = new_p.b - prev_p.b
    dc = new_p.c - prev_p.c
    dA_norm = float(np.linalg.norm(dA, 2)) if np.any(dA) else 0.0
    e = unit_element(spec)
    rp_cold = float(np.linalg.norm(new_p.A @ e - new_p.b))
    rd_cold = float(np.linalg.norm(e - new_p.c))
    rp_prev = float(np.linalg.norm(prev_p.A @ x_o - prev_p.b))
    rd_prev = float(np.linalg.norm(prev_p.A.T @ y_o + s_o - prev_p.c))

    primal_vacuous = rp_cold == 0.0
    if primal_vacuous:
        c_a = c_b = c_p = 0.0
    else:
        c_a = dA_norm * float(np.linalg.norm(x_o)) / rp_cold
        c_b = float(np.linalg.norm(db)) / rp_cold
        c_p = rp_prev / rp_cold
    dual_vacuous = rd_cold == 0.0
    if dual_vacuous:
        c_at = c_c = c_d = 0.0
    else:
        c_at = dA_norm * float(np.linalg.norm(y_o)) / rd_cold
        c_c = float(np.linalg.norm(dc)) / rd_cold
        c_d = rd_prev / rd_cold

    mu_o, gamma_o = _pair_centrality(x_o, s_o, spec)
    psi_o = float(e @ (x_o + s_o)) / spec.k
    dev_norm = float(np.linalg.norm((x_o + s_o) - psi_o * e))
    soc_first = []
    soc_beta = []
    for o, d in spec.blocks:
        if d == 1:
            continue
        tail = x_o[o + 1:o + d]
        t = float(np.linalg.norm(tail))
        if t == 0.0:
            continue
        soc_first.append(x_o[o])
        soc_beta.append(math.sqrt((x_o[o] - t) * (x_o[o] + t)))
    core = _DiagnosticsCore(
        spec=spec, k=spec.k, gamma=gamma, delta=delta,
        c_a=c_a, c_b=c_b, c_p=c_p, c_at=c_at, c_c=c_c, c_d=c_d,
        primal_vacuous=primal_vacuous, dual_vacuous=dual_vacuous,
        mu_o=mu_o, psi_o=psi_o, gamma_o=gamma_o,
        dev_norm=dev_norm, s_o_norm=float(np.linalg.norm(s_o)),
        soc_first=np.asarray(soc_first), soc_beta=np.asarray(soc_beta))
    return core.evaluate(omega_eval)


def _admissible(d: WarmStartDiagnostics) -> bool:
    if d.infeasible or not d.conditions_hold or not d.c_w < 1.0:
        return False
    return d.omega_eval >= d.omega_min


def choose_omega(diag: WarmStartDiagnostics,
                 policy: Union[str, float] = "max-admissible") -> float:
    """Select the blend weight from evaluated diagnostics.

    "max-admissible" scans a 1e-4 grid downward from 1, re-evaluating
    the omega-dependent quantities at each candidate; a float is treated
    as a fixed request and clamped into [omega_min, 1].
    """
    if isinstance(policy, str):
        if policy != "max-admissible":
            raise ValueError(f"unknown policy {policy!r}")
        steps = int(round(1.0 / OMEGA_GRID))
        for i in range(steps + 1):
            omega = max(0.0, 1.0 - i * OMEGA_GRID)
            if _admissible(diag.at_omega(omega)):
                return omega
        raise EmptyAdmissibleSet("no omega on the grid is admissible")
    omega = float(policy)
    if not np.isfinite(omega):
        raise ValueError("fixed omega must be finite")
    if diag.infeasible:
        raise EmptyAdmissibleSet(
            "gamma does not exceed the previous solution's centrality")
    return min(1.0, max(diag.omega_min, omega))
