"""Central-path geometry of the homogeneous self-dual embedding.

Points carry (x, y, s, kappa, tau); the complementarity parameter is
mu = (x's + kappa tau)/(k+1) and centrality is measured through the
scaled product point w = T_x s together with the kappa*tau coordinate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .cones import (ConeSpec, check_vector, membership, spectral_bounds,
                    unit_element, w_vector)
from .errors import InvalidPoint, NotInterior
from .problem import SocpProblem


@dataclass
class HsdPoint:
    x: np.ndarray
    y: np.ndarray
    s: np.ndarray
    kappa: float
    tau: float

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float).ravel()
        self.y = np.asarray(self.y, dtype=float).ravel()
        self.s = np.asarray(self.s, dtype=float).ravel()
        self.kappa = float(self.kappa)
        self.tau = float(self.tau)

    def copy(self) -> "HsdPoint":
        return HsdPoint(self.x.copy(), self.y.copy(), self.s.copy(),
                        self.kappa, self.tau)


@dataclass
class HatPoint:
    """Embedding variables with tau appended to x and kappa to s.

    `spec` is the hat cone: the original spec plus one trailing
    1-dimensional block.
    """

    x_hat: np.ndarray
    y: np.ndarray
    s_hat: np.ndarray
    spec: ConeSpec


@dataclass(frozen=True)
class NeighborhoodParams:
    gamma: float
    flavor: str = "2"

    def __post_init__(self):
        if not (0.0 < self.gamma < 1.0):
            raise ValueError("gamma must lie in (0,1)")
        if self.flavor not in ("2", "inf"):
            raise ValueError("flavor must be '2' or 'inf'")


def mu(z: HsdPoint, spec: ConeSpec) -> float:
    x = check_vector(z.x, spec)
    s = check_vector(z.s, spec)
    return float((x @ s + z.kappa * z.tau) / (spec.k + 1))


def d2(z: HsdPoint, spec: ConeSpec) -> float:
    """Euclidean centrality distance sqrt(2)*||(w, kappa tau) - mu*(e, 1)||."""
    m = mu(z, spec)
    w = w_vector(z.x, z.s, spec)
    dev = w - m * unit_element(spec)
    extra = z.kappa * z.tau - m
    return math.sqrt(2.0) * math.sqrt(float(dev @ dev) + extra * extra)


def dinf(z: HsdPoint, spec: ConeSpec) -> float:
    """Worst spectral deviation of (w, kappa tau) from mu."""
    m = mu(z, spec)
    w = w_vector(z.x, z.s, spec)
    bounds = spectral_bounds(w, spec)
    worst = float(np.max(np.abs(bounds - m)))
    return max(worst, abs(z.kappa * z.tau - m))


def in_neighborhood(z: HsdPoint, spec: ConeSpec,
                    params: NeighborhoodParams) -> bool:
    """Membership in N_2(gamma) or N_inf(gamma); non-interior points are out."""
    if z.kappa <= 0.0 or z.tau <= 0.0:
        return False
    if not membership(z.x, spec, strict=True):
        return False
    if not membership(z.s, spec, strict=True):
        return False
    dist = d2(z, spec) if params.flavor == "2" else dinf(z, spec)
    return dist <= params.gamma * mu(z, spec)


@dataclass
class Classification:
    """Terminal status with the associated payload.

    status 'optimal': x, y, s hold the tau-scaled solution.
    status 'primal_infeasible': y, s hold the dual ray (b'y > 0).
    status 'dual_infeasible': x holds the primal ray (c'x < 0, Ax ~ 0).
    status 'ill_posed': no certificate at this accuracy.
    """

    status: str
    x: Optional[np.ndarray] = None
    y: Optional[np.ndarray] = None
    s: Optional[np.ndarray] = None


def classify_status(z: HsdPoint, problem: SocpProblem,
                    eps: float) -> Classification:
    """Terminal dichotomy on (tau, kappa) at accuracy eps."""
    if z.tau <= 0.0 and z.kappa <= 0.0:
        raise InvalidPoint("tau and kappa are both nonpositive")
    if z.tau >= eps * max(1.0, z.kappa):
        return Classification("optimal", z.x / z.tau, z.y / z.tau, z.s / z.tau)
    if problem.b @ z.y > 0.0:
        return Classification("primal_infeasible", y=z.y.copy(), s=z.s.copy())
    if problem.c @ z.x < 0.0:
        return Classification("dual_infeasible", x=z.x.copy())
    return Classification("ill_posed")


def hat_pack(z: HsdPoint, spec: ConeSpec) -> HatPoint:
    x_hat = np.r_[check_vector(z.x, spec), z.tau]
    s_hat = np.r_[check_vector(z.s, spec), z.kappa]
    return HatPoint(x_hat, np.asarray(z.y, dtype=float).copy(), s_hat, spec.hat())


def hat_unpack(hp: HatPoint) -> HsdPoint:
    n = hp.spec.n - 1
    return HsdPoint(hp.x_hat[:n], hp.y, hp.s_hat[:n],
                    kappa=hp.s_hat[n], tau=hp.x_hat[n])
