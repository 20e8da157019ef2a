"""Path-following loop: parameters, iteration law, traces, statuses."""

import numpy as np
import pytest

import socpath as sp
from socpath import (
    HsdPoint,
    InvalidParams,
    MaxIterationsExceeded,
    SolverParams,
    StartOutsideNeighborhood,
)

from util import (
    cold_point,
    dual_infeasible_lp,
    feasible_problem,
    infeasible_lp,
    mixed_spec,
    soc_fixture,
    toy_lp,
)

NU_K3 = 0.9893933982822018
NU_K2 = 0.9877525512860841


def test_centering_nu_frozen():
    assert abs(sp.centering_nu(0.03, 3) - NU_K3) < 1e-15
    assert abs(sp.centering_nu(0.03, 2) - NU_K2) < 1e-15


def test_validate_params_default_pair():
    ok, margin = sp.validate_params(0.08, 0.03, 3)
    assert ok
    # margin = gamma - G with G frozen from the formula
    assert abs((0.08 - margin) - 0.05109597123679133) < 1e-15
    # admissible for every cone count from 1 up
    for k in (1, 2, 8, 32, 128, 1000):
        ok, _ = sp.validate_params(0.08, 0.03, k)
        assert ok


def test_validate_params_rejects_tiny_gamma():
    # the quadratic delta term keeps G above gamma as gamma -> 0
    ok, margin = sp.validate_params(1e-6, 0.03, 3)
    assert not ok
    assert margin < 0


def test_validate_params_rejects_large_gamma():
    ok, _ = sp.validate_params(0.32, 0.03, 3)
    assert not ok


class TestPredictedIterations:
    def test_frozen_k3(self):
        rng = np.random.default_rng(401)
        spec = sp.ConeSpec(l=1, soc_dims=(3, 4))
        assert spec.k == 3
        prob = feasible_problem(spec, 2, rng)
        params = SolverParams(epsilon=1e-6, delta=0.03)
        n_pred = sp.predicted_iterations(cold_point(prob), prob, params)
        assert n_pred == 1296

    def test_frozen_toy_lp(self):
        prob = toy_lp()
        params = SolverParams(epsilon=1e-6, delta=0.03)
        assert sp.predicted_iterations(cold_point(prob), prob, params) == 1122


def test_solver_params_validation():
    with pytest.raises(InvalidParams):
        SolverParams(gamma=0.0)
    with pytest.raises(InvalidParams):
        SolverParams(delta=1.5)
    with pytest.raises(InvalidParams):
        SolverParams(epsilon=2.0)
    with pytest.raises(InvalidParams):
        SolverParams(scaling="cholesky")
    with pytest.raises(InvalidParams):
        SolverParams(stop_mode="sometimes")
    with pytest.raises(InvalidParams):
        SolverParams(max_iterations=0)


class TestToyLp:
    def test_optimal_and_exact_count(self):
        prob = toy_lp()
        params = SolverParams(epsilon=1e-6)
        res = sp.solve(prob, cold_point(prob), params)
        assert res.status.status == "optimal"
        assert np.abs(res.status.x - np.array([0.0, 1.0])).max() < 1e-5
        assert abs(prob.c @ res.status.x) < 1e-5
        assert res.iterations == res.predicted == 1122

    def test_trace_contraction_and_neighborhood(self):
        prob = toy_lp()
        params = SolverParams(epsilon=1e-2)
        res = sp.solve(prob, cold_point(prob), params)
        tr = res.trace
        assert tr.neighborhood_violations == 0
        nu = sp.centering_nu(params.delta, prob.cones.k)
        prev = tr.start_mu
        for row in tr.rows:
            assert abs(row.mu - nu * prev) <= 1e-9 * prev
            prev = row.mu
            assert row.d2 <= params.gamma * row.mu + 1e-12
            assert row.lambda_min_x > 0 and row.lambda_min_s > 0
        assert len(tr.rows) == res.iterations

    def test_nt_same_iteration_count(self):
        prob = toy_lp()
        res_i = sp.solve(prob, cold_point(prob), SolverParams(epsilon=1e-2))
        res_nt = sp.solve(
            prob, cold_point(prob), SolverParams(epsilon=1e-2, scaling="nt")
        )
        assert res_i.iterations == res_nt.iterations


def test_infeasible_lp_certificate():
    prob = infeasible_lp()
    res = sp.solve(prob, cold_point(prob), SolverParams(epsilon=1e-6))
    assert res.status.status == "primal_infeasible"
    assert prob.b @ res.status.y > 0.0


def test_dual_infeasible_certificate():
    prob = dual_infeasible_lp()
    res = sp.solve(prob, cold_point(prob), SolverParams(epsilon=1e-6))
    assert res.status.status == "dual_infeasible"
    assert prob.c @ res.status.x < 0.0


def test_soc_fixture_solution():
    prob = soc_fixture()
    res = sp.solve(prob, cold_point(prob), SolverParams(epsilon=1e-6))
    assert res.status.status == "optimal"
    assert np.abs(res.status.x - np.array([1.0, 1.0, 0.0])).max() < 1e-5


def test_start_outside_neighborhood_rejected():
    prob = toy_lp()
    z = cold_point(prob)
    off = HsdPoint(
        x=np.array([50.0, 0.01]), y=z.y, s=z.s, kappa=z.kappa, tau=z.tau
    )
    with pytest.raises(StartOutsideNeighborhood):
        sp.solve(prob, off, SolverParams(epsilon=1e-2))


def test_max_iterations_cap():
    prob = toy_lp()
    with pytest.raises(MaxIterationsExceeded):
        sp.solve(prob, cold_point(prob), SolverParams(epsilon=1e-6, max_iterations=5))


def test_zero_initial_residuals_declared_satisfied():
    # start point feasible by construction: both residual norms are 0 and
    # only the mu criterion drives the loop
    rng = np.random.default_rng(419)
    spec = mixed_spec(rng)
    A = rng.standard_normal((2, spec.n))
    e = sp.unit_element(spec)
    prob = sp.SocpProblem(A=A, b=A @ e, c=e.copy(), cones=spec)
    start = cold_point(prob)
    r0 = sp.compute_residuals(prob, start)
    assert r0.rp_norm == 0.0 and r0.rd_norm == 0.0
    params = SolverParams(epsilon=1e-2)
    res = sp.solve(prob, start, params)
    assert res.iterations == sp.predicted_iterations(start, prob, params)
    assert res.status.status == "optimal"


def test_unified_stop_mode():
    prob = toy_lp()
    start = cold_point(prob)
    params = SolverParams(epsilon=1e-3, stop_mode="unified")
    res = sp.solve(prob, start, params)
    assert res.iterations == sp.predicted_iterations(start, prob, params)
    tr = res.trace
    last = tr.rows[-1]
    assert max(last.mu, last.rp_norm, last.rd_norm) <= 1e-3
    if len(tr.rows) > 1:
        prior = tr.rows[-2]
        assert max(prior.mu, prior.rp_norm, prior.rd_norm) > 1e-3


def test_collect_directions():
    prob = toy_lp()
    params = SolverParams(epsilon=0.5, collect_directions=True)
    res = sp.solve(prob, cold_point(prob), params)
    assert res.directions is not None
    assert len(res.directions) == res.iterations
    pre, direction, m = res.directions[0]
    assert isinstance(pre, HsdPoint)
    assert direction.dx.shape == (2,)
    assert m > 0


def test_mixed_cone_exact_reduction_both_scalings():
    rng = np.random.default_rng(431)
    spec = sp.ConeSpec(l=2, soc_dims=(3, 2))
    prob = feasible_problem(spec, 3, rng)
    for scaling in ("identity", "nt"):
        params = SolverParams(epsilon=1e-2, scaling=scaling)
        res = sp.solve(prob, cold_point(prob), params)
        nu = sp.centering_nu(params.delta, spec.k)
        tr = res.trace
        mu_prev, rp_prev, rd_prev = tr.start_mu, tr.start_rp_norm, tr.start_rd_norm
        for row in tr.rows:
            assert abs(row.mu - nu * mu_prev) <= 1e-9 * mu_prev
            assert abs(row.rp_norm - nu * rp_prev) <= 1e-9 * (1 + rp_prev)
            assert abs(row.rd_norm - nu * rd_prev) <= 1e-9 * (1 + rd_prev)
            mu_prev, rp_prev, rd_prev = row.mu, row.rp_norm, row.rd_norm
        assert tr.neighborhood_violations == 0
