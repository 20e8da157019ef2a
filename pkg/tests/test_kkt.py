"""Newton system assembly, solve, and direction identities."""

import numpy as np
import pytest

import socpath as sp
from socpath import HsdPoint, ScalingMatrix, SingularSystem, SocpProblem
from socpath.kkt import increment_bound

from oracles import kkt_oracle
from util import interior_hsd_point, mixed_spec, random_problem, toy_lp

GAMMA, DELTA = 0.08, 0.03


def _setup(rng, p_rows=None):
    spec = mixed_spec(rng)
    p = p_rows or max(1, min(spec.n - 1, 3))
    prob = random_problem(spec, p, rng)
    z = interior_hsd_point(prob, rng)
    m = sp.mu(z, spec)
    nu = sp.centering_nu(DELTA, spec.k)
    return spec, prob, z, m, nu


def _pick_scaling(name, z, spec, rng):
    if name == "identity":
        return ScalingMatrix.identity(spec)
    if name == "nt":
        return sp.nt_scaling(z.x, z.s, spec)
    return sp.random_automorphism(spec, rng)


@pytest.mark.parametrize("scaling", ["identity", "nt", "random"])
def test_direction_matches_five_block_oracle(scaling):
    rng = np.random.default_rng(307)
    for _ in range(20):
        spec, prob, z, m, nu = _setup(rng)
        D = _pick_scaling(scaling, z, spec, rng)
        direction = sp.solve_direction(sp.assemble(prob, z, D, nu, m))
        ox, oy, os_, okap, otau = kkt_oracle(
            prob, z, D.matrix(), D.inverse_matrix(), nu, m
        )
        scale = 1 + max(np.abs(ox).max(), np.abs(os_).max(), abs(okap), abs(otau))
        assert np.abs(direction.dx - ox).max() < 1e-10 * scale
        assert np.abs(direction.dy - oy).max() < 1e-10 * scale
        assert np.abs(direction.ds - os_).max() < 1e-10 * scale
        assert abs(direction.dkappa - okap) < 1e-10 * scale
        assert abs(direction.dtau - otau) < 1e-10 * scale


@pytest.mark.parametrize("scaling", ["identity", "nt"])
def test_direction_satisfies_row_equations(scaling):
    """The five defining equations, rebuilt literally."""
    rng = np.random.default_rng(311)
    for _ in range(20):
        spec, prob, z, m, nu = _setup(rng)
        D = _pick_scaling(scaling, z, spec, rng)
        d = sp.solve_direction(sp.assemble(prob, z, D, nu, m))
        A, b, c = prob.A, prob.b, prob.c
        one = 1.0 - nu
        tol = 1e-10 * (1 + m)

        r1 = A @ d.dx - b * d.dtau + one * (A @ z.x - z.tau * b)
        assert np.abs(r1).max() < tol

        r2 = -A.T @ d.dy + c * d.dtau - d.ds + one * (-A.T @ z.y + z.tau * c - z.s)
        assert np.abs(r2).max() < tol

        r3 = b @ d.dy - c @ d.dx - d.dkappa + one * (b @ z.y - c @ z.x - z.kappa)
        assert abs(r3) < tol

        Dm, Dinv = D.matrix(), D.inverse_matrix()
        xbar, sbar = Dinv.T @ z.x, Dm @ z.s
        lhs = sp.jordan_product(sbar, Dinv.T @ d.dx, spec) + sp.jordan_product(
            xbar, Dm @ d.ds, spec
        )
        rhs = nu * m * sp.unit_element(spec) - sp.jordan_product(xbar, sbar, spec)
        assert np.abs(lhs - rhs).max() < tol

        assert abs(z.kappa * d.dtau + z.tau * d.dkappa - (nu * m - z.kappa * z.tau)) < tol


def test_solve_diagnostics_bounds():
    rng = np.random.default_rng(313)
    for _ in range(30):
        spec, prob, z, m, nu = _setup(rng)
        d = sp.solve_direction(sp.assemble(prob, z, ScalingMatrix.identity(spec), nu, m))
        assert d.system_residual <= 1e-10
        assert d.orthogonality_defect <= 1e-9 * (spec.k + 1) * m


def test_orthogonality_identity():
    rng = np.random.default_rng(317)
    for scaling in ("identity", "nt"):
        for _ in range(20):
            spec, prob, z, m, nu = _setup(rng)
            D = _pick_scaling(scaling, z, spec, rng)
            d = sp.solve_direction(sp.assemble(prob, z, D, nu, m))
            assert abs(d.dx @ d.ds + d.dkappa * d.dtau) <= 1e-9 * (spec.k + 1) * m


def test_fractional_step_contraction():
    rng = np.random.default_rng(331)
    for _ in range(20):
        spec, prob, z, m, nu = _setup(rng)
        d = sp.solve_direction(sp.assemble(prob, z, ScalingMatrix.identity(spec), nu, m))
        r0 = sp.compute_residuals(prob, z)
        for alpha in (0.25, 0.5, 1.0):
            za = sp.step_point(z, d, alpha)
            ra = sp.compute_residuals(prob, za)
            f = 1.0 - (1.0 - nu) * alpha
            assert np.abs(ra.r_p - f * r0.r_p).max() <= 1e-10 * (1 + r0.rp_norm)
            assert np.abs(ra.r_d - f * r0.r_d).max() <= 1e-10 * (1 + r0.rd_norm)
            assert abs(ra.r_g - f * r0.r_g) <= 1e-10 * (1 + r0.rg_abs)
            assert abs(sp.mu(za, spec) - f * m) <= 1e-10 * (1 + m)


def test_centered_pure_centering_gives_zero_direction():
    rng = np.random.default_rng(337)
    for _ in range(10):
        spec = mixed_spec(rng)
        prob = random_problem(spec, 2, rng)
        z = interior_hsd_point(prob, rng, centered=True)
        m = sp.mu(z, spec)
        d = sp.solve_direction(sp.assemble(prob, z, ScalingMatrix.identity(spec), 1.0, m))
        scale = max(1.0, np.abs(z.x).max())
        for part in (d.dx, d.dy, d.ds):
            assert np.abs(part).max() < 1e-11 * scale
        assert abs(d.dkappa) < 1e-11 * scale
        assert abs(d.dtau) < 1e-11 * scale


def test_nu_one_zeroes_affine_rows():
    rng = np.random.default_rng(347)
    spec, prob, z, m, _ = _setup(rng)
    system = sp.assemble(prob, z, ScalingMatrix.identity(spec), 1.0, m)
    # the primal and dual row blocks carry a (1-nu) factor
    assert np.abs(system.rhs[system.row_blocks["primal"]]).max() == 0.0
    assert np.abs(system.rhs[system.row_blocks["dual"]]).max() == 0.0


def test_scaling_equivalence_with_transformed_problem():
    """Direction under D equals the identity-scaling direction of the
    transformed data (A D^T, b, Dc) at the scaled point, mapped back."""
    rng = np.random.default_rng(349)
    for _ in range(20):
        spec, prob, z, m, nu = _setup(rng)
        D = sp.random_automorphism(spec, rng)
        d = sp.solve_direction(sp.assemble(prob, z, D, nu, m))

        Dm, Dinv = D.matrix(), D.inverse_matrix()
        tprob = SocpProblem(
            A=prob.A @ Dm.T, b=prob.b, c=Dm @ prob.c, cones=spec
        )
        tz = HsdPoint(
            x=Dinv.T @ z.x, y=z.y, s=Dm @ z.s, kappa=z.kappa, tau=z.tau
        )
        td = sp.solve_direction(
            sp.assemble(tprob, tz, ScalingMatrix.identity(spec), nu, m)
        )
        back_dx = Dm.T @ td.dx
        back_ds = Dinv @ td.ds
        scale = 1 + max(np.abs(d.dx).max(), np.abs(d.ds).max())
        assert np.abs(back_dx - d.dx).max() < 1e-9 * scale
        assert np.abs(td.dy - d.dy).max() < 1e-9 * scale
        assert np.abs(back_ds - d.ds).max() < 1e-9 * scale
        assert abs(td.dtau - d.dtau) < 1e-9 * scale
        assert abs(td.dkappa - d.dkappa) < 1e-9 * scale


def test_singular_system_raises():
    # duplicated constraint rows make the embedding singular
    spec = sp.ConeSpec(l=2, soc_dims=())
    prob = SocpProblem(
        A=np.array([[1.0, 1.0], [1.0, 1.0]]),
        b=np.array([1.0, 1.0]),
        c=np.array([1.0, 0.0]),
        cones=spec,
    )
    z = sp.cold_start(spec, p=2)
    m = sp.mu(z, spec)
    nu = sp.centering_nu(DELTA, spec.k)
    with pytest.raises(SingularSystem):
        sp.solve_direction(sp.assemble(prob, z, ScalingMatrix.identity(spec), nu, m))


def test_increment_bound_frozen():
    # 2*sqrt(gamma^2/2 + delta^2/2)/(1-3*gamma); the cone-count term cancels
    got = increment_bound(0.08, 0.03, 3)
    assert abs(got - 0.15898744702098121) < 1e-15
    assert abs(increment_bound(0.08, 0.03, 12) - got) < 1e-15


def test_scaled_increment_diagnostics_on_toy_lp():
    prob = toy_lp()
    spec = prob.cones
    z = sp.cold_start(spec, p=1)
    m = sp.mu(z, spec)
    nu = sp.centering_nu(DELTA, spec.k)
    d = sp.solve_direction(sp.assemble(prob, z, ScalingMatrix.identity(spec), nu, m))
    nx, ns, bound = sp.scaled_increment_diagnostics(z, d, spec, GAMMA, DELTA)
    assert nx <= bound / 2.0
    assert ns <= bound * m
