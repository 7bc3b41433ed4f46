"""Tests for the left-preconditioned GMRES driver.

Oracles: numpy.linalg.solve on small dense systems, recomputed true
residuals, and the certified field-of-values contraction bound checked
against actual runs on synthetic normal matrices that sit exactly on the
premise boundary.
"""

import numpy as np
import pytest

from pintopt.discretize import TimeSpaceGrid, assemble_rhs, build_stiffness
from pintopt.gmres import SolveReport, gmres_solve
from pintopt.operators import AllAtOnceOperator
from pintopt.problems import get_problem
from pintopt.rbd import RbdEpsPreconditioner, choose_epsilon, contraction_factor
from pintopt.shifted import DstShiftedSolver


def test_identity_converges_in_one_iteration():
    b = np.arange(1.0, 9.0)
    report = gmres_solve(lambda v: v, b, tol=1e-12)
    assert report.converged and report.iterations == 1
    assert np.max(np.abs(report.x - b)) < 1e-12


def test_exact_preconditioner_converges_in_one_iteration():
    rng = np.random.default_rng(0)
    A = np.eye(6) + 0.3 * rng.standard_normal((6, 6))
    inv = np.linalg.inv(A)
    b = rng.standard_normal(6)
    report = gmres_solve(lambda v: A @ v, b, apply_prec=lambda v: inv @ v, tol=1e-10)
    assert report.converged and report.iterations == 1


def test_dense_spd_system_matches_direct_solve():
    rng = np.random.default_rng(1)
    Q = rng.standard_normal((10, 10))
    A = Q @ Q.T + 10 * np.eye(10)
    b = rng.standard_normal(10)
    report = gmres_solve(lambda v: A @ v, b, tol=1e-12)
    want = np.linalg.solve(A, b)
    assert report.converged
    assert np.max(np.abs(report.x - want)) < 1e-8 * np.max(np.abs(want))


def test_reported_residual_matches_recomputed_residual():
    rng = np.random.default_rng(2)
    A = np.eye(12) + 0.5 * rng.standard_normal((12, 12))
    b = rng.standard_normal(12)
    report = gmres_solve(lambda v: A @ v, b, tol=1e-9)
    true_res = np.linalg.norm(b - A @ report.x)
    assert abs(true_res - report.residuals[-1]) < 1e-8 * report.residuals[0]


def test_krylov_basis_orthonormal():
    rng = np.random.default_rng(3)
    A = np.eye(30) + 0.4 * rng.standard_normal((30, 30))
    b = rng.standard_normal(30)
    report = gmres_solve(lambda v: A @ v, b, tol=1e-10, keep_basis=True)
    V = report.basis
    gram = V.T @ V
    assert np.max(np.abs(gram - np.eye(V.shape[1]))) < 1e-10


def test_residual_history_monotone_and_sized():
    rng = np.random.default_rng(4)
    A = np.eye(25) + 0.6 * rng.standard_normal((25, 25))
    b = rng.standard_normal(25)
    report = gmres_solve(lambda v: A @ v, b, tol=1e-10)
    res = np.asarray(report.residuals)
    assert res.size == report.iterations + 1
    assert np.all(res[1:] <= res[:-1] * (1 + 1e-12))
    assert res[-1] <= 1e-10 * res[0]


def test_maxit_reached_reports_unconverged():
    rng = np.random.default_rng(5)
    A = np.eye(40) + rng.standard_normal((40, 40))
    b = rng.standard_normal(40)
    report = gmres_solve(lambda v: A @ v, b, tol=1e-14, maxit=5)
    assert not report.converged and report.iterations == 5
    assert len(report.residuals) == 6


def test_happy_breakdown_on_low_degree_minimal_polynomial():
    # three distinct eigenvalues: exact solution inside three iterations
    d = np.repeat([1.0, 2.0, 5.0], 6)
    b = np.ones(18)
    report = gmres_solve(lambda v: d * v, b, tol=1e-13)
    assert report.converged and report.iterations <= 3
    assert np.max(np.abs(report.x - b / d)) < 1e-12


def test_zero_rhs_returns_zero():
    report = gmres_solve(lambda v: 2 * v, np.zeros(7))
    assert report.converged and report.iterations == 0
    assert np.array_equal(report.x, np.zeros(7))


def test_rejects_complex_rhs():
    with pytest.raises(TypeError):
        gmres_solve(lambda v: v, np.ones(3) + 1j)


@pytest.mark.parametrize("delta", [0.3, 0.6, 0.9])
def test_contraction_bound_holds_on_premise_boundary(delta):
    # normal block matrix with symmetric part exactly (1 - delta) I and
    # spectral norm exactly sqrt(2) (1 + delta/2): every GMRES run on it
    # must contract at least as fast as the certified factor per step
    a = 1.0 - delta
    c_max = np.sqrt(2.0 * (1.0 + delta / 2.0) ** 2 - a**2)
    blocks = 40
    speeds = c_max * (np.arange(1, blocks + 1) / blocks)

    def apply_op(v):
        V = v.reshape(blocks, 2)
        out = np.empty_like(V)
        out[:, 0] = a * V[:, 0] + speeds * V[:, 1]
        out[:, 1] = -speeds * V[:, 0] + a * V[:, 1]
        return out.reshape(-1)

    rng = np.random.default_rng(int(10 * delta))
    b = rng.standard_normal(2 * blocks)
    report = gmres_solve(apply_op, b, tol=1e-10, maxit=70)
    rho = contraction_factor(delta)
    res = np.asarray(report.residuals)
    bound = res[0] * rho ** np.arange(res.size)
    assert np.all(res <= bound * (1 + 1e-10))


def test_full_stack_small_problem_converges():
    grid = TimeSpaceGrid(m1=7, n=8)
    problem = get_problem("example1", gamma=1e-6)
    ops = build_stiffness(grid, problem.a)
    op = AllAtOnceOperator(grid, ops, problem.gamma)
    pc = RbdEpsPreconditioner(
        grid, problem.gamma, choose_epsilon(grid), inner=DstShiftedSolver(grid)
    )
    b = assemble_rhs(problem, grid, ops)
    report = gmres_solve(op.matvec, b, apply_prec=pc.apply_inverse, tol=1e-6)
    assert report.converged
    assert 0 < report.iterations < 20
    # the reported preconditioned residual matches a recomputation
    true_res = np.linalg.norm(pc.apply_inverse(b - op.matvec(report.x)))
    assert abs(true_res - report.residuals[-1]) < 1e-8 * report.residuals[0]
    assert isinstance(report, SolveReport)
