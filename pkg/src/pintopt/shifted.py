"""Inner solvers for complex-shifted spatial systems (sigma M + tau K) z = r.

Applying the rotated-block-diagonal preconditioner reduces, after the time
transform, to n independent spatial solves whose complex shifts sigma come
from the eigenvalues of the corner-perturbed difference matrix. Three
interchangeable backends are provided:

* :class:`DstShiftedSolver` - direct diagonalization by the orthonormal
  discrete sine transform; exact, but only valid for the constant unit
  diffusion coefficient (identity mass matrix, 5-point Laplacian).
* :class:`DenseShiftedSolver` - LU factorization of the dense shifted
  matrix; exact for any mass/stiffness pair, meant for small validation
  problems.
* the geometric multigrid backend in :mod:`pintopt.multigrid`.

Each backend exposes ``make(sigma) -> callable`` so the preconditioner can
reuse one prepared solver per distinct shift.
"""

import numpy as np
import scipy.linalg

from .transforms import dst2d


class DstShiftedSolver:
    """Sine-transform diagonalization of (sigma I + tau K), constant diffusion.

    For diffusion coefficient a = c the stiffness is c times the 5-point
    Laplacian with mesh width h = 1/(m1+1), whose eigenvalues are
    c (4 - 2 cos(i pi h) - 2 cos(j pi h)) / h^2; the orthonormal DST-I
    diagonalizes it, so each solve costs two transforms and one pointwise
    division.
    """

    def __init__(self, grid, diffusion=1.0):
        if diffusion <= 0:
            raise ValueError(f"diffusion constant must be positive, got {diffusion}")
        self.grid = grid
        m1, h = grid.m1, grid.h
        theta = 2.0 - 2.0 * np.cos(np.pi * h * np.arange(1, m1 + 1))
        self.laplacian_eigs = diffusion * (theta[:, None] + theta[None, :]).ravel() / h**2

    def make(self, sigma):
        denom = sigma + self.grid.tau * self.laplacian_eigs
        if np.min(np.abs(denom)) == 0.0:
            raise ValueError(f"shift {sigma} makes the system singular")

        def solve(rhs):
            return dst2d(dst2d(rhs) / denom)

        return solve


class DenseShiftedSolver:
    """LU-factorized dense solves of (sigma M + tau K) for arbitrary M, K."""

    def __init__(self, mass, stiffness, tau):
        self.mass = np.asarray(
            mass.toarray() if hasattr(mass, "toarray") else mass, dtype=float
        )
        self.stiffness = np.asarray(
            stiffness.toarray() if hasattr(stiffness, "toarray") else stiffness,
            dtype=float,
        )
        self.tau = float(tau)

    def make(self, sigma):
        mat = sigma * self.mass + self.tau * self.stiffness
        lu, piv = scipy.linalg.lu_factor(mat)

        def solve(rhs):
            return scipy.linalg.lu_solve((lu, piv), rhs)

        return solve
