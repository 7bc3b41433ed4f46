"""Matrix-free parallel-in-time solver for parabolic tracking-type control.

The package discretizes the coupled first-order optimality system of a
distributed control problem (backward Euler in time, 5-point finite
differences in space), solves the resulting all-at-once saddle-point system
with preconditioned GMRES, and ships a dense validation suite for the
spectral claims behind the preconditioner along with a benchmark CLI.
"""

__version__ = "1.0.0"
