"""Copositive optimization toolkit: completely-positive membership
testing and copositive cut generation via an analytic center cutting
plane method with a MILP copositivity oracle."""

from .linalg import mat, mat_adjoint, solve_pd, vec

__version__ = "0.1.0"

__all__ = [
    "vec",
    "mat",
    "mat_adjoint",
    "solve_pd",
    "__version__",
]
