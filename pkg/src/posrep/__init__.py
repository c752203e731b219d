"""Desk-scale numerical certification for surface-group representations into PGL(d,R).

The package builds representations (Fuchsian loci from symmetric powers of an
explicit hyperbolic holonomy, their deformations, and an explicit 4x4 family of
Z-representations), samples their boundary flags through eigenspace dynamics,
and runs sampled certificates for the structural properties of such
representations: eigenvalue gaps, transversality, hyperconvexity, the H_k/C_k
transversality conditions, total positivity of flag tuples, positively ratioed
cross ratios, and the root-versus-weight collar inequality.
"""

from . import numlin, grassmann, positivity, groups, reps, checkers

__all__ = ["numlin", "grassmann", "positivity", "groups", "reps", "checkers"]
__version__ = "0.1.0"
