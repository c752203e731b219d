"""Dense real matrix arithmetic: moduli-sorted eigenstructure, dominant
invariant subspaces, and rank decisions under an explicit tolerance policy.

All operations are pure and deterministic.  Matrices are plain float64 numpy
arrays; exact-rational (Fraction) arrays are only handled where a function
says so explicitly.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg


class SingularMatrix(Exception):
    """Matrix is singular (or numerically so) where invertibility is required."""


class NoGap(Exception):
    """Requested eigenvalue gap ties within tolerance; refusing to pick a flag piece."""


@dataclass(frozen=True)
class TolerancePolicy:
    """Numeric decision thresholds shared across the package.

    rank_rel_tol  - singular values below rank_rel_tol * sigma_1 count as zero
    gap_tie_tol   - |lam_k|/|lam_{k+1}| <= 1 + gap_tie_tol is treated as a tie
    cr_rel_tol    - relative slack for cross-ratio identities and comparisons
    """

    rank_rel_tol: float = 1e-9
    gap_tie_tol: float = 1e-9
    cr_rel_tol: float = 1e-8

    def __post_init__(self):
        for name in ("rank_rel_tol", "gap_tie_tol", "cr_rel_tol"):
            v = getattr(self, name)
            if not (0.0 < v < 1.0):
                raise ValueError(f"{name} must lie strictly between 0 and 1, got {v}")


DEFAULT_TOL = TolerancePolicy()


@dataclass(frozen=True)
class Spectrum:
    """Generalized eigenvalues of a matrix, sorted by non-increasing modulus.

    ``values`` keeps the complex eigenvalues (conjugate pairs adjacent),
    ``moduli`` their absolute values.  Multiplicities are implicit by
    repetition.
    """

    values: np.ndarray
    moduli: np.ndarray = field(init=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "moduli", np.abs(vals))

    @property
    def dim(self):
        return len(self.values)

    @property
    def log_moduli(self):
        return np.log(self.moduli)

    def log_gap(self, k):
        """log |lam_k / lam_{k+1}|, 1-based k."""
        if not 1 <= k <= self.dim - 1:
            raise IndexError(f"gap index k={k} out of range for dim {self.dim}")
        return float(np.log(self.moduli[k - 1]) - np.log(self.moduli[k]))

    def log_weight(self, k):
        """log of (lam_1...lam_k)/(lam_d...lam_{d-k+1}) in modulus."""
        lm = self.log_moduli
        return float(lm[:k].sum() - lm[self.dim - k:].sum())


def rank_tol(A, tol=DEFAULT_TOL):
    """Number of singular values above rank_rel_tol * sigma_1; 0 for the zero array."""
    A = np.asarray(A, dtype=float)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_rel_tol * s[0]))


def eig_sorted(M, tol=DEFAULT_TOL):
    """Spectrum of an invertible matrix, sorted by non-increasing modulus.

    Complex pairs appear as adjacent conjugates.  Ties in modulus are broken
    deterministically by decreasing real then decreasing imaginary part.
    """
    M = np.asarray(M, dtype=float)
    d = M.shape[0]
    if M.shape != (d, d) or d < 2:
        raise ValueError(f"expected a square matrix of size >= 2, got {M.shape}")
    if not np.all(np.isfinite(M)):
        raise SingularMatrix("matrix has non-finite entries")
    vals = np.linalg.eigvals(M)
    # images of long words are legitimately ill-conditioned, so only genuine
    # float-level rank collapse counts as singular here; graded rank
    # decisions belong to rank_tol, which operates on orthonormal bases
    if np.any(vals == 0) or not np.all(np.isfinite(vals)):
        raise SingularMatrix("matrix is singular at float precision")
    order = np.lexsort((-vals.imag, -vals.real, -np.abs(vals)))
    return Spectrum(vals[order])


def gap_ratio(spectrum, k):
    """|lam_k| / |lam_{k+1}| (1-based).  > 1 iff the element is k-proximal."""
    if not 1 <= k <= spectrum.dim - 1:
        raise IndexError(f"gap index k={k} out of range for dim {spectrum.dim}")
    return float(spectrum.moduli[k - 1] / spectrum.moduli[k])


def invariant_subspace_basis(M, k, tol=DEFAULT_TOL):
    """Orthonormal basis (d x k) of the dominant k-dimensional invariant subspace.

    This is the sum of the generalized eigenspaces for the k largest-modulus
    eigenvalues; it requires a genuine modulus gap at k and raises ``NoGap``
    on a tie.  For a k-proximal matrix this is its attracting k-plane.
    """
    M = np.asarray(M, dtype=float)
    d = M.shape[0]
    s = eig_sorted(M, tol)
    if gap_ratio(s, k) <= 1.0 + tol.gap_tie_tol:
        raise NoGap(f"|lam_{k}|/|lam_{k + 1}| = {gap_ratio(s, k)} ties within tolerance")
    # geometric-mean threshold lands strictly between the two moduli, so the
    # real Schur reordering can never split a conjugate pair
    thr = float(np.sqrt(s.moduli[k - 1] * s.moduli[k]))
    _, Z, sdim = scipy.linalg.schur(
        M, output="real", sort=lambda re, im: np.hypot(re, im) > thr
    )
    if sdim != k:
        raise NoGap(f"Schur reordering selected {sdim} eigenvalues, expected {k}")
    Q = np.ascontiguousarray(Z[:, :k])
    resid = np.linalg.norm(M @ Q - Q @ (Q.T @ M @ Q)) / max(np.linalg.norm(M @ Q), 1e-300)
    if resid > 1e-6:
        raise NoGap(f"invariant-subspace residual {resid:.2e} too large (near-tie)")
    return Q


def invariant_subspace_top(M, k, tol=DEFAULT_TOL):
    """Dominant k-dimensional invariant subspace of M as a Subspace."""
    from .grassmann import Subspace

    return Subspace(invariant_subspace_basis(M, k, tol))
