"""Subspaces, flags, transversality, the generalized cross ratio, quotients,
and exterior-power functors on R^d.

Cross ratios are computed internally as (sign, log-magnitude) pairs so that
determinant ratios of matrices far beyond float range still come out right;
the public value is the exponentiated signed real with 0/inf sentinels.
"""

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from .numlin import DEFAULT_TOL, rank_tol, gap_ratio, NoGap

__all__ = [
    "Subspace", "Flag", "QuotientMap", "DimMismatch", "DimOverflow", "NotInDomain",
    "transverse", "meet", "sum_direct", "wedge_vol",
    "cross_ratio_k", "cross_ratio_k_signlog", "cr_period_expected",
    "quotient", "push", "ext_power_matrix", "ext_power_subspace",
    "plucker_pairing", "invariant_subspace_top",
]

from .numlin import invariant_subspace_top  # noqa: F401  (re-export; computed there)


class DimMismatch(Exception):
    """Subspace dimensions do not fit the operation."""


class DimOverflow(Exception):
    """Combined dimension exceeds the ambient dimension."""


class NotInDomain(Exception):
    """Cross-ratio argument violates both admissible transversality patterns."""


class Subspace:
    """A k-plane in R^d, stored as an orthonormal d x k basis.

    Construction orthonormalizes the given spanning columns by SVD and
    decides the dimension with ``rank_tol``; pass columns that already have
    full numerical rank if you care about the exact dimension.
    """

    __slots__ = ("basis", "dim", "ambient_dim")

    def __init__(self, spanning, tol=DEFAULT_TOL):
        A = np.asarray(spanning, dtype=float)
        if A.ndim == 1:
            A = A[:, None]
        d = A.shape[0]
        r = rank_tol(A, tol)
        if r == 0:
            basis = np.zeros((d, 0))
        else:
            U, s, _ = np.linalg.svd(A, full_matrices=False)
            basis = np.ascontiguousarray(U[:, :r])
        self.basis = basis
        self.dim = r
        self.ambient_dim = d

    @classmethod
    def spanned_by(cls, *vectors, tol=DEFAULT_TOL):
        return cls(np.column_stack([np.asarray(v, dtype=float) for v in vectors]), tol)

    @classmethod
    def zero(cls, d):
        return cls(np.zeros((d, 0)))

    @classmethod
    def full(cls, d):
        return cls(np.eye(d))

    def projector(self):
        return self.basis @ self.basis.T

    def contains(self, other, resid_tol=1e-9):
        """Containment ``other <= self`` up to residual tolerance."""
        if other.dim == 0:
            return True
        r = other.basis - self.projector() @ other.basis
        return np.linalg.norm(r) <= resid_tol * max(1.0, np.linalg.norm(other.basis))

    def distance(self, other):
        """Largest principal-angle sine between equal-dimensional subspaces."""
        if self.dim != other.dim:
            return 1.0
        if self.dim == 0:
            return 0.0
        # (I - P_self) B_other has spectral norm sin(theta_max); computed
        # directly to avoid the sqrt(1 - cos^2) cancellation floor
        r = other.basis - self.projector() @ other.basis
        return float(np.linalg.norm(r, 2))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


class Flag:
    """Nested chain of subspaces with strictly increasing dimensions."""

    __slots__ = ("pieces", "ambient_dim")

    def __init__(self, pieces, containment_tol=1e-9):
        pieces = list(pieces)
        if not pieces:
            raise ValueError("a flag needs at least one piece")
        dims = [p.dim for p in pieces]
        if any(d2 <= d1 for d1, d2 in zip(dims, dims[1:])):
            raise ValueError(f"flag dimensions must strictly increase, got {dims}")
        for small, big in zip(pieces, pieces[1:]):
            if not big.contains(small, containment_tol):
                raise ValueError("flag pieces are not nested within tolerance")
        self.pieces = pieces
        self.ambient_dim = pieces[0].ambient_dim

    @property
    def dims(self):
        return [p.dim for p in self.pieces]

    @property
    def is_full(self):
        return self.dims == list(range(1, self.ambient_dim))

    def piece(self, dim):
        for p in self.pieces:
            if p.dim == dim:
                return p
        raise KeyError(f"flag has no piece of dimension {dim} (has {self.dims})")

    def __repr__(self):
        return f"Flag(dims={self.dims}, ambient={self.ambient_dim})"


def transverse(V, W, tol=DEFAULT_TOL):
    """True iff V + W = R^d for complementary dimensions (dim V + dim W = d)."""
    if V.dim + W.dim != V.ambient_dim:
        raise DimMismatch(f"dims {V.dim} + {W.dim} != ambient {V.ambient_dim}")
    return rank_tol(np.hstack([V.basis, W.basis]), tol) == V.ambient_dim


def meet(V, W, tol=DEFAULT_TOL):
    """Intersection V ∩ W, dimension decided by rank tolerance."""
    if V.dim == 0 or W.dim == 0:
        return Subspace.zero(V.ambient_dim)
    A = np.hstack([V.basis, -W.basis])
    _, s, vh = np.linalg.svd(A)
    null_dim = A.shape[1] - rank_tol(A, tol)
    if null_dim == 0:
        return Subspace.zero(V.ambient_dim)
    null_basis = vh[A.shape[1] - null_dim:, :].T
    return Subspace(V.basis @ null_basis[: V.dim], tol)


def sum_direct(parts, tol=DEFAULT_TOL):
    """True iff the (interior) sum of the subspaces is direct."""
    parts = [p for p in parts if p.dim > 0]
    if not parts:
        return True
    total = sum(p.dim for p in parts)
    d = parts[0].ambient_dim
    if total > d:
        raise DimOverflow(f"total dimension {total} exceeds ambient {d}")
    stacked = np.hstack([p.basis for p in parts])
    return rank_tol(stacked, tol) == total


def wedge_vol(V, W):
    """det [basis_V | basis_W] for complementary dimensions.

    Sign and magnitude depend on the stored bases; only cross-ratio
    combinations of such determinants are basis-free.
    """
    if V.dim + W.dim != V.ambient_dim:
        raise DimMismatch(f"dims {V.dim} + {W.dim} != ambient {V.ambient_dim}")
    return float(np.linalg.det(np.hstack([V.basis, W.basis])))


def _signlog_det(V, W, tol):
    """(sign, log|det|) of [V | W], with sign 0 when the pair is non-transverse."""
    if not transverse(V, W, tol):
        return 0, -np.inf
    sign, logdet = np.linalg.slogdet(np.hstack([V.basis, W.basis]))
    return int(sign), float(logdet)


def cross_ratio_k_signlog(V1, W2, W3, V4, tol=DEFAULT_TOL):
    """Generalized cross ratio as a (sign, log-magnitude) pair.

    cr = (V1 ^ W3)(V4 ^ W2) / (V1 ^ W2)(V4 ^ W3), basis-independent.
    Returns sign in {-1, 0, +1} and log|cr| (log 0 = -inf, log inf = +inf).
    Raises ``NotInDomain`` unless V1 # W2 and V4 # W3, or V1 # W3 and V4 # W2.
    """
    s13, l13 = _signlog_det(V1, W3, tol)
    s42, l42 = _signlog_det(V4, W2, tol)
    s12, l12 = _signlog_det(V1, W2, tol)
    s43, l43 = _signlog_det(V4, W3, tol)
    pattern_a = s12 != 0 and s43 != 0
    pattern_b = s13 != 0 and s42 != 0
    if not (pattern_a or pattern_b):
        raise NotInDomain("neither admissible transversality pattern holds")
    if not pattern_a:
        return s13 * s42, np.inf  # a/0 convention
    num_sign = s13 * s42
    if num_sign == 0:
        return 0, -np.inf
    return num_sign * s12 * s43, (l13 + l42) - (l12 + l43)


def cross_ratio_k(V1, W2, W3, V4, tol=DEFAULT_TOL):
    """Generalized cross ratio as an extended real (0 and inf as sentinels)."""
    sign, logmag = cross_ratio_k_signlog(V1, W2, W3, V4, tol)
    if logmag == -np.inf:
        return 0.0
    if logmag == np.inf:
        return float("inf") if sign >= 0 else float("-inf")
    return sign * float(np.exp(logmag))


def cr_period_expected(spectrum, k, tol=DEFAULT_TOL):
    """(lam_1...lam_k)/(lam_d...lam_{d-k+1}) in modulus, for a {k, d-k}-proximal matrix."""
    d = spectrum.dim
    if not 1 <= k <= d - 1:
        raise IndexError(f"k={k} out of range for dim {d}")
    for kk in {k, d - k}:
        if gap_ratio(spectrum, kk) <= 1.0 + tol.gap_tie_tol:
            raise NoGap(f"matrix is not {kk}-proximal")
    return float(np.exp(spectrum.log_weight(k)))


@dataclass(frozen=True)
class QuotientMap:
    """Projection R^d -> R^d / kernel, modeled on the orthogonal complement.

    The fixed complement makes pushforwards reproducible and basis-stable
    across a sweep.
    """

    kernel: Subspace
    complement: np.ndarray  # d x (d - m), orthonormal

    @property
    def ambient_dim(self):
        return self.kernel.ambient_dim

    @property
    def target_dim(self):
        return self.complement.shape[1]


def quotient(kernel):
    """Quotient map with kernel the given subspace."""
    d = kernel.ambient_dim
    if kernel.dim == 0:
        return QuotientMap(kernel, np.eye(d))
    U, _, _ = np.linalg.svd(kernel.basis, full_matrices=True)
    return QuotientMap(kernel, np.ascontiguousarray(U[:, kernel.dim:]))


def push(Q, V, tol=DEFAULT_TOL):
    """Pushforward of V through the quotient map.

    Dimension is preserved exactly when V meets the kernel trivially;
    otherwise it drops (push of the kernel itself is the zero subspace).
    """
    coords = Q.complement.T @ V.basis
    return Subspace(coords, tol)


def _combs(d, k):
    return list(itertools.combinations(range(d), k))


def ext_power_matrix(M, k):
    """Matrix of the k-th exterior power on the lexicographic wedge basis.

    Entries are the k x k minors of M; functorial by Cauchy-Binet.
    """
    M = np.asarray(M, dtype=float)
    d = M.shape[0]
    if not 1 <= k <= d - 1:
        raise IndexError(f"k={k} out of range for dim {d}")
    idx = _combs(d, k)
    n = len(idx)
    # stack all submatrices and take vectorized determinants
    sub = np.empty((n, n, k, k))
    for a, I in enumerate(idx):
        rows = M[list(I), :]
        for b, J in enumerate(idx):
            sub[a, b] = rows[:, list(J)]
    return np.linalg.det(sub)


def ext_power_subspace(V):
    """Plucker embedding: a k-plane becomes a line in the wedge power space."""
    d, k = V.ambient_dim, V.dim
    if not 1 <= k <= d - 1:
        raise IndexError(f"dim {k} out of range for ambient {d}")
    idx = _combs(d, k)
    coords = np.array([np.linalg.det(V.basis[list(I), :]) for I in idx])
    return Subspace(coords[:, None])


def plucker_pairing(V, W):
    """Pairing of Plucker coordinates equal to det [V | W] up to orthonormal bases.

    sum over I of eps(I, I^c) p_I(V) p_{I^c}(W); vanishes iff V and W are
    non-transverse.
    """
    d, k = V.ambient_dim, V.dim
    if k + W.dim != d:
        raise DimMismatch(f"dims {k} + {W.dim} != ambient {d}")
    total = 0.0
    for I in _combs(d, k):
        Ic = tuple(sorted(set(range(d)) - set(I)))
        perm = list(I) + list(Ic)
        inv = sum(1 for i in range(d) for j in range(i + 1, d) if perm[i] > perm[j])
        sign = -1.0 if inv % 2 else 1.0
        pI = np.linalg.det(V.basis[list(I), :]) if k else 1.0
        qIc = np.linalg.det(W.basis[list(Ic), :]) if W.dim else 1.0
        total += sign * pI * qIc
    return float(total)
