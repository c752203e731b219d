"""Representations of the marked group into PGL(d,R): symmetric-power
irreducibles, direct sums, duals, exterior powers, boundary-flag sampling via
eigenspace dynamics, deformation paths, and an explicit 4x4 family of
Z-representations that loses all transversality in the limit.

Word evaluation rescales intermediate products to unit max-entry and tracks
the scaling exponent; every consumer here (gaps, flags, cross ratios) is
scale-invariant, so the rescaling only buys overflow headroom.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .numlin import DEFAULT_TOL, Spectrum, eig_sorted, gap_ratio, invariant_subspace_basis, NoGap
from .grassmann import Subspace, Flag, ext_power_matrix
from .groups import (
    MarkedGroup, Holonomy2, enumerate_words, reduce_word, fixed_points, NotHyperbolic,
)


class NotUnimodular(Exception):
    """Input to the symmetric power is not in SL(2)."""


def tau_irr(d, m, tol=1e-9):
    """The d-dimensional irreducible representation of SL(2) applied to m.

    Acts on degree-(d-1) homogeneous polynomials in the ordered monomial
    basis (x^{d-1}, x^{d-2}y, ..., y^{d-1}); multiplicative by functoriality
    of the symmetric power, upper triangular on upper-triangular input, and
    exact (Fraction entries) when m is exact.
    """
    exact_in = all(isinstance(x, (int, Fraction)) for row in m for x in row)
    if exact_in:
        a, b = Fraction(m[0][0]), Fraction(m[0][1])
        c, dd = Fraction(m[1][0]), Fraction(m[1][1])
        if a * dd - b * c != 1:
            raise NotUnimodular("exact input must have determinant exactly 1")
        one = Fraction(1)
    else:
        m = np.asarray(m, dtype=float)
        if abs(np.linalg.det(m) - 1.0) > tol:
            raise NotUnimodular(f"determinant {np.linalg.det(m)} != 1")
        a, b, c, dd = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
        one = 1.0

    def convolve(p, q):
        out = [0 * one] * (len(p) + len(q) - 1)
        for i, pi in enumerate(p):
            for j, qj in enumerate(q):
                out[i + j] += pi * qj
        return out

    cols = []
    for j in range(d):
        # tau(m) maps e1^{d-1-j} e2^j to (a e1 + c e2)^{d-1-j} (b e1 + d e2)^j
        p = [one]
        for _ in range(d - 1 - j):
            p = convolve(p, [a, c])
        for _ in range(j):
            p = convolve(p, [b, dd])
        cols.append(p)
    if exact_in:
        return [[cols[j][i] for j in range(d)] for i in range(d)]
    return np.column_stack(cols)


@dataclass
class MarkedRep:
    """Assignment of d x d matrices to group generators.

    ``circle`` carries the SL(2,R) shadow holonomy used as the boundary
    model; representations without one (explicit families) can only be
    sampled along powers of a single generator.
    """

    group: MarkedGroup
    dim: int
    generators: list
    label: str = ""
    circle: Holonomy2 = None

    def __post_init__(self):
        if len(self.generators) != self.group.n_generators:
            raise ValueError("generator count does not match the group")
        self.generators = [np.asarray(g, dtype=float) for g in self.generators]
        self._gen_inv = [np.linalg.inv(g) for g in self.generators]
        for i, g in enumerate(self.generators):
            if g.shape != (self.dim, self.dim):
                raise ValueError(f"generator {i + 1} has shape {g.shape}")
            if not np.isfinite(np.linalg.cond(g)) :
                raise ValueError(f"generator {i + 1} is singular")


def evaluate_with_logscale(rep, word):
    """Image matrix of a reduced word, rescaled to unit max-entry.

    Returns (matrix, log_scale) with true image = exp(log_scale) * matrix.
    """
    m = np.eye(rep.dim)
    logs = 0.0
    for l in reduce_word(word):
        g = rep.generators[l - 1] if l > 0 else rep._gen_inv[-l - 1]
        m = m @ g
        s = np.abs(m).max()
        if s > 0:
            m = m / s
            logs += float(np.log(s))
    return m, logs


def evaluate(rep, word):
    """Image matrix of a reduced word (projective representative, unit max-entry)."""
    return evaluate_with_logscale(rep, word)[0]


def evaluate_words(rep, words):
    """Images of many words at once, sharing prefix products.

    Returns {word: (matrix, log_scale)} with the same rescaling convention as
    ``evaluate_with_logscale``.
    """
    cache = {(): (np.eye(rep.dim), 0.0)}
    out = {}
    for w in sorted(words, key=len):
        w = tuple(w)
        cache[w] = _extend(rep, cache, w)
        out[w] = cache[w]
    return out


def _extend(rep, cache, w):
    if w in cache:
        return cache[w]
    m, logs = cache[w[:-1]] if w[:-1] in cache else _extend(rep, cache, w[:-1])
    l = w[-1]
    g = rep.generators[l - 1] if l > 0 else rep._gen_inv[-l - 1]
    m = m @ g
    s = np.abs(m).max()
    if s > 0:
        m = m / s
        logs += float(np.log(s))
    return m, logs


def fuchsian_rep(multiindex, hol, label=None):
    """Block-diagonal sum of symmetric powers along the holonomy.

    ``multiindex`` must be non-increasing; the composition is predicted
    k-positive for 2(k-1) < d_1 - d_2 (fully positive for a single block).
    """
    multiindex = tuple(int(d) for d in multiindex)
    if any(d < 1 for d in multiindex):
        raise ValueError("multiindex entries must be positive")
    if any(a < b for a, b in zip(multiindex, multiindex[1:])):
        raise ValueError(f"multiindex must be non-increasing, got {multiindex}")
    dim = sum(multiindex)
    gens = []
    for g2 in hol.generators:
        m = np.zeros((dim, dim))
        off = 0
        for di in multiindex:
            m[off:off + di, off:off + di] = tau_irr(di, g2)
            off += di
        gens.append(m)
    if label is None:
        label = "tau_" + "+".join(str(d) for d in multiindex)
    return MarkedRep(hol.group, dim, gens, label=label, circle=hol)


def dual_rep(rep):
    """Contragradient representation: generators map to inverse-transposes."""
    gens = [np.linalg.inv(g).T for g in rep.generators]
    return MarkedRep(rep.group, rep.dim, gens, label=rep.label + "^b", circle=rep.circle)


def ext_power_rep(rep, k):
    """Composition with the k-th exterior power."""
    gens = [ext_power_matrix(g, k) for g in rep.generators]
    from math import comb
    return MarkedRep(
        rep.group, comb(rep.dim, k), gens,
        label=f"wedge{k}({rep.label})", circle=rep.circle,
    )


def sec71_matrix(lam, n):
    """The explicit 4x4 generator with eps_n = -n / (lam (n^2 lam + 1)).

    Its attracting line is [1 : n : 0 : 0], its repelling line [0 : 0 : n : 1],
    and the repelling hyperplane is <e2, e3, e4>; as n grows all
    transversality between the attracting line and the repelling hyperplane
    is lost.
    """
    if not (lam > 1 and n >= 1):
        raise ValueError("need lam > 1 and n >= 1")
    eps = -n / (lam * (n * n * lam + 1.0))
    a = lam + 1.0 / (n * n)
    return np.array([
        [a, 0.0, 0.0, 0.0],
        [1.0 / n, lam, 0.0, 0.0],
        [0.0, 0.0, 1.0 / lam, eps],
        [0.0, 0.0, 0.0, 1.0 / a],
    ])


def sec71_family(lam, n):
    """The 4x4 matrix above as a Z-representation (free group of rank 1)."""
    return MarkedRep(
        MarkedGroup("free", rank=1), 4, [sec71_matrix(lam, n)],
        label=f"sec71(lam={lam},n={n})",
    )


def composite_spectrum(m_direct, logs_direct, m_dual, logs_dual, tol=DEFAULT_TOL):
    """Spectrum of the true (unscaled) image with every modulus at working precision.

    Images of long words are so ill-conditioned that eigvals resolves only
    the top half of the moduli; the bottom half is recovered exactly from the
    inverse-transpose image (lam_i = 1 / nu_{d+1-i} for the dual eigenvalues
    nu), whose relevant eigenvalues sit at the top of ITS spectrum.  The two
    matrices must be evaluated independently as products of exact generator
    (inverse-transpose) matrices, never by inverting the ill-conditioned
    product; the tracked scaling exponents realign the two halves.
    """
    s_dir = eig_sorted(m_direct, tol)
    s_dual = eig_sorted(m_dual, tol)
    d = s_dir.dim
    top = (d + 1) // 2
    vals = np.empty(d, dtype=complex)
    vals[:top] = s_dir.values[:top] * np.exp(logs_direct)
    for i in range(top, d):
        vals[i] = 1.0 / (s_dual.values[d - 1 - i] * np.exp(logs_dual))
    order = np.lexsort((-vals.imag, -vals.real, -np.abs(vals)))
    return Spectrum(vals[order])


def word_spectrum(rep, word, dual=None, tol=DEFAULT_TOL):
    """Accurate spectrum of the image of a word (moduli down to lam_d)."""
    if dual is None:
        dual = dual_rep(rep)
    m, ls = evaluate_with_logscale(rep, word)
    mb, lsb = evaluate_with_logscale(dual, word)
    return composite_spectrum(m, ls, mb, lsb, tol)


@dataclass
class BoundarySample:
    """One sampled boundary point: word, circle angle, image matrix, spectrum,
    and the requested dominant invariant subspaces (dynamics preserving)."""

    word: tuple
    angle: float
    matrix: np.ndarray
    spectrum: Spectrum
    flags: dict  # j -> Subspace

    def flag(self, dims=None):
        dims = sorted(self.flags) if dims is None else sorted(dims)
        return Flag([self.flags[j] for j in dims])


def boundary_flag_samples(rep, max_length, indices, n_samples=None,
                          tol=DEFAULT_TOL, min_separation=1e-3):
    """Sampled boundary flags, deduplicated by attracting fixed-point angle.

    Enumerates reduced words up to ``max_length`` in the circle model (the
    SL(2,R) shadow; a single-generator representation falls back to the two
    points gamma^{+-infinity}), keeps one word per boundary angle, optionally
    thins to ``n_samples`` angle-spread representatives, and computes the
    dominant invariant subspace of the image matrix for every j in
    ``indices``.  Words lacking a gap at some requested j are skipped with a
    logged reason, never silently dropped.

    Returns (samples, skipped) where skipped is a list of (word, reason).
    """
    indices = sorted(set(int(j) for j in indices))
    if any(not 1 <= j <= rep.dim - 1 for j in indices):
        raise IndexError(f"flag indices {indices} out of range for dim {rep.dim}")

    if rep.circle is None:
        if rep.group.n_generators != 1:
            raise ValueError("boundary sampling needs a circle model (SL2 shadow) "
                             "for groups with more than one generator")
        chosen = [((1,), 0.0), ((-1,), np.pi)]
    else:
        by_angle = {}
        for w in enumerate_words(rep.group, max_length):
            m2 = rep.circle.evaluate(w)
            if abs(np.trace(m2)) <= 2.0 + 1e-9:
                continue
            theta, _ = fixed_points(m2)
            key = round(theta / 1e-10)
            if key not in by_angle or len(w) < len(by_angle[key][0]):
                by_angle[key] = (w, theta)
        chosen = sorted(by_angle.values(), key=lambda p: p[1])
        if n_samples is not None and n_samples < len(chosen):
            stride = len(chosen) / n_samples
            picked = [chosen[int(i * stride)] for i in range(n_samples)]
            chosen = picked
        # enforce minimal angular separation (guards near-degenerate tuples)
        filtered = []
        for w, theta in chosen:
            if filtered:
                gap_prev = (theta - filtered[-1][1]) % (2 * np.pi)
                if gap_prev < min_separation:
                    continue
            filtered.append((w, theta))
        if len(filtered) >= 2:
            wrap = (filtered[0][1] - filtered[-1][1]) % (2 * np.pi)
            if wrap < min_separation:
                filtered.pop()
        chosen = filtered

    dual = dual_rep(rep)
    d = rep.dim
    samples, skipped = [], []
    for w, theta in chosen:
        m, ls = evaluate_with_logscale(rep, w)
        mb, lsb = evaluate_with_logscale(dual, w)
        try:
            spec = composite_spectrum(m, ls, mb, lsb, tol)
        except Exception as e:
            skipped.append((w, f"spectrum failed: {e}"))
            continue
        flags = {}
        reason = None
        for j in indices:
            if gap_ratio(spec, j) <= 1.0 + tol.gap_tie_tol:
                reason = f"NoGap at {j}"
                break
            try:
                # deep pieces come from the dual side: the dominant j-plane is
                # the orthogonal complement of the dual image's dominant
                # (d-j)-plane, which IS numerically resolvable
                if j <= d // 2:
                    flags[j] = Subspace(invariant_subspace_basis(m, j, tol))
                else:
                    ann = invariant_subspace_basis(mb, d - j, tol)
                    U, _, _ = np.linalg.svd(ann, full_matrices=True)
                    flags[j] = Subspace(U[:, d - j:])
            except NoGap as e:
                reason = f"NoGap at {j}: {e}"
                break
        if reason is not None:
            skipped.append((w, reason))
            continue
        samples.append(BoundarySample(w, float(theta), m, spec, flags))
    return samples, skipped


@dataclass
class DeformationPath:
    """Path of representations eta_1 + e^{t chi} eta_2 over a common group.

    ``chi`` maps generator index (1-based) to a real; it extends to a group
    homomorphism because every generator occurs with both signs in the
    relation word, so the relation sum vanishes automatically.
    """

    eta1: MarkedRep
    eta2: MarkedRep
    chi: dict

    def __post_init__(self):
        if self.eta1.group != self.eta2.group:
            raise ValueError("factors must share the marked group")
        if all(abs(v) < 1e-15 for v in self.chi.values()):
            raise ValueError("chi must be nonzero on at least one generator")
        hol = self.eta1.circle
        if hol is not None and hol.relation_word is not None:
            total = sum(
                np.sign(l) * self.chi.get(abs(l), 0.0) for l in hol.relation_word
            )
            if abs(total) > 1e-12:
                raise ValueError("chi does not vanish on the relation word")

    @property
    def dim(self):
        return self.eta1.dim + self.eta2.dim

    def rep_at(self, t):
        d1, d2 = self.eta1.dim, self.eta2.dim
        gens = []
        for i, (g1, g2) in enumerate(zip(self.eta1.generators, self.eta2.generators), 1):
            m = np.zeros((d1 + d2, d1 + d2))
            m[:d1, :d1] = g1
            m[d1:, d1:] = np.exp(t * self.chi.get(i, 0.0)) * g2
            gens.append(m)
        return MarkedRep(
            self.eta1.group, d1 + d2, gens,
            label=f"{self.eta1.label}+e^({t:g}chi){self.eta2.label}",
            circle=self.eta1.circle,
        )


def scaling_path(eta1, eta2, chi, t):
    """Representation at parameter t of the exponential-character scaling path."""
    return DeformationPath(eta1, eta2, chi).rep_at(t)
