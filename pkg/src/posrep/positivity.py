"""Lusztig total positivity for full flags in R^d.

The reference flags are X^j = <e_d, ..., e_{d-j+1}> and Z^j = <e_1, ..., e_j>.
A flag transverse to Z is u.X for a unique unit upper-triangular u; the
positive semigroup U^{>0} consists of the u all of whose not-identically-
vanishing minors are strictly positive.  Positivity of a flag triple or
n-tuple is membership of the induced unipotent parameters in U^{>0}, up to
the sign pattern of the residual diagonal torus, which this module searches
exhaustively.

Minors are evaluated exactly (Fractions) whenever the unipotent has exact
entries; float minors inside a guard band yield an indeterminate verdict
rather than a sign call.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exact
from .numlin import DEFAULT_TOL, rank_tol

MINOR_GUARD = 1e-10  # relative band inside which a float minor has no trusted sign
MAX_MINOR_DIM = 8


class NotTransverse(Exception):
    """Flags fail a transversality needed by the adapted frame or factorization."""

    def __init__(self, msg, index=None):
        super().__init__(msg)
        self.index = index


class ChainBroken(Exception):
    """An interior flag of a tuple cannot be factored in the common frame."""


class DimTooLarge(Exception):
    """Minor enumeration refused; combinatorial blow-up guard."""


@dataclass(frozen=True)
class MinorIndex:
    """Row/column index sets (0-based, strictly increasing) of a minor."""

    rows: tuple
    cols: tuple

    def __post_init__(self):
        if len(self.rows) != len(self.cols):
            raise ValueError("row and column index sets must have equal length")
        for seq in (self.rows, self.cols):
            if any(a >= b for a, b in zip(seq, seq[1:])):
                raise ValueError("index sets must be strictly increasing")


@dataclass
class PositivityVerdict:
    """Outcome of a positivity test.

    ``witness`` holds the failing minor (index, value, tuple position) for a
    negative verdict; ``torus`` the sign pattern certifying a positive one.
    ``indeterminate`` marks float minors that fell inside the guard band under
    every torus, so no sign call was safe.
    """

    positive: bool
    indeterminate: bool = False
    witness: tuple = None
    torus: tuple = None
    min_minor: float = None

    def __bool__(self):
        return self.positive


def nonvanishing_minors(d):
    """All minor indices that are not identically zero on unit upper-triangular matrices.

    Characterized by i_l <= j_l for every l; the test suite validates this
    against a randomized brute-force oracle before the characterization is
    trusted.
    """
    if not 2 <= d <= MAX_MINOR_DIM:
        raise DimTooLarge(f"minor enumeration supports 2 <= d <= {MAX_MINOR_DIM}, got {d}")
    out = []
    for k in range(1, d + 1):
        for rows in itertools.combinations(range(d), k):
            for cols in itertools.combinations(range(d), k):
                if all(i <= j for i, j in zip(rows, cols)):
                    out.append(MinorIndex(rows, cols))
    return out


def minors_brute_oracle(d, n_samples=200, rng=None):
    """Minor indices observed nonzero on random rational unipotents (exact arithmetic)."""
    if rng is None:
        rng = np.random.default_rng(0)
    if not 2 <= d <= 6:
        raise DimTooLarge("oracle is intended for d <= 6")
    seen = set()
    all_idx = [
        MinorIndex(r, c)
        for k in range(1, d + 1)
        for r in itertools.combinations(range(d), k)
        for c in itertools.combinations(range(d), k)
    ]
    for _ in range(n_samples):
        u = [[Fraction(1) if i == j else (Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 7))) if i < j else Fraction(0))
              for j in range(d)] for i in range(d)]
        for mi in all_idx:
            if mi in seen:
                continue
            if exact.minor(u, mi.rows, mi.cols) != 0:
                seen.add(mi)
    return sorted(seen, key=lambda m: (len(m.rows), m.rows, m.cols))


def _torus_signs(d):
    # sign classes of the diagonal torus in PGL: first entry normalized to +1
    for signs in itertools.product((1, -1), repeat=d - 1):
        yield (1,) + signs


def _minor_float(u, mi):
    sub = u[np.ix_(mi.rows, mi.cols)]
    return float(np.linalg.det(sub))


def is_totally_positive(u, tol=DEFAULT_TOL):
    """Membership of a unit upper-triangular matrix in U^{>0} up to torus signs.

    Searches all 2^{d-1} sign-diagonal conjugations t u t^{-1} (only the sign
    pattern can change minor signs) and requires every non-vanishing minor
    strictly positive for one of them.  Exact entries give exact sign calls;
    float minors inside the guard band make the verdict indeterminate instead
    of negative.
    """
    exact_mode = exact.is_exact_matrix(u) if isinstance(u, list) else False
    if not exact_mode:
        u = np.asarray(u, dtype=float)
        d = u.shape[0]
    else:
        d = len(u)
    minors = nonvanishing_minors(d)
    if exact_mode:
        base_vals = {mi: exact.minor(u, mi.rows, mi.cols) for mi in minors}
    else:
        scale = max(1.0, float(np.abs(u).max()))
        base_vals = {mi: _minor_float(u, mi) for mi in minors}

    best_fail = None  # (n_ok, witness)
    saw_band = False
    for t in _torus_signs(d):
        ok = True
        n_ok = 0
        worst = None
        for mi in minors:
            sgn = 1
            for i in mi.rows:
                sgn *= t[i]
            for j in mi.cols:
                sgn *= t[j]
            v = base_vals[mi] * sgn
            if exact_mode:
                positive = v > 0
                banded = False
            else:
                guard = MINOR_GUARD * scale ** len(mi.rows)
                positive = v > guard
                banded = abs(v) <= guard
            if positive:
                n_ok += 1
                vf = float(v)
                if worst is None or vf < worst:
                    worst = vf
                continue
            saw_band = saw_band or banded
            if best_fail is None or n_ok > best_fail[0]:
                best_fail = (n_ok, (mi, float(v)))
            ok = False
            break
        if ok:
            return PositivityVerdict(True, torus=t, min_minor=worst)
    if saw_band:
        return PositivityVerdict(False, indeterminate=True, witness=best_fail[1])
    return PositivityVerdict(False, witness=best_fail[1])


def adapted_frame(x, z, tol=DEFAULT_TOL):
    """g in GL(d) with g.x = X and g.z = Z, for transverse full flags x, z.

    Determined up to the diagonal torus; the representative is fixed by taking
    unit-norm spanning vectors f_i of the lines z^i meet x^{d-i+1} with a
    deterministic sign, and g = [f_1 | ... | f_d]^{-1}.
    """
    d = x.ambient_dim
    if not (x.is_full and z.is_full):
        raise ValueError("adapted_frame requires full flags")
    F = np.zeros((d, d))
    for i in range(1, d + 1):
        zb = z.piece(i).basis if i <= d - 1 else np.eye(d)
        xb = x.piece(d - i + 1).basis if i >= 2 else np.eye(d)
        A = np.hstack([zb, -xb])
        _, s, vh = np.linalg.svd(A)
        null_dim = A.shape[1] - rank_tol(A, tol)
        if null_dim != 1:
            raise NotTransverse(
                f"z^{i} and x^{d - i + 1} do not meet in a line (flags not transverse)",
                index=i,
            )
        coeff = vh[-1, : zb.shape[1]]
        f = zb @ coeff
        f = f / np.linalg.norm(f)
        lead = np.flatnonzero(np.abs(f) > 1e-12)[0]
        if f[lead] < 0:
            f = -f
        F[:, i - 1] = f
    if rank_tol(F, tol) < d:
        raise NotTransverse("adapted vectors do not form a basis")
    return np.linalg.inv(F)


def unipotent_factor(flag, g, tol=DEFAULT_TOL):
    """The unique unit upper-triangular u with u.X = g.flag.

    Solves column by column: column d-j+1 is the unique vector of g.flag^j
    with coordinate pattern (*, ..., *, 1, 0, ..., 0).  Requires g.flag
    transverse to Z.
    """
    d = flag.ambient_dim
    if not flag.is_full:
        raise ValueError("unipotent_factor requires a full flag")
    u = np.zeros((d, d))
    for j in range(1, d + 1):
        col = d - j  # 0-based column index d-j+1
        B = (g @ flag.piece(j).basis) if j <= d - 1 else np.eye(d)
        block = B[col:, :]
        rhs = np.zeros(j)
        rhs[0] = 1.0
        sv = np.linalg.svd(block, compute_uv=False)
        if sv[-1] <= tol.rank_rel_tol * max(sv[0], 1e-300):
            raise NotTransverse(f"flag piece {j} not transverse to Z^{d - j}", index=j)
        sol = np.linalg.solve(block, rhs)
        u[:, col] = B @ sol
    return u


def flags_transverse(f1, f2, tol=DEFAULT_TOL):
    """Full-flag transversality: f1^j meets f2^{d-j} trivially for every j."""
    from .grassmann import transverse

    d = f1.ambient_dim
    return all(transverse(f1.piece(j), f2.piece(d - j), tol) for j in range(1, d))


def triple_positive(x, y, z, tol=DEFAULT_TOL):
    """Positivity of the flag triple (x, y, z); requires pairwise transversality."""
    g = adapted_frame(x, z, tol)
    u = unipotent_factor(y, g, tol)  # raises NotTransverse unless y # z
    if not flags_transverse(x, y, tol):
        raise NotTransverse("first and middle flag are not transverse")
    return is_totally_positive(u, tol)


def tuple_positive(flags, tol=DEFAULT_TOL):
    """Positivity of an ordered tuple of n >= 3 full flags.

    In the common frame adapted to (x_1, x_n) every interior flag is u_i.X;
    the tuple is positive iff the increments P_2 = u_2, P_i = u_{i-1}^{-1} u_i
    all lie in U^{>0} for one common torus sign pattern.
    """
    flags = list(flags)
    n = len(flags)
    if n < 3:
        raise ValueError("tuple positivity needs at least 3 flags")
    for a, b in zip(flags, flags[1:]):
        if not flags_transverse(a, b, tol):
            raise NotTransverse("consecutive flags in the tuple are not transverse")
    g = adapted_frame(flags[0], flags[-1], tol)
    us = []
    for i, f in enumerate(flags[1:-1], start=2):
        try:
            us.append(unipotent_factor(f, g, tol))
        except NotTransverse as e:
            raise ChainBroken(f"interior flag {i} not factorable: {e}") from e
    ps = [us[0]]
    for prev, cur in zip(us, us[1:]):
        ps.append(np.linalg.solve(prev, cur))
    d = flags[0].ambient_dim
    minors = nonvanishing_minors(d)
    scale = max(1.0, max(float(np.abs(p).max()) for p in ps))
    best_fail = None
    saw_band = False
    for t in _torus_signs(d):
        ok = True
        n_ok = 0
        worst = None
        for pos, p in enumerate(ps):
            for mi in minors:
                sgn = 1
                for i in mi.rows:
                    sgn *= t[i]
                for j in mi.cols:
                    sgn *= t[j]
                v = sgn * _minor_float(p, mi)
                guard = MINOR_GUARD * scale ** len(mi.rows)
                if v > guard:
                    n_ok += 1
                    if worst is None or v < worst:
                        worst = v
                    continue
                saw_band = saw_band or abs(v) <= guard
                if best_fail is None or n_ok > best_fail[0]:
                    best_fail = (n_ok, (mi, float(v), pos))
                ok = False
                break
            if not ok:
                break
        if ok:
            return PositivityVerdict(True, torus=t, min_minor=worst)
    if saw_band:
        return PositivityVerdict(False, indeterminate=True, witness=best_fail[1])
    return PositivityVerdict(False, witness=best_fail[1])


def curve_positive(samples, n_max=4, tol=DEFAULT_TOL, max_tuples=20000, seed=0):
    """Positivity of a sampled flag curve over the circle.

    Tests ``tuple_positive`` on every cyclically ordered subtuple of size
    3..n_max (seeded subsampling above ``max_tuples``).  The circle
    orientation is fixed once per curve: if the first triple is positive only
    after reversal, the whole curve is tested in the reversed orientation.
    Returns (verdict, n_tuples_tested).
    """
    samples = sorted(samples, key=lambda s: s[0])
    angles = [a for a, _ in samples]
    if len(set(angles)) != len(angles):
        raise ValueError("curve samples must have pairwise distinct angles")
    flags = [f for _, f in samples]
    n = len(flags)
    if n < 3:
        raise ValueError("curve positivity needs at least 3 samples")

    combos = []
    for size in range(3, min(n_max, n) + 1):
        combos.extend(itertools.combinations(range(n), size))
    if len(combos) > max_tuples:
        rng = np.random.default_rng(seed)
        keep = rng.choice(len(combos), size=max_tuples, replace=False)
        combos = [combos[i] for i in sorted(keep)]

    orientation = 1
    first = tuple_positive([flags[i] for i in combos[0]], tol)
    if not first.positive and not first.indeterminate:
        rev = tuple_positive([flags[i] for i in reversed(combos[0])], tol)
        if rev.positive:
            orientation = -1
            first = rev

    n_tested = 0
    saw_band = first.indeterminate
    for combo in combos:
        idx = combo if orientation == 1 else tuple(reversed(combo))
        v = tuple_positive([flags[i] for i in idx], tol)
        n_tested += 1
        if v.positive:
            continue
        if v.indeterminate:
            saw_band = True
            continue
        witness = (tuple(angles[i] for i in combo),) + tuple(v.witness)
        return PositivityVerdict(False, witness=witness, min_minor=v.min_minor), n_tested
    if saw_band:
        return PositivityVerdict(False, indeterminate=True), n_tested
    return PositivityVerdict(True), n_tested


def elementary_positive(d, params):
    """Product of Jacobi generators e_i(t) = I + t E_{i,i+1} along a fixed
    longest-word pattern; with all t > 0 this lands in U^{>0} (exact when the
    parameters are Fractions).

    ``params`` must have length d*(d-1)/2, matching the pattern
    (1), (2,1), (3,2,1), ... of simple root indices.
    """
    pattern = [i for blk in range(1, d) for i in range(blk, 0, -1)]
    if len(params) != len(pattern):
        raise ValueError(f"need {len(pattern)} parameters for d={d}")
    u = [[Fraction(1) if i == j else Fraction(0) for j in range(d)] for i in range(d)]
    for i, t in zip(pattern, params):
        e = [[Fraction(1) if a == b else Fraction(0) for b in range(d)] for a in range(d)]
        e[i - 1][i] = Fraction(t)
        u = exact.mat_mul(u, e)
    return u
