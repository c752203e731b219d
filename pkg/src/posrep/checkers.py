"""Sampled certificates for the structural properties of a representation:
eigenvalue gaps, transversality, tridirectness, hyperconvexity, the H_k/C_k
conditions, k-positivity, positively ratioed cross ratios, the collar
inequality, and degeneration sweeps.

Every check quantifies over finite word/boundary samples, so a pass is
evidence, never a proof; reports carry sample counts and full witnesses so
failures replay.  Comparisons involving eigenvalue products or cross ratios
run in log space.
"""

import itertools
from dataclasses import dataclass, field, asdict

import numpy as np

from .numlin import DEFAULT_TOL, TolerancePolicy, eig_sorted, gap_ratio, SingularMatrix
from .grassmann import (
    Subspace, Flag, transverse, meet, sum_direct, quotient, push,
    cross_ratio_k_signlog, NotInDomain,
)
from .positivity import curve_positive, NotTransverse, ChainBroken
from .groups import enumerate_words, is_cyclically_reduced, fixed_points, linked, \
    NotHyperbolic, SharedAxis, cyclically_ordered
from .reps import boundary_flag_samples, evaluate_words, dual_rep, word_spectrum


class BadPartition(Exception):
    """Hyperconvexity partition violates its constraints."""


class MissingFlagPiece(Exception):
    """A check needs a flag index outside the representation's gapped range."""


@dataclass
class SampleConfig:
    """Sampling knobs shared by the checkers.

    ``gap_log_margin`` is the log-gap a word must exceed to count as gapped
    in the Anosov check; the default, log(1 + gap_tie_tol), is the bare
    tie-breaking threshold.  Degeneration sweeps raise it to the dip
    resolution of their parameter grid.
    """

    word_length: int = 4
    n_max: int = 4
    seed: int = 0
    n_samples: int = 10
    max_tuples: int = 20000
    tol: TolerancePolicy = field(default_factory=TolerancePolicy)
    gap_log_margin: float = None
    min_separation: float = 1e-3

    def __post_init__(self):
        if self.word_length > 8:
            raise ValueError("word_length capped at 8")
        if self.n_max > 5:
            raise ValueError("n_max capped at 5")
        if self.gap_log_margin is None:
            self.gap_log_margin = float(np.log1p(self.tol.gap_tie_tol))


@dataclass
class CheckReport:
    """Universal checker output: counts, witnesses, extremal value, verdict."""

    property_name: str
    params: dict
    samples_tested: int = 0
    failures: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    extremal: float = None
    verdict: str = "pass"
    details: dict = field(default_factory=dict)
    indeterminate_events: int = 0

    def finalize(self):
        if self.failures:
            self.verdict = "fail"
        elif self.indeterminate_events > 0:
            self.verdict = "indeterminate"
        else:
            self.verdict = "pass"
        return self

    def to_dict(self):
        d = asdict(self)
        d["property"] = d.pop("property_name")
        return d


def _word_str(w):
    return ".".join(str(l) for l in w)


def _sample_words(rep, cfg):
    """Cyclically reduced nonempty words up to the configured length."""
    return [w for w in enumerate_words(rep.group, cfg.word_length)
            if is_cyclically_reduced(w)]


def _subsample(items, cap, seed):
    if cap is None or len(items) <= cap:
        return list(items)
    rng = np.random.default_rng(seed)
    keep = rng.choice(len(items), size=cap, replace=False)
    return [items[i] for i in sorted(keep)]


def _batched_spectra(rep, words):
    """{word: sorted log-moduli, descending, at true scale} with shared prefixes.

    The top half of each profile comes from the direct image, the bottom half
    from the inverse-transpose image (whose relevant eigenvalues are at the
    top of its own spectrum), realigned by the tracked scaling exponents;
    both halves are at working precision even for very long words.
    """
    d = rep.dim
    top = (d + 1) // 2
    logm = {}
    out = {}
    for r, key in ((rep, "dir"), (dual_rep(rep), "dual")):
        mats = evaluate_words(r, words)
        stack = np.stack([mats[w][0] for w in words])
        scales = np.array([mats[w][1] for w in words])
        evs = np.linalg.eigvals(stack)
        logm[key] = np.sort(np.log(np.abs(evs)), axis=1)[:, ::-1] + scales[:, None]
    comp = np.empty((len(words), d))
    comp[:, :top] = logm["dir"][:, :top]
    comp[:, top:] = -logm["dual"][:, : d - top][:, ::-1]
    comp = np.sort(comp, axis=1)[:, ::-1]
    return {w: comp[i] for i, w in enumerate(words)}


# ---------------------------------------------------------------------------
# eigenvalue gaps

def check_anosov_gaps(rep, k, cfg=None):
    """Certify the k-th eigenvalue gap on all sampled words.

    Passes when every cyclically reduced word of length >= 2 has
    log |lam_k/lam_{k+1}| above the configured margin.  The report records
    the per-length minimum log-gap profile (growth of gaps with word length
    is the finite shadow of the divergence condition) without gating on it:
    word length only proxies stable length, and the proxy is loose enough to
    dent the profile even for certifiably gapped representations.
    """
    cfg = cfg or SampleConfig()
    words = _sample_words(rep, cfg)
    logm = _batched_spectra(rep, words)
    report = CheckReport(
        "anosov_gaps",
        {"k": k, "word_length": cfg.word_length, "margin": cfg.gap_log_margin,
         "rep": rep.label},
    )
    per_len_min = {}
    worst = None
    for w in words:
        lg = float(logm[w][k - 1] - logm[w][k])
        L = len(w)
        per_len_min[L] = min(per_len_min.get(L, np.inf), lg)
        if L >= 2:
            if worst is None or lg < worst:
                worst = lg
            if lg <= cfg.gap_log_margin:
                report.failures.append(
                    {"word": _word_str(w), "log_gap": lg, "margin": cfg.gap_log_margin}
                )
    report.samples_tested = len(words)
    report.extremal = worst
    report.details["per_length_min_log_gap"] = {
        str(L): per_len_min[L] for L in sorted(per_len_min)
    }
    return report.finalize()


# ---------------------------------------------------------------------------
# transversality and directness families

def _flag_samples(rep, indices, cfg):
    samples, skipped = boundary_flag_samples(
        rep, cfg.word_length, indices, n_samples=cfg.n_samples,
        tol=cfg.tol, min_separation=cfg.min_separation,
    )
    return samples, [( _word_str(w), r) for w, r in skipped]


def check_transversality(rep, k, cfg=None):
    """xi^k(x) transverse to xi^{d-k}(y) over all sampled pairs x != y."""
    cfg = cfg or SampleConfig()
    d = rep.dim
    samples, skipped = _flag_samples(rep, {k, d - k}, cfg)
    report = CheckReport(
        "transversality", {"k": k, "rep": rep.label, "word_length": cfg.word_length}
    )
    report.skipped = skipped
    if len(samples) < 2:
        report.indeterminate_events += 1
        report.details["reason"] = "fewer than two gapped samples"
        return report.finalize()
    min_sigma = None
    for x, y in itertools.permutations(samples, 2):
        stacked = np.hstack([x.flags[k].basis, y.flags[d - k].basis])
        s = np.linalg.svd(stacked, compute_uv=False)
        rel = float(s[-1] / s[0])
        if min_sigma is None or rel < min_sigma:
            min_sigma = rel
        report.samples_tested += 1
        if rel <= cfg.tol.rank_rel_tol:
            report.failures.append({
                "x_word": _word_str(x.word), "y_word": _word_str(y.word),
                "min_singular_ratio": rel,
            })
    report.extremal = min_sigma
    return report.finalize()


def _ordered_point_tuples(samples, size, cfg, seed_shift=0):
    combos = list(itertools.combinations(samples, size))
    combos = _subsample(combos, max(1, cfg.max_tuples // max(1, size)), cfg.seed + seed_shift)
    for combo in combos:
        for perm in itertools.permutations(combo):
            yield perm


def check_tridirect(rep, k, cfg=None):
    """Directness of x^p + y^q + z^l for all admissible (p, q, l) with l >= d-k."""
    cfg = cfg or SampleConfig()
    d = rep.dim
    triples_idx = [
        (p, q, l)
        for l in range(d - k, d - 1)
        for p in range(1, d) for q in range(1, d)
        if p + q + l <= d
    ]
    needed = sorted({i for t in triples_idx for i in t})
    samples, skipped = _flag_samples(rep, needed, cfg)
    report = CheckReport(
        "tridirect", {"k": k, "rep": rep.label, "index_triples": triples_idx}
    )
    report.skipped = skipped
    if len(samples) < 3:
        report.indeterminate_events += 1
        report.details["reason"] = "fewer than three gapped samples"
        return report.finalize()
    for (x, y, z) in _ordered_point_tuples(samples, 3, cfg):
        for (p, q, l) in triples_idx:
            report.samples_tested += 1
            if not sum_direct([x.flags[p], y.flags[q], z.flags[l]], cfg.tol):
                report.failures.append({
                    "indices": (p, q, l),
                    "words": [_word_str(s.word) for s in (x, y, z)],
                })
    return report.finalize()


def check_hyperconvexity(rep, k, partition, cfg=None):
    """Directness of x_1^{n_1} + ... + x_i^{n_i} over sampled distinct tuples.

    The partition must satisfy n_i >= d - k with total at most d.
    """
    cfg = cfg or SampleConfig()
    d = rep.dim
    partition = tuple(int(n) for n in partition)
    if (len(partition) < 2 or any(n < 1 for n in partition)
            or partition[-1] < d - k or sum(partition) > d):
        raise BadPartition(
            f"partition {partition} violates n_i >= d-k = {d - k} or total <= d = {d}"
        )
    needed = sorted(set(partition))
    samples, skipped = _flag_samples(rep, needed, cfg)
    report = CheckReport(
        "hyperconvexity", {"k": k, "partition": partition, "rep": rep.label}
    )
    report.skipped = skipped
    if len(samples) < len(partition):
        report.indeterminate_events += 1
        report.details["reason"] = "not enough gapped samples for the partition"
        return report.finalize()
    for pts in _ordered_point_tuples(samples, len(partition), cfg):
        report.samples_tested += 1
        pieces = [s.flags[n] for s, n in zip(pts, partition)]
        if not sum_direct(pieces, cfg.tol):
            report.failures.append({
                "partition": partition,
                "words": [_word_str(s.word) for s in pts],
            })
    return report.finalize()


# ---------------------------------------------------------------------------
# properties H_k and C_k

def _piece(sample, j, d):
    if j <= 0:
        return Subspace.zero(d)
    if j >= d:
        return Subspace.full(d)
    return sample.flags[j]


def _h_indices(k, d):
    out = {k}
    if 1 <= d - k + 1 <= d - 1:
        out.add(d - k + 1)
    if 1 <= d - k - 1 <= d - 1:
        out.add(d - k - 1)
    return sorted(out)


def check_Hk(rep, k, cfg=None):
    """Property H_k: directness of x^k + (y^k cap z^{d-k+1}) + z^{d-k-1}."""
    cfg = cfg or SampleConfig()
    d = rep.dim
    if not 1 <= k <= d - 1:
        raise MissingFlagPiece(f"H_{k} undefined in dimension {d}")
    samples, skipped = _flag_samples(rep, _h_indices(k, d), cfg)
    report = CheckReport("H_k", {"k": k, "rep": rep.label})
    report.skipped = skipped
    if len(samples) < 3:
        report.indeterminate_events += 1
        report.details["reason"] = "fewer than three gapped samples"
        return report.finalize()
    expected_mid = k + min(d - k + 1, d) - d
    for (x, y, z) in _ordered_point_tuples(samples, 3, cfg):
        report.samples_tested += 1
        mid = meet(_piece(y, k, d), _piece(z, d - k + 1, d), cfg.tol)
        if mid.dim != expected_mid:
            report.failures.append({
                "reason": f"intersection dim {mid.dim} != {expected_mid}",
                "words": [_word_str(s.word) for s in (x, y, z)],
            })
            continue
        if not sum_direct([_piece(x, k, d), mid, _piece(z, d - k - 1, d)], cfg.tol):
            report.failures.append({
                "reason": "sum not direct",
                "words": [_word_str(s.word) for s in (x, y, z)],
            })
    return report.finalize()


def check_Ck(rep, k, cfg=None):
    """Property C_k: directness of x^{d-k-2} + (x^{d-k+1} cap y^k) + z^{k+1}."""
    cfg = cfg or SampleConfig()
    d = rep.dim
    if not 1 <= k <= d - 2:
        raise MissingFlagPiece(f"C_{k} needs k+1 <= d-1 (got k={k}, d={d})")
    idx = {j for j in (d - k - 2, d - k + 1, k, k + 1) if 1 <= j <= d - 1}
    samples, skipped = _flag_samples(rep, sorted(idx), cfg)
    report = CheckReport("C_k", {"k": k, "rep": rep.label})
    report.skipped = skipped
    if len(samples) < 3:
        report.indeterminate_events += 1
        report.details["reason"] = "fewer than three gapped samples"
        return report.finalize()
    expected_mid = min(d - k + 1, d) + k - d
    for (x, y, z) in _ordered_point_tuples(samples, 3, cfg):
        report.samples_tested += 1
        mid = meet(_piece(x, d - k + 1, d), _piece(y, k, d), cfg.tol)
        if mid.dim != expected_mid:
            report.failures.append({
                "reason": f"intersection dim {mid.dim} != {expected_mid}",
                "words": [_word_str(s.word) for s in (x, y, z)],
            })
            continue
        if not sum_direct([_piece(x, d - k - 2, d), mid, _piece(z, k + 1, d)], cfg.tol):
            report.failures.append({
                "reason": "sum not direct",
                "words": [_word_str(s.word) for s in (x, y, z)],
            })
    return report.finalize()


def check_Hk_star(rep, k, cfg=None):
    """H_k together with H_{d-k} (equivalently H_k for the dual)."""
    d = rep.dim
    r1 = check_Hk(rep, k, cfg)
    r2 = check_Hk(rep, d - k, cfg)
    report = CheckReport("H_k_star", {"k": k, "rep": rep.label})
    report.samples_tested = r1.samples_tested + r2.samples_tested
    report.failures = r1.failures + r2.failures
    report.skipped = r1.skipped + r2.skipped
    report.indeterminate_events = r1.indeterminate_events + r2.indeterminate_events
    report.details = {"H_k": r1.verdict, "H_d_minus_k": r2.verdict}
    return report.finalize()


def check_Ck_star(rep, k, cfg=None):
    """C_k together with C_{d-k}, the latter evaluated as C_k of the dual."""
    r1 = check_Ck(rep, k, cfg)
    r2 = check_Ck(dual_rep(rep), k, cfg)
    report = CheckReport("C_k_star", {"k": k, "rep": rep.label})
    report.samples_tested = r1.samples_tested + r2.samples_tested
    report.failures = r1.failures + r2.failures
    report.skipped = r1.skipped + r2.skipped
    report.indeterminate_events = r1.indeterminate_events + r2.indeterminate_events
    report.details = {"C_k": r1.verdict, "C_k_dual": r2.verdict}
    return report.finalize()


# ---------------------------------------------------------------------------
# k-positivity

def check_k_positive(rep, k, cfg=None):
    """Positivity of the projection and truncation curves at every sampled basepoint.

    For each basepoint x the projection curve pushes the sampled partial
    flags (y^1, ..., y^{k-1}) through the quotient by x^{d-k}, and the
    truncation curve intersects (y^{d-k+1}, ..., y^{d-1}) with x^k; both land
    in full flags of a k-dimensional space and are tested for positivity on
    all cyclically ordered subtuples up to size n_max.
    """
    cfg = cfg or SampleConfig()
    d = rep.dim
    if not 1 <= k <= d - 1:
        raise MissingFlagPiece(f"k={k} out of range for dim {d}")
    report = CheckReport(
        "k_positive",
        {"k": k, "rep": rep.label, "word_length": cfg.word_length,
         "n_max": cfg.n_max},
    )
    if k == 1:
        samples, skipped = _flag_samples(rep, {1, d - 1}, cfg)
        report.skipped = skipped
        report.samples_tested = len(samples)
        report.details["note"] = "1-positive reduces to 1-Anosov (gapped samples)"
        if len(samples) < 2:
            report.indeterminate_events += 1
        return report.finalize()

    idx = sorted(set(range(1, k + 1)) | {d - k} | set(range(d - k + 1, d)))
    idx = [j for j in idx if 1 <= j <= d - 1]
    samples, skipped = _flag_samples(rep, idx, cfg)
    report.skipped = skipped
    if len(samples) < 4:
        report.indeterminate_events += 1
        report.details["reason"] = "fewer than four gapped samples"
        return report.finalize()

    proj_dims = list(range(1, k))
    trunc_dims = list(range(d - k + 1, d))
    n_curves = 0
    for bi, base in enumerate(samples):
        others = [s for s in samples if s is not base]
        # projection curve in E / x^{d-k}
        Q = quotient(base.flags[d - k])
        proj_pts, ok = [], True
        for y in others:
            pieces = []
            for j in proj_dims:
                p = push(Q, y.flags[j], cfg.tol)
                if p.dim != j:
                    report.failures.append({
                        "curve": "projection", "base": _word_str(base.word),
                        "point": _word_str(y.word),
                        "reason": f"pushforward of y^{j} dropped to dim {p.dim}",
                    })
                    ok = False
                    break
                pieces.append(p)
            if not ok:
                break
            proj_pts.append((y.angle, Flag(pieces)))
        if ok and len(proj_pts) >= 3:
            verdict, n_t = curve_positive(
                proj_pts, n_max=cfg.n_max, tol=cfg.tol,
                max_tuples=cfg.max_tuples, seed=cfg.seed + bi,
            )
            n_curves += 1
            report.samples_tested += n_t
            if verdict.indeterminate:
                report.indeterminate_events += 1
            elif not verdict.positive:
                report.failures.append({
                    "curve": "projection", "base": _word_str(base.word),
                    "witness": repr(verdict.witness),
                })
        # truncation curve in x^k
        xk = base.flags[k]
        trunc_pts, ok = [], True
        for y in others:
            pieces = []
            for i, j in enumerate(trunc_dims, start=1):
                cap = meet(y.flags[j], xk, cfg.tol)
                if cap.dim != i:
                    report.failures.append({
                        "curve": "truncation", "base": _word_str(base.word),
                        "point": _word_str(y.word),
                        "reason": f"y^{j} cap x^{k} has dim {cap.dim}, expected {i}",
                    })
                    ok = False
                    break
                pieces.append(Subspace(xk.basis.T @ cap.basis, cfg.tol))
            if not ok:
                break
            trunc_pts.append((y.angle, Flag(pieces)))
        if ok and len(trunc_pts) >= 3:
            verdict, n_t = curve_positive(
                trunc_pts, n_max=cfg.n_max, tol=cfg.tol,
                max_tuples=cfg.max_tuples, seed=cfg.seed + 1000 + bi,
            )
            n_curves += 1
            report.samples_tested += n_t
            if verdict.indeterminate:
                report.indeterminate_events += 1
            elif not verdict.positive:
                report.failures.append({
                    "curve": "truncation", "base": _word_str(base.word),
                    "witness": repr(verdict.witness),
                })
    report.details["curves_tested"] = n_curves
    return report.finalize()


# ---------------------------------------------------------------------------
# positively ratioed

def check_positively_ratioed(rep, k, cfg=None):
    """cr_k(x^k, y^{d-k}, z^{d-k}, w^k) >= 1 on sampled cyclically ordered quadruples.

    All four rotations of each angle-sorted quadruple are tested; the report
    records the minimum log cross ratio (the strictness margin).
    """
    cfg = cfg or SampleConfig()
    d = rep.dim
    samples, skipped = _flag_samples(rep, {k, d - k}, cfg)
    report = CheckReport(
        "positively_ratioed", {"k": k, "rep": rep.label, "n_samples": len(samples)}
    )
    report.skipped = skipped
    if len(samples) < 4:
        report.indeterminate_events += 1
        report.details["reason"] = "fewer than four gapped samples"
        return report.finalize()
    samples = sorted(samples, key=lambda s: s.angle)
    combos = _subsample(
        list(itertools.combinations(samples, 4)), cfg.max_tuples // 4, cfg.seed
    )
    min_log = None
    for combo in combos:
        for r in range(4):
            x, y, z, w = combo[r:] + combo[:r]
            if not cyclically_ordered([x.angle, y.angle, z.angle, w.angle]):
                continue
            report.samples_tested += 1
            try:
                sign, logmag = cross_ratio_k_signlog(
                    x.flags[k], y.flags[d - k], z.flags[d - k], w.flags[k], cfg.tol
                )
            except NotInDomain:
                report.failures.append({
                    "reason": "NotInDomain",
                    "words": [_word_str(s.word) for s in (x, y, z, w)],
                })
                continue
            if sign <= 0:
                report.failures.append({
                    "reason": f"cross ratio sign {sign}",
                    "words": [_word_str(s.word) for s in (x, y, z, w)],
                })
                continue
            if min_log is None or logmag < min_log:
                min_log = float(logmag)
            if logmag < np.log1p(-cfg.tol.cr_rel_tol):
                report.failures.append({
                    "reason": f"cross ratio below 1: log = {logmag}",
                    "words": [_word_str(s.word) for s in (x, y, z, w)],
                })
    report.extremal = min_log
    report.details["strict_margin_log"] = min_log
    return report.finalize()


# ---------------------------------------------------------------------------
# collar inequality

def check_collar(rep, k, cfg=None, max_pairs=None):
    """Root-versus-weight collar inequality over all linked sampled pairs.

    For linked (g, h):  log weight_k(rho(g)) > -log(1 - lam_{k+1}/lam_k(rho(h))).
    Pairs whose ratio is not numerically real are skipped with a reason.
    """
    cfg = cfg or SampleConfig()
    if rep.circle is None:
        raise ValueError("collar check needs the SL(2,R) circle model")
    words = _sample_words(rep, cfg)
    dual = dual_rep(rep)
    report = CheckReport(
        "collar", {"k": k, "rep": rep.label, "word_length": cfg.word_length}
    )
    data = {}
    for w in words:
        m2 = rep.circle.evaluate(w)
        if abs(np.trace(m2)) <= 2.0 + 1e-9:
            report.skipped.append((_word_str(w), "not hyperbolic"))
            continue
        th_p, th_m = fixed_points(m2)
        try:
            spec = word_spectrum(rep, w, dual=dual, tol=cfg.tol)
        except SingularMatrix:
            report.skipped.append((_word_str(w), "singular image"))
            continue
        lw = spec.log_weight(k)
        ratio = spec.values[k] / spec.values[k - 1]
        if abs(ratio.imag) > 1e-9 * abs(ratio):
            report.skipped.append((_word_str(w), "complex root ratio"))
            continue
        data[w] = (th_p, th_m, lw, float(ratio.real))
    pairs = list(itertools.permutations(data, 2))
    if max_pairs is not None:
        pairs = _subsample(pairs, max_pairs, cfg.seed)
    min_margin = None
    for g, h in pairs:
        gp, gm = data[g][0], data[g][1]
        hp, hm = data[h][0], data[h][1]
        def close(a, b):
            diff = (a - b) % (2 * np.pi)
            return min(diff, 2 * np.pi - diff) <= 1e-9
        if any(close(a, b) for a in (gp, gm) for b in (hp, hm)):
            continue  # shared axis, linking undefined
        on_arc = lambda t: (t - gm) % (2 * np.pi) <= (gp - gm) % (2 * np.pi)
        if on_arc(hp) == on_arc(hm):
            continue  # unlinked
        report.samples_tested += 1
        lw_g = data[g][2]
        r_h = data[h][3]
        rhs = -np.log1p(-r_h) if r_h < 1.0 else np.inf
        margin = lw_g - rhs
        if min_margin is None or margin < min_margin:
            min_margin = float(margin)
        if not margin > 0:
            report.failures.append({
                "g": _word_str(g), "h": _word_str(h),
                "log_weight_g": lw_g, "rhs_log": float(rhs),
            })
    report.extremal = min_margin
    return report.finalize()


# ---------------------------------------------------------------------------
# degeneration sweeps

CHECKS = {
    "gaps": check_anosov_gaps,
    "transversality": check_transversality,
    "tridirect": check_tridirect,
    "H_k": check_Hk,
    "C_k": check_Ck,
    "H_k_star": check_Hk_star,
    "C_k_star": check_Ck_star,
    "k_positive": check_k_positive,
    "positively_ratioed": check_positively_ratioed,
    "collar": check_collar,
}


@dataclass
class SweepResult:
    rows: list
    summary: dict

    def to_csv_lines(self):
        if not self.rows:
            return ["t"]
        cols = list(self.rows[0].keys())
        lines = [",".join(cols)]
        for row in self.rows:
            cells = []
            for c in cols:
                v = row[c]
                cells.append(f"{v:.17g}" if isinstance(v, float) else str(v))
            lines.append(",".join(cells))
        return lines


def sweep_deformation(path, t_grid, checks, k, cfg=None, check_cfgs=None,
                      crossing_log_tol=None):
    """Run checks along a deformation path and locate the first gap collapse.

    One row per t carries the minimum sampled log-gap for every root index
    and the verdict of each requested check at ``k``.  The collapse parameter
    t0 is the first grid point whose minimum sampled k-gap dips below the
    crossing tolerance; per-word log-gap curves are V-shaped in t near a
    collapse, so on a grid of step h a dip is resolved only to depth
    (max slope) * h / 2 and the default tolerance is word_length * h / 2.

    Also records whether the gap failure precedes or coincides with every
    other check's first failure (the expected degeneration order).
    """
    cfg = cfg or SampleConfig()
    check_cfgs = check_cfgs or {}
    t_grid = [float(t) for t in t_grid]
    if not t_grid:
        raise ValueError("empty parameter grid")
    if crossing_log_tol is None:
        step = min(
            (abs(b - a) for a, b in zip(t_grid, t_grid[1:])), default=0.05
        )
        crossing_log_tol = cfg.word_length * step / 2.0

    gap_words = None
    rows = []
    first_fail = {name: None for name in checks}
    for t in t_grid:
        rep = path.rep_at(t)
        if gap_words is None:
            gap_words = [w for w in enumerate_words(rep.group, cfg.word_length)
                         if is_cyclically_reduced(w)]
        logm = _batched_spectra(rep, gap_words)
        stack = np.stack([logm[w] for w in gap_words])
        gaps = stack[:, :-1] - stack[:, 1:]
        row = {"t": t}
        for kk in range(1, rep.dim):
            row[f"min_log_gap_k{kk}"] = float(gaps[:, kk - 1].min())
        for name in checks:
            ccfg = check_cfgs.get(name, cfg)
            report = CHECKS[name](rep, k, ccfg)
            row[f"{name}_verdict"] = report.verdict
            if report.verdict == "fail" and first_fail[name] is None:
                first_fail[name] = t
        rows.append(row)

    t0 = None
    for row in rows:
        if row[f"min_log_gap_k{k}"] <= crossing_log_tol:
            t0 = row["t"]
            break
    order_ok = True
    if "gaps" in first_fail and first_fail["gaps"] is not None:
        for name, tf in first_fail.items():
            if name != "gaps" and tf is not None and tf < first_fail["gaps"]:
                order_ok = False
    summary = {
        "t0": t0,
        "crossing_log_tol": crossing_log_tol,
        "first_fail": first_fail,
        "gap_fail_first_or_tied": order_ok,
        "k": k,
    }
    return SweepResult(rows, summary)
