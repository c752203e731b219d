"""Words in a marked surface or free group, an explicit hyperbolic SL(2,R)
holonomy, and the circle model of the boundary via fixed points.

The boundary at infinity is modeled ONLY through attracting/repelling fixed
points of sampled hyperbolic elements, as circle angles.  A direction
(v1, v2) in RP^1 lifts to the angle 2*atan2(v2, v1) mod 2pi; the doubling
makes the lift independent of the sign of the eigenvector.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

MAX_WORD_LENGTH = 10


class NotHyperbolic(Exception):
    """|trace| <= 2 within tolerance; no attracting/repelling fixed-point pair."""


class SharedAxis(Exception):
    """Two elements share their fixed-point set; linking is undefined."""


class DegenerateAngles(Exception):
    """Two circle angles coincide within tolerance."""


class ConstructionFailed(Exception):
    """A holonomy construction missed its defining residual bound."""


# ---------------------------------------------------------------------------
# words

def reduce_word(letters):
    """Freely reduce a sequence of signed generator indices (1-based, 0 invalid)."""
    out = []
    for l in letters:
        if l == 0:
            raise ValueError("generator index 0 is invalid")
        if out and out[-1] == -l:
            out.pop()
        else:
            out.append(int(l))
    return tuple(out)


def inverse_word(word):
    return tuple(-l for l in reversed(word))


def cyclically_reduce(word):
    w = reduce_word(word)
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return w


def is_cyclically_reduced(word):
    return len(word) < 2 or word[0] != -word[-1]


def enumerate_words(group, max_length, exact_length=False):
    """Freely reduced nonempty words up to (or exactly of) the given length.

    Free reduction only: the surface relation is NOT applied, duplicates are
    collapsed downstream by fixed-point angle.
    """
    if max_length > MAX_WORD_LENGTH:
        raise ValueError(f"word length {max_length} exceeds the guard {MAX_WORD_LENGTH}")
    n = group.n_generators
    out = []

    def rec(w):
        if w and (not exact_length or len(w) == max_length):
            out.append(tuple(w))
        if len(w) == max_length:
            return
        for g in range(1, n + 1):
            for s in (1, -1):
                if w and w[-1] == -s * g:
                    continue
                w.append(s * g)
                rec(w)
                w.pop()

    rec([])
    return out


@dataclass(frozen=True)
class MarkedGroup:
    """Surface group of genus g (2g generators) or free group of rank r."""

    kind: str  # "surface" | "free"
    genus: int = 0
    rank: int = 0

    def __post_init__(self):
        if self.kind == "surface":
            if self.genus < 2:
                raise ValueError("surface kind needs genus >= 2")
        elif self.kind == "free":
            if self.rank < 1:
                raise ValueError("free kind needs rank >= 1")
        else:
            raise ValueError(f"unknown group kind {self.kind!r}")

    @property
    def n_generators(self):
        return 2 * self.genus if self.kind == "surface" else self.rank


# ---------------------------------------------------------------------------
# SL(2,R) holonomies

@dataclass
class Holonomy2:
    """Generator matrices in SL(2,R) with the relation residual they satisfy.

    ``relation_word`` is the defining relation in the generators (None for
    free groups); the residual is measured against +-identity, as the sign is
    free in PGL.
    """

    group: MarkedGroup
    generators: list
    relation_word: tuple = None
    relation_residual: float = field(default=0.0)

    def __post_init__(self):
        for i, m in enumerate(self.generators):
            if abs(np.linalg.det(m) - 1.0) > 1e-9:
                raise ConstructionFailed(f"generator {i + 1} is not unimodular")
        if self.relation_word is not None:
            r = self.evaluate(self.relation_word)
            self.relation_residual = float(
                min(np.abs(r - np.eye(2)).max(), np.abs(r + np.eye(2)).max())
            )

    def evaluate(self, word):
        m = np.eye(2)
        for l in word:
            g = self.generators[abs(l) - 1]
            m = m @ (g if l > 0 else np.linalg.inv(g))
        return m


def _rot(theta_half):
    c, s = np.cos(theta_half), np.sin(theta_half)
    return np.array([[c, -s], [s, c]])


def octagon_holonomy():
    """Genus-2 holonomy from the regular hyperbolic octagon.

    Generator k (k = 0..3) translates by l with cosh(l/2) = 1 + sqrt(2) along
    the axis through the center at angle k*pi/4; in SL(2,R) that is
    C_k T C_k^{-1} with C_k the rotation of the hyperbolic plane by k*pi/4
    (matrix parameter k*pi/8 on the double cover).  The four translations
    satisfy the octagon relation

        g1 g2^{-1} g3 g4^{-1} g1^{-1} g2 g3^{-1} g4 = 1.
    """
    c = 1.0 + np.sqrt(2.0)
    s = np.sqrt(c * c - 1.0)
    T = np.array([[c, s], [s, c]])
    gens = [_rot(k * np.pi / 8) @ T @ _rot(-k * np.pi / 8) for k in range(4)]
    relation = (1, -2, 3, -4, -1, 2, -3, 4)
    hol = Holonomy2(MarkedGroup("surface", genus=2), gens, relation_word=relation)
    if hol.relation_residual > 1e-6:
        raise ConstructionFailed(
            f"octagon relation residual {hol.relation_residual:.2e} exceeds 1e-6"
        )
    return hol


def schottky_holonomy(spread=3.0):
    """Rank-2 free holonomy with disjoint axes, ping-pong certified.

    Generator a translates along the geodesic with boundary fixed points
    (-3, -1) and b along (1, 3), both with eigenvalue ratio ``spread``.  The
    construction certifies a Schottky ping-pong configuration of four
    pairwise disjoint arcs; below the separation threshold (spread around
    2.6 for these axes) it raises ``ConstructionFailed``.
    """
    if spread <= 1.0:
        raise ValueError("spread must exceed 1")

    def hyp(rep_pt, att_pt, lam):
        N = np.array([[att_pt, rep_pt], [1.0, 1.0]])
        return N @ np.diag([lam, 1.0 / lam]) @ np.linalg.inv(N)

    a = hyp(-3.0, -1.0, spread)
    b = hyp(3.0, 1.0, spread)
    if not _schottky_certified(a, b):
        raise ConstructionFailed(
            f"spread {spread} below the ping-pong separation threshold"
        )
    return Holonomy2(MarkedGroup("free", rank=2), [a, b])


def _boundary_angle(x):
    """Circle angle of the boundary point x in R cup {inf} (direction (x, 1))."""
    if np.isinf(x):
        return 0.0
    return float((2.0 * np.arctan2(1.0, x)) % (2.0 * np.pi))


def mobius_angle(m, theta):
    """Action of an SL(2,R) matrix on a circle angle of the RP^1 double cover."""
    v = np.array([np.cos(theta / 2.0), np.sin(theta / 2.0)])
    w = m @ v
    return float((2.0 * np.arctan2(w[1], w[0])) % (2.0 * np.pi))


def _arc_contains(arc, t):
    lo, hi = arc
    return (t - lo) % (2 * np.pi) <= (hi - lo) % (2 * np.pi)


def _arcs_disjoint(a1, a2):
    return not (
        _arc_contains(a1, a2[0]) or _arc_contains(a1, a2[1])
        or _arc_contains(a2, a1[0]) or _arc_contains(a2, a1[1])
    )


def _schottky_certified(a, b):
    """Interval ping-pong certificate for the pair (a, b).

    Chooses candidate repelling arcs around the repelling fixed points and
    takes the attracting arcs to be the Mobius images of the complements (so
    the inverse conditions hold automatically); the configuration is
    certified when the four closed arcs are pairwise disjoint for some arc
    width.  Mobius maps send arcs to arcs, so endpoint checks suffice.
    """
    def short_arc_around(x0, delta):
        t1, t2 = _boundary_angle(x0 + delta), _boundary_angle(x0 - delta)
        tf = _boundary_angle(x0)
        for arc in ((t1, t2), (t2, t1)):
            if _arc_contains(arc, tf) and (arc[1] - arc[0]) % (2 * np.pi) < np.pi:
                return arc
        raise AssertionError("degenerate candidate arc")

    for delta in np.geomspace(0.02, 2.0, 40):
        try:
            d_am = short_arc_around(-3.0, delta)
            d_bm = short_arc_around(3.0, delta)
        except AssertionError:
            continue
        d_ap = (mobius_angle(a, d_am[1]), mobius_angle(a, d_am[0]))
        d_bp = (mobius_angle(b, d_bm[1]), mobius_angle(b, d_bm[0]))
        arcs = [d_am, d_ap, d_bm, d_bp]
        if all(
            _arcs_disjoint(arcs[i], arcs[j])
            for i in range(4) for j in range(i + 1, 4)
        ):
            return True
    return False


def fixed_points(m, trace_tol=1e-9):
    """(attracting, repelling) fixed angles of a hyperbolic SL(2,R) matrix."""
    tr = float(np.trace(m))
    if abs(tr) <= 2.0 + trace_tol:
        raise NotHyperbolic(f"|trace| = {abs(tr)} <= 2")
    evals, evecs = np.linalg.eig(m)
    evals, evecs = np.real(evals), np.real(evecs)
    i_att = int(np.argmax(np.abs(evals)))
    v_att, v_rep = evecs[:, i_att], evecs[:, 1 - i_att]
    theta_p = float((2.0 * np.arctan2(v_att[1], v_att[0])) % (2.0 * np.pi))
    theta_m = float((2.0 * np.arctan2(v_rep[1], v_rep[0])) % (2.0 * np.pi))
    return theta_p, theta_m


# ---------------------------------------------------------------------------
# circle order

def cyclically_ordered(angles, tol=1e-12):
    """True iff the angles appear in positive cyclic order (fixed orientation).

    Raises ``DegenerateAngles`` when two angles coincide within tolerance.
    """
    n = len(angles)
    if n < 3:
        raise ValueError("cyclic order needs at least 3 angles")
    for i in range(n):
        for j in range(i + 1, n):
            diff = (angles[i] - angles[j]) % (2 * np.pi)
            if min(diff, 2 * np.pi - diff) <= tol:
                raise DegenerateAngles(f"angles {i} and {j} coincide within {tol}")
    # exactly one wrap-around in the cyclic sequence iff positively ordered
    wraps = sum(1 for i in range(n) if angles[(i + 1) % n] < angles[i])
    return wraps == 1


def in_interval(y, x, z, excluded, tol=1e-12):
    """Membership of y in the interval (x, z) of the circle NOT containing ``excluded``."""
    for a, b in itertools.combinations((y, x, z, excluded), 2):
        diff = (a - b) % (2 * np.pi)
        if min(diff, 2 * np.pi - diff) <= tol:
            raise DegenerateAngles("interval endpoints and probe must be distinct")
    # ccw arc from x to z
    in_ccw = lambda t: (t - x) % (2 * np.pi) <= (z - x) % (2 * np.pi)
    if in_ccw(excluded):
        return not in_ccw(y)
    return in_ccw(y)


def linked(word_g, word_h, hol, trace_tol=1e-9):
    """True iff the axes of the two hyperbolic elements cross.

    Detected by the standard alternation criterion: the fixed-point pairs
    separate each other on the circle.
    """
    gp, gm = fixed_points(hol.evaluate(word_g), trace_tol)
    hp, hm = fixed_points(hol.evaluate(word_h), trace_tol)

    def close(a, b):
        diff = (a - b) % (2 * np.pi)
        return min(diff, 2 * np.pi - diff) <= 1e-9

    if (close(gp, hp) and close(gm, hm)) or (close(gp, hm) and close(gm, hp)):
        raise SharedAxis("fixed-point sets coincide")
    if any(close(a, b) for a in (gp, gm) for b in (hp, hm)):
        raise SharedAxis("fixed-point sets partially coincide")
    # h's endpoints alternate with g's iff exactly one lies on the ccw arc gm -> gp
    on_arc = lambda t: (t - gm) % (2 * np.pi) <= (gp - gm) % (2 * np.pi)
    return on_arc(hp) != on_arc(hm)
