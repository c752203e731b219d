import itertools

import numpy as np
import pytest

from posrep.numlin import eig_sorted, gap_ratio, NoGap, invariant_subspace_top
from posrep.grassmann import (
    Subspace, Flag, transverse, meet, sum_direct, wedge_vol,
    cross_ratio_k, cross_ratio_k_signlog, cr_period_expected,
    quotient, push, ext_power_matrix, ext_power_subspace, plucker_pairing,
    DimMismatch, DimOverflow, NotInDomain,
)
from conftest import random_invertible, random_proximal

E = np.eye(3)


def span(*vecs):
    return Subspace.spanned_by(*vecs)


def cr_oracle(V1, W2, W3, V4):
    """Independent four-determinant evaluation of the cross ratio."""
    det = lambda V, W: np.linalg.det(np.hstack([V.basis, W.basis]))
    return (det(V1, W3) * det(V4, W2)) / (det(V1, W2) * det(V4, W3))


def test_transverse_examples():
    assert transverse(span(E[:, 0]), span(E[:, 1], E[:, 2]))
    assert not transverse(span(E[:, 0]), span(E[:, 0], E[:, 1]))
    with pytest.raises(DimMismatch):
        transverse(span(E[:, 0]), span(E[:, 1]))


def test_sec71_limit_line_not_transverse():
    # limit of the attracting lines [1:n:0:0] is [e2], inside <e2,e3,e4>
    line = Subspace(np.array([0.0, 1.0, 0.0, 0.0]))
    hyper = Subspace(np.eye(4)[:, 1:])
    assert not transverse(line, hyper)


def test_meet_examples(rng):
    V = span(E[:, 0], E[:, 1])
    W = span(E[:, 1], E[:, 2])
    M = meet(V, W)
    assert M.dim == 1
    assert abs(abs(M.basis[:, 0] @ E[:, 1]) - 1) < 1e-12
    assert meet(span(E[:, 0], E[:, 1]), span(E[:, 2])).dim == 0
    # generic k-plane meets a (d-k+1)-plane in a line
    for d, k in [(4, 2), (5, 2), (6, 3)]:
        A = Subspace(rng.normal(size=(d, k)))
        B = Subspace(rng.normal(size=(d, d - k + 1)))
        assert meet(A, B).dim == 1


def test_sum_direct_examples():
    assert sum_direct([span(E[:, 0]), span(E[:, 1]), span(E[:, 2])])
    assert not sum_direct([span(E[:, 0]), span(E[:, 0] + E[:, 1]), span(E[:, 1])])
    with pytest.raises(DimOverflow):
        sum_direct([span(E[:, 0], E[:, 1]), span(E[:, 1], E[:, 2])])


def test_wedge_vol_examples():
    e = np.eye(2)
    assert wedge_vol(Subspace(e[:, 0]), Subspace(e[:, 1])) == pytest.approx(1.0)
    assert wedge_vol(Subspace(e[:, 0]), Subspace(e[:, 0])) == pytest.approx(0.0)
    a = Subspace(np.array([1.0, -1.0]))
    b = Subspace(np.array([1.0, 1.0]))
    # orthonormalization rescales each basis vector, magnitude is basis-fixed
    assert abs(wedge_vol(a, b)) == pytest.approx(1.0)


def test_cross_ratio_half():
    e = np.eye(2)
    V1, W2 = Subspace(e[:, 0]), Subspace(e[:, 1])
    W3 = Subspace(np.array([1.0, 1.0]))
    V4 = Subspace(np.array([1.0, -1.0]))
    assert cross_ratio_k(V1, W2, W3, V4) == pytest.approx(0.5, rel=1e-12)
    assert cross_ratio_k(V1, W2, W3, V4) == pytest.approx(cr_oracle(V1, W2, W3, V4), rel=1e-12)


def test_cross_ratio_equal_middle_is_one(rng):
    for d, k in [(3, 1), (4, 2), (5, 2)]:
        V1 = Subspace(rng.normal(size=(d, k)))
        V4 = Subspace(rng.normal(size=(d, k)))
        W = Subspace(rng.normal(size=(d, d - k)))
        assert cross_ratio_k(V1, W, W, V4) == pytest.approx(1.0, rel=1e-10)


def test_cross_ratio_period_diag():
    g = np.diag([2.0, 0.5])
    gm = Subspace(np.array([0.0, 1.0]))
    gp = Subspace(np.array([1.0, 0.0]))
    W = Subspace(np.array([1.0, 1.0]))
    gW = Subspace(g @ W.basis)
    value = cross_ratio_k(gm, W, gW, gp)
    assert value == pytest.approx(4.0, rel=1e-12)
    assert value == pytest.approx(cr_oracle(gm, W, gW, gp), rel=1e-12)


def test_cr_period_expected_examples():
    s = eig_sorted(np.diag([4.0, 2.0, 1.0]))
    assert cr_period_expected(s, 1) == pytest.approx(4.0)
    assert cr_period_expected(s, 2) == pytest.approx(4.0)  # (4*2)/(1*2)
    from posrep.reps import sec71_matrix
    s71 = eig_sorted(sec71_matrix(2.0, 1))
    assert cr_period_expected(s71, 1) == pytest.approx(9.0, rel=1e-10)
    with pytest.raises(NoGap):
        cr_period_expected(eig_sorted(np.diag([2.0, 2.0, 1.0])), 1)


def _admissible_tuple(rng, d, k):
    while True:
        V1 = Subspace(rng.normal(size=(d, k)))
        V4 = Subspace(rng.normal(size=(d, k)))
        W2 = Subspace(rng.normal(size=(d, d - k)))
        W3 = Subspace(rng.normal(size=(d, d - k)))
        try:
            if all(transverse(V, W) for V in (V1, V4) for W in (W2, W3)):
                return V1, W2, W3, V4
        except DimMismatch:
            raise


def test_cocycle_identities(rng):
    for d in (3, 4, 5):
        for k in range(1, d):
            V1, W2, W3, V4 = _admissible_tuple(rng, d, k)
            V5 = Subspace(rng.normal(size=(d, k)))
            W5 = Subspace(rng.normal(size=(d, d - k)))
            lhs = cross_ratio_k(V1, W2, W3, V4) * cross_ratio_k(V4, W2, W3, V5)
            assert lhs == pytest.approx(cross_ratio_k(V1, W2, W3, V5), rel=1e-8)
            lhs = cross_ratio_k(V1, W2, W3, V4) * cross_ratio_k(V1, W3, W5, V4)
            assert lhs == pytest.approx(cross_ratio_k(V1, W2, W5, V4), rel=1e-8)


def test_symmetry_and_inversion(rng):
    for d, k in [(3, 1), (4, 2), (6, 3)]:
        V1, W2, W3, V4 = _admissible_tuple(rng, d, k)
        c = cross_ratio_k(V1, W2, W3, V4)
        assert 1.0 / c == pytest.approx(cross_ratio_k(V4, W2, W3, V1), rel=1e-9)
        assert 1.0 / c == pytest.approx(cross_ratio_k(V1, W3, W2, V4), rel=1e-9)


def test_pgl_invariance(rng):
    for d, k in [(3, 1), (5, 2)]:
        V1, W2, W3, V4 = _admissible_tuple(rng, d, k)
        c = cross_ratio_k(V1, W2, W3, V4)
        g = random_invertible(rng, d)
        moved = [Subspace(g @ S.basis) for S in (V1, W2, W3, V4)]
        assert cross_ratio_k(*moved) == pytest.approx(c, rel=1e-8)


def test_zero_and_infinity_characterization(rng):
    d, k = 4, 2
    V1, W2, W3, V4 = _admissible_tuple(rng, d, k)
    # force V1 inside W3: cr = 0
    inside = Subspace(W3.basis[:, :k])
    assert cross_ratio_k(inside, W2, W3, V4) == 0.0
    # force V1 inside W2: cr = inf (pattern B still holds)
    inside2 = Subspace(W2.basis[:, :k])
    assert np.isinf(cross_ratio_k(inside2, W2, W3, V4))
    # both transversality patterns broken: V1 and V4 inside W2
    with pytest.raises(NotInDomain):
        cross_ratio_k(inside2, W2, W3, inside2)


def test_cross_ratio_log_form_consistency(rng):
    # near-degenerate tuples give large |log| without overflow, and the
    # public value is exactly the exponentiated sign-log pair
    d, k = 4, 2
    V1, W2, W3, V4 = _admissible_tuple(rng, d, k)
    tilt = Subspace(W3.basis[:, :k] + 1e-6 * rng.normal(size=(d, k)))
    sign, logmag = cross_ratio_k_signlog(tilt, W2, W3, V4)
    assert np.isfinite(logmag) and logmag < -5
    assert cross_ratio_k(tilt, W2, W3, V4) == pytest.approx(
        sign * np.exp(logmag), rel=1e-12
    )


def test_projection_of_cross_ratio(rng):
    # cross ratio equals the projective cross ratio of the pushed lines
    # when dim(P cap Q) = k - 1
    for d, k in [(4, 2), (5, 3), (5, 2)]:
        common = rng.normal(size=(d, k - 1))
        P = Subspace(np.column_stack([common, rng.normal(size=d)]))
        Q = Subspace(np.column_stack([common, rng.normal(size=d)]))
        S = Subspace(rng.normal(size=(d, d - k)))
        T = Subspace(rng.normal(size=(d, d - k)))
        cr = cross_ratio_k(P, S, T, Q)

        X_big = Subspace(np.column_stack([P.basis, Q.basis]))  # span, dim k+1
        assert X_big.dim == k + 1
        kernel = meet(P, Q)
        assert kernel.dim == k - 1
        Qmap = quotient(kernel)
        to_line = lambda V: push(Qmap, V)
        # inside the quotient plane spanned by [P], [Q]: 2-dimensional picture
        plane = push(Qmap, X_big)
        basis = plane.basis  # (d-k+1) x 2
        coords = lambda V: Subspace(basis.T @ push(Qmap, V).basis)
        p1 = coords(P)
        q1 = coords(Q)
        s1 = coords(meet(S, X_big))
        t1 = coords(meet(T, X_big))
        pcr = cross_ratio_k(p1, s1, t1, q1)
        assert pcr == pytest.approx(cr, rel=1e-7)


def test_quotient_push_examples():
    ker = Subspace(E[:, 2])
    Q = quotient(ker)
    p = push(Q, Subspace(E[:, 0]))
    assert p.dim == 1
    assert push(Q, ker).dim == 0


def test_ext_power_diag_and_identity():
    m = ext_power_matrix(np.diag([2.0, 3.0, 5.0]), 2)
    assert np.allclose(m, np.diag([6.0, 10.0, 15.0]))
    assert np.allclose(ext_power_matrix(np.eye(4), 2), np.eye(6))


def test_ext_power_functorial(rng):
    for d, k in [(4, 2), (5, 3)]:
        A = random_invertible(rng, d)
        B = random_invertible(rng, d)
        lhs = ext_power_matrix(A @ B, k)
        rhs = ext_power_matrix(A, k) @ ext_power_matrix(B, k)
        assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-9)


def test_ext_power_eigenvalue_identity(rng):
    # |lam_1/lam_2(wedge^k g)| = |lam_k/lam_{k+1}(g)|
    for d in (4, 5, 6):
        for k in range(1, d):
            m, s = random_proximal(rng, d, k)
            wk = eig_sorted(ext_power_matrix(m, k))
            assert gap_ratio(wk, 1) == pytest.approx(gap_ratio(s, k), rel=1e-8)


def test_ext_power_moduli_are_products(rng):
    m = random_invertible(rng, 4)
    s = eig_sorted(m)
    wk = eig_sorted(ext_power_matrix(m, 2))
    prods = sorted(
        (abs(s.values[i] * s.values[j]) for i, j in itertools.combinations(range(4), 2)),
        reverse=True,
    )
    assert np.allclose(wk.moduli, prods, rtol=1e-8)


def test_plucker_compatibility(rng):
    for _ in range(20):
        V = Subspace(rng.normal(size=(5, 2)))
        W = Subspace(rng.normal(size=(5, 3)))
        pairing = plucker_pairing(V, W)
        stacked = np.linalg.det(np.hstack([V.basis, W.basis]))
        assert pairing == pytest.approx(stacked, rel=1e-9, abs=1e-12)
    # non-transverse pair pairs to zero
    V = span(E[:, 0])
    W = span(E[:, 0], E[:, 1])
    assert plucker_pairing(V, W) == pytest.approx(0.0, abs=1e-12)
    line = ext_power_subspace(Subspace(np.eye(4)[:, :2]))
    assert line.dim == 1 and line.ambient_dim == 6


def test_flag_nesting_validation():
    p1 = span(E[:, 0])
    p2 = span(E[:, 0], E[:, 1])
    f = Flag([p1, p2])
    assert f.is_full and f.dims == [1, 2]
    with pytest.raises(ValueError):
        Flag([span(E[:, 0]), span(E[:, 1], E[:, 2])])
