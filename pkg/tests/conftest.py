import numpy as np
import pytest

from posrep import groups, reps


@pytest.fixture(scope="session")
def octagon():
    return groups.octagon_holonomy()


@pytest.fixture(scope="session")
def rep_tau3(octagon):
    return reps.fuchsian_rep((3,), octagon)


@pytest.fixture(scope="session")
def rep_tau5(octagon):
    return reps.fuchsian_rep((5,), octagon)


@pytest.fixture(scope="session")
def rep_tau52(octagon):
    return reps.fuchsian_rep((5, 2), octagon)


@pytest.fixture(scope="session")
def rep_tau72(octagon):
    return reps.fuchsian_rep((7, 2), octagon)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


def random_invertible(rng, d, spread=2.0):
    """Random matrix with singular values bounded away from zero."""
    while True:
        m = rng.normal(size=(d, d)) * spread
        if abs(np.linalg.det(m)) > 1e-3:
            return m


def random_proximal(rng, d, k, min_gap=1.25, tries=500):
    """Random matrix with modulus gaps at k and d-k above min_gap."""
    from posrep.numlin import eig_sorted, gap_ratio

    for _ in range(tries):
        m = random_invertible(rng, d)
        s = eig_sorted(m)
        if gap_ratio(s, k) > min_gap and gap_ratio(s, d - k) > min_gap:
            return m, s
    raise AssertionError("could not sample a proximal matrix")
