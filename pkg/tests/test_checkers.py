import numpy as np
import pytest

from posrep.groups import MarkedGroup
from posrep.reps import (
    MarkedRep, fuchsian_rep, dual_rep, ext_power_rep, sec71_family,
    DeformationPath,
)
from posrep.numlin import TolerancePolicy
from posrep.checkers import (
    SampleConfig, CheckReport, check_anosov_gaps, check_transversality,
    check_tridirect, check_hyperconvexity, check_Hk, check_Ck, check_Hk_star,
    check_Ck_star, check_k_positive, check_positively_ratioed, check_collar,
    sweep_deformation, BadPartition,
)


@pytest.fixture(scope="module")
def cfg_small():
    return SampleConfig(word_length=3, n_samples=8, seed=7)


def test_sample_config_guards():
    with pytest.raises(ValueError):
        SampleConfig(word_length=9)
    with pytest.raises(ValueError):
        SampleConfig(n_max=6)


def test_gaps_pass_fuchsian(rep_tau5):
    cfg = SampleConfig(word_length=3, seed=7)
    for k in (1, 2, 3, 4):
        r = check_anosov_gaps(rep_tau5, k, cfg)
        assert r.verdict == "pass", (k, r.failures[:1])
        assert r.extremal > 0.5
        profile = r.details["per_length_min_log_gap"]
        assert set(profile) == {"1", "2", "3"}


def test_gaps_fail_identity_rep():
    grp = MarkedGroup("free", rank=2)
    rep = MarkedRep(grp, 3, [np.eye(3), np.eye(3)])
    r = check_anosov_gaps(rep, 1, SampleConfig(word_length=2, seed=0))
    assert r.verdict == "fail"
    assert r.extremal == pytest.approx(0.0, abs=1e-12)


def test_transversality_pass_tau52(rep_tau52, cfg_small):
    for k in (1, 2):
        r = check_transversality(rep_tau52, k, cfg_small)
        assert r.verdict == "pass"
        assert r.extremal > 1e-6


def test_transversality_sec71_fails_at_large_n():
    rep = sec71_family(2.0, 10 ** 6)
    cfg = SampleConfig(word_length=1, tol=TolerancePolicy(rank_rel_tol=1e-4))
    r = check_transversality(rep, 1, cfg)
    assert r.verdict == "fail"
    assert r.extremal < 1e-4


def test_transversality_sec71_small_n_passes():
    rep = sec71_family(2.0, 1)
    r = check_transversality(rep, 1, SampleConfig(word_length=1))
    assert r.verdict == "pass"


def test_tridirect_pass_fuchsian(rep_tau5, cfg_small):
    r = check_tridirect(rep_tau5, 2, cfg_small)
    assert r.verdict == "pass"
    assert all(p + q + l <= 5 and l >= 3 for (p, q, l) in r.params["index_triples"])


def test_hyperconvexity_tau5(rep_tau5, cfg_small):
    r = check_hyperconvexity(rep_tau5, 2, (1, 1, 3), cfg_small)
    assert r.verdict == "pass"
    with pytest.raises(BadPartition):
        check_hyperconvexity(rep_tau5, 2, (1, 1, 2), cfg_small)  # n_i < d-k
    with pytest.raises(BadPartition):
        check_hyperconvexity(rep_tau5, 2, (2, 2, 3), cfg_small)  # total > d


def test_Hk_and_Ck_on_tau5(rep_tau5, cfg_small):
    for k in (1, 2, 3):
        assert check_Hk(rep_tau5, k, cfg_small).verdict == "pass"
    for k in (1, 2):
        assert check_Ck(rep_tau5, k, cfg_small).verdict == "pass"


def test_Hk_star_and_Ck_star(rep_tau72):
    cfg = SampleConfig(word_length=3, n_samples=7, seed=3)
    assert check_Hk_star(rep_tau72, 1, cfg).verdict == "pass"
    assert check_Ck_star(rep_tau72, 1, cfg).verdict == "pass"


def test_Hk_duality(rep_tau52, cfg_small):
    # H_j for rho iff H_{d-j} for the dual, on identical sample words
    d = rep_tau52.dim
    for j in (1, 2):
        r1 = check_Hk(rep_tau52, j, cfg_small)
        r2 = check_Hk(dual_rep(rep_tau52), d - j, cfg_small)
        assert r1.verdict == r2.verdict


def test_k_positive_vacuous_k1(rep_tau3, cfg_small):
    r = check_k_positive(rep_tau3, 1, cfg_small)
    assert r.verdict == "pass"
    assert "1-Anosov" in r.details["note"]


def test_k_positive_tau3(rep_tau3, cfg_small):
    r = check_k_positive(rep_tau3, 2, cfg_small)
    assert r.verdict == "pass"
    assert r.details["curves_tested"] > 0


def test_k_positive_tau52_range(rep_tau52, cfg_small):
    # predicted positive for 2(k-1) < 3, i.e. k = 2
    assert check_k_positive(rep_tau52, 2, cfg_small).verdict == "pass"
    # k = 3 sits outside the predicted range: the 3-plane mixes the two
    # blocks and the curves stop being positive
    r = check_k_positive(rep_tau52, 3, cfg_small)
    assert r.verdict == "fail"


def test_positively_ratioed_tau3(rep_tau3, cfg_small):
    r = check_positively_ratioed(rep_tau3, 1, cfg_small)
    assert r.verdict == "pass"
    assert r.extremal > 0  # strict margin


def test_positively_ratioed_ext_power_reduction(rep_tau3, cfg_small):
    # k-positively-ratioed iff the wedge power is 1-positively-ratioed
    r_base = check_positively_ratioed(rep_tau3, 2, cfg_small)
    r_ext = check_positively_ratioed(ext_power_rep(rep_tau3, 2), 1, cfg_small)
    assert r_base.verdict == r_ext.verdict == "pass"


def test_collar_tau3(rep_tau3):
    cfg = SampleConfig(word_length=2, seed=5)
    r = check_collar(rep_tau3, 1, cfg, max_pairs=2000)
    assert r.verdict == "pass"
    assert r.samples_tested > 100
    assert r.extremal > 0


def test_collar_needs_circle_model():
    rep = sec71_family(2.0, 1)
    with pytest.raises(ValueError):
        check_collar(rep, 1)


def test_report_serializes(rep_tau3, cfg_small):
    r = check_anosov_gaps(rep_tau3, 1, cfg_small)
    d = r.to_dict()
    assert d["property"] == "anosov_gaps"
    assert d["verdict"] == "pass"


def test_sweep_smoke(octagon):
    eta1 = fuchsian_rep((5,), octagon)
    eta2 = fuchsian_rep((2,), octagon)
    path = DeformationPath(eta1, eta2, {1: 1.0})
    grid = [0.0, 0.5, 1.0, 1.5, 2.0, 2.5]
    cfg = SampleConfig(word_length=2, seed=1, gap_log_margin=0.2)
    res = sweep_deformation(path, grid, ["gaps"], 2, cfg, crossing_log_tol=0.3)
    assert res.summary["t0"] is not None
    assert 1.0 <= res.summary["t0"] <= 2.0
    verdicts = [row["gaps_verdict"] for row in res.rows]
    assert verdicts[0] == "pass" and verdicts[-1] == "fail"
    csv = res.to_csv_lines()
    assert csv[0].startswith("t,") and len(csv) == len(grid) + 1
    assert res.summary["gap_fail_first_or_tied"]
