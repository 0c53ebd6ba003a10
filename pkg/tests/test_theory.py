import math

import numpy as np
import pytest
from scipy.integrate import quad

from pdmetric import PersistenceDiagram, bottleneck_distance, diagram_distance
from pdmetric.theory import (
    MAX_PACKING_SIZE,
    assouad_packing,
    empirical_distortion,
    landscape_cauchy_tail,
    landscape_cauchy_tail_grid,
    pwg_cauchy_tail,
    pwg_cauchy_tail_grid,
    s_diagram,
    s_distance_lower_bound,
    s_truncation,
    verify_packing,
)

# frozen outputs of the closed-form evaluation
PWG_TAIL_100_200 = 2.230816366954097e-06
PWG_TAIL_1000_10000 = 2.6155218284131964e-09


def test_s_truncations():
    assert s_truncation(1).diagram == PersistenceDiagram([(1, 2)])
    assert s_truncation(3).diagram == PersistenceDiagram([(1, 2), (2, 2.5), (3, 10 / 3)])
    with pytest.raises(ValueError):
        s_truncation(0)
    with pytest.raises(ValueError):
        s_diagram([0, 1])


def test_s_lower_bound_examples():
    assert s_distance_lower_bound({1, 2}, {1, 2, 3, 4}, verify=True) == pytest.approx(7 / 24, abs=1e-15)
    assert s_distance_lower_bound({2, 5}, {2, 5}, verify=True) == 0.0
    for k in range(1, 5):
        half_harmonic = 0.5 * sum(1 / i for i in range(1, k + 1))
        assert s_distance_lower_bound(range(1, k + 1), (), verify=True) == pytest.approx(half_harmonic, abs=1e-15)


def test_s_lower_bound_matches_solver_beyond_oracle():
    rng = np.random.default_rng(8)
    for _ in range(10):
        a = set(rng.choice(np.arange(1, 40), size=12, replace=False).tolist())
        b = set(rng.choice(np.arange(1, 40), size=9, replace=False).tolist())
        s_distance_lower_bound(a, b, verify=True)


def test_s_divergence():
    k = 40_000
    value = s_distance_lower_bound(range(1, k + 1), ())
    assert value > 5.0
    assert value == pytest.approx(0.5 * (math.log(k) + 0.5772156649015329 + 1 / (2 * k)), rel=1e-9)


def test_pwg_tail_first_term_is_tight():
    tail, bound = pwg_cauchy_tail(1, 2)
    assert tail == pytest.approx(math.pi / 16, rel=1e-14)
    assert bound == pytest.approx(math.pi / 16, rel=1e-14)


def test_tail_rejects_empty_range():
    for fn in (pwg_cauchy_tail, landscape_cauchy_tail):
        with pytest.raises(ValueError):
            fn(3, 3)
        with pytest.raises(ValueError):
            fn(4, 2)


def test_pwg_tail_golden():
    tail, bound = pwg_cauchy_tail(100, 200)
    assert tail == pytest.approx(PWG_TAIL_100_200, rel=1e-9)
    assert tail <= bound < math.pi * 0.01**2


def test_pwg_tail_is_cauchy():
    tail, _ = pwg_cauchy_tail(1000, 10_000)
    assert tail == pytest.approx(PWG_TAIL_1000_10000, rel=1e-9)
    assert tail < 1e-6


def test_pwg_grid_matches_direct():
    tails, bounds = pwg_cauchy_tail_grid(30, sigma=0.7)
    for p, q in [(1, 2), (3, 17), (10, 30), (29, 30)]:
        t, b = pwg_cauchy_tail(p, q, sigma=0.7)
        assert tails[p, q] == pytest.approx(t, rel=1e-10)
        assert bounds[p, q] == pytest.approx(b, rel=1e-12)
    assert np.isnan(tails[5, 5]) and np.isnan(tails[6, 5])


def test_landscape_tail_first_term():
    tail, bound = landscape_cauchy_tail(1, 2)
    assert tail == pytest.approx(1 / 96, abs=1e-12)
    assert bound == pytest.approx(1 / 16, abs=1e-15)
    # quadrature oracle on the single added triangle over [2, 2.5]
    phi = lambda t: max(0.0, min(t - 2.0, 2.5 - t))
    assert quad(lambda t: phi(t) ** 2, 2.0, 2.5, points=[2.25], epsabs=1e-14)[0] == pytest.approx(1 / 96, abs=1e-12)


def test_landscape_tail_closed_form_and_monotone():
    tails, bounds = landscape_cauchy_tail_grid(25)
    for p in (1, 4, 12):
        row = tails[p, p + 1 :]
        assert np.all(np.diff(row) >= 0)
        expected = np.cumsum([1 / (12 * k**3) for k in range(p + 1, 26)])
        assert np.allclose(row, expected, rtol=1e-12)
        assert np.all(row <= bounds[p, p + 1 :])
        assert bounds[p, 25] < 1 / (4 * p)


def test_packing_construction():
    fam = assouad_packing(3, 1, 1)
    assert (fam.M, fam.beta) == (7, 0.5)
    assert fam.r == pytest.approx(2 / 7)
    assert fam.diagrams[2] == PersistenceDiagram([(-1 + 2 * 2 / 7, -1 + 3 * 2 / 7)])
    assert assouad_packing(2, 1, 1).M == 5
    rng = np.random.default_rng(4)
    for C, alpha in zip(rng.uniform(0.01, 50, 100), rng.uniform(0.01, 5, 100)):
        fam = assouad_packing(C, alpha, 1.0)
        assert fam.M > C * 2**alpha


def test_packing_refuses_huge():
    with pytest.raises(ValueError, match=str(MAX_PACKING_SIZE)):
        assouad_packing(1, 30, 1)
    with pytest.raises(ValueError):
        assouad_packing(0, 1, 1)


@pytest.mark.parametrize("p, pair", [(1, 0.4), (2, math.sqrt(2) * 0.2), (math.inf, 0.2)])
def test_verify_packing(p, pair):
    report = verify_packing(assouad_packing(2, 1, 1), p)
    assert report["passed"]
    assert report["M"] == 5
    assert report["pairwise_min"] == pytest.approx(pair, abs=1e-12)
    assert report["pairwise_max"] == pytest.approx(pair, abs=1e-12)
    assert report["to_empty_max"] == pytest.approx(0.2, abs=1e-12)
    assert report["separated_at_beta"] == (p == 1)


def test_empirical_distortion_basic():
    a, b = PersistenceDiagram([(0, 1)]), PersistenceDiagram([(0, 2)])
    est = empirical_distortion("X", [a, b], lambda x, y: 0.5 * diagram_distance(x, y, 1))
    assert est.A_hat == est.B_hat == 0.5
    assert est.min_d1_over_dh == est.max_d1_over_dh == 2.0
    assert est.N == 2 and est.L == 2.0
    assert est.as_dict()["d1_over_hilbert"]["A_hat"] == 2.0


def test_empirical_distortion_skips_and_flags():
    a = PersistenceDiagram([(0, 1)])
    b = PersistenceDiagram([(0, 3)])
    est = empirical_distortion("X", [a, a, b], lambda x, y: 1.0)
    assert est.skipped_pairs == 1
    assert est.injectivity_violations == ((0, 1),)
    assert est.pair_count == 2
    with pytest.raises(ValueError):
        empirical_distortion("X", [a], lambda x, y: 1.0)


def test_empirical_distortion_nested_pools():
    rng = np.random.default_rng(2)
    pool = [PersistenceDiagram(np.sort(rng.random((4, 2)), axis=1)) for _ in range(8)]
    fn = bottleneck_distance
    prev = None
    for n in range(2, 9):
        est = empirical_distortion("BN", pool[:n], fn)
        assert est.A_hat <= est.quantiles["median"] <= est.B_hat
        if prev is not None:
            assert est.A_hat <= prev.A_hat and est.B_hat >= prev.B_hat
        prev = est
