import math

import numpy as np
import pytest

from toricstab import errors
from toricstab.functional import PLConvexFunction
from toricstab.lattice import (
    Nk,
    PhiSpec,
    fit_expansion,
    phi_sum_check,
    riemann_roch_check,
    weighted_sums,
)


@pytest.fixture(scope="module")
def step():
    return PLConvexFunction.max_with_zero([1])


def test_Nk_examples(seg, cp2, bl1):
    for k in (1, 3, 7):
        assert Nk(seg, k) == 2 * k + 1
    assert Nk(cp2, 1) == 10
    assert Nk(cp2, 2) == 28
    # reflexive Ehrhart: |P| k^2 + (|dP|/2) k + 1
    for k in (1, 2, 5):
        assert Nk(cp2, k) == (9 * k * k + 9 * k + 2) // 2
        assert Nk(bl1, k) == 4 * k * k + 4 * k + 1


def test_weighted_sums_hand_examples(seg, step):
    s1, s2 = weighted_sums(seg, [0.0], step, 2, 1)
    assert (s1, s2) == (5.0, 0.0)
    s1, s2 = weighted_sums(seg, [0.0], step, 2, 2)
    assert (s1, s2) == (17.0, 0.0)


def test_weighted_sums_constant_u(seg, cp2):
    zero = PLConvexFunction.constant(0, 1)
    for k in (1, 4):
        s1, s2 = weighted_sums(seg, [0.0], zero, 1, k)
        assert s1 == pytest.approx(k * Nk(seg, k), abs=0)
        assert s2 == 0.0


def test_s2_zero_iff_theta_zero(cp2):
    u = PLConvexFunction.max_with_zero([1, 0])
    _, s2 = weighted_sums(cp2, [0.0, 0.0], u, 2, 7)
    assert s2 == 0.0
    _, s2b = weighted_sums(cp2, [0.3, 0.1], u, 2, 7)
    assert s2b != 0.0


def test_weighted_sums_R_affinity(cp2):
    # S1(R) = S1(R') + (R - R') k W with W = sum e^{theta(I/k)}
    u = PLConvexFunction.max_with_zero([1, 0])
    th = [0.25, -0.4]
    k = 9
    pts = cp2.lattice_points(k).astype(float) / k
    W = math.fsum(np.exp(pts @ np.array(th)).tolist())
    s1_a, _ = weighted_sums(cp2, th, u, 2, k)
    s1_b, _ = weighted_sums(cp2, th, u, 5, k)
    assert s1_b - s1_a == pytest.approx(3 * k * W, rel=1e-13)


def test_rr_requires_domination(seg, step):
    with pytest.raises(errors.RNotDominatingError):
        weighted_sums(seg, [0.0], step, 0.5, 3)


def test_fit_recovers_exact_model():
    ks = list(range(10, 61, 5))
    a, b, c = -1.75, 0.125, 0.3
    ratios = [a + b / k + c / k**2 for k in ks]
    fit = fit_expansion(ks, ratios)
    assert fit.F0_est == pytest.approx(a, abs=1e-12)
    assert fit.F1_est == pytest.approx(b, abs=1e-12)
    assert fit.residual_norm <= 1e-12


def test_rr_segment(seg, step):
    rep = riemann_roch_check(seg, [0.0], step, 2, range(10, 61, 5))
    assert abs(rep.fit.F1_est - 1 / 8) <= 2e-3
    assert abs(rep.fit.F0_est + 7 / 4) <= 2e-3
    assert rep.F1_integral == pytest.approx(1 / 8, abs=1e-13)
    assert rep.F0_integral == pytest.approx(-7 / 4, abs=1e-13)


def test_rr_cp2(cp2):
    u = PLConvexFunction.max_with_zero([1, 0])
    rep = riemann_roch_check(cp2, [0.0, 0.0], u, 2, range(10, 61, 5))
    assert abs(rep.fit.F1_est - 4 / 27) <= 5e-3


def test_rr_linear_u_at_soliton(solitons, bl1):
    theta = solitons["Bl1CP2"].theta
    # shift the linear function so R - u stays positive
    u = PLConvexFunction([([1, 0], 0)])
    rep = riemann_roch_check(bl1, theta, u, 3, range(10, 61, 5))
    assert abs(rep.fit.F1_est) <= 2e-3
    assert abs(rep.F1_integral) <= 1e-9


def test_rr_ratio_cauchy_rate(seg, step):
    rep = riemann_roch_check(seg, [0.0], step, 2, [10, 20, 40])
    r = {rec.k: rec.ratio for rec in rep.records}
    b = rep.fit.F1_est
    # |ratio_2k - ratio_k - b (1/2k - 1/k)| should be tail-sized
    for k in (10, 20):
        gap = r[2 * k] - r[k] - b * (1 / (2 * k) - 1 / k)
        assert abs(gap) <= 5e-4


def test_rr_threads_deterministic(seg, step):
    a = riemann_roch_check(seg, [0.0], step, 2, range(10, 41, 5), threads=1)
    b = riemann_roch_check(seg, [0.0], step, 2, range(10, 41, 5), threads=4)
    assert a.to_dict() == b.to_dict()


def test_rr_needs_three_k(seg, step):
    with pytest.raises(ValueError):
        riemann_roch_check(seg, [0.0], step, 2, [10, 20])


def test_phi_sum_segment_exact(seg):
    rep = phi_sum_check(seg, PhiSpec.constant(1), range(5, 26, 5))
    assert all(e == 0.0 for e in rep.errors)


def test_phi_sum_step_segment_exact(seg, step):
    # sum max(0, I/k) = (k+1)/2; interior 1/2, boundary 1 -> E = 0
    rep = phi_sum_check(seg, PhiSpec.from_pl(step), range(5, 26, 5))
    for e in rep.errors:
        assert abs(e) <= 1e-12


def test_phi_sum_cp2_constant_is_one(cp2):
    rep = phi_sum_check(cp2, PhiSpec.constant(2), range(10, 51, 5))
    assert all(e == 1.0 for e in rep.errors)
    assert rep.sup_normalized == 1.0


def test_phi_sum_cp2_exp_bounded(cp2):
    rep = phi_sum_check(cp2, PhiSpec.exp_weight([0.3, 0.1]), range(5, 51, 5))
    # regression bound recorded from the enumeration oracle (sup ~= 1.0962)
    assert rep.sup_normalized <= 1.5


def test_phi_spec_coordinate(cp2):
    rep = phi_sum_check(cp2, PhiSpec.coordinate(0, 2), range(10, 31, 5))
    assert rep.interior_integral == pytest.approx(0.0, abs=1e-13)
    assert all(abs(e) < 5.0 for e in rep.errors)


def test_rr_report_dict_roundtrip(seg, step):
    rep = riemann_roch_check(seg, [0.0], step, 2, [10, 15, 20])
    d = rep.to_dict()
    assert d["k_values"] == [10, 15, 20]
    assert set(d["fit"]) == {"F0_est", "F1_est", "curvature", "residual_norm"}
    assert set(d["reference"]) == {"F0_integral", "F1_integral"}
