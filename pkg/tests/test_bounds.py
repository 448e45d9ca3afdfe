import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orbitope_lab.bounds import (
    GapProfile,
    bisect,
    dirichlet_ratio,
    epsilon_star,
    gap,
    gap_upper_envelope,
    refined_point,
    refined_scaling_experiment,
    thm12_bound,
    thm31_bound,
)
from orbitope_lab.curve import eval_curve
from orbitope_lab.exceptions import BracketFailure, CoincidentPoints, DomainError


def test_gap_examples():
    for k in (1, 2, 7):
        assert gap(k, 0.0) == -0.5
    assert gap(1, math.pi / 2) == pytest.approx(0.0, abs=1e-15)
    assert gap(2, 0.4852) == pytest.approx(0.0, abs=1e-3)


@given(st.integers(1, 30), st.floats(0.0, 3.0))
def test_gap_closed_form_for_k1_and_general(k, eps):
    if k == 1:
        assert gap(1, eps) == pytest.approx(-math.cos(eps) / 2, abs=1e-12)
    direct = 0.5 * (k - 1 - sum(math.cos((2 * i - 1) * eps) for i in range(1, k + 1)))
    assert gap(k, eps) == pytest.approx(direct, abs=1e-10)


def test_series_branch_is_continuous():
    for k in (1, 5, 40):
        lo, hi = dirichlet_ratio(k, 0.99e-4), dirichlet_ratio(k, 1.01e-4)
        assert abs(lo - hi) < 1e-3 * k ** 3 * 1e-4
        exact = sum(math.cos((2 * i - 1) * 0.99e-4) for i in range(1, k + 1))
        assert lo == pytest.approx(exact, abs=1e-12)


def test_envelope_examples():
    assert gap_upper_envelope(1, 1.0) == pytest.approx(-0.5 + 1 / 3)
    assert gap(1, 1.0) == pytest.approx(-math.cos(1.0) / 2)
    assert gap(1, 1.0) < gap_upper_envelope(1, 1.0)
    assert gap_upper_envelope(2, 1e-9) == pytest.approx(-0.5, abs=1e-15)
    assert gap_upper_envelope(3, thm31_bound(3)) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("eps", [0.0, -0.1, math.pi / 4 + 1e-6])
def test_envelope_domain(eps):
    with pytest.raises(DomainError):
        gap_upper_envelope(2, eps)


def test_epsilon_star_examples():
    assert epsilon_star(1) == pytest.approx(math.pi / 2, abs=1e-9)
    assert epsilon_star(2) == pytest.approx(0.4852, abs=1e-3)
    for k in range(1, 51):
        e = epsilon_star(k)
        assert abs(gap(k, e)) < 1e-10
        assert e > thm31_bound(k)


def test_epsilon_star_is_smallest_root():
    for k in (2, 5, 9):
        e = epsilon_star(k)
        grid = np.linspace(1e-6, e * (1 - 1e-9), 2000)
        assert np.all(gap(k, grid) < 0)


def test_constants():
    for k in range(1, 30):
        assert thm12_bound(k) == pytest.approx(2 * thm31_bound(k), rel=1e-15)
    assert thm12_bound(1) == pytest.approx(2.44949, abs=1e-5)
    assert thm12_bound(2) == pytest.approx(0.86603, abs=1e-5)
    assert thm12_bound(3) == pytest.approx(0.47140, abs=1e-5)


def test_gap_profile_row_order():
    row = GapProfile.compute(2).row()
    assert list(row) == ["k", "epsilon_star", "thm31_bound", "thm12_bound", "margin"]
    assert row["margin"] == pytest.approx(row["epsilon_star"] - row["thm31_bound"])
    assert GapProfile.compute(1).epsilon_star == pytest.approx(1.5708, abs=1e-4)
    assert GapProfile.compute(1).thm31_bound == pytest.approx(1.2247, abs=1e-4)


def test_bisect_requires_sign_change():
    with pytest.raises(BracketFailure):
        bisect(lambda x: x * x + 1, -1.0, 1.0, 1e-9)
    assert bisect(lambda x: x - 0.3, 0.0, 1.0, 1e-12) == pytest.approx(0.3, abs=1e-12)


def test_refined_point_examples():
    k, ti, tj = 3, 0.2, -0.4
    assert np.allclose(refined_point(k, ti, ti, tj), eval_curve(k, ti), atol=1e-15)
    assert np.allclose(refined_point(k, tj, ti, tj), eval_curve(k, tj), atol=1e-15)
    with pytest.raises(CoincidentPoints):
        refined_point(k, 0.0, 0.1, 0.1)


@given(st.floats(-4, 4), st.floats(-4, 4), st.floats(-4, 4))
def test_refined_coefficients_sum_to_one(s, ti, tj):
    if abs(ti - tj) < 1e-3:
        return
    # with k = 1 at t = 0 the first coordinate is exactly the coefficient sum
    wi = (s - tj) / (2 * (ti - tj))
    wj = (ti - s) / (2 * (ti - tj))
    assert 0.5 + wi + wj == pytest.approx(1.0, abs=1e-14)
    v = refined_point(1, s, ti, tj)
    x = eval_curve(1, np.array([s, ti, tj]))
    assert np.allclose(v, 0.5 * x[0] + wi * x[1] + wj * x[2], atol=1e-12)


def test_refined_antipodal_variant_is_convex_combination():
    # s = pi, ti = -e, tj = e: the chord point interpolates at u = 0
    e = 0.05
    v = refined_point(4, math.pi, -e, e, antipodal=True)
    chord = 0.5 * (eval_curve(4, -e) + eval_curve(4, e))
    assert np.allclose(v, 0.5 * eval_curve(4, math.pi) + 0.5 * chord, atol=1e-14)


def test_refined_scaling_experiment():
    res = refined_scaling_experiment()
    rows = res["rows"]
    assert [r["k"] for r in rows] == [4, 8, 16, 32, 64]
    thresholds = [r["threshold_eps"] for r in rows]
    assert all(a > b for a, b in zip(thresholds, thresholds[1:]))
    for r in rows:
        assert r["threshold_eps"] > thm31_bound(r["k"])
        assert r["tj"] - r["ti"] == pytest.approx(r["delta"])
    assert res["seed"] == 0
    assert all(r["fitted_exponent"] == res["fitted_exponent"] for r in rows)


def test_refined_experiment_domain():
    with pytest.raises(DomainError):
        refined_scaling_experiment([1, 4])
