import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitope_lab.curve import (
    Arc,
    CurveSpec,
    antipode,
    arc_distance,
    canonical,
    deriv,
    divided_differences,
    eval_curve,
)

angles = st.floats(-50.0, 50.0, allow_nan=False)


@pytest.mark.parametrize("k, t, expected", [
    (1, 0.0, [1, 0]),
    (2, 0.0, [1, 0, 1, 0]),
    (3, math.pi / 2, [0, 1, 0, -1, 0, 1]),
])
def test_eval_examples(k, t, expected):
    assert np.allclose(eval_curve(k, t), expected, atol=1e-15)


@pytest.mark.parametrize("k, t, n, expected", [
    (2, 0.0, 1, [0, 1, 0, 3]),
    (2, 0.0, 2, [-1, 0, -9, 0]),
    (1, math.pi / 2, 1, [-1, 0]),
])
def test_deriv_examples(k, t, n, expected):
    assert np.allclose(deriv(k, t, n), expected, atol=1e-14)


def test_antipode_examples():
    assert np.allclose(antipode(1, 0.0), [-1, 0], atol=1e-15)
    assert np.allclose(antipode(2, 0.0), [-1, 0, -1, 0], atol=1e-15)
    t = np.random.default_rng(0).uniform(0, 2 * math.pi, 50)
    for ti in t:
        assert np.max(np.abs(antipode(2, ti) + eval_curve(2, ti))) < 1e-14


def test_spec_structure():
    for k in (1, 2, 7):
        spec = CurveSpec(k)
        assert spec.dim == 2 * k
        assert list(spec.frequencies) == [2 * j + 1 for j in range(k)]
        assert np.all(np.diff(spec.frequencies) > 0)
        # the isotypic pieces are pairwise non-isomorphic
        assert len(set(spec.frequencies.tolist())) == k
    with pytest.raises(ValueError):
        CurveSpec(0)


def test_norm_identity_all_k():
    rng = np.random.default_rng(1)
    t = rng.uniform(-100, 100, 2000)
    for k in range(1, 65):
        x = eval_curve(k, t)
        assert np.max(np.abs(np.sum(x * x, axis=1) - k)) < 1e-12


def test_central_symmetry():
    t = np.random.default_rng(2).uniform(-20, 20, 10_000)
    for k in (1, 4, 9):
        assert np.max(np.abs(eval_curve(k, t + math.pi) + eval_curve(k, t))) < 1e-13


@pytest.mark.parametrize("k", [1, 3, 8])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_derivative_matches_finite_difference(k, n):
    h = 1e-3
    scale = (2 * k - 1) ** n
    for t in np.random.default_rng(n + 10 * k).uniform(0, 2 * math.pi, 20):
        f = [deriv(k, t + j * h, n - 1) for j in (-2, -1, 1, 2)]
        fd = (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * h)
        assert np.max(np.abs(fd - deriv(k, t, n))) / scale < 1e-6


def test_vectorised_eval_matches_scalar():
    t = np.linspace(0, 7, 13)
    batch = eval_curve(3, t)
    assert batch.shape == (13, 6)
    for i, ti in enumerate(t):
        assert np.array_equal(batch[i], eval_curve(3, ti))


@given(angles)
def test_canonical_idempotent(t):
    c = canonical(t)
    assert 0.0 <= c < 2 * math.pi
    assert canonical(c) == c


@given(angles, angles)
def test_arc_distance_is_a_metric_on_the_circle(a, b):
    d = arc_distance(a, b)
    assert 0.0 <= d <= math.pi + 1e-12
    assert d == pytest.approx(arc_distance(b, a), abs=1e-12)
    assert d == pytest.approx(arc_distance(a + 2 * math.pi, b), abs=1e-9)


def test_arc_membership_half_open():
    arc = Arc(0.0, 1.0)
    assert arc.contains(-0.5)
    assert not arc.contains(0.5)
    assert arc.contains(0.5, closed=True)
    assert arc.contains(0.2) and not arc.contains(math.pi)


@given(st.floats(0, 2 * math.pi), st.floats(0.01, 3.0), st.floats(0, 1))
def test_arc_membership_symmetric_about_center(c, length, frac):
    arc = Arc(c, length)
    d = frac * length / 2 * 0.999
    assert arc.contains(c + d) == arc.contains(c - d)


def test_opposite_arc():
    arc = Arc(0.3, 1.2)
    opp = arc.opposite()
    assert opp.length == arc.length
    assert arc_distance(opp.center, 0.3 + math.pi) < 1e-15


def test_divided_differences_reduce_to_chords():
    nodes = np.array([0.1, 0.4, 1.3])
    rows = divided_differences(3, nodes)
    x = eval_curve(3, nodes)
    assert np.allclose(rows[0], (x[1] - x[0]) / 0.3, atol=1e-12)
    second = ((x[2] - x[1]) / 0.9 - (x[1] - x[0]) / 0.3) / 1.2
    assert np.allclose(rows[1], second, atol=1e-12)


def test_confluent_divided_differences_are_scaled_derivatives():
    rows = divided_differences(2, np.zeros(4))
    for j in range(1, 4):
        assert np.allclose(rows[j - 1], deriv(2, 0.0, j) / math.factorial(j), atol=1e-13)
