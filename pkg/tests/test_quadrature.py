import cmath

import numpy as np
import pytest
from hypothesis import given, strategies as st

from schwarzlift.quadrature import QuadratureSpec, arc_integral, segment_integral

coords = st.floats(-0.9, 0.9)


@given(coords, coords, coords, coords)
def test_exponential_segment(ax, ay, bx, by):
    a, b = complex(ax, ay), complex(bx, by)
    assert segment_integral(np.exp, a, b) == pytest.approx(cmath.exp(b) - cmath.exp(a), abs=1e-13)


def test_polynomial_exactness():
    # 16 nodes integrate degree 31 exactly on one piece
    F = lambda z: 32 * z ** 31
    assert segment_integral(F, 0, 1, QuadratureSpec(16, 10.0)) == pytest.approx(1, abs=1e-13)


def test_vectorized_matches_scalar(rng):
    a = rng.normal(size=5) * 0.3 + 1j * rng.normal(size=5) * 0.3
    b = rng.normal(size=5) * 0.3 + 1j * rng.normal(size=5) * 0.3
    batch = segment_integral(lambda z: 1 / (2 - z), a, b)
    for k in range(5):
        assert batch[k] == pytest.approx(segment_integral(lambda z: 1 / (2 - z), a[k], b[k]), abs=1e-15)
        assert batch[k] == pytest.approx(cmath.log((2 - a[k]) / (2 - b[k])), abs=1e-13)


def test_empty_segment():
    assert segment_integral(np.exp, 0.3, 0.3) == 0
    assert np.all(segment_integral(np.exp, np.zeros(3), np.zeros(3)) == 0)


def test_arc_integral_closed_contour():
    # int 1/z over the circle = 2 pi i; analytic integrands give 0
    assert arc_integral(lambda z: 1 / z, 0.5, 0, 2 * np.pi) == pytest.approx(2j * np.pi, abs=1e-13)
    assert abs(arc_integral(np.exp, 0.7, 0, 2 * np.pi)) < 1e-13


def test_arc_integral_partial():
    r, t0, t1 = 0.6, 0.2, 2.1
    want = cmath.exp(r * cmath.exp(1j * t1)) - cmath.exp(r * cmath.exp(1j * t0))
    assert arc_integral(np.exp, r, t0, t1) == pytest.approx(want, abs=1e-13)
    assert arc_integral(np.exp, r, t1, t0) == pytest.approx(-want, abs=1e-13)


def test_refined_halves_segments():
    q = QuadratureSpec(12, 0.1, 1e-9).refined()
    assert q.points == 12 and q.max_segment == 0.05 and q.tol == 1e-9
