import json
import math

import numpy as np
import pytest

from schwarzlift import chordarc as ca
from schwarzlift.errors import DomainError, PointOutsideDomain
from schwarzlift.shear import chord_arc_shear_bound

L_SHAPE = [(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]
SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]
HEXAGON = [(math.cos(k * math.pi / 3), math.sin(k * math.pi / 3)) for k in range(6)]


def notched(width):
    """Square with a wedge notch from the top edge; the notch sharpens as ``width`` shrinks."""
    return ca.PolygonDomain.from_points(
        [(0, 0), (2, 0), (2, 2), (1 + width, 2), (1, 0.4), (1 - width, 2), (0, 2)])


@pytest.fixture(scope="module")
def L():
    return ca.PolygonDomain.from_points(L_SHAPE)


def sample_inside(d, rng, n):
    return ca._interior_points(d, rng, n)


# -- polygon -----------------------------------------------------------------

def test_orientation_and_reflex(L):
    assert L.area == pytest.approx(3)
    assert list(L.reflex) == [3]
    cw = ca.PolygonDomain.from_points(L_SHAPE[::-1])
    assert cw.area == pytest.approx(3)
    assert len(cw.reflex) == 1 and cw.vertices[cw.reflex[0]] == 1 + 1j


def test_json_input():
    d = ca.PolygonDomain.from_json(json.dumps(SQUARE))
    assert d.area == pytest.approx(1)


def test_rejects_bad_polygons():
    with pytest.raises(DomainError):
        ca.PolygonDomain.from_points([(0, 0), (1, 1)])
    with pytest.raises(DomainError):
        ca.PolygonDomain.from_points([(0, 0), (1, 0), (2, 0)])
    with pytest.raises(DomainError):
        ca.PolygonDomain.from_points([(0, 0), (1, 1), (1, 0), (0, 1)])


def test_contains(L):
    assert L.contains(0.5 + 0.5j)
    assert not L.contains(1.5 + 1.5j)
    assert not L.contains(1 + 0.5j * 0) and L.contains(1 + 0j, closed=True)


def test_visibility(L):
    assert L.visible(0.5 + 0.5j, 1.5 + 0.5j)
    assert not L.visible(1.8 + 0.2j, 0.4 + 1.9j)
    # a chord through the reflex vertex stays in the closed polygon
    assert L.visible(1.5 + 0.5j, 0.5 + 1.5j)


# -- internal distance -------------------------------------------------------

def test_convex_distance_is_euclidean(rng):
    d = ca.PolygonDomain.from_points(HEXAGON)
    Z, W = sample_inside(d, rng, 30), sample_inside(d, rng, 30)
    for z, w in zip(Z, W):
        assert ca.internal_distance(d, z, w) == pytest.approx(abs(z - w), abs=1e-15)


def test_l_shape_distance(L):
    z, w = 1.5 + 0.5j, 0.5 + 1.5j
    assert ca.internal_distance(L, z, w) == pytest.approx(2 * math.sqrt(0.5), abs=1e-12)
    # a genuine bend: both points strictly off the chord through the corner
    z, w = 1.8 + 0.2j, 0.4 + 1.9j
    want = abs(z - (1 + 1j)) + abs((1 + 1j) - w)
    assert ca.internal_distance(L, z, w) == pytest.approx(want, abs=1e-12)
    assert ca.internal_distance(L, z, z) == 0


def test_outside_points(L):
    with pytest.raises(PointOutsideDomain):
        ca.internal_distance(L, 1.5 + 1.5j, 0.5 + 0.5j)
    with pytest.raises(PointOutsideDomain):
        ca.internal_distance(L, 0j, 0.5 + 0.5j)


def test_metric_properties(L, rng):
    P = sample_inside(L, rng, 60).reshape(20, 3)
    for a, b, c in P:
        ab = ca.internal_distance(L, a, b)
        assert ab == ca.internal_distance(L, b, a)
        assert ab >= abs(a - b) - 1e-15
        assert ab <= ca.internal_distance(L, a, c) + ca.internal_distance(L, c, b) + 1e-9
        assert (abs(ab - abs(a - b)) < 1e-12) == bool(L.visible(a, b))


def test_distance_matches_polyline_oracle(L, rng):
    # in the L the only bend is at (1, 1): l = min over {direct, via corner}
    P = sample_inside(L, rng, 80).reshape(40, 2)
    for z, w in P:
        via = abs(z - (1 + 1j)) + abs(w - (1 + 1j))
        want = abs(z - w) if L.visible(z, w) else via
        assert ca.internal_distance(L, z, w) == pytest.approx(want, abs=1e-12)


# -- constants ---------------------------------------------------------------------

@pytest.mark.parametrize("pts", [SQUARE, HEXAGON])
def test_convex_constants_exactly_one(pts):
    d = ca.PolygonDomain.from_points(pts)
    assert ca.chord_arc_constant(d, samples=300, seed=1) == 1.0
    for lam in ca.probe_directions():
        assert ca.directional_constant(d, lam, samples=200, seed=1) == 1.0


def test_l_shape_constant(L):
    M = ca.chord_arc_constant(L, samples=500, seed=0)
    assert math.sqrt(2) - 1e-6 <= M <= math.sqrt(2) + 1e-12


def test_directional_below_global(L):
    M = ca.chord_arc_constant(L, samples=500, seed=3)
    for lam in ca.probe_directions():
        assert ca.directional_constant(L, lam, samples=500, seed=3) <= M


def test_l_shape_directional_against_pair_grid(L):
    # exhaustive oracle on a grid of pairs along lines parallel to lam; in the
    # L a blocked pair bends once, at the corner (1, 1)
    lam = np.exp(0.75j * np.pi)
    xs = np.linspace(0.01, 1.99, 60)
    P = (xs[:, None] + 1j * xs[None, :]).ravel()
    P = P[L.contains(P)]
    steps = np.linspace(-2.5, 2.5, 101)
    steps = steps[steps != 0]
    Z = np.repeat(P, steps.size)
    W = Z + np.tile(steps, P.size) * lam
    keep = L.contains(W)
    Z, W = Z[keep], W[keep]
    via = np.abs(Z - (1 + 1j)) + np.abs(W - (1 + 1j))
    ratio = np.where(L.visible(Z, W), 1.0, via / np.abs(Z - W))
    best = float(ratio.max())
    assert best > 1.3
    est = ca.directional_constant(L, lam, samples=800, seed=0)
    assert est >= best - 1e-9
    assert est <= math.sqrt(2) + 1e-12
    # horizontal and vertical chords never meet the notch in an L
    assert ca.directional_constant(L, 1.0, samples=400, seed=0) == 1.0
    assert ca.directional_constant(L, 1j, samples=400, seed=0) == 1.0


def test_pinched_family_is_monotone():
    widths = (0.5, 0.2, 0.05, 0.01)
    Ms = [ca.chord_arc_constant(notched(w), samples=300, seed=0) for w in widths]
    assert all(b > a for a, b in zip(Ms, Ms[1:]))
    bounds = [chord_arc_shear_bound(M) for M in Ms]
    assert all(b < a for a, b in zip(bounds, bounds[1:]))
    # across the notch mouth the detour is about twice the notch depth
    assert Ms[-1] >= 0.9 * 2 * 1.6 / (2 * 0.01)


def test_determinism(L):
    a = ca.chordarc_report(L, samples=200, seed=5)
    b = ca.chordarc_report(L, samples=200, seed=5)
    assert a == b
    assert set(a) == {"M_estimate", "samples", "seed", "epsilon_bound"}
    assert a["epsilon_bound"] == pytest.approx(1 / (2 * a["M_estimate"] + 1))
    c = ca.chordarc_report(L, samples=200, seed=5, lam=1j)
    assert c["lambda"] == [0.0, 1.0]


def test_argument_errors(L):
    with pytest.raises(DomainError):
        ca.directional_constant(L, 2.0)
    with pytest.raises(DomainError):
        ca.chord_arc_constant(L, samples=0)
