"""Smallest enclosing balls and sampling."""

import numpy as np
import pytest

from autjet.errors import AutjetError
from autjet.hulls import BallHull, enclosing_hull
from autjet.sampling import ball_points, sphere_points


def test_single_ball_identity():
    b = BallHull.ball(np.array([1.0, 2.0j]), 3.0)
    h = enclosing_hull([b], [])
    assert np.allclose(h.center, b.center) and h.radius == b.radius


def test_two_points_diameter():
    e1 = np.array([1.0, 0.0], dtype=complex)
    h = enclosing_hull([], [e1, -e1])
    assert np.linalg.norm(h.center) < 1e-12
    assert abs(h.radius - 1.0) < 1e-12


def test_empty_input_raises():
    with pytest.raises(AutjetError):
        enclosing_hull([], [])


@pytest.mark.parametrize("n", [2, 3])
def test_random_points_tight(n):
    rng = np.random.default_rng(n)
    for _ in range(10):
        pts = [rng.standard_normal(n) + 1j * rng.standard_normal(n) for _ in range(10)]
        h = enclosing_hull([], pts)
        dists = [np.linalg.norm(p - h.center) for p in pts]
        assert all(d <= h.radius * (1 + 1e-9) + 1e-12 for d in dists)
        # shrinking by 1e-6 must exclude at least one generator
        assert max(dists) > h.radius - 1e-6


def test_balls_and_points_contained():
    rng = np.random.default_rng(7)
    balls = [BallHull.ball(rng.standard_normal(2) + 1j * rng.standard_normal(2),
                           rng.uniform(0.2, 1.5)) for _ in range(4)]
    pts = [3 * (rng.standard_normal(2) + 1j * rng.standard_normal(2)) for _ in range(6)]
    h = enclosing_hull(balls, pts)
    for b in balls:
        assert h.contains_ball(b, tol=1e-9)
    for p in pts:
        assert h.contains_point(p, tol=1e-9)


def test_nested_ball_margin():
    inner = BallHull.ball(np.zeros(2, complex), 1.0)
    outer = BallHull.ball(np.array([0.5, 0.0], complex), 3.0)
    assert abs(outer.interior_margin(inner) - 1.5) < 1e-12
    assert outer.contains_ball(inner)


def test_sphere_points_on_boundary():
    h = BallHull.ball(np.array([1.0, -2.0j]), 2.5)
    pts = sphere_points(h, 100, np.random.default_rng(0))
    dists = np.linalg.norm(pts - h.center, axis=1)
    assert np.max(np.abs(dists - 2.5)) < 1e-12


def test_ball_points_inside():
    h = BallHull.ball(np.array([1.0, -2.0j]), 2.5)
    pts = ball_points(h, 200, np.random.default_rng(0))
    dists = np.linalg.norm(pts - h.center, axis=1)
    assert np.all(dists <= 2.5 * (1 + 1e-12))


def test_sampling_deterministic():
    h = BallHull.ball(np.zeros(2, complex), 1.0)
    a = sphere_points(h, 50, np.random.default_rng(42))
    b = sphere_points(h, 50, np.random.default_rng(42))
    assert np.array_equal(a, b)
