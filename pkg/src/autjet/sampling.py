"""Deterministic seeded sampling on balls and spheres in C^n.

All sup-norm certifications in the package sample the boundary sphere of an
enclosing ball (maximum principle for holomorphic components) and carry a
declared sample count and seed.
"""

from __future__ import annotations

import numpy as np

from .hulls import BallHull
from .words import AutWord, apply_word, invert_word


def sphere_points(hull: BallHull, count: int, rng: np.random.Generator) -> np.ndarray:
    """`count` points on the boundary sphere, shape (count, n)."""
    n = hull.n
    g = rng.standard_normal((count, 2 * n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    pts = g[:, :n] + 1j * g[:, n:]
    return hull.center + hull.radius * pts


def ball_points(hull: BallHull, count: int, rng: np.random.Generator) -> np.ndarray:
    """`count` points in the closed ball, shape (count, n)."""
    n = hull.n
    surface = sphere_points(BallHull(hull.center * 0, 1.0), count, rng)
    radii = rng.uniform(0.0, 1.0, count) ** (1.0 / (2 * n))
    return hull.center + hull.radius * radii[:, None] * surface


def sup_word_difference(w1: AutWord, w2: AutWord, pts: np.ndarray) -> float:
    """max_z |w1(z) - w2(z)| over the sample points (Euclidean norm)."""
    with np.errstate(over="ignore", invalid="ignore"):
        d = apply_word(w1, pts) - apply_word(w2, pts)
    out = np.linalg.norm(d, axis=-1)
    return float(np.max(out)) if np.all(np.isfinite(out)) else float("inf")


def sup_word_vs_identity(w: AutWord, pts: np.ndarray) -> float:
    with np.errstate(over="ignore", invalid="ignore"):
        d = apply_word(w, pts) - pts
    out = np.linalg.norm(d, axis=-1)
    return float(np.max(out)) if np.all(np.isfinite(out)) else float("inf")


def sup_identity_deviation_pair(w: AutWord, pts: np.ndarray) -> float:
    """max over samples of |w(z) - z| + |w^{-1}(z) - z|."""
    winv = invert_word(w)
    with np.errstate(over="ignore", invalid="ignore"):
        d1 = np.linalg.norm(apply_word(w, pts) - pts, axis=-1)
        d2 = np.linalg.norm(apply_word(winv, pts) - pts, axis=-1)
    out = d1 + d2
    return float(np.max(out)) if np.all(np.isfinite(out)) else float("inf")


def word_lipschitz_estimate(w: AutWord, hull: BallHull, rng: np.random.Generator,
                            count: int = 64, safety: float = 1.5) -> float:
    """Sampled estimate of the Lipschitz constant of w on the hull."""
    from .words import word_jet

    pts = ball_points(hull, count, rng)
    worst = 0.0
    for p in pts:
        J = word_jet(w, p, 1).linear_matrix()
        worst = max(worst, float(np.linalg.norm(J, 2)))
    return worst * safety
