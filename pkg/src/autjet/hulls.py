"""Closed Euclidean balls standing in for compact convex sets.

A BallHull is the smallest enclosing closed ball of a finite family of balls
and points.  For pure point input the classical randomized recursion over
real dimension 2n is exact; when ball generators are present the center is
polished by a subgradient descent on the minimax radius and containment is
enforced exactly at the returned center (conservative for mixed input).
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .errors import AutjetError
from .jets import as_point


@dataclass(frozen=True, eq=False)
class BallHull:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if self.radius < 0:
            raise AutjetError("ball radius must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.center)

    def contains_point(self, z, tol: float = 1e-12) -> bool:
        return float(np.linalg.norm(as_point(z, self.n) - self.center)) <= self.radius * (1 + tol) + tol

    def contains_ball(self, other: "BallHull", tol: float = 1e-12) -> bool:
        d = float(np.linalg.norm(other.center - self.center))
        return d + other.radius <= self.radius * (1 + tol) + tol

    def clearance(self, z) -> float:
        """Signed distance of a point to the ball (positive outside)."""
        return float(np.linalg.norm(as_point(z, self.n) - self.center)) - self.radius

    def interior_margin(self, other: "BallHull") -> float:
        """dist(other, complement of self): positive iff other is interior."""
        d = float(np.linalg.norm(other.center - self.center))
        return self.radius - d - other.radius

    def enlarged(self, margin: float) -> "BallHull":
        return BallHull(self.center, self.radius + margin)

    @staticmethod
    def ball(center, radius: float) -> "BallHull":
        return BallHull(as_point(center), float(radius))


# ---------------------------------------------------------------------------
# smallest enclosing ball
# ---------------------------------------------------------------------------


def _circumsphere(support: List[np.ndarray]):
    """Smallest ball with all support points on its boundary (reals)."""
    if not support:
        return None, -1.0
    p0 = support[0]
    if len(support) == 1:
        return p0.copy(), 0.0
    diffs = np.array([p - p0 for p in support[1:]])
    A = 2.0 * diffs @ diffs.T
    b = np.einsum("ij,ij->i", diffs, diffs)
    x, *_ = np.linalg.lstsq(A, b, rcond=None)
    center = p0 + x @ diffs
    radius = float(max(np.linalg.norm(p - center) for p in support))
    return center, radius


def _welzl(points: np.ndarray, rng: np.random.Generator):
    idx = np.arange(len(points))
    rng.shuffle(idx)
    pts = points[idx]
    dim = pts.shape[1]
    sys.setrecursionlimit(max(8 * len(pts) + 1000, sys.getrecursionlimit()))

    def recurse(i: int, support: List[np.ndarray]):
        if i == len(pts) or len(support) == dim + 1:
            return _circumsphere(support)
        c, r = recurse(i + 1, support)
        p = pts[i]
        if c is not None and float(np.linalg.norm(p - c)) <= r * (1 + 1e-12) + 1e-14:
            return c, r
        return recurse(i + 1, support + [p])

    return recurse(0, [])


def _to_reals(z: np.ndarray) -> np.ndarray:
    return np.concatenate([z.real, z.imag])


def _to_complex(x: np.ndarray) -> np.ndarray:
    n = len(x) // 2
    return x[:n] + 1j * x[n:]


def enclosing_hull(balls: Sequence[BallHull], points: Sequence) -> BallHull:
    """Smallest enclosing ball of the declared balls and points.

    Exact (Welzl) for point-only input; with ball generators the minimax
    center is polished numerically and the radius is set so containment
    holds exactly at the returned center.
    """
    balls = list(balls)
    pts = [as_point(p) for p in points]
    if not balls and not pts:
        raise AutjetError("enclosing_hull needs at least one generator")
    if balls and all(b.radius == 0 for b in balls):
        pts.extend(b.center for b in balls)
        balls = []
    if len(balls) == 1 and not pts:
        return BallHull(balls[0].center, balls[0].radius)

    n = balls[0].n if balls else len(pts[0])
    real_pts = np.array([_to_reals(p) for p in pts + [b.center for b in balls]])
    rng = np.random.default_rng(20240901)
    center_r, _ = _welzl(real_pts, rng)

    def needed_radius(c: np.ndarray) -> float:
        r = 0.0
        for p in pts:
            r = max(r, float(np.linalg.norm(p - c)))
        for b in balls:
            r = max(r, float(np.linalg.norm(b.center - c)) + b.radius)
        return r

    center = _to_complex(center_r)
    if balls:
        # subgradient polish of the minimax radius over the center
        best_c, best_r = center, needed_radius(center)
        step = max(best_r, 1e-6) / 4.0
        c = center
        for t in range(1, 81):
            worst_dir = None
            worst_val = -np.inf
            for p in pts:
                d = float(np.linalg.norm(p - c))
                if d > worst_val:
                    worst_val, worst_dir = d, (p - c)
            for b in balls:
                d = float(np.linalg.norm(b.center - c)) + b.radius
                if d > worst_val:
                    worst_val, worst_dir = d, (b.center - c)
            nd = float(np.linalg.norm(worst_dir))
            if nd < 1e-15:
                break
            c = c + (step / t) * (worst_dir / nd)
            r = needed_radius(c)
            if r < best_r:
                best_c, best_r = c, r
        center, radius = best_c, best_r
    else:
        radius = needed_radius(center)

    hull = BallHull(center, radius)
    for p in pts:
        if not hull.contains_point(p, tol=1e-9):
            raise AutjetError("enclosing hull failed containment check")
    for b in balls:
        if not hull.contains_ball(b, tol=1e-9):
            raise AutjetError("enclosing hull failed ball containment check")
    return hull
