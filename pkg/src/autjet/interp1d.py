"""One-variable Hermite interpolation with prescribed jets at distinct nodes,
plus a damped variant that interpolates exactly while staying small on a disk.

The damped construction writes f = B * h with B(zeta) = ((zeta - c)/rho)^M a
damping power anchored at the disk center; h solves the Hermite problem for
f/B obtained by Leibniz expansion of the derivatives at each node.  M is
grown until boundary sampling (a maximum-principle proxy with a 1.05 safety
factor) certifies the requested bound, or the degree budget runs out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .errors import DegreeExceeded, DuplicateNodes, NodeInsideDisk
from .poly1 import Poly1

NODE_TOL = 1e-9
BOUNDARY_SAMPLES = 512
SAFETY = 1.05


@dataclass(frozen=True)
class NodeJet:
    """Prescribed derivatives f(node), f'(node), ..., f^(order)(node)."""

    node: complex
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "node", complex(self.node))
        object.__setattr__(self, "values", tuple(complex(v) for v in self.values))
        if len(self.values) == 0:
            raise ValueError("a node must prescribe at least the value")

    @property
    def order(self) -> int:
        return len(self.values) - 1


@dataclass(frozen=True)
class HermiteSpec:
    nodes: tuple

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        pts = [nj.node for nj in self.nodes]
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if abs(pts[i] - pts[j]) <= NODE_TOL * (1 + abs(pts[i])):
                    raise DuplicateNodes(f"nodes {pts[i]} and {pts[j]} coincide")

    @property
    def condition_count(self) -> int:
        return sum(nj.order + 1 for nj in self.nodes)


@dataclass(frozen=True)
class DiskBound:
    center: complex
    radius: float
    bound: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not self.radius > 0:
            raise ValueError("disk radius must be positive")
        if not self.bound > 0:
            raise ValueError("disk bound must be positive")

    def boundary_points(self, count: int = BOUNDARY_SAMPLES) -> np.ndarray:
        ang = np.exp(2j * np.pi * np.arange(count) / count)
        return self.center + self.radius * ang

    def interior_points(self, count: int = 256) -> np.ndarray:
        k = np.arange(1, count + 1)
        r = np.sqrt(k / (count + 1.0)) * self.radius
        ang = np.exp(2j * np.pi * (k * 0.6180339887498949 % 1.0))
        return self.center + r * ang


def hermite_interpolate(spec: HermiteSpec, center: complex = 0.0) -> Poly1:
    """Unique polynomial of degree < condition count matching all prescribed
    derivatives, by divided differences with repeated nodes."""
    xs: List[complex] = []
    for nj in spec.nodes:
        xs.extend([nj.node] * (nj.order + 1))
    N = len(xs)
    if N == 0:
        return Poly1.zero(center)
    # table[i] holds the divided difference f[x_i..x_{i+level}]
    taylor = {nj.node: [v / math.factorial(k) for k, v in enumerate(nj.values)]
              for nj in spec.nodes}
    table = [taylor[x][0] for x in xs]
    newton = [table[0]]
    for level in range(1, N):
        new = []
        for i in range(N - level):
            lo, hi = xs[i], xs[i + level]
            if lo == hi:
                new.append(taylor[lo][level])
            else:
                new.append((table[i + 1] - table[i]) / (hi - lo))
        table = new
        newton.append(table[0])
    # expand Newton form around the requested center
    poly = Poly1.zero(center)
    basis = Poly1.constant(1.0, center)
    for k in range(N):
        poly = poly + newton[k] * basis
        basis = basis * Poly1.linear_root(xs[k], center)
    return _refine(poly, spec, center)


def _refine(poly: Poly1, spec: HermiteSpec, center: complex, rounds: int = 2) -> Poly1:
    # iterative refinement: interpolate the derivative mismatch and subtract;
    # stops improving at the evaluation noise floor of the expanded basis
    for _ in range(rounds):
        res_nodes = []
        worst = 0.0
        for nj in spec.nodes:
            got = poly.derivatives_at(nj.node, nj.order)
            diff = got - np.asarray(nj.values, dtype=complex)
            worst = max(worst, float(np.max(np.abs(diff))))
            res_nodes.append(NodeJet(nj.node, tuple(diff)))
        if worst == 0.0:
            return poly
        xs: List[complex] = []
        for nj in res_nodes:
            xs.extend([nj.node] * (nj.order + 1))
        taylor = {nj.node: [v / math.factorial(k) for k, v in enumerate(nj.values)]
                  for nj in res_nodes}
        table = [taylor[x][0] for x in xs]
        newton = [table[0]]
        for level in range(1, len(xs)):
            new = []
            for i in range(len(xs) - level):
                lo, hi = xs[i], xs[i + level]
                if lo == hi:
                    new.append(taylor[lo][level])
                else:
                    new.append((table[i + 1] - table[i]) / (hi - lo))
            table = new
            newton.append(table[0])
        corr = Poly1.zero(center)
        basis = Poly1.constant(1.0, center)
        for k in range(len(xs)):
            corr = corr + newton[k] * basis
            basis = basis * Poly1.linear_root(xs[k], center)
        poly = poly - corr
    return poly


def spec_residual(f: Poly1, spec: HermiteSpec) -> float:
    """Max relative mismatch of f against the prescribed derivatives."""
    worst = 0.0
    for nj in spec.nodes:
        got = f.derivatives_at(nj.node, nj.order)
        for k, want in enumerate(nj.values):
            err = abs(got[k] - want) / max(1.0, abs(want))
            worst = max(worst, err)
    return worst


def damped_interpolate(spec: HermiteSpec, disk: DiskBound, max_degree: int,
                       rho: float = None) -> Poly1:
    """Hermite interpolant with certified smallness on a disk.

    Every node must lie strictly outside the disk.  Raises DegreeExceeded
    when no damping power M <= max_degree certifies |f| <= bound on the
    boundary sampling.
    """
    for nj in spec.nodes:
        if abs(nj.node - disk.center) <= disk.radius * (1 + NODE_TOL):
            raise NodeInsideDisk(f"node {nj.node} lies inside the disk")
    if all(np.all(np.abs(nj.values) == 0) for nj in spec.nodes):
        return Poly1.zero(disk.center)
    if rho is None:
        rho = disk.radius * 1.25
    if not rho > disk.radius:
        raise ValueError("damping radius must exceed the disk radius")
    boundary = disk.boundary_points()
    M = 1
    last_error = None
    while M <= max_degree:
        f = _damped_attempt(spec, disk.center, rho, M)
        vals = np.abs(f(boundary))
        if np.all(np.isfinite(vals)) and SAFETY * float(np.max(vals)) <= disk.bound:
            if spec_residual(f, spec) < 1e-6:
                return f
            last_error = "interpolation residual too large"
        M *= 2
    raise DegreeExceeded(
        f"no damping power M <= {max_degree} certifies the bound"
        + (f" ({last_error})" if last_error else ""))


def _damped_attempt(spec: HermiteSpec, center: complex, rho: float, M: int) -> Poly1:
    # B(zeta) = ((zeta - center)/rho)^M, expanded exactly in the center basis
    Bcoeffs = np.zeros(M + 1, dtype=complex)
    Bcoeffs[M] = rho ** (-float(M))
    B = Poly1(Bcoeffs, center)
    h_nodes = []
    for nj in spec.nodes:
        Bder = B.derivatives_at(nj.node, nj.order)
        hvals = np.empty(nj.order + 1, dtype=complex)
        for j in range(nj.order + 1):
            acc = complex(nj.values[j])
            for i in range(j):
                acc -= math.comb(j, i) * Bder[j - i] * hvals[i]
            hvals[j] = acc / Bder[0]
        h_nodes.append(NodeJet(nj.node, tuple(hvals)))
    h = hermite_interpolate(HermiteSpec(tuple(h_nodes)), center=center)
    return B * h
