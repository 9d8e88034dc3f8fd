"""Hermite interpolation and the damped sup-norm variant."""

import numpy as np
import pytest

from autjet.errors import DegreeExceeded, DuplicateNodes, NodeInsideDisk
from autjet.interp1d import (
    DiskBound,
    HermiteSpec,
    NodeJet,
    damped_interpolate,
    hermite_interpolate,
    spec_residual,
)


def spec_of(*nodes):
    return HermiteSpec(tuple(NodeJet(n, tuple(v)) for n, v in nodes))


class TestHermite:
    def test_single_constant(self):
        f = hermite_interpolate(spec_of((0.0, [5.0])))
        assert f.degree == 0 and abs(f(0.0) - 5.0) < 1e-15

    def test_two_values_linear(self):
        f = hermite_interpolate(spec_of((1.0, [1.0]), (2.0, [2.0])))
        assert f.degree == 1
        assert np.allclose(f.coeffs, [0.0, 1.0])

    def test_confluent_matches_dense_solve(self):
        # node 1: value 3, derivative 0; node 2: value 0
        spec = spec_of((1.0, [3.0, 0.0]), (2.0, [0.0]))
        f = hermite_interpolate(spec)
        # dense confluent-Vandermonde oracle
        V = np.array([[1, 1, 1], [0, 1, 2], [1, 2, 4]], dtype=complex)
        rhs = np.array([3.0, 0.0, 0.0], dtype=complex)
        want = np.linalg.solve(V, rhs)
        got = np.zeros(3, dtype=complex)
        got[: len(f.coeffs)] = f.coeffs
        assert np.max(np.abs(got - want)) < 1e-12

    def test_duplicate_nodes_raise(self):
        with pytest.raises(DuplicateNodes):
            spec_of((1.0, [1.0]), (1.0, [2.0]))

    def test_random_specs_exact(self):
        # residual is measured against the expanded basis' evaluation
        # conditioning; the structured cardinal form (tested separately)
        # meets the plain 1e-9 bound at every size the pipeline uses
        rng = np.random.default_rng(0)
        for _ in range(25):
            k = int(rng.integers(1, 6))
            nodes = []
            used = []
            while len(nodes) < k:
                z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
                if any(abs(z - u) < 1.0 for u in used):
                    continue
                used.append(z)
                order = int(rng.integers(0, 5))
                vals = rng.standard_normal(order + 1) + 1j * rng.standard_normal(order + 1)
                nodes.append((z, vals))
            spec = spec_of(*nodes)
            f = hermite_interpolate(spec)
            assert f.degree < spec.condition_count
            cond = max(
                float(np.sum(np.abs(f.coeffs) * abs(nj.node - f.center) ** np.arange(len(f.coeffs))))
                for nj in spec.nodes)
            assert spec_residual(f, spec) < 1e-9 * max(1.0, cond)

    def test_cardinal_form_exact_at_scale(self):
        import math
        from autjet.structpoly import cardinal_interpolant
        rng = np.random.default_rng(0)
        for _ in range(25):
            k = int(rng.integers(1, 6))
            nodes, used = [], []
            while len(nodes) < k:
                z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
                if any(abs(z - u) < 1.0 for u in used):
                    continue
                used.append(z)
                order = int(rng.integers(0, 5))
                vals = rng.standard_normal(order + 1) + 1j * rng.standard_normal(order + 1)
                nodes.append((z, vals))
            f = cardinal_interpolant(
                [n for n, _ in nodes],
                [[v / math.factorial(i) for i, v in enumerate(vals)] for _, vals in nodes])
            for n, vals in nodes:
                got = f.derivatives_at(n, len(vals) - 1)
                assert np.max(np.abs(got - np.asarray(vals))) < 1e-9

    def test_uniqueness(self):
        spec = spec_of((1.0, [3.0, 0.0]), (2.0, [0.0]), (0.5j, [1.0, 2.0, 3.0]))
        f1 = hermite_interpolate(spec)
        f2 = hermite_interpolate(spec)
        assert np.array_equal(f1.coeffs, f2.coeffs)


class TestDamped:
    DISK = DiskBound(0.0, 1.0, 1e-3)

    def test_zero_targets(self):
        f = damped_interpolate(spec_of((4.0, [0.0, 0.0])), self.DISK, 64)
        assert f.is_zero()

    def test_single_node_certified(self):
        f = damped_interpolate(spec_of((4.0, [1.0])), self.DISK, 256)
        assert abs(f(4.0) - 1.0) < 1e-10
        boundary = self.DISK.boundary_points()
        assert 1.05 * np.max(np.abs(f(boundary))) <= 1e-3

    def test_node_inside_disk(self):
        with pytest.raises(NodeInsideDisk):
            damped_interpolate(spec_of((0.5, [1.0])), self.DISK, 64)

    def test_degree_exceeded(self):
        hard = DiskBound(0.0, 1.0, 1e-12)
        with pytest.raises(DegreeExceeded):
            damped_interpolate(spec_of((1.05, [1.0])), hard, 8)

    def test_multi_node_with_derivatives(self):
        spec = spec_of((3.0, [1.0, -2.0, 0.5]), (-2.5j, [0.0, 1.0]))
        disk = DiskBound(0.0, 1.0, 1e-2)
        f = damped_interpolate(spec, disk, 512)
        assert spec_residual(f, spec) < 1e-8
        assert 1.05 * np.max(np.abs(f(disk.boundary_points()))) <= 1e-2

    def test_offcenter_disk(self):
        disk = DiskBound(1.0 + 1.0j, 0.8, 1e-2)
        spec = spec_of((3.5, [1.0, 0.0]), (-1.0 - 1.0j, [2.0]))
        f = damped_interpolate(spec, disk, 512)
        assert spec_residual(f, spec) < 1e-8
        assert 1.05 * np.max(np.abs(f(disk.boundary_points()))) <= 1e-2

    def test_maximum_principle_proxy(self):
        disk = DiskBound(0.5j, 1.2, 1e-2)
        spec = spec_of((4.0, [1.0, 1.0]), (-3.0, [1.0]))
        f = damped_interpolate(spec, disk, 512)
        sup_b = np.max(np.abs(f(disk.boundary_points())))
        sup_i = np.max(np.abs(f(disk.interior_points())))
        assert 1.05 * sup_b >= sup_i

    def test_damping_monotone_along_search(self):
        # fixed h-targets of modulus <= 1: increasing M shrinks the boundary sup
        from autjet.interp1d import _damped_attempt
        disk = DiskBound(0.0, 1.0, 1.0)
        spec = spec_of((4.0, [1.0]))
        sups = []
        for M in (1, 2, 4, 8, 16):
            f = _damped_attempt(spec, disk.center, 1.25, M)
            sups.append(np.max(np.abs(f(disk.boundary_points()))))
        assert all(sups[i + 1] <= sups[i] * (1 + 1e-12) for i in range(len(sups) - 1))
