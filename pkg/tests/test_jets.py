"""Jet calculus: frozen examples, inverse identities, oracle agreement."""

import numpy as np
import pytest

from autjet.errors import AnchorMismatch, DegenerateJet, OrderMismatch
from autjet.jets import (
    JetMap,
    PolyVectorField,
    ScalarJet,
    compose_jets,
    divergence,
    identity_distance,
    invert_jet,
    jacobian_det_jet,
    jet_distance,
    truncate_jet,
)

import oracle


def jet_c2(coeffs, order, anchor=(0, 0), base=(0, 0)):
    cc = {a: np.asarray(v, dtype=complex) for a, v in coeffs.items()}
    return JetMap(np.asarray(anchor, complex), np.asarray(base, complex), order, cc)


# F(z) = (z1 + z2^2, z2), G(z) = (z1, z2 + z1^2) at the origin, order 2
F_SHEAR = {(1, 0): [1, 0], (0, 1): [0, 1], (0, 2): [1, 0]}
G_SHEAR = {(1, 0): [1, 0], (0, 1): [0, 1], (2, 0): [0, 1]}


class TestCompose:
    def test_identity_left(self):
        rng = np.random.default_rng(7)
        a = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        I = JetMap.identity(a, 3)
        G = jet_c2(oracle.random_jet_dict(rng, 2, 3), 3, anchor=a, base=rng.standard_normal(2))
        out = compose_jets(I, G)
        assert jet_distance(out, G, tol=np.inf) < 1e-15

    def test_two_shears_truncated(self):
        F = jet_c2(F_SHEAR, 2)
        G = jet_c2(G_SHEAR, 2)
        got = compose_jets(F, G)
        # (G o F)(z) = (z1 + z2^2, z2 + (z1 + z2^2)^2) -> degree-2 truncation
        expected = jet_c2({(1, 0): [1, 0], (0, 1): [0, 1],
                           (0, 2): [1, 0], (2, 0): [0, 1]}, 2)
        assert jet_distance(got, expected) < 1e-15

    def test_anchor_mismatch(self):
        F = jet_c2(F_SHEAR, 2, base=(1, 1))
        G = jet_c2(G_SHEAR, 2)  # anchored at 0 != F.base
        with pytest.raises(AnchorMismatch):
            compose_jets(F, G)

    def test_order_mismatch(self):
        with pytest.raises(OrderMismatch):
            compose_jets(jet_c2(F_SHEAR, 2), jet_c2(G_SHEAR, 3))

    @pytest.mark.parametrize("n,m", [(2, 2), (2, 3), (3, 2), (3, 3)])
    def test_against_dense_oracle(self, n, m):
        rng = np.random.default_rng(100 * n + m)
        for _ in range(25):
            a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            Fc = oracle.random_jet_dict(rng, n, m)
            Gc = oracle.random_jet_dict(rng, n, m)
            F = JetMap(a, b, m, {k: np.asarray(v) for k, v in Fc.items()})
            G = JetMap(b, a, m, {k: np.asarray(v) for k, v in Gc.items()})
            got = compose_jets(F, G)
            want = oracle.compose(oracle.jet_to_tensors(G), oracle.jet_to_tensors(F), m)
            assert oracle.tensors_max_diff(oracle.jet_to_tensors(got), want) < 1e-12

    def test_associativity_mod_truncation(self):
        rng = np.random.default_rng(42)
        for _ in range(10):
            pts = [rng.standard_normal(2) + 1j * rng.standard_normal(2) for _ in range(4)]
            J = [JetMap(pts[i], pts[i + 1], 3,
                        {k: np.asarray(v) for k, v in oracle.random_jet_dict(rng, 2, 3).items()})
                 for i in range(3)]
            lhs = compose_jets(compose_jets(J[0], J[1]), J[2])
            rhs = compose_jets(J[0], compose_jets(J[1], J[2]))
            assert jet_distance(lhs, rhs, tol=np.inf) < 1e-12


class TestInvert:
    def test_identity(self):
        I = JetMap.identity(np.zeros(2, complex), 3)
        assert identity_distance(invert_jet(I)) < 1e-15

    def test_shear_exact(self):
        F = jet_c2(F_SHEAR, 2)
        G = invert_jet(F)
        expected = jet_c2({(1, 0): [1, 0], (0, 1): [0, 1], (0, 2): [-1, 0]}, 2)
        assert jet_distance(G, expected) < 1e-14

    def test_pure_linear(self):
        rng = np.random.default_rng(3)
        A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        F = JetMap.from_linear(np.zeros(3, complex), A, 3)
        G = invert_jet(F)
        assert np.max(np.abs(G.linear_matrix() - np.linalg.inv(A))) < 1e-12
        assert all(sum(a) == 1 for a in G.coeffs)

    def test_degenerate_raises(self):
        F = jet_c2({(1, 0): [1, 0], (0, 1): [2, 0], (0, 2): [0, 1]}, 2)
        with pytest.raises(DegenerateJet):
            invert_jet(F)

    @pytest.mark.parametrize("n", [2, 3])
    def test_round_trip_both_sides(self, n):
        rng = np.random.default_rng(n)
        for _ in range(20):
            a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            F = JetMap(a, b, 3,
                       {k: np.asarray(v) for k, v in oracle.random_jet_dict(rng, n, 3).items()})
            G = invert_jet(F)
            assert identity_distance(compose_jets(F, G)) < 1e-9
            assert identity_distance(compose_jets(G, F)) < 1e-9


class TestTruncate:
    def test_same_order_unchanged(self):
        F = jet_c2(F_SHEAR, 2)
        assert jet_distance(truncate_jet(F, 2), F) == 0.0

    def test_to_linear(self):
        rng = np.random.default_rng(5)
        F = jet_c2(oracle.random_jet_dict(rng, 2, 3), 3)
        L = truncate_jet(F, 1)
        assert L.order == 1 and all(sum(a) == 1 for a in L.coeffs)

    def test_truncation_commutes_with_compose(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            Fc = oracle.random_jet_dict(rng, 2, 3)
            Gc = oracle.random_jet_dict(rng, 2, 3)
            F = jet_c2(Fc, 3)
            G = jet_c2(Gc, 3)
            d = 2
            lhs = truncate_jet(compose_jets(F, G), d)
            rhs = compose_jets(truncate_jet(F, d), truncate_jet(G, d))
            assert jet_distance(lhs, rhs) < 1e-12


class TestJacobian:
    def test_linear_diag(self):
        F = JetMap.from_linear(np.zeros(2, complex), np.diag([2.0, 3.0]), 2)
        J = jacobian_det_jet(F)
        assert J.order == 1
        assert abs(J.constant() - 6.0) < 1e-15
        assert all(c == 0 for a, c in J.coeffs.items() if sum(a) > 0)

    def test_quadratic_example(self):
        F = jet_c2({(1, 0): [1, 0], (0, 1): [0, 1], (0, 2): [1, 0], (2, 0): [0, 1]}, 3)
        J = jacobian_det_jet(F)
        # det [[1, 2 z2], [2 z1, 1]] = 1 - 4 z1 z2
        assert abs(J.constant() - 1.0) < 1e-15
        assert abs(J.coeff((1, 1)) + 4.0) < 1e-15
        assert len(J.coeffs) == 2

    def test_shear_jet_exact_one(self):
        # integer shear data: jet of z + f(lambda(z)) v with lambda(v) = 0
        F = jet_c2({(1, 0): [1, 0], (0, 1): [0, 1],
                    (2, 0): [0, 3], (3, 0): [0, -2]}, 3)
        J = jacobian_det_jet(F)
        assert J.coeffs == {(0, 0): 1.0 + 0.0j}

    def test_multiplicativity(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            Fc = oracle.random_jet_dict(rng, 2, 3)
            Gc = oracle.random_jet_dict(rng, 2, 3)
            F, G = jet_c2(Fc, 3), jet_c2(Gc, 3)
            JFG = jacobian_det_jet(compose_jets(F, G))
            # oracle side: det dG(F) * det dF on dense tensors
            m = 2
            tF = [oracle.truncate(t, m) for t in oracle.jet_to_tensors(F)]
            JG = _dense_jacdet(oracle.jet_to_tensors(G), m)
            JGF = oracle.compose([JG], tF, m)[0]
            JF = _dense_jacdet(oracle.jet_to_tensors(F), m)
            want = oracle.mul(JGF, JF, m)
            got = oracle.zero_tensor(2, m)
            for a, c in JFG.coeffs.items():
                got[a] = c
            assert float(np.max(np.abs(got - want))) < 1e-9


def _dense_jacdet(tensors, m):
    d11 = _dense_partial(tensors[0], 0)
    d12 = _dense_partial(tensors[0], 1)
    d21 = _dense_partial(tensors[1], 0)
    d22 = _dense_partial(tensors[1], 1)
    return oracle.mul(d11, d22, m) - oracle.mul(d12, d21, m)


def _dense_partial(t, k):
    n = t.ndim
    deg = t.shape[0] - 1
    out = np.zeros_like(t)
    idx = np.indices(t.shape)[k]
    shifted = np.roll(t * idx, -1, axis=k)
    sl = [slice(None)] * n
    sl[k] = slice(0, deg)
    out[tuple(sl)] = shifted[tuple(sl)]
    return out


class TestDivergence:
    def test_shear_field(self):
        # lambda = z1, v = e2, field z1^2 e2: divergence 0
        V = PolyVectorField(2, 2, {(2, 0): np.array([0, 1], complex)})
        D = divergence(V)
        assert D.coeffs == {}

    def test_euler_field(self):
        V = PolyVectorField(3, 1, {(1, 0, 0): np.array([1, 0, 0], complex),
                                   (0, 1, 0): np.array([0, 1, 0], complex),
                                   (0, 0, 1): np.array([0, 0, 1], complex)})
        D = divergence(V)
        assert abs(D.constant() - 3.0) < 1e-15

    def test_overshear_field(self):
        # lambda = z1, mu = z2, v = e2: field g(z1) z2 e2 with g = 2 z1 + z1^3
        V = PolyVectorField(2, 4, {(1, 1): np.array([0, 2], complex),
                                   (3, 1): np.array([0, 1], complex)})
        D = divergence(V)
        assert abs(D.coeff((1, 0)) - 2.0) < 1e-15
        assert abs(D.coeff((3, 0)) - 1.0) < 1e-15
        assert len(D.coeffs) == 2

    def test_linearity(self):
        rng = np.random.default_rng(13)
        for _ in range(5):
            cV = {a: rng.standard_normal(2) + 1j * rng.standard_normal(2)
                  for a in [(2, 0), (1, 1), (0, 2)]}
            cW = {a: rng.standard_normal(2) + 1j * rng.standard_normal(2)
                  for a in [(2, 0), (1, 1), (0, 2)]}
            a, b = 2.0 + 1j, -0.5 + 0.25j
            V = PolyVectorField(2, 2, dict(cV))
            W = PolyVectorField(2, 2, dict(cW))
            VW = PolyVectorField(2, 2, {k: a * cV[k] + b * cW[k] for k in cV})
            lhs = divergence(VW)
            dv, dw = divergence(V), divergence(W)
            for alpha in set(dv.coeffs) | set(dw.coeffs) | set(lhs.coeffs):
                assert abs(lhs.coeff(alpha) - (a * dv.coeff(alpha) + b * dw.coeff(alpha))) < 1e-12


class TestDistance:
    def test_self_zero(self):
        F = jet_c2(F_SHEAR, 2)
        assert jet_distance(F, F) == 0.0

    def test_epsilon_perturbation(self):
        I = JetMap.identity(np.zeros(2, complex), 2)
        pert = {a: v.copy() for a, v in I.coeffs.items()}
        pert[(2, 0)] = np.array([1e-6, 0], complex)
        J = JetMap(I.anchor, I.base, 2, pert)
        assert abs(jet_distance(I, J) - 1e-6) < 1e-18

    def test_symmetry(self):
        rng = np.random.default_rng(17)
        for _ in range(10):
            F = jet_c2(oracle.random_jet_dict(rng, 2, 3), 3)
            G = jet_c2(oracle.random_jet_dict(rng, 2, 3), 3)
            assert jet_distance(F, G) == jet_distance(G, F)
