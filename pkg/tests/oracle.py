"""Independent brute-force oracle for truncated polynomial map arithmetic.

Maps are stored as dense coefficient tensors: component i of a map in n
variables truncated at total degree m is an ndarray with n axes of length
m+1; entry [a1, ..., an] is the coefficient of z1^a1 * ... * zn^an.  All
arithmetic goes through scipy.signal.convolve, deliberately sharing no code
with the package's sparse jet calculus.
"""

import numpy as np
from scipy.signal import convolve


def zero_tensor(n, m):
    return np.zeros((m + 1,) * n, dtype=complex)


def degree_mask(n, m):
    return np.indices((m + 1,) * n).sum(axis=0) <= m


def truncate(t, m):
    out = t[tuple(slice(0, m + 1) for _ in range(t.ndim))].copy()
    if out.shape != (m + 1,) * t.ndim:
        padded = zero_tensor(t.ndim, m)
        padded[tuple(slice(0, s) for s in out.shape)] = out
        out = padded
    out[~degree_mask(t.ndim, m)] = 0.0
    return out


def mul(a, b, m):
    return truncate(convolve(a, b, method="direct"), m)


def power(a, k, m):
    n = a.ndim
    out = zero_tensor(n, m)
    out[(0,) * n] = 1.0
    for _ in range(k):
        out = mul(out, a, m)
    return out


def compose(G, F, m):
    """Components of G(F(z)) truncated at total degree m.

    G, F: lists of dense tensors (one per component).  F must have zero
    constant terms for the truncated composition to be exact.
    """
    n = len(F)
    out = []
    for Gi in G:
        acc = zero_tensor(n, m)
        for beta in np.argwhere(Gi != 0):
            beta = tuple(int(x) for x in beta)
            term = zero_tensor(n, m)
            term[(0,) * n] = Gi[beta]
            for k, bk in enumerate(beta):
                if bk:
                    term = mul(term, power(F[k], bk, m), m)
            acc += term
        out.append(acc)
    return out


def jet_to_tensors(jet):
    """Dense tensors of a JetMap's polynomial part (no constant term)."""
    n, m = jet.n, jet.order
    out = [zero_tensor(n, m) for _ in range(n)]
    for alpha, vec in jet.coeffs.items():
        for i in range(n):
            out[i][alpha] = vec[i]
    return out


def tensors_max_diff(A, B):
    return max(float(np.max(np.abs(a - b))) for a, b in zip(A, B))


def identity_tensors(n, m):
    out = []
    for i in range(n):
        t = zero_tensor(n, m)
        idx = [0] * n
        idx[i] = 1
        t[tuple(idx)] = 1.0
        out.append(t)
    return out


def random_jet_dict(rng, n, m, scale=1.0, min_det=0.25):
    """Random sparse jet coefficients with unit-bidisc entries and a
    well-conditioned linear part; returns (coeffs dict, tensors)."""
    from autjet.jets import multi_indices

    while True:
        A = (rng.uniform(-1, 1, (n, n)) + 1j * rng.uniform(-1, 1, (n, n))) * scale
        if abs(np.linalg.det(A)) >= min_det:
            break
    coeffs = {}
    for k in range(n):
        alpha = tuple(1 if i == k else 0 for i in range(n))
        coeffs[alpha] = A[:, k].copy()
    for d in range(2, m + 1):
        for alpha in multi_indices(n, d):
            vec = (rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)) * scale
            coeffs[alpha] = vec
    return coeffs
