"""Shared generators for randomized tests."""

import numpy as np

from autjet.poly1 import Poly1
from autjet.words import AffineMap, AutWord, LinearForm, Overshear, Shear


def cvec(rng, n, scale=1.0):
    return (rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)) * scale


def random_form(rng, n, scale=1.0):
    while True:
        c = cvec(rng, n, scale)
        if np.linalg.norm(c) > 0.3:
            return LinearForm(c)


def kernel_vector(rng, form):
    """Exact kernel vector of a linear form: lambda_k e_j - lambda_j e_k."""
    n = form.n
    k = int(np.argmax(np.abs(form.coeffs)))
    choices = [j for j in range(n) if j != k]
    j = choices[rng.integers(len(choices))]
    v = np.zeros(n, dtype=complex)
    v[j] = form.coeffs[k]
    v[k] = -form.coeffs[j]
    return v / np.linalg.norm(v)


def random_poly1(rng, max_deg=3, scale=1.0):
    deg = int(rng.integers(0, max_deg + 1))
    return Poly1(cvec(rng, deg + 1, scale))


def random_shear(rng, n, scale=1.0):
    lam = random_form(rng, n)
    v = kernel_vector(rng, lam)
    return Shear(lam, v, random_poly1(rng, 3, scale))


def random_overshear(rng, n, scale=0.5):
    lam = random_form(rng, n)
    v = kernel_vector(rng, lam)
    mu = LinearForm(np.conj(v) / np.linalg.norm(v) ** 2)
    return Overshear(lam, mu, v, random_poly1(rng, 2, scale))


def random_affine(rng, n, scale=1.0):
    while True:
        A = cvec(rng, n * n, scale).reshape(n, n)
        if abs(np.linalg.det(A)) > 0.2:
            return AffineMap(A, cvec(rng, n, scale))


def random_word(rng, n, max_len=10, scale=1.0, kinds=("shear", "overshear", "affine")):
    length = int(rng.integers(0, max_len + 1))
    maps = []
    for _ in range(length):
        kind = kinds[rng.integers(len(kinds))]
        if kind == "shear":
            maps.append(random_shear(rng, n, scale))
        elif kind == "overshear":
            maps.append(random_overshear(rng, n, scale * 0.5))
        else:
            maps.append(random_affine(rng, n, scale))
    vp = all(k == "shear" for k in ("shear",)) and all(
        isinstance(m, Shear) for m in maps)
    return AutWord(tuple(maps), volume_preserving=vp)


def random_shear_word(rng, n, max_len=6, scale=1.0):
    length = int(rng.integers(1, max_len + 1))
    maps = tuple(random_shear(rng, n, scale) for _ in range(length))
    return AutWord(maps, volume_preserving=True)
