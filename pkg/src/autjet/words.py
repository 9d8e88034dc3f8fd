"""Closed-form elementary automorphisms of C^n and finite composition words.

Three element kinds are supported, each with an exact closed-form inverse:

  shear      z -> z + f(lambda(z)) v            with lambda(v) = 0
  overshear  z -> z + (exp(g(lambda(z))) - 1) mu(z) v
                                                with lambda(v) = 0, mu(v) = 1
  affine     z -> A z + t                       with A invertible

A word is a finite sequence of elements applied left to right.  Shears have
Jacobian one; an overshear contributes exp(g(lambda(z))); an affine map
contributes det A.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from .errors import AutjetError, InvalidShearData, Singular
from .jets import (
    DEFAULT_TOL,
    JetMap,
    MultiIndex,
    _spoly_mul,
    as_point,
    compose_jets,
)
from .poly1 import Poly1


@dataclass(frozen=True, eq=False)
class LinearForm:
    """C-linear form z -> sum coeffs[k] * z_k (no conjugation)."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = as_point(self.coeffs)
        if np.all(c == 0):
            raise InvalidShearData("linear form is identically zero")
        object.__setattr__(self, "coeffs", c)

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def __call__(self, z):
        return np.asarray(z) @ self.coeffs

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def scaled(self, c: complex) -> "LinearForm":
        return LinearForm(self.coeffs * c)

    def linear_poly(self) -> Dict[MultiIndex, complex]:
        n = self.n
        out = {}
        for k in range(n):
            if self.coeffs[k] != 0:
                out[tuple(1 if i == k else 0 for i in range(n))] = complex(self.coeffs[k])
        return out

    def power_polys(self, m: int) -> List[Dict[MultiIndex, complex]]:
        """[1, lambda(w), lambda(w)^2, ..., lambda(w)^m] as sparse polynomials."""
        n = self.n
        out = [{(0,) * n: 1.0 + 0.0j}, self.linear_poly()]
        for _ in range(m - 1):
            out.append(_spoly_mul(out[-1], out[1], m))
        return out


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Shear:
    lam: LinearForm
    v: np.ndarray
    f: Poly1

    def __post_init__(self):
        object.__setattr__(self, "v", as_point(self.v, self.lam.n))

    @property
    def n(self) -> int:
        return self.lam.n

    def apply(self, z: np.ndarray) -> np.ndarray:
        vals = self.f(self.lam(z))
        return z + np.multiply.outer(vals, self.v)

    def inverse(self) -> "Shear":
        return Shear(self.lam, self.v, -self.f)

    def jet(self, a: np.ndarray, m: int) -> JetMap:
        t = self.f.taylor_coeffs_at(complex(self.lam(a)), m)
        base = a + t[0] * self.v
        powers = self.lam.power_polys(m)
        coeffs: Dict[MultiIndex, np.ndarray] = {}
        n = self.n
        for k in range(1, m + 1):
            if t[k] == 0:
                continue
            for alpha, c in powers[k].items():
                cur = coeffs.get(alpha)
                add = (t[k] * c) * self.v
                coeffs[alpha] = add if cur is None else cur + add
        for k in range(n):
            alpha = tuple(1 if i == k else 0 for i in range(n))
            cur = coeffs.get(alpha, np.zeros(n, dtype=complex))
            e = np.zeros(n, dtype=complex)
            e[k] = 1.0
            coeffs[alpha] = cur + e
        return JetMap(a, base, m, coeffs)

    def log_jacobian(self, z) -> complex:
        return 0.0 + 0.0j

    def is_volume_preserving(self, tol: float) -> bool:
        return True


@dataclass(frozen=True, eq=False)
class Overshear:
    lam: LinearForm
    mu: LinearForm
    v: np.ndarray
    g: Poly1

    def __post_init__(self):
        object.__setattr__(self, "v", as_point(self.v, self.lam.n))
        if self.mu.n != self.lam.n:
            raise InvalidShearData("lambda and mu dimensions differ")

    @property
    def n(self) -> int:
        return self.lam.n

    def apply(self, z: np.ndarray) -> np.ndarray:
        factor = (np.exp(self.g(self.lam(z))) - 1.0) * self.mu(z)
        return z + np.multiply.outer(factor, self.v)

    def inverse(self) -> "Overshear":
        return Overshear(self.lam, self.mu, self.v, -self.g)

    def jet(self, a: np.ndarray, m: int) -> JetMap:
        s0 = complex(self.lam(a))
        h = self.g.taylor_coeffs_at(s0, m)  # series of g at lambda(a)
        # E(s) = exp(g(s0 + s)) - 1 truncated at degree m
        tail = np.zeros(m + 1, dtype=complex)
        tail[1:] = h[1:]
        expo = np.zeros(m + 1, dtype=complex)
        expo[0] = 1.0
        term = np.zeros(m + 1, dtype=complex)
        term[0] = 1.0
        for j in range(1, m + 1):
            term = np.convolve(term, tail)[: m + 1] / j
            expo += term
        E = np.exp(h[0]) * expo
        E[0] -= 1.0
        mu_a = complex(self.mu(a))
        base = a + E[0] * mu_a * self.v
        powers = self.lam.power_polys(m)
        mu_poly = self.mu.linear_poly()
        n = self.n
        coeffs: Dict[MultiIndex, np.ndarray] = {}

        def add(alpha, c):
            if c == 0:
                return
            cur = coeffs.get(alpha)
            inc = c * self.v
            coeffs[alpha] = inc if cur is None else cur + inc

        # (E(lam(w)) - E(0)) mu(a) + E(lam(w)) mu(w), truncated at degree m
        for k in range(1, m + 1):
            if E[k] == 0:
                continue
            for alpha, c in powers[k].items():
                add(alpha, E[k] * c * mu_a)
        for k in range(0, m + 1):
            if E[k] == 0:
                continue
            prod = _spoly_mul(powers[k], mu_poly, m)
            for alpha, c in prod.items():
                add(alpha, E[k] * c)
        for k in range(n):
            alpha = tuple(1 if i == k else 0 for i in range(n))
            cur = coeffs.get(alpha, np.zeros(n, dtype=complex))
            e = np.zeros(n, dtype=complex)
            e[k] = 1.0
            coeffs[alpha] = cur + e
        return JetMap(a, base, m, coeffs)

    def log_jacobian(self, z) -> complex:
        return complex(self.g(self.lam(z)))

    def is_volume_preserving(self, tol: float) -> bool:
        return bool(np.all(np.abs(self.g.coeffs) <= tol))


@dataclass(frozen=True, eq=False)
class AffineMap:
    matrix: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.matrix, dtype=complex)
        t = as_point(self.translation)
        if A.shape != (len(t), len(t)):
            raise AutjetError("affine matrix/translation shapes disagree")
        if abs(np.linalg.det(A)) <= 1e-12 * max(1.0, np.max(np.abs(A))) ** len(t):
            raise Singular("affine matrix is singular within tolerance")
        A.setflags(write=False)
        object.__setattr__(self, "matrix", A)
        object.__setattr__(self, "translation", t)

    @property
    def n(self) -> int:
        return len(self.translation)

    def apply(self, z: np.ndarray) -> np.ndarray:
        return np.asarray(z) @ self.matrix.T + self.translation

    def inverse(self) -> "AffineMap":
        Ainv = np.linalg.inv(self.matrix)
        return AffineMap(Ainv, -(Ainv @ self.translation))

    def jet(self, a: np.ndarray, m: int) -> JetMap:
        return JetMap.from_linear(a, self.matrix, m, base=self.apply(a))

    def log_jacobian(self, z) -> complex:
        return complex(np.log(np.linalg.det(self.matrix)))

    def is_volume_preserving(self, tol: float) -> bool:
        return abs(np.linalg.det(self.matrix) - 1.0) <= tol

    @staticmethod
    def translation_by(t) -> "AffineMap":
        t = as_point(t)
        return AffineMap(np.eye(len(t), dtype=complex), t)


ElementaryMap = Union[Shear, Overshear, AffineMap]


# ---------------------------------------------------------------------------
# words
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AutWord:
    """Finite composition word; maps[0] is applied first."""

    maps: Tuple[ElementaryMap, ...]
    volume_preserving: bool = False

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))
        dims = {m.n for m in self.maps}
        if len(dims) > 1:
            raise AutjetError(f"mixed dimensions in word: {sorted(dims)}")

    def __len__(self) -> int:
        return len(self.maps)

    def dimension(self, default: int = None) -> int:
        if self.maps:
            return self.maps[0].n
        if default is None:
            raise AutjetError("empty word has no intrinsic dimension")
        return default

    def check_volume_flag(self, tol: float = DEFAULT_TOL) -> bool:
        """True when the flag is consistent with the elements."""
        if not self.volume_preserving:
            return True
        return all(m.is_volume_preserving(tol) for m in self.maps)

    def element_census(self) -> Dict[str, int]:
        out = {"shear": 0, "overshear": 0, "affine": 0}
        for m in self.maps:
            out[kind_of(m)] += 1
        return out


def kind_of(m: ElementaryMap) -> str:
    if isinstance(m, Shear):
        return "shear"
    if isinstance(m, Overshear):
        return "overshear"
    return "affine"


def empty_word(volume_preserving: bool = True) -> AutWord:
    return AutWord((), volume_preserving)


def concat_words(*words: AutWord) -> AutWord:
    maps: List[ElementaryMap] = []
    vp = True
    for w in words:
        maps.extend(w.maps)
        vp = vp and w.volume_preserving
    return AutWord(tuple(maps), vp)


def apply_word(w: AutWord, z) -> np.ndarray:
    """Evaluate the word at a point (shape (n,)) or batch (shape (k, n))."""
    out = np.asarray(z, dtype=complex)
    for m in w.maps:
        out = m.apply(out)
    return out


def invert_word(w: AutWord) -> AutWord:
    return AutWord(tuple(m.inverse() for m in reversed(w.maps)), w.volume_preserving)


def word_jet(w: AutWord, a, m: int, tol: float = DEFAULT_TOL) -> JetMap:
    """Jet of the whole word at a: elementary jets folded along the orbit."""
    if m < 1:
        raise AutjetError("jet order must be >= 1")
    point = as_point(a)
    jet = None
    for elem in w.maps:
        step = elem.jet(point, m)
        jet = step if jet is None else compose_jets(jet, step, tol=np.inf)
        point = step.base
    if jet is None:
        return JetMap.identity(point, m)
    return jet


def word_log_jacobian(w: AutWord, z) -> complex:
    """Sum of elementary log-Jacobians along the orbit of z.

    exp of the result equals the Jacobian determinant of the word at z; for
    volume-preserving words it vanishes modulo 2 pi i.
    """
    point = as_point(z)
    total = 0.0 + 0.0j
    for m in w.maps:
        total += m.log_jacobian(point)
        point = m.apply(point)
    return total


def make_shear(lam: LinearForm, v, f: Poly1, tol: float = DEFAULT_TOL) -> Shear:
    v = as_point(v, lam.n)
    if np.all(v == 0):
        raise InvalidShearData("shear direction is zero")
    val = abs(complex(lam(v)))
    if val > tol * lam.norm() * float(np.linalg.norm(v)):
        raise InvalidShearData(f"lambda(v) = {val:.3e} != 0")
    return Shear(lam, v, f)


def make_overshear(lam: LinearForm, mu: LinearForm, v, g: Poly1,
                   tol: float = DEFAULT_TOL) -> Overshear:
    v = as_point(v, lam.n)
    if np.all(v == 0):
        raise InvalidShearData("overshear direction is zero")
    scale = lam.norm() * float(np.linalg.norm(v))
    if abs(complex(lam(v))) > tol * scale:
        raise InvalidShearData("lambda(v) != 0")
    if abs(complex(mu(v)) - 1.0) > tol * max(1.0, mu.norm() * float(np.linalg.norm(v))):
        raise InvalidShearData("mu(v) != 1")
    return Overshear(lam, mu, v, g)


def word_along_line(w: AutWord, point, direction) -> List[Poly1]:
    """Components of tau -> w(point + tau * direction) as one-variable
    polynomials.  Requires a word of shears and affine maps only."""
    n = w.dimension(default=len(np.asarray(point)))
    comps = [Poly1([complex(point[k]), complex(direction[k])]) for k in range(n)]
    for m in w.maps:
        if isinstance(m, Shear):
            lam_tau = Poly1.zero()
            for k in range(n):
                if m.lam.coeffs[k] != 0:
                    lam_tau = lam_tau + complex(m.lam.coeffs[k]) * comps[k]
            f_tau = _poly1_compose(m.f, lam_tau)
            comps = [comps[k] + complex(m.v[k]) * f_tau for k in range(n)]
        elif isinstance(m, AffineMap):
            new = []
            for i in range(n):
                acc = Poly1.constant(complex(m.translation[i]))
                for k in range(n):
                    if m.matrix[i, k] != 0:
                        acc = acc + complex(m.matrix[i, k]) * comps[k]
                new.append(acc)
            comps = new
        else:
            raise AutjetError("line restriction needs a shear/affine word")
    return comps


def _poly1_compose(f: Poly1, inner: Poly1) -> Poly1:
    """f(inner(tau)) for center-0 inner, arbitrary-center f."""
    out = Poly1.zero()
    shifted = inner + Poly1.constant(-f.center)
    for c in f.coeffs[::-1]:
        out = out * shifted + Poly1.constant(complex(c))
    return out
