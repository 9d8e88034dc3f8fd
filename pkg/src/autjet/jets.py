"""Truncated multivariate power-series calculus for maps C^n -> C^n.

A jet of order m at an anchor point a is the Taylor polynomial of a map at a,
truncated at total degree m, stored without its constant term; the value at
the anchor is kept separately as `base`.  Coefficient storage is sparse: a
dict keyed by exponent multi-indices (tuples of n nonnegative ints) holding
length-n complex vectors, one entry per component of the map.

All values are immutable by convention and every operation is a pure
function, so everything here is safe to share across threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from .errors import (
    AnchorMismatch,
    AutjetError,
    DegenerateJet,
    DimensionMismatch,
    OrderMismatch,
)

MultiIndex = Tuple[int, ...]

DEFAULT_TOL = 1e-9


def as_point(z, n: int = None) -> np.ndarray:
    """Coerce to an immutable complex vector, checking the dimension."""
    p = np.asarray(z, dtype=complex)
    if p.ndim != 1:
        raise DimensionMismatch(f"point must be a vector, got shape {p.shape}")
    if n is not None and len(p) != n:
        raise DimensionMismatch(f"expected dimension {n}, got {len(p)}")
    if len(p) < 2:
        raise DimensionMismatch("dimension must be at least 2")
    p.setflags(write=False)
    return p


def unit_vector(n: int, k: int) -> np.ndarray:
    e = np.zeros(n, dtype=complex)
    e[k] = 1.0
    return e


def multi_indices(n: int, degree: int):
    """All exponent tuples of length n with total degree exactly `degree`,
    in lexicographic order."""
    if n == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in multi_indices(n - 1, degree - first):
            yield (first,) + rest


def multi_indices_upto(n: int, degree: int):
    for d in range(degree + 1):
        yield from multi_indices(n, d)


# ---------------------------------------------------------------------------
# sparse scalar polynomials: dict multi-index -> complex
# ---------------------------------------------------------------------------


def _spoly_mul(p: Dict[MultiIndex, complex], q: Dict[MultiIndex, complex],
               max_deg: int) -> Dict[MultiIndex, complex]:
    out: Dict[MultiIndex, complex] = {}
    for a, ca in p.items():
        da = sum(a)
        for b, cb in q.items():
            if da + sum(b) > max_deg:
                continue
            key = tuple(x + y for x, y in zip(a, b))
            out[key] = out.get(key, 0.0) + ca * cb
    return out


def _spoly_pow(p: Dict[MultiIndex, complex], k: int, max_deg: int,
               cache: list = None) -> Dict[MultiIndex, complex]:
    if k == 0:
        n = len(next(iter(p))) if p else 0
        return {(0,) * n: 1.0}
    if cache is not None and len(cache) > k:
        return cache[k]
    out = p
    for _ in range(k - 1):
        out = _spoly_mul(out, p, max_deg)
    return out


# ---------------------------------------------------------------------------
# jet types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class JetMap:
    """Order-m jet of a map C^n -> C^n at `anchor`, with value `base` there.

    coeffs maps exponent tuples (total degree 1..order) to complex vectors of
    length n; entry alpha holds the coefficient of (z - anchor)^alpha for all
    n components at once.
    """

    anchor: np.ndarray
    base: np.ndarray
    order: int
    coeffs: Dict[MultiIndex, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        a = as_point(self.anchor)
        b = as_point(self.base, len(a))
        object.__setattr__(self, "anchor", a)
        object.__setattr__(self, "base", b)
        if self.order < 1:
            raise AutjetError("jet order must be >= 1")
        for alpha, vec in self.coeffs.items():
            d = sum(alpha)
            if len(alpha) != len(a) or d < 1 or d > self.order:
                raise AutjetError(f"bad multi-index {alpha} for order {self.order}")
            v = np.asarray(vec, dtype=complex)
            if v.shape != (len(a),):
                raise AutjetError("coefficient vectors must have length n")
            self.coeffs[alpha] = v

    @property
    def n(self) -> int:
        return len(self.anchor)

    def coeff(self, alpha: MultiIndex) -> np.ndarray:
        return self.coeffs.get(tuple(alpha), np.zeros(self.n, dtype=complex))

    def linear_matrix(self) -> np.ndarray:
        """The n x n matrix of degree-1 coefficients (column k = d/dz_k)."""
        n = self.n
        A = np.zeros((n, n), dtype=complex)
        for k in range(n):
            alpha = tuple(1 if i == k else 0 for i in range(n))
            if alpha in self.coeffs:
                A[:, k] = self.coeffs[alpha]
        return A

    def is_nondegenerate(self, tol: float = 1e-12) -> bool:
        A = self.linear_matrix()
        scale = max(np.max(np.abs(A)), 1.0)
        return abs(np.linalg.det(A)) > tol * scale**self.n

    def degree_part(self, d: int) -> Dict[MultiIndex, np.ndarray]:
        return {a: v for a, v in self.coeffs.items() if sum(a) == d}

    def component_poly(self, i: int) -> Dict[MultiIndex, complex]:
        """Sparse scalar polynomial of component i (in w = z - anchor)."""
        return {a: complex(v[i]) for a, v in self.coeffs.items() if v[i] != 0}

    def evaluate(self, z) -> np.ndarray:
        """Evaluate base + P(z - anchor); mainly for diagnostics."""
        w = as_point(z, self.n) - self.anchor
        out = np.array(self.base, dtype=complex)
        for alpha, vec in self.coeffs.items():
            out = out + vec * np.prod(w**np.array(alpha))
        return out

    @staticmethod
    def identity(anchor, order: int, base=None) -> "JetMap":
        a = as_point(anchor)
        n = len(a)
        coeffs = {}
        for k in range(n):
            alpha = tuple(1 if i == k else 0 for i in range(n))
            coeffs[alpha] = unit_vector(n, k)
        return JetMap(a, a if base is None else as_point(base, n), order, coeffs)

    @staticmethod
    def from_linear(anchor, matrix, order: int, base=None) -> "JetMap":
        a = as_point(anchor)
        n = len(a)
        A = np.asarray(matrix, dtype=complex)
        coeffs = {}
        for k in range(n):
            col = A[:, k]
            if np.any(col != 0):
                alpha = tuple(1 if i == k else 0 for i in range(n))
                coeffs[alpha] = col.copy()
        return JetMap(a, a if base is None else as_point(base, n), order, coeffs)


@dataclass(frozen=True, eq=False)
class ScalarJet:
    """Truncated scalar power series at an anchor, degrees 0..order."""

    anchor: np.ndarray
    order: int
    coeffs: Dict[MultiIndex, complex] = field(default_factory=dict)

    def __post_init__(self):
        a = as_point(self.anchor)
        object.__setattr__(self, "anchor", a)
        for alpha in self.coeffs:
            if len(alpha) != len(a) or sum(alpha) > self.order:
                raise AutjetError(f"bad multi-index {alpha} for order {self.order}")

    @property
    def n(self) -> int:
        return len(self.anchor)

    def coeff(self, alpha: MultiIndex) -> complex:
        return complex(self.coeffs.get(tuple(alpha), 0.0))

    def constant(self) -> complex:
        return self.coeff((0,) * self.n)


@dataclass(frozen=True, eq=False)
class PolyVectorField:
    """Polynomial vector field on C^n with coefficient degrees <= degree.

    Same sparse indexing as JetMap, but degree-0 terms are allowed and there
    is no anchor: coefficients are read in the ambient coordinates.
    """

    n: int
    degree: int
    coeffs: Dict[MultiIndex, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        for alpha, vec in self.coeffs.items():
            if len(alpha) != self.n or sum(alpha) > self.degree:
                raise AutjetError(f"bad multi-index {alpha} for degree {self.degree}")
            v = np.asarray(vec, dtype=complex)
            if v.shape != (self.n,):
                raise AutjetError("coefficient vectors must have length n")
            self.coeffs[alpha] = v

    def is_homogeneous(self, d: int, tol: float = 0.0) -> bool:
        return all(sum(a) == d or np.all(np.abs(v) <= tol)
                   for a, v in self.coeffs.items())

    def coefficient_vector(self, d: int, basis=None) -> np.ndarray:
        """Flatten the degree-d part onto the ordered monomial basis.

        Layout: for each multi-index (lexicographic), the n components.
        """
        if basis is None:
            basis = list(multi_indices(self.n, d))
        out = np.zeros(self.n * len(basis), dtype=complex)
        for j, alpha in enumerate(basis):
            if alpha in self.coeffs:
                out[j * self.n:(j + 1) * self.n] = self.coeffs[alpha]
        return out

    @staticmethod
    def from_coefficient_vector(n: int, d: int, vec, basis=None) -> "PolyVectorField":
        if basis is None:
            basis = list(multi_indices(n, d))
        vec = np.asarray(vec, dtype=complex)
        coeffs = {}
        for j, alpha in enumerate(basis):
            v = vec[j * n:(j + 1) * n]
            if np.any(v != 0):
                coeffs[alpha] = v.copy()
        return PolyVectorField(n, d, coeffs)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def compose_jets(F: JetMap, G: JetMap, tol: float = DEFAULT_TOL) -> JetMap:
    """Jet of G after F: substitute F's polynomial into G's and truncate.

    Requires G.anchor = F.base (within tol) and equal orders.  The result is
    anchored at F.anchor with base G.base.
    """
    if F.order != G.order:
        raise OrderMismatch(f"orders differ: {F.order} vs {G.order}")
    if F.n != G.n:
        raise DimensionMismatch("jets live in different dimensions")
    gap = float(np.max(np.abs(G.anchor - F.base)))
    if gap > tol * (1.0 + float(np.max(np.abs(F.base)))):
        raise AnchorMismatch(f"G.anchor differs from F.base by {gap:.3e}")
    m = F.order
    n = F.n

    # powers of F's component polynomials, cached per component
    comp = [F.component_poly(i) for i in range(n)]
    pow_cache = [[{(0,) * n: 1.0}, comp[i]] for i in range(n)]

    def comp_power(i: int, k: int) -> Dict[MultiIndex, complex]:
        cache = pow_cache[i]
        while len(cache) <= k:
            cache.append(_spoly_mul(cache[-1], comp[i], m))
        return cache[k]

    out: Dict[MultiIndex, np.ndarray] = {}
    for beta, gvec in G.coeffs.items():
        # monomial (w)^beta of G evaluated on F's polynomial
        term: Dict[MultiIndex, complex] = {(0,) * n: 1.0}
        for i, bi in enumerate(beta):
            if bi:
                term = _spoly_mul(term, comp_power(i, bi), m)
        for alpha, c in term.items():
            if sum(alpha) == 0:
                # exact zero by construction: F has no constant term
                continue
            cur = out.get(alpha)
            if cur is None:
                out[alpha] = c * gvec
            else:
                out[alpha] = cur + c * gvec
    out = {a: v for a, v in out.items() if np.any(v != 0)}
    return JetMap(F.anchor, G.base, m, out)


def truncate_jet(F: JetMap, m2: int) -> JetMap:
    """Drop all coefficients of degree above m2."""
    if not 1 <= m2 <= F.order:
        raise AutjetError(f"truncation order {m2} outside 1..{F.order}")
    coeffs = {a: v.copy() for a, v in F.coeffs.items() if sum(a) <= m2}
    return JetMap(F.anchor, F.base, m2, coeffs)


def invert_jet(F: JetMap, tol: float = 1e-12) -> JetMap:
    """Jet G at F.base with G formally inverse to F modulo degree m+1.

    Solved degree by degree: invert the linear part, then remove the
    degree-d defect of G(F(w)) - w for d = 2..m by composing the defect
    with the inverse linear map.
    """
    n, m = F.n, F.order
    A = F.linear_matrix()
    scale = max(np.max(np.abs(A)), 1.0)
    if abs(np.linalg.det(A)) <= tol * scale**n:
        raise DegenerateJet("linear part is singular within tolerance")
    Ainv = np.linalg.inv(A)
    G = JetMap.from_linear(F.base, Ainv, m, base=F.anchor)
    if m == 1:
        return G
    Ainv_jet = JetMap.from_linear(F.base, Ainv, m, base=F.base)
    for d in range(2, m + 1):
        C = compose_jets(F, G, tol=np.inf)  # anchors match by construction
        defect = C.degree_part(d)
        if not defect:
            continue
        E = JetMap(F.base, F.base, m, {a: v.copy() for a, v in defect.items()})
        corr = compose_jets(Ainv_jet, E, tol=np.inf)  # E(Ainv u)
        new_coeffs = {a: v.copy() for a, v in G.coeffs.items()}
        for a, v in corr.coeffs.items():
            cur = new_coeffs.get(a)
            new_coeffs[a] = (-v) if cur is None else cur - v
        new_coeffs = {a: v for a, v in new_coeffs.items() if np.any(v != 0)}
        G = JetMap(F.base, F.anchor, m, new_coeffs)
    return G


def _partial(poly: Dict[MultiIndex, complex], k: int) -> Dict[MultiIndex, complex]:
    out: Dict[MultiIndex, complex] = {}
    for alpha, c in poly.items():
        if alpha[k] == 0:
            continue
        beta = list(alpha)
        beta[k] -= 1
        out[tuple(beta)] = out.get(tuple(beta), 0.0) + alpha[k] * c
    return out


def jacobian_det_jet(F: JetMap) -> ScalarJet:
    """Truncated determinant of F's Jacobian matrix, order F.order - 1."""
    n, m = F.n, F.order
    order = m - 1
    partials = [[_partial(F.component_poly(i), k) for k in range(n)]
                for i in range(n)]
    total: Dict[MultiIndex, complex] = {}
    for perm in itertools.permutations(range(n)):
        sign = _perm_sign(perm)
        prod: Dict[MultiIndex, complex] = {(0,) * n: 1.0}
        for i in range(n):
            prod = _spoly_mul(prod, partials[i][perm[i]], order)
            if not prod:
                break
        for alpha, c in prod.items():
            total[alpha] = total.get(alpha, 0.0) + sign * c
    total = {a: c for a, c in total.items() if c != 0}
    return ScalarJet(F.anchor, order, total)


def _perm_sign(perm) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, cycle = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            cycle += 1
        if cycle % 2 == 0:
            sign = -sign
    return sign


def divergence(V: PolyVectorField) -> ScalarJet:
    """sum_k dV_k/dz_k as a scalar polynomial (anchored at the origin)."""
    n = V.n
    out: Dict[MultiIndex, complex] = {}
    for alpha, vec in V.coeffs.items():
        for k in range(n):
            if alpha[k] == 0 or vec[k] == 0:
                continue
            beta = list(alpha)
            beta[k] -= 1
            key = tuple(beta)
            out[key] = out.get(key, 0.0) + alpha[k] * vec[k]
    out = {a: c for a, c in out.items() if c != 0}
    return ScalarJet(np.zeros(n, dtype=complex), max(V.degree - 1, 0), out)


def jet_distance(F: JetMap, G: JetMap, tol: float = DEFAULT_TOL) -> float:
    """Max coefficient discrepancy plus base discrepancy (max over components)."""
    if F.order != G.order:
        raise OrderMismatch(f"orders differ: {F.order} vs {G.order}")
    gap = float(np.max(np.abs(F.anchor - G.anchor)))
    if gap > tol * (1.0 + float(np.max(np.abs(F.anchor)))):
        raise AnchorMismatch(f"anchors differ by {gap:.3e}")
    worst = 0.0
    for alpha in set(F.coeffs) | set(G.coeffs):
        diff = float(np.max(np.abs(F.coeff(alpha) - G.coeff(alpha))))
        worst = max(worst, diff)
    return worst + float(np.max(np.abs(F.base - G.base)))


def identity_distance(F: JetMap) -> float:
    """Distance from F to the identity jet at its own anchor."""
    return jet_distance(F, JetMap.identity(F.anchor, F.order), tol=np.inf)
