"""Sum-of-products representation for one-variable polynomials.

High-degree interpolants and damping windows explode numerically when
expanded into a single coefficient list: binomial growth makes evaluation
lose all significant digits.  Kept as a sum of products of short factors
(cardinal interpolation form), evaluation and local Taylor expansion only
multiply, so relative precision survives.  Factors vanishing at a point
contribute exact zeros to the low-order Taylor coefficients there, which is
what makes interpolation conditions hold to the bit.

Shear and overshear functions accept either a plain Poly1 or a
StructuredPoly; both expose __call__, taylor_coeffs_at, degree and negation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .poly1 import Poly1


@dataclass(frozen=True, eq=False)
class StructuredPoly:
    """sum_t  scale_t * prod_i factors_t[i]  with Poly1 factors."""

    terms: Tuple[Tuple[complex, Tuple[Poly1, ...]], ...]

    def __post_init__(self):
        object.__setattr__(
            self,
            "terms",
            tuple((complex(c), tuple(fs)) for c, fs in self.terms),
        )

    @property
    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(f.degree for f in fs) for _, fs in self.terms)

    def __call__(self, x):
        x = np.asarray(x)
        out = np.zeros(x.shape, dtype=complex)
        for c, fs in self.terms:
            term = np.full(x.shape, c, dtype=complex)
            for f in fs:
                term = term * f(x)
            out = out + term
        return out if out.shape else complex(out)

    def taylor_coeffs_at(self, x: complex, upto: int) -> np.ndarray:
        out = np.zeros(upto + 1, dtype=complex)
        for c, fs in self.terms:
            term = np.zeros(upto + 1, dtype=complex)
            term[0] = c
            for f in fs:
                term = np.convolve(term, f.taylor_coeffs_at(x, upto))[: upto + 1]
            out += term
        return out

    def derivatives_at(self, x: complex, upto: int) -> np.ndarray:
        t = self.taylor_coeffs_at(x, upto)
        fact = 1.0
        for k in range(1, upto + 1):
            fact *= k
            t[k] *= fact
        return t

    def __neg__(self) -> "StructuredPoly":
        return StructuredPoly(tuple((-c, fs) for c, fs in self.terms))

    def __add__(self, other) -> "StructuredPoly":
        return StructuredPoly(self.terms + as_structured(other).terms)

    def scaled(self, a: complex) -> "StructuredPoly":
        return StructuredPoly(tuple((a * c, fs) for c, fs in self.terms))

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(c) <= tol or all(f.is_zero(tol) for f in fs)
                   for c, fs in self.terms)

    def expand(self) -> Poly1:
        """Expand to a plain center-0 polynomial (small degrees only)."""
        total = Poly1.zero()
        for c, fs in self.terms:
            term = Poly1.constant(c)
            for f in fs:
                term = term * f.recenter(0.0)
            total = total + term
        return total


def as_structured(f) -> StructuredPoly:
    if isinstance(f, StructuredPoly):
        return f
    return StructuredPoly(((1.0 + 0.0j, (f,)),))


def vanishing_product(roots: Sequence[complex], orders: Sequence[int],
                      center: complex = 0.0) -> List[Poly1]:
    """Factor list for prod (zeta - root_i)^{order_i}."""
    out: List[Poly1] = []
    for r, k in zip(roots, orders):
        out.extend([Poly1.linear_root(r, center)] * int(k))
    return out


def taylor_reciprocal(coeffs: np.ndarray, upto: int) -> np.ndarray:
    """Truncated reciprocal series of a Taylor expansion (c[0] != 0)."""
    c = np.asarray(coeffs, dtype=complex)
    out = np.zeros(upto + 1, dtype=complex)
    out[0] = 1.0 / c[0]
    for k in range(1, upto + 1):
        s = 0.0 + 0.0j
        for i in range(1, min(k, len(c) - 1) + 1):
            s += c[i] * out[k - i]
        out[k] = -s / c[0]
    return out


def product_taylor(factors: Sequence[Poly1], x: complex, upto: int) -> np.ndarray:
    term = np.zeros(upto + 1, dtype=complex)
    term[0] = 1.0
    for f in factors:
        term = np.convolve(term, f.taylor_coeffs_at(x, upto))[: upto + 1]
    return term


def cardinal_interpolant(nodes: Sequence[complex],
                         values: Sequence[Sequence[complex]],
                         extra_factor_maker=None) -> StructuredPoly:
    """Hermite interpolant in cardinal sum-of-products form.

    values[j] are the prescribed Taylor coefficients (not derivatives) of f
    at nodes[j]; the interpolant matches them through order len(values[j])-1
    and its term for node j vanishes to full prescribed order at every other
    node.  extra_factor_maker(j) may supply additional factors for term j
    (damping windows); they must not vanish at node j and their Taylor
    expansion there is compensated exactly up to the prescribed order.
    """
    nodes = [complex(z) for z in nodes]
    k = len(nodes)
    terms = []
    for j in range(k):
        mj = len(values[j]) - 1
        vanish: List[Poly1] = []
        for i in range(k):
            if i != j:
                vanish.extend([Poly1.linear_root(nodes[i], nodes[j])]
                              * (len(values[i])))
        extra = list(extra_factor_maker(j)) if extra_factor_maker else []
        base = vanish + extra
        # compensate the base product's own jet at node j: multiply by the
        # short polynomial  (prescribed jet) * (reciprocal jet of base)
        base_taylor = product_taylor(base, nodes[j], mj) if base else None
        if base_taylor is None:
            q = Poly1(np.asarray(values[j], dtype=complex), nodes[j])
            terms.append((1.0 + 0.0j, (q,)))
            continue
        recip = taylor_reciprocal(base_taylor, mj)
        qc = np.convolve(np.asarray(values[j], dtype=complex), recip)[: mj + 1]
        q = Poly1(qc, nodes[j])
        if q.is_zero():
            continue
        terms.append((1.0 + 0.0j, tuple(base + [q])))
    return StructuredPoly(tuple(terms))
