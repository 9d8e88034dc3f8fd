"""One-variable complex polynomials with a movable basis center.

Coefficients are stored ascending in powers of (zeta - center).  The center
exists for numerical stability: damping factors of high degree concentrated
on an off-origin disk are catastrophically ill-conditioned in the plain
monomial basis, but benign when expanded around the disk center.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import AutjetError

_TRIM_REL = 0.0  # exact trailing-zero trim only; never drop small coefficients


def _ascoeffs(coeffs) -> np.ndarray:
    c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    if c.ndim != 1:
        raise AutjetError("Poly1 coefficients must be one-dimensional")
    return c


class Poly1:
    """Polynomial  f(zeta) = sum_k coeffs[k] * (zeta - center)**k."""

    __slots__ = ("coeffs", "center")

    def __init__(self, coeffs, center: complex = 0.0):
        c = _ascoeffs(coeffs)
        # trim exact trailing zeros, keep at least the constant term
        nz = np.nonzero(c)[0]
        if len(nz) == 0:
            c = np.zeros(1, dtype=complex)
        else:
            c = c[: nz[-1] + 1]
        self.coeffs = c
        self.center = complex(center)

    # -- basic queries ---------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree of the stated polynomial; 0 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.coeffs) <= tol))

    def __call__(self, x):
        """Evaluate at scalar or ndarray x (Horner in the shifted variable)."""
        return np.polynomial.polynomial.polyval(np.asarray(x) - self.center, self.coeffs)

    def derivative(self, k: int = 1) -> "Poly1":
        c = self.coeffs
        for _ in range(k):
            c = np.polynomial.polynomial.polyder(c)
            if len(c) == 0:
                c = np.zeros(1, dtype=complex)
        return Poly1(c, self.center)

    def derivatives_at(self, x: complex, upto: int) -> np.ndarray:
        """Return [f(x), f'(x), ..., f^(upto)(x)]."""
        out = np.empty(upto + 1, dtype=complex)
        c = self.coeffs
        for k in range(upto + 1):
            out[k] = np.polynomial.polynomial.polyval(complex(x) - self.center, c)
            c = np.polynomial.polynomial.polyder(c)
            if len(c) == 0:
                c = np.zeros(1, dtype=complex)
        return out

    def taylor_coeffs_at(self, x: complex, upto: int) -> np.ndarray:
        """Taylor coefficients f^(k)(x)/k! for k = 0..upto."""
        d = self.derivatives_at(x, upto)
        fact = 1.0
        for k in range(1, upto + 1):
            fact *= k
            d[k] /= fact
        return d

    # -- algebra (centers must agree for binary ops) ----------------------

    def _check_center(self, other: "Poly1"):
        if self.center != other.center:
            raise AutjetError(
                "Poly1 centers differ (%r vs %r); recenter explicitly first"
                % (self.center, other.center)
            )

    def __add__(self, other: "Poly1") -> "Poly1":
        self._check_center(other)
        n = max(len(self.coeffs), len(other.coeffs))
        c = np.zeros(n, dtype=complex)
        c[: len(self.coeffs)] += self.coeffs
        c[: len(other.coeffs)] += other.coeffs
        return Poly1(c, self.center)

    def __sub__(self, other: "Poly1") -> "Poly1":
        return self + (-other)

    def __neg__(self) -> "Poly1":
        return Poly1(-self.coeffs, self.center)

    def __mul__(self, other) -> "Poly1":
        if isinstance(other, Poly1):
            self._check_center(other)
            return Poly1(np.convolve(self.coeffs, other.coeffs), self.center)
        return Poly1(self.coeffs * complex(other), self.center)

    def __rmul__(self, other) -> "Poly1":
        return self.__mul__(other)

    def recenter(self, new_center: complex) -> "Poly1":
        """Re-expand around a new center (exact binomial shift).

        Stable only for moderate degree x shift combinations; the package
        keeps high-degree polynomials at their natural center.
        """
        if complex(new_center) == self.center:
            return self
        shift = self.center - complex(new_center)  # (z - new) = (z - old) + shift
        n = len(self.coeffs)
        out = np.zeros(n, dtype=complex)
        # Horner: f = sum a_k ((z-new) + shift)^k  processed highest first
        for a in self.coeffs[::-1]:
            shifted = np.zeros(n, dtype=complex)
            shifted[1:] = out[:-1]
            shifted += shift * out
            shifted[0] += a
            out = shifted
        return Poly1(out, new_center)

    def compose_linear(self, a: complex, b: complex) -> "Poly1":
        """Return g with g(t) = f(a*t + b), expanded around center 0."""
        # f(a t + b) = sum c_k (a t + b - center)^k ; Horner in t
        out = np.zeros(len(self.coeffs), dtype=complex)
        b0 = complex(b) - self.center
        for ck in self.coeffs[::-1]:
            shifted = np.zeros_like(out)
            shifted[1:] = a * out[:-1]
            shifted += b0 * out
            shifted[0] += ck
            out = shifted
        return Poly1(out, 0.0)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(center: complex = 0.0) -> "Poly1":
        return Poly1([0.0], center)

    @staticmethod
    def constant(value: complex, center: complex = 0.0) -> "Poly1":
        return Poly1([value], center)

    @staticmethod
    def linear_root(root: complex, center: complex = 0.0) -> "Poly1":
        """(zeta - root) expressed around the given center."""
        return Poly1([complex(center) - complex(root), 1.0], center)

    @staticmethod
    def monomial(k: int, coeff: complex = 1.0, center: complex = 0.0) -> "Poly1":
        c = np.zeros(k + 1, dtype=complex)
        c[k] = coeff
        return Poly1(c, center)

    @staticmethod
    def from_taylor(values, x: complex, center: complex = None) -> "Poly1":
        """Polynomial with prescribed Taylor coefficients `values` at x."""
        p = Poly1(np.asarray(values, dtype=complex), complex(x))
        if center is None:
            return p
        return p.recenter(center)

    def __repr__(self):
        return f"Poly1(deg={self.degree}, center={self.center})"


def factorial(k: int) -> float:
    return float(math.factorial(k))
