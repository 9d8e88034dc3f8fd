"""Dictionaries of shear and overshear polynomial vector fields.

A degree-d shear field lambda(z)^d v with lambda(v) = 0 is divergence free;
an overshear field lambda(z)^{d-1} mu(z) v with lambda(v) = 0, mu(v) = 1 has
divergence lambda(z)^{d-1}.  Over a catalogue of linear forms these families
span, respectively, the divergence-free homogeneous fields and (together)
all homogeneous fields of a given degree; the spans are rank-checked
numerically rather than assumed.

The catalogue takes every form with coefficients in {0, +-1, +-2, +-i, +-2i},
deduplicated up to complex scaling, in a deterministic order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import DictionaryDeficient
from .jets import MultiIndex, PolyVectorField, _spoly_mul, divergence, multi_indices
from .words import LinearForm

CATALOGUE_VALUES = (0, 1, -1, 2, -2, 1j, -1j, 2j, -2j)

RANK_TOL = 1e-10


def _complex_key(c: complex) -> Tuple[float, float]:
    return (round(c.real, 12), round(c.imag, 12))


def catalogue_forms(n: int) -> List[LinearForm]:
    """All catalogue forms up to scaling, deterministically ordered."""
    seen = {}
    for tup in itertools.product(CATALOGUE_VALUES, repeat=n):
        if all(v == 0 for v in tup):
            continue
        arr = np.array(tup, dtype=complex)
        lead = next(v for v in arr if v != 0)
        key = tuple(_complex_key(v / lead) for v in arr)
        if key not in seen:
            seen[key] = arr
    ordered = sorted(seen.items(), key=lambda kv: kv[0])
    return [LinearForm(arr) for _, arr in ordered]


def kernel_basis(form: LinearForm) -> List[np.ndarray]:
    """Basis of ker(form) built so that form(v) is an exact float zero."""
    c = form.coeffs
    n = len(c)
    k = int(np.argmax(np.abs(c)))
    out = []
    for j in range(n):
        if j == k:
            continue
        v = np.zeros(n, dtype=complex)
        v[j] = c[k]
        v[k] = -c[j]
        out.append(v / np.linalg.norm(v))
    return out


def dual_form(v: np.ndarray) -> LinearForm:
    """Form mu with mu(v) = 1 (the conjugate dual)."""
    return LinearForm(np.conj(v) / float(np.linalg.norm(v)) ** 2)


@dataclass(frozen=True, eq=False)
class DictionaryEntry:
    lam: LinearForm
    v: np.ndarray
    kind: str  # "shear" | "overshear"
    mu: Optional[LinearForm]
    field: PolyVectorField


@dataclass(frozen=True, eq=False)
class FieldDictionary:
    n: int
    degree: int
    divergence_free: bool
    entries: Tuple[DictionaryEntry, ...]
    basis: Tuple[MultiIndex, ...]
    matrix: np.ndarray  # rows: n * len(basis); columns: entries

    def numeric_rank(self, tol: float = RANK_TOL) -> int:
        if self.matrix.size == 0:
            return 0
        s = np.linalg.svd(self.matrix, compute_uv=False)
        return int(np.sum(s > tol * max(1.0, s[0])))


def shear_field(lam: LinearForm, v: np.ndarray, d: int) -> PolyVectorField:
    n = lam.n
    poly = lam.power_polys(d)[d]
    coeffs = {alpha: c * v for alpha, c in poly.items() if c != 0}
    return PolyVectorField(n, d, coeffs)


def overshear_field(lam: LinearForm, mu: LinearForm, v: np.ndarray, d: int) -> PolyVectorField:
    n = lam.n
    poly = _spoly_mul(lam.power_polys(d - 1)[d - 1], mu.linear_poly(), d)
    coeffs = {alpha: c * v for alpha, c in poly.items() if c != 0}
    return PolyVectorField(n, d, coeffs)


def assemble(n: int, d: int, entries: Sequence[DictionaryEntry]):
    basis = tuple(multi_indices(n, d))
    cols = [e.field.coefficient_vector(d, list(basis)) for e in entries]
    matrix = np.array(cols, dtype=complex).T if cols else np.zeros((n * len(basis), 0), complex)
    return basis, matrix


def build_dictionary(n: int, d: int, divergence_free: bool) -> FieldDictionary:
    """Catalogue dictionary of degree-d fields.

    Shear entries only when divergence_free; otherwise overshear entries are
    added so the assembled matrix can reach the full homogeneous field space.
    """
    if d < 1:
        raise ValueError("dictionary degree must be >= 1")
    entries: List[DictionaryEntry] = []
    for lam in catalogue_forms(n):
        for v in kernel_basis(lam):
            entries.append(DictionaryEntry(lam, v, "shear", None, shear_field(lam, v, d)))
    if not divergence_free:
        for lam in catalogue_forms(n):
            for v in kernel_basis(lam):
                mu = dual_form(v)
                entries.append(DictionaryEntry(
                    lam, v, "overshear", mu, overshear_field(lam, mu, v, d)))
    basis, matrix = assemble(n, d, entries)
    return FieldDictionary(n, d, divergence_free, tuple(entries), basis, matrix)


def divergence_free_dimension(n: int, d: int) -> int:
    """n * C(n+d-1, d) - C(n+d-2, d-1)."""
    from math import comb
    return n * comb(n + d - 1, d) - comb(n + d - 2, d - 1)


def full_field_dimension(n: int, d: int) -> int:
    from math import comb
    return n * comb(n + d - 1, d)


def solve_degree_correction(E: PolyVectorField, dictionary: FieldDictionary,
                            residual_tol: float = 1e-9):
    """Weights over the dictionary reproducing the homogeneous field E.

    Minimal-norm least squares (singular values below 1e-10 treated as
    zero); an exact single-entry match is returned directly when one exists.
    Raises DictionaryDeficient when the residual exceeds tolerance.
    """
    d = dictionary.degree
    if not E.is_homogeneous(d):
        raise ValueError(f"field is not homogeneous of degree {d}")
    target = E.coefficient_vector(d, list(dictionary.basis))
    scale = float(np.max(np.abs(target))) if target.size else 0.0
    if scale == 0.0:
        return []
    if dictionary.divergence_free:
        div = divergence(E)
        worst = max((abs(c) for c in div.coeffs.values()), default=0.0)
        if worst > 1e-9 * max(1.0, scale):
            raise DictionaryDeficient(
                f"field has divergence {worst:.3e}, not representable by shear fields",
                residual=worst)
    M = dictionary.matrix
    # snap to a single column when E is exactly proportional to one
    for j in range(M.shape[1]):
        col = M[:, j]
        denom = np.vdot(col, col)
        if denom == 0:
            continue
        w = np.vdot(col, target) / denom
        if np.max(np.abs(target - w * col)) <= 1e-12 * scale:
            return [(dictionary.entries[j], complex(w))]
    weights, *_ = np.linalg.lstsq(M, target, rcond=RANK_TOL)
    residual = float(np.max(np.abs(M @ weights - target)))
    if residual > residual_tol * max(1.0, scale):
        raise DictionaryDeficient(
            f"dictionary solve residual {residual:.3e} exceeds tolerance",
            residual=residual)
    out = []
    wmax = float(np.max(np.abs(weights))) if weights.size else 0.0
    for j, w in enumerate(weights):
        if abs(w) > 1e-14 * max(1.0, wmax):
            out.append((dictionary.entries[j], complex(w)))
    return out
