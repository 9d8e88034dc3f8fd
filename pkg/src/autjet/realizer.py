"""Automorphism words with a prescribed jet at one point, identity to
prescribed order at finitely many others, and certified smallness on a ball.

The construction works in stages, all anchored at the target point q:

  1. move p to q through one or two shear legs whose one-variable functions
     are flat translations near lambda(p),
  2. match the linear part by a multiplicative sequence of rank-one
     transvections (and one determinant-fixing overshear when volume is not
     required), planned by projecting matrix logarithms onto an admissible
     generator family,
  3. remove residual jet defects degree by degree with shear/overshear
     gadgets whose degree-d action reproduces dictionary fields exactly.

Every one-variable gadget function has the factored form

    c * (zeta - xi0)^d * V(zeta) * Q(zeta) * (1 - (zeta - xi0)^{k+1} Y(zeta))

where V enforces exact vanishing at the fixed-point projections, Q is the
short reciprocal jet making the leading behaviour exactly c*(zeta-xi0)^d
through order d+k, and 1 - s^{k+1} Y is a damping window (Y a truncated
binomial series of s^{-(k+1)}) that is structurally flat at xi0 and small on
the lambda-image of the ball.  Kept in sum-of-products form, every
interpolation condition holds to the bit and no expansion cancellation ever
occurs.  Admissibility of a form lambda means lambda(q) stays clear of the
lambda-image of the ball; prescribing nonzero jet data at a point whose
projection falls inside that disk is impossible for any function small on
it, so inadmissible forms are filtered before solving.

Every returned word is re-verified against its own report; a word that
fails any check is never returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .dictionary import RANK_TOL, catalogue_forms, dual_form, kernel_basis
from .errors import (
    DegenerateJet,
    DictionaryDeficient,
    NotUnimodular,
    RealizationError,
    Singular,
    SmallnessUnachievable,
)
from .hulls import BallHull
from .jets import (
    JetMap,
    as_point,
    compose_jets,
    invert_jet,
    jacobian_det_jet,
    jet_distance,
    multi_indices,
    unit_vector,
)
from .poly1 import Poly1
from .sampling import sphere_points, sup_identity_deviation_pair
from .structpoly import StructuredPoly, product_taylor, taylor_reciprocal
from .words import AutWord, LinearForm, Overshear, Shear, apply_word, word_jet

WINDOW_SAMPLES = 512
SAFETY = 1.05
DEFAULT_MAX_DEGREE = 700
_D_TARGET = 2.5  # scaled distance |lambda(q) - lambda(center)| of every form


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


@dataclass
class RealizationReport:
    jet_residual: float
    fixed_point_residuals: List[Tuple[List[complex], int, float]]
    sup_pair: float
    sample_count: int
    seed: int
    epsilon: float
    word_length: int
    volume_preserving: bool

    def passed(self, tol: float = 1e-9) -> bool:
        ok = self.jet_residual < tol
        ok = ok and all(r < tol for _, _, r in self.fixed_point_residuals)
        ok = ok and self.sup_pair <= self.epsilon
        return ok

    def to_dict(self) -> dict:
        return {
            "jet_residual": self.jet_residual,
            "fixed_point_residuals": [
                {"point": [[z.real, z.imag] for z in pt], "order": n, "residual": r}
                for pt, n, r in self.fixed_point_residuals],
            "sup_pair": self.sup_pair,
            "sample_count": self.sample_count,
            "seed": self.seed,
            "epsilon": self.epsilon,
            "word_length": self.word_length,
            "volume_preserving": self.volume_preserving,
        }


# ---------------------------------------------------------------------------
# linear realization (standalone)
# ---------------------------------------------------------------------------


def _transvection_shear(i: int, j: int, c: complex, n: int) -> Shear:
    """z -> z + c * z_j * e_i  (i != j)."""
    lam = LinearForm(unit_vector(n, j))
    return Shear(lam, unit_vector(n, i), Poly1([0.0, c]))


def _scaling_overshear(det: complex, n: int) -> Overshear:
    """z -> (det * z_1, z_2, ..., z_n) as a constant-g overshear."""
    lam = LinearForm(unit_vector(n, 1))
    mu = LinearForm(unit_vector(n, 0))
    return Overshear(lam, mu, unit_vector(n, 0), Poly1([np.log(complex(det))]))


def realize_linear(A, volume_flag: bool, tol: float = 1e-9) -> AutWord:
    """Word of coordinate transvection shears realizing the linear map A.

    Under volume_flag, det A must be 1 and the word is all shears; otherwise
    a single determinant-carrying overshear scaling is appended.
    """
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    if A.shape != (n, n) or n < 2:
        raise ValueError("matrix must be square of size >= 2")
    det = complex(np.linalg.det(A))
    if abs(det) <= 1e-12 * max(1.0, float(np.max(np.abs(A)))) ** n:
        raise Singular("matrix is singular within tolerance")
    if volume_flag and abs(det - 1.0) >= tol:
        raise NotUnimodular(f"det A = {det}, not 1 within {tol}")

    if np.max(np.abs(A - np.eye(n))) < 1e-15:
        return AutWord((), volume_preserving=True)
    offdiag = [(i, j) for i in range(n) for j in range(n)
               if i != j and A[i, j] != 0]
    if len(offdiag) == 1 and np.max(np.abs(np.diag(A) - 1.0)) < 1e-15:
        i, j = offdiag[0]
        return AutWord((_transvection_shear(i, j, complex(A[i, j]), n),),
                       volume_preserving=True)

    tail: List = []
    B = A.copy()
    if not volume_flag and abs(det - 1.0) >= tol:
        B = A.copy()
        B[0, :] /= det
        tail = [_scaling_overshear(det, n)]
        # word total = D . B with D = diag(det, 1, ..) acting after B
    ops = _transvection_ops(B)
    maps = [_transvection_shear(i, j, -c, n) for (i, j, c) in reversed(ops)]
    maps.extend(tail)
    return AutWord(tuple(maps), volume_preserving=volume_flag)


def _transvection_ops(B: np.ndarray) -> List[Tuple[int, int, complex]]:
    """Row operations (i, j, c): row_i += c row_j reducing B to the identity.

    Valid for matrices of determinant 1 (the last pivot closes exactly);
    B is not modified.
    """
    B = B.copy()
    n = B.shape[0]
    ops: List[Tuple[int, int, complex]] = []

    def rowadd(i: int, j: int, c: complex):
        if c == 0:
            return
        B[i, :] += c * B[j, :]
        ops.append((i, j, complex(c)))

    for k in range(n):
        if abs(B[k, k]) < 1e-10:
            j = max((j for j in range(n) if j != k), key=lambda j: abs(B[j, k]))
            if abs(B[j, k]) < 1e-10:
                raise Singular("unexpected rank collapse during reduction")
            rowadd(k, j, 1.0)
        if abs(B[k, k] - 1.0) > 1e-15:
            j = max((j for j in range(n) if j != k), key=lambda j: abs(B[j, k]))
            if abs(B[j, k]) < 1e-12:
                j = (k + 1) % n
                rowadd(j, k, 1.0)
            rowadd(k, j, (1.0 - B[k, k]) / B[j, k])
        for j in range(n):
            if j != k:
                rowadd(j, k, -B[j, k])
    return ops


# ---------------------------------------------------------------------------
# adapted forms and gadget windows
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class _LamData:
    """Geometry of one admissible form, rescaled so |lambda(q)-lambda(c)| is
    _D_TARGET: anchor projection xi0, disk (c_lam, R_lam), merged vanishing
    nodes, and the contraction ratio kappa = R_lam/|D|."""

    lam: LinearForm
    xi0: complex
    c_lam: complex
    R_lam: float
    nodes: Tuple[Tuple[complex, int], ...]

    @property
    def D(self) -> complex:
        return self.xi0 - self.c_lam

    @property
    def kappa(self) -> float:
        return self.R_lam / abs(self.D)


class _Geometry:
    """Shared per-call data: target point q, working ball, fixed points."""

    def __init__(self, n: int, q: np.ndarray, hull: BallHull,
                 fixed: Sequence[Tuple[np.ndarray, int]], m: int,
                 max_degree: int):
        self.n = n
        self.q = q
        self.hull = hull
        self.fixed = [(as_point(a, n), int(N)) for a, N in fixed]
        self.m = m
        self.max_degree = max_degree
        self.theta = 0.0  # set by caller: absolute clearance margin

    def lam_data(self, coeffs: np.ndarray, anchor: np.ndarray) -> Optional[_LamData]:
        """Geometry of the form at the given anchor point, or None when the
        form is inadmissible (anchor projection too close to the disk or to
        a fixed-point projection)."""
        lam = LinearForm(coeffs)
        c = complex(lam(self.hull.center))
        x = complex(lam(anchor))
        D = x - c
        R = self.hull.radius * lam.norm()
        if abs(D) < R + self.theta * lam.norm():
            return None
        scale = _D_TARGET / abs(D)
        lam = lam.scaled(scale)
        x, c, R = x * scale, c * scale, R * scale
        nodes: List[Tuple[complex, int]] = []
        for a, N in self.fixed:
            nu = complex(lam(a))
            if abs(nu - x) < 0.02 * _D_TARGET:
                return None
            for idx, (nu0, N0) in enumerate(nodes):
                if abs(nu - nu0) < 1e-8 * (1 + abs(nu0)):
                    nodes[idx] = (nu0, max(N0, N))
                    break
            else:
                nodes.append((nu, N))
        return _LamData(lam, x, c, R, tuple(nodes))


def _window_poly(ld: _LamData, k: int, L: int) -> Poly1:
    """Y_L: truncated binomial series of (zeta - xi0)^{-(k+1)} around c_lam.

    s^{-(k+1)} = (-D)^{-(k+1)} sum_i C(k+i, i) T^i  with T = (zeta-c_lam)/D.
    All coefficients share a sign structure, so evaluation never cancels.
    """
    D = ld.D
    pref = (-D) ** (-(k + 1))
    coeffs = np.empty(L, dtype=complex)
    binom = 1.0
    Dpow = 1.0 + 0.0j
    for i in range(L):
        coeffs[i] = pref * binom / Dpow
        binom = binom * (k + 1 + i) / (i + 1)
        Dpow *= D
    return Poly1(coeffs, ld.c_lam)


def _gadget_function(ld: _LamData, d: int, coeff: complex, k: int,
                     sup_budget: float, max_degree: int) -> StructuredPoly:
    """Factored one-variable function c*s^d*V*Q*(1 - s^{k+1} Y).

    Exact behaviour: vanishes to prescribed order at every node, equals
    c*s^d + O(s^{d+k+1}) at xi0, and |f| is certified <= sup_budget on the
    boundary of the lambda disk (512 samples, 1.05 safety factor).
    """
    s_root = Poly1.linear_root(ld.xi0, ld.c_lam)
    V: List[Poly1] = []
    for nu, N in ld.nodes:
        V.extend([Poly1.linear_root(nu, ld.c_lam)] * N)
    head = [s_root] * d + V
    base_taylor = product_taylor(V, ld.xi0, k)
    Q = Poly1(taylor_reciprocal(base_taylor, k), ld.xi0)

    boundary = ld.c_lam + ld.R_lam * np.exp(
        2j * np.pi * np.arange(WINDOW_SAMPLES) / WINDOW_SAMPLES)
    base_vals = np.full(WINDOW_SAMPLES, coeff, dtype=complex)
    for f in head + [Q]:
        base_vals *= f(boundary)
    s_vals = boundary - ld.xi0
    base_sup = float(np.max(np.abs(base_vals)))
    if base_sup == 0.0 or SAFETY * base_sup <= sup_budget:
        L = 8  # any window works; keep a mild one
    else:
        # |W| <= |s|^{k+1} * C(k+L, L) * kappa^L / (|D|^{k+1} (1 - kappa))
        smax = float(np.max(np.abs(s_vals)))
        kap = ld.kappa
        target = sup_budget / (SAFETY * base_sup)
        bound_const = smax ** (k + 1) / (abs(ld.D) ** (k + 1) * max(1e-9, 1 - kap))
        L = 8
        while L < max_degree:
            if bound_const * math.comb(k + L, L) * kap ** L <= target:
                break
            L = int(L * 1.5) + 1
    while True:
        Y = _window_poly(ld, k, L)
        w_vals = 1.0 - s_vals ** (k + 1) * Y(boundary)
        sup = SAFETY * float(np.max(np.abs(base_vals * w_vals)))
        if np.isfinite(sup) and sup <= sup_budget:
            break
        L = int(L * 1.6) + 8
        if L > max_degree:
            raise SmallnessUnachievable(
                f"window degree budget {max_degree} exhausted "
                f"(needed sup {sup_budget:.3e}, achieved {sup:.3e})")
    terms = [(coeff, tuple(head + [Q]))]
    neg = [s_root] * (k + 1) + head + [Q, Y]
    terms.append((-coeff, tuple(neg)))
    return StructuredPoly(tuple(terms))


# ---------------------------------------------------------------------------
# adapted dictionary entries at a point
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class _AdaptedEntry:
    ld: _LamData
    v: np.ndarray
    kind: str
    mu: Optional[LinearForm]


def _adapted_lam_datas(geo: _Geometry, anchor: np.ndarray,
                       shrink: float = 1.0) -> List[_LamData]:
    """Admissible forms near the direction of the anchor: the dual of the
    anchor direction perturbed by every catalogue form, scale-limited so the
    admissibility cone is respected."""
    u = anchor - geo.hull.center
    nu = float(np.linalg.norm(u))
    if nu <= geo.hull.radius + geo.theta:
        return []
    u = u / nu
    lam_dir = np.conj(u)
    R = geo.hull.radius
    x_max = (nu - R - geo.theta) / (nu + R + geo.theta)
    out = []
    ld0 = geo.lam_data(lam_dir, anchor)
    if ld0 is not None:
        out.append(ld0)
    for cat in catalogue_forms(geo.n):
        s = 0.8 * shrink * x_max / cat.norm()
        ld = geo.lam_data(lam_dir + s * cat.coeffs, anchor)
        if ld is not None:
            out.append(ld)
    return out

def _field_column(ld: _LamData, v: np.ndarray, kind: str,
                  mu: Optional[LinearForm], d: int, basis) -> np.ndarray:
    from .dictionary import overshear_field, shear_field
    if kind == "shear":
        f = shear_field(ld.lam, v, d)
    else:
        f = overshear_field(ld.lam, mu, v, d)
    return f.coefficient_vector(d, list(basis))


def _mu_unit_on_v_zero_at(v: np.ndarray, q: np.ndarray) -> Optional[LinearForm]:
    """Minimal-norm form mu with mu(v) = 1 and mu(q) = 0; None when the two
    conditions are incompatible (q parallel to v and nonzero)."""
    A = np.vstack([v, q])
    rhs = np.array([1.0, 0.0], dtype=complex)
    mu, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    if abs(complex(v @ mu) - 1.0) > 1e-9 or abs(complex(q @ mu)) > 1e-9 * (
            1 + float(np.max(np.abs(q)))):
        return None
    return LinearForm(mu)


def _normalized_mu(ld: _LamData, v: np.ndarray, q: np.ndarray) -> Optional[LinearForm]:
    """mu with mu(v) = 1 and mu(q) = 0 (so the overshear gadget is purely
    degree-d at q); None when q is parallel to v and nonzero."""
    mu_raw = dual_form(v)
    muq = complex(mu_raw(q))
    if muq == 0:
        return mu_raw
    if abs(ld.xi0) > 1e-6:
        return LinearForm(mu_raw.coeffs - (muq / ld.xi0) * ld.lam.coeffs)
    return _mu_unit_on_v_zero_at(v, q)


def _degree_entries(geo: _Geometry, anchor: np.ndarray, d: int,
                    include_overshears: bool, shrink: float = 1.0):
    """Adapted entries and their assembled coefficient matrix at degree d."""
    basis = tuple(multi_indices(geo.n, d))
    entries: List[_AdaptedEntry] = []
    cols: List[np.ndarray] = []
    for ld in _adapted_lam_datas(geo, anchor, shrink):
        for v in kernel_basis(ld.lam):
            entries.append(_AdaptedEntry(ld, v, "shear", None))
            cols.append(_field_column(ld, v, "shear", None, d, basis))
            if include_overshears:
                mu = _normalized_mu(ld, v, geo.q)
                if mu is not None:
                    entries.append(_AdaptedEntry(ld, v, "overshear", mu))
                    cols.append(_field_column(ld, v, "overshear", mu, d, basis))
    matrix = np.array(cols, dtype=complex).T if cols else np.zeros((geo.n * len(basis), 0))
    return entries, matrix, basis


def _select_columns(matrix: np.ndarray, want_rank: int):
    """Well-conditioned spanning subset of columns via pivoted QR."""
    if matrix.shape[1] == 0:
        return []
    _, R, piv = scipy.linalg.qr(matrix, pivoting=True, mode="economic")
    diag = np.abs(np.diag(R))
    rank = int(np.sum(diag > RANK_TOL * max(1.0, diag[0])))
    return list(piv[: min(rank, want_rank)])


# ---------------------------------------------------------------------------
# the main construction
# ---------------------------------------------------------------------------


def _line_clearance(hull: BallHull, p: np.ndarray, v: np.ndarray) -> float:
    """Distance from the hull center to the complex line p + C v."""
    x = p - hull.center
    nv = float(np.linalg.norm(v))
    if nv == 0:
        return float(np.linalg.norm(x))
    coef = np.vdot(v, x) / nv**2
    return float(np.linalg.norm(x - coef * v))


def _leg_form(geo: _Geometry, start: np.ndarray, v: np.ndarray) -> Optional[_LamData]:
    """Admissible form vanishing on v, pointing along the start direction."""
    x = start - geo.hull.center
    nv = float(np.linalg.norm(v))
    perp = x - (np.vdot(v, x) / nv**2) * v
    if float(np.linalg.norm(perp)) <= geo.hull.radius + geo.theta:
        return None
    lam = np.conj(perp)
    # exactness of lam(v): subtract the exact projection once more
    ld = geo.lam_data(lam, start)
    if ld is None:
        return None
    val = abs(complex(ld.lam(v)))
    if val > 1e-9 * ld.lam.norm() * nv:
        return None
    return ld


def _orthogonal_directions(x: np.ndarray, y: Optional[np.ndarray]) -> List[np.ndarray]:
    """Unit directions orthogonal (hermitian) to x, preferring those also
    orthogonal to y; a far waypoint along such a direction keeps the line
    from the foot of x clear of any ball the foot itself clears."""
    n = len(x)
    xh = x / np.linalg.norm(x)
    cands = []
    basis = [unit_vector(n, k) for k in range(n)]
    if y is not None and float(np.linalg.norm(y)) > 1e-9:
        yh = y / np.linalg.norm(y)
        for e in basis:
            w = e - np.vdot(xh, e) * xh - np.vdot(yh, e) * yh
            nw = float(np.linalg.norm(w))
            if nw > 0.2:
                cands.append(w / nw)
    for e in basis:
        w = e - np.vdot(xh, e) * xh
        nw = float(np.linalg.norm(w))
        if nw > 0.2:
            cands.append(w / nw)
    return cands


def _translation_legs(geo: _Geometry, p: np.ndarray, q: np.ndarray,
                      depth: int = 0) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Split p -> q into legs whose complex lines clear the ball."""
    c, R = geo.hull.center, geo.hull.radius
    if _line_clearance(geo.hull, p, q - p) > R + geo.theta:
        return [(p, q)]
    if depth >= 2:
        raise SmallnessUnachievable("no waypoint route clears the ball")
    rho = 4.0 * (R + float(np.linalg.norm(p - c)) + float(np.linalg.norm(q - c)) + 1.0)
    for t, w in enumerate(_orthogonal_directions(p - c, q - c)):
        r = c + rho * (1.0 + 0.5 * t) * w
        try:
            return (_translation_legs(geo, p, r, depth + 1)
                    + _translation_legs(geo, r, q, depth + 1))
        except SmallnessUnachievable:
            continue
    raise SmallnessUnachievable("no waypoint route clears the ball")


def realize_jet_at_point(p, q, P: JetMap, fixed, K: BallHull, eps: float,
                         volume_flag: bool, tol: float = 1e-9,
                         max_degree: int = DEFAULT_MAX_DEGREE,
                         seed: int = 0, samples: int = 256,
                         _verify: bool = True) -> Tuple[AutWord, RealizationReport]:
    """Word F with jet q + P(z-p) at p (order P.order), identity to order N
    at each fixed point, and |F - id| + |F^{-1} - id| <= eps sampled on the
    boundary of K.

    P must be anchored at the origin with zero base and nondegenerate linear
    part; p and q must lie strictly outside K.  Under volume_flag the
    truncated Jacobian of P must be 1 + O(degree m) and the word consists of
    shears only.
    """
    n = P.n
    p = as_point(p, n)
    q = as_point(q, n)
    m = P.order
    if np.max(np.abs(P.anchor)) > 0 or np.max(np.abs(P.base)) > 0:
        raise ValueError("target jet must be anchored at the origin with zero base")
    if not P.is_nondegenerate():
        raise DegenerateJet("target jet has singular linear part")
    clr_p, clr_q = K.clearance(p), K.clearance(q)
    if clr_p <= 0 or clr_q <= 0:
        raise ValueError("p and q must lie strictly outside the ball")
    if volume_flag:
        _check_volume_jet(P, tol)

    fixed = [(as_point(a, n), int(N)) for a, N in fixed]
    target = JetMap(p, q, m, {a: v.copy() for a, v in P.coeffs.items()})

    rng = np.random.default_rng(seed)
    identity = JetMap.identity(p, m, base=p)
    if (np.max(np.abs(p - q)) < 1e-14
            and jet_distance(target, identity, tol=np.inf) < 1e-13):
        word = AutWord((), volume_preserving=True)
        report = _verify_realization(word, target, fixed, K, eps, rng, samples,
                                     seed, tol, volume_flag)
        return word, report

    eps_eff = min(eps, 0.4 * clr_p, 0.4 * clr_q, 2.0)
    hull_plus = BallHull(K.center, K.radius + eps_eff)
    geo = _Geometry(n, q, hull_plus, fixed, m, max_degree)
    geo.theta = 0.3 * min(K.clearance(p), K.clearance(q)) - eps_eff * 0.3
    geo.theta = max(geo.theta, 0.1 * min(clr_p - eps_eff, clr_q - eps_eff))
    if geo.theta <= 0:
        raise SmallnessUnachievable(
            "p or q too close to the ball for the requested smallness")

    maps: List = []

    def current_jet() -> JetMap:
        if not maps:
            return JetMap.identity(p, m, base=p)
        return word_jet(AutWord(tuple(maps), False), p, m)

    # --- stage 1: translation ------------------------------------------
    budget_tr = eps_eff / 8.0
    if float(np.linalg.norm(q - p)) > 1e-14:
        legs = _translation_legs(geo, p, q)
        for start, end in legs:
            v = end - start
            ld = _leg_form(geo, start, v)
            if ld is None:
                raise SmallnessUnachievable(
                    "no admissible form for a translation leg")
            f = _gadget_function(ld, 0, 1.0, m,
                                 budget_tr / max(1.0, float(np.linalg.norm(v))),
                                 max_degree)
            maps.append(Shear(ld.lam, v, f))

    # --- stage 2: linear part -------------------------------------------
    cur = current_jet()
    B = target.linear_matrix() @ np.linalg.inv(cur.linear_matrix())
    plan = _plan_linear_factors(geo, B, volume_flag)
    budget_lin = eps_eff / 4.0
    count = max(1, len(plan))
    for kind, ld, v, mu, w in plan:
        share = budget_lin / count
        if kind == "shear":
            f = _gadget_function(ld, 1, w, m - 1,
                                 share / max(1.0, float(np.linalg.norm(v))),
                                 max_degree)
            maps.append(Shear(ld.lam, v, f))
        else:
            mu_sup = abs(complex(mu(geo.hull.center))) + geo.hull.radius * mu.norm()
            g_budget = math.log1p(share / max(1e-12, mu_sup * float(np.linalg.norm(v))))
            g = _gadget_function(ld, 0, w, m, g_budget, max_degree)
            maps.append(Overshear(ld.lam, mu, v, g))

    # --- stage 3: degree-by-degree corrections --------------------------
    # each sweep cancels degrees 2..m in order; composition cross terms and
    # solve residuals re-pollute higher degrees, so sweeps repeat until the
    # whole jet matches (quadratic-type convergence, 2-3 sweeps in practice)
    budget_deg = eps_eff / 4.0
    if m >= 2:
        jet_scale = max(1.0, max(float(np.max(np.abs(v))) for v in target.coeffs.values()))
        for sweep in range(4):
            cur = current_jet()
            if jet_distance(cur, target, tol=np.inf) < 1e-12 * jet_scale:
                break
            appended = False
            for d in range(2, m + 1):
                cur = current_jet()
                defect = compose_jets(invert_jet(cur), target, tol=1e-6)
                Ed = defect.degree_part(d)
                scale = max((float(np.max(np.abs(vec))) for vec in Ed.values()), default=0.0)
                if scale < 1e-13 * jet_scale:
                    continue
                gadgets = _solve_degree_round(geo, q, d, Ed, volume_flag)
                share = budget_deg * 2.0 ** (-sweep - 1) / ((m - 1) * max(1, len(gadgets)))
                appended = appended or bool(gadgets)
                for kind, ld, v, mu, w in gadgets:
                    if kind == "shear":
                        f = _gadget_function(ld, d, w, m - d,
                                             share / max(1.0, float(np.linalg.norm(v))),
                                             max_degree)
                        maps.append(Shear(ld.lam, v, f))
                    else:
                        mu_sup = abs(complex(mu(geo.hull.center))) + geo.hull.radius * mu.norm()
                        g_budget = math.log1p(share / max(1e-12, mu_sup * float(np.linalg.norm(v))))
                        g = _gadget_function(ld, d - 1, w, m - d, g_budget, max_degree)
                        maps.append(Overshear(ld.lam, mu, v, g))
            if not appended:
                break

    word = AutWord(tuple(maps), volume_preserving=volume_flag)
    if volume_flag and not word.check_volume_flag(tol):
        raise RealizationError("volume flag inconsistent with constructed word")
    report = _verify_realization(word, target, fixed, K, eps, rng, samples,
                                 seed, tol, volume_flag)
    if _verify and not report.passed(tol):
        raise RealizationError(
            f"constructed word failed verification: jet {report.jet_residual:.3e}, "
            f"fixed {[r for _, _, r in report.fixed_point_residuals]}, "
            f"sup {report.sup_pair:.3e} vs eps {eps}")
    return word, report


def _check_volume_jet(P: JetMap, tol: float):
    J = jacobian_det_jet(P)
    if abs(J.constant() - 1.0) >= tol:
        raise NotUnimodular(f"Jacobian constant {J.constant()} is not 1")
    for alpha, c in J.coeffs.items():
        if 0 < sum(alpha) < P.order and abs(c) >= tol:
            raise NotUnimodular(
                "Jacobian of target jet is not 1 + O(degree m): "
                f"coefficient {alpha} = {c}")


def _pick_frame(geo: _Geometry, lds: List[_LamData]) -> List[_LamData]:
    """n admissible forms whose row matrix is as well conditioned as the
    cone allows, chosen greedily by smallest singular value."""
    n = geo.n
    chosen = [lds[0]]
    while len(chosen) < n:
        best, best_s = None, -1.0
        for ld in lds:
            rows = np.array([c.lam.coeffs for c in chosen] + [ld.lam.coeffs])
            s = np.linalg.svd(rows, compute_uv=False)[-1]
            if s > best_s:
                best, best_s = ld, float(s)
        chosen.append(best)
    return chosen


def _clean_kernel_vector(lam: LinearForm, v: np.ndarray) -> np.ndarray:
    """Project the residual lambda-component out of v."""
    c = complex(lam(v)) / float(np.linalg.norm(lam.coeffs)) ** 2
    return v - c * np.conj(lam.coeffs)


def _plan_linear_factors(geo: _Geometry, B: np.ndarray, volume_flag: bool):
    """Ordered factor plan (kind, lamdata, v, mu, weight) whose product of
    exact linear actions reproduces B.

    An admissible frame of n forms conjugates the problem to coordinates in
    which every standard row-addition transvection pulls back to an
    admissible-form transvection, so a plain Gaussian reduction gives an
    exact finite factorization; one idempotent overshear carries the
    determinant when volume is not required."""
    n = geo.n
    det = complex(np.linalg.det(B))
    if volume_flag and abs(det - 1.0) > 1e-8:
        raise NotUnimodular(f"linear correction has det {det}, expected 1")

    lds = _adapted_lam_datas(geo, geo.q)
    if len(lds) < n:
        raise DictionaryDeficient("not enough admissible forms for a frame",
                                  residual=None)
    frame = _pick_frame(geo, lds)
    S = np.array([ld.lam.coeffs for ld in frame])
    smin = float(np.linalg.svd(S, compute_uv=False)[-1])
    if smin < 1e-7:
        raise DictionaryDeficient("admissible frame is numerically singular",
                                  residual=smin)
    Sinv = np.linalg.inv(S)

    plan: List[Tuple[str, _LamData, np.ndarray, Optional[LinearForm], complex]] = []
    B0 = B
    det_factor = None
    if not volume_flag and abs(det - 1.0) > 1e-13:
        # one idempotent overshear (v mu^T with mu(v) = 1, mu(q) = 0, so the
        # gadget fixes q) carries det B
        theta = complex(np.log(det))
        det_factor = None
        for ld in [frame[1], frame[0]] + lds:
            for v0 in kernel_basis(ld.lam):
                mu = _mu_unit_on_v_zero_at(v0, geo.q)
                if mu is not None:
                    det_factor = ("overshear", ld, v0, mu, theta)
                    break
            if det_factor is not None:
                break
        if det_factor is None:
            raise DictionaryDeficient(
                "no admissible determinant carrier at this geometry",
                residual=None)
        _, _, v0, mu, _ = det_factor
        Dinv = np.eye(n, dtype=complex) + (np.exp(-theta) - 1.0) * np.outer(v0, mu.coeffs)
        B0 = Dinv @ B

    remaining = B0
    for _ in range(2):  # one exact pass plus one float top-up
        if float(np.max(np.abs(remaining - np.eye(n)))) < 1e-14:
            break
        ops = _transvection_ops(S @ remaining @ Sinv)
        for (i, j, c) in reversed(ops):
            v = _clean_kernel_vector(frame[j].lam, Sinv[:, i].copy())
            nv = float(np.linalg.norm(v))
            plan.append(("shear", frame[j], v / nv, None, -c * nv))
        achieved = np.eye(n, dtype=complex)
        for _, ld, v, _, w in plan:
            achieved = (np.eye(n) + w * np.outer(v, ld.lam.coeffs)) @ achieved
        remaining = B0 @ np.linalg.inv(achieved)
    if det_factor is not None:
        plan.append(det_factor)
    return plan


def _solve_degree_round(geo: _Geometry, q: np.ndarray, d: int,
                        Ed: Dict, volume_flag: bool):
    """Weights over a pruned adapted dictionary cancelling the degree-d
    defect Ed (coefficients of (z-q)^alpha, exact dictionary fields)."""
    n = geo.n
    for shrink in (1.0, 0.6, 0.36):
        entries, matrix, basis = _degree_entries(geo, q, d, not volume_flag, shrink)
        if matrix.shape[1] == 0:
            continue
        target = np.zeros(n * len(basis), dtype=complex)
        for j, alpha in enumerate(basis):
            if alpha in Ed:
                target[j * n:(j + 1) * n] = Ed[alpha]
        keep = _select_columns(matrix, n * len(basis))
        sub = matrix[:, keep]
        weights, *_ = np.linalg.lstsq(sub, target, rcond=RANK_TOL)
        resid = float(np.max(np.abs(sub @ weights - target)))
        scale = max(1.0, float(np.max(np.abs(target))))
        if resid > 1e-10 * scale:
            continue
        out = []
        wmax = float(np.max(np.abs(weights)))
        for j, w in zip(keep, weights):
            if abs(w) > 1e-14 * max(1.0, wmax):
                e = entries[j]
                out.append((e.kind, e.ld, e.v, e.mu, complex(w)))
        return out
    raise DictionaryDeficient(
        f"adapted dictionary cannot represent the degree-{d} defect",
        residual=None)


def _verify_realization(word: AutWord, target: JetMap, fixed, K: BallHull,
                        eps: float, rng: np.random.Generator, samples: int,
                        seed: int, tol: float, volume_flag: bool) -> RealizationReport:
    m = target.order
    J = word_jet(word, target.anchor, m)
    jet_res = jet_distance(J, target, tol=np.inf)
    fp = []
    for a, N in fixed:
        if N <= 0:
            continue
        if N == 1:
            res = float(np.max(np.abs(apply_word(word, a) - a)))
        else:
            Ja = word_jet(word, a, N - 1)
            res = jet_distance(Ja, JetMap.identity(a, N - 1), tol=np.inf)
        fp.append(([complex(z) for z in a], N, res))
    pts = sphere_points(K, samples, rng)
    sup = sup_identity_deviation_pair(word, pts)
    return RealizationReport(
        jet_residual=jet_res,
        fixed_point_residuals=fp,
        sup_pair=sup,
        sample_count=samples,
        seed=seed,
        epsilon=eps,
        word_length=len(word),
        volume_preserving=word.volume_preserving,
    )
