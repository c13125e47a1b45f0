"""Complex symmetric matrices, pencils and binary forms.

Quadrics are stored as complex symmetric matrices up to scale.  A pencil is
the projective line ``lam*Q1 + mu*Q2`` and a point ``(lam:mu)`` of it is a
:class:`ProjPoint1`.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from .config import TOL, TOL_CLUSTER
from .errors import (
    DependentQuadrics,
    Indeterminate,
    NotSingularPencil,
    PencilInsideDeterminantal,
    RankMismatch,
)

# relative level below which det samples count as zero
_DET_ZERO = 1e-12
# coefficient noise assumed when sizing the cluster radius of a multiple root
_ROOT_NOISE = 1e-15


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.flags.writeable = False
    return a


def canonical_phase(a: np.ndarray) -> np.ndarray:
    """Scale ``a`` to unit norm with its largest entry real-positive.

    Ties between entries of (almost) equal modulus go to the first one.
    """
    a = np.asarray(a, dtype=complex)
    nrm = np.linalg.norm(a)
    if nrm == 0:
        raise ValueError("cannot normalize the zero vector")
    a = a / nrm
    flat = a.ravel()
    mags = np.abs(flat)
    k = int(np.argmax(mags >= mags.max() * (1 - 1e-9)))
    return a * (abs(flat[k]) / flat[k])


def projective_distance(a: np.ndarray, b: np.ndarray) -> float:
    """min over theta of ||a/|a| - exp(i theta) b/|b|||, evaluated directly."""
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    ip = np.vdot(b, a)
    phase = ip / abs(ip) if abs(ip) > 0 else 1.0
    return float(np.linalg.norm(a - phase * b))


class ProjQuadric:
    """A quadric up to scale, held as a symmetric complex matrix.

    Any square size is accepted; surfaces in P3 are 4x4 and plane conics 3x3.
    """

    __slots__ = ("m", "_ranks")

    def __init__(self, m):
        if isinstance(m, ProjQuadric):
            m = m.m
        m = np.asarray(m, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        m = 0.5 * (m + m.T)
        if not np.any(m):
            raise ValueError("the zero matrix is not a quadric")
        self.m = _frozen(m)
        self._ranks = {}

    @property
    def n(self) -> int:
        return self.m.shape[0]

    def canonical(self) -> "ProjQuadric":
        return ProjQuadric(canonical_phase(self.m))

    def vec(self) -> np.ndarray:
        """Upper triangle as a vector, off-diagonals weighted by sqrt(2).

        The weighting makes the map an isometry for the Frobenius norm.
        """
        iu = np.triu_indices(self.n)
        w = np.where(iu[0] == iu[1], 1.0, np.sqrt(2.0))
        return self.m[iu] * w

    @classmethod
    def from_vec(cls, x, n: int = 4) -> "ProjQuadric":
        iu = np.triu_indices(n)
        w = np.where(iu[0] == iu[1], 1.0, np.sqrt(2.0))
        m = np.zeros((n, n), dtype=complex)
        m[iu] = np.asarray(x) / w
        return cls(m + np.triu(m, 1).T)

    def distance(self, other: "ProjQuadric") -> float:
        return projective_distance(self.m, other.m)

    def rank_profile(self, tol: float = TOL) -> "RankProfile":
        if tol not in self._ranks:
            self._ranks[tol] = numeric_rank(self, tol)
        return self._ranks[tol]

    def __repr__(self) -> str:
        return f"ProjQuadric({np.array2string(self.m, precision=4)})"


@dataclass(frozen=True)
class RankProfile:
    rank: int
    singular_values: tuple
    tol_used: float

    @property
    def gap(self) -> float:
        """sigma_{rank+1}/sigma_1, the residual of the rank decision."""
        s = self.singular_values
        return s[self.rank] / s[0] if self.rank < len(s) else 0.0


def numeric_rank(q, tol: float = TOL) -> RankProfile:
    """Count singular values above ``tol`` times the largest one."""
    if not 0.0 < tol < 1.0:
        raise ValueError("tol must lie in (0, 1)")
    m = q.m if isinstance(q, ProjQuadric) else np.asarray(q, dtype=complex)
    s = np.linalg.svd(m, compute_uv=False)
    rank = int(np.sum(s > tol * s[0])) if s[0] > 0 else 0
    return RankProfile(rank, tuple(float(x) for x in s), tol)


class ProjPoint1:
    """A point (lam:mu) of P1, unit norm with real-positive leading entry."""

    __slots__ = ("z",)

    def __init__(self, lam, mu=None):
        z = np.asarray(lam if mu is None else (lam, mu), dtype=complex).ravel()
        if z.shape != (2,):
            raise ValueError("a point of P1 has two coordinates")
        nrm = np.linalg.norm(z)
        if nrm == 0 or not np.isfinite(nrm):
            raise ValueError("(0:0) is not a point of P1")
        z = z / nrm
        lead = z[0] if abs(z[0]) > 1e-13 else z[1]
        self.z = _frozen(z * (abs(lead) / lead))

    @classmethod
    def from_affine(cls, t) -> "ProjPoint1":
        if t is None or (isinstance(t, (int, float, complex)) and cmath.isinf(t)):
            return cls(1.0, 0.0)
        return cls(t, 1.0)

    def affine(self) -> complex:
        lam, mu = self.z
        if abs(mu) <= 1e-15 * abs(lam):
            return complex("inf")
        return complex(lam / mu)

    def distance(self, other: "ProjPoint1") -> float:
        """Chordal distance, |det[z, w]| for unit vectors."""
        return float(abs(self.z[0] * other.z[1] - self.z[1] * other.z[0]))

    def __iter__(self):
        return iter(self.z)

    def __repr__(self) -> str:
        lam, mu = self.z
        return f"ProjPoint1({lam:.6g} : {mu:.6g})"


@dataclass(frozen=True)
class BinaryForm:
    """sum_k coeffs[k] lam^(d-k) mu^k."""

    degree: int
    coeffs: np.ndarray
    identically_zero: bool = False

    def __post_init__(self):
        c = _frozen(self.coeffs)
        if c.shape != (self.degree + 1,):
            raise ValueError("a degree-d form has d+1 coefficients")
        object.__setattr__(self, "coeffs", c)
        if not self.identically_zero and not np.any(c):
            raise ValueError("all coefficients vanish; set identically_zero")

    def __call__(self, lam, mu=1.0):
        d = self.degree
        k = np.arange(d + 1)
        return np.sum(self.coeffs * np.power(lam, d - k) * np.power(mu, k))


# ---------------------------------------------------------------------------
# binary forms


def _random_unitary(rng: np.random.Generator, n: int = 2) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def substitution_matrix(degree: int, r: np.ndarray) -> np.ndarray:
    """Matrix S with S @ c = coefficients of f(r00 l + r01 m, r10 l + r11 m).

    Coefficients follow the BinaryForm convention (index k <-> l^(d-k) m^k).
    Column k is the substituted monomial, sampled at (1, w^j) for the
    (d+1)-th roots of unity w^j and interpolated by a discrete Fourier
    transform.
    """
    d = degree
    w = np.exp(2j * np.pi * np.arange(d + 1) / (d + 1))
    a = r[0, 0] + r[0, 1] * w
    b = r[1, 0] + r[1, 1] * w
    k = np.arange(d + 1)
    vals = a[:, None] ** (d - k) * b[:, None] ** k
    return np.fft.fft(vals, axis=0) / (d + 1)


def _cluster_radius(m: int, tol_cluster: float) -> float:
    return max(tol_cluster, 10.0 * _ROOT_NOISE ** (1.0 / m))


def _mean_point(pts: np.ndarray) -> np.ndarray:
    ref = pts[0]
    acc = np.zeros(2, dtype=complex)
    for p in pts:
        ip = np.vdot(p, ref)
        acc += p * (ip / abs(ip) if abs(ip) > 0 else 1.0)
    return acc / np.linalg.norm(acc)


def _chordal(p: np.ndarray, q: np.ndarray) -> float:
    return float(abs(p[0] * q[1] - p[1] * q[0]))


def cluster_projective(pts, tol_cluster: float = TOL_CLUSTER, ring: bool = True):
    """Group unit vectors of C^2 into (mean point, multiplicity) clusters.

    With ``ring`` set, m points lying within ``10*1e-15**(1/m)`` of their mean
    are merged, which is how far a multiplicity-m root typically splits under
    rounding of the coefficients.  Otherwise only ``tol_cluster`` is used.
    """
    pts = [np.asarray(p, dtype=complex) / np.linalg.norm(p) for p in pts]
    left = list(range(len(pts)))
    out = []
    while left:
        i = left[0]
        order = sorted(left, key=lambda j: _chordal(pts[i], pts[j]))
        chosen = [i]
        for m in range(len(order), 1, -1):
            grp = order[:m]
            centre = _mean_point(np.array([pts[j] for j in grp]))
            spread = max(_chordal(centre, pts[j]) for j in grp)
            radius = _cluster_radius(m, tol_cluster) if ring else tol_cluster
            if spread <= radius:
                chosen = grp
                break
        centre = _mean_point(np.array([pts[j] for j in chosen]))
        out.append((centre, len(chosen)))
        left = [j for j in left if j not in chosen]
    return out


def binary_form_roots(f: BinaryForm, tol_cluster: float = TOL_CLUSTER,
                      seed: int = 0, ring: bool = True):
    """Projective roots of a binary form with multiplicities.

    The form is rotated by a random unitary change of (lam, mu) so that its
    leading coefficient is large; the roots of the rotated (monic) polynomial
    are eigenvalues of its companion matrix.  Roots at infinity need no
    special handling because the rotation moves them into the finite chart.
    """
    if f.identically_zero:
        raise ValueError("the form vanishes identically")
    c = np.asarray(f.coeffs, dtype=complex)
    d = f.degree
    scale = np.linalg.norm(c)
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(12):
        r = _random_unitary(rng)
        g = substitution_matrix(d, r) @ c
        lead = abs(g[0]) / scale
        if best is None or lead > best[0]:
            best = (lead, r, g)
        if lead > 0.25 / np.sqrt(d + 1):
            break
    _, r, g = best
    monic = g[1:] / g[0]
    comp = np.zeros((d, d), dtype=complex)
    comp[0, :] = -monic
    comp[np.arange(1, d), np.arange(d - 1)] = 1.0
    ts = np.linalg.eigvals(comp) if d > 1 else np.array([-monic[0]])
    pts = [r @ np.array([t, 1.0]) for t in ts]
    return [(ProjPoint1(p), m) for p, m in cluster_projective(pts, tol_cluster, ring)]


def common_roots(forms: np.ndarray, rel_null: float = 1e-6, seed: int = 0):
    """Candidate common projective roots of several binary forms of one degree.

    ``forms`` has one row of coefficients per form.  The null space of the
    coefficient matrix is spanned by evaluation vectors (l^k, l^(k-1) m, ...)
    at the common roots; these are read off from the shift structure of that
    null space as generalized eigenvalues.  Candidates should be verified by
    the caller.  Returns None when every point is a common root.
    """
    F = np.atleast_2d(np.asarray(forms, dtype=complex))
    k = F.shape[1] - 1
    scale = np.abs(F).max() if F.size else 0.0
    if scale == 0.0:
        return None
    rng = np.random.default_rng(seed)
    r = _random_unitary(rng)
    Fr = F @ substitution_matrix(k, r).T
    _, s, vh = np.linalg.svd(Fr)
    s = np.concatenate([s, np.zeros(k + 1 - len(s))])
    nullity = int(np.sum(s <= rel_null * s[0]))
    if nullity == 0:
        return []
    if nullity > k:
        return None
    N = vh[k + 1 - nullity:].conj().T  # (k+1) x nullity
    N1, N2 = N[:-1], N[1:]
    a = N1.conj().T @ N2
    b = N1.conj().T @ N1
    w = scipy.linalg.eigvals(a, b, homogeneous_eigvals=True)
    alpha, beta = w
    out = []
    for al, be in zip(alpha, beta):
        # e(l, m) has e[j+1] = (m/l) e[j], so m/l = alpha/beta
        pt = r @ np.array([be, al])
        if np.linalg.norm(pt) > 0 and np.all(np.isfinite(pt)):
            out.append(ProjPoint1(pt))
    return out


# ---------------------------------------------------------------------------
# pencils


@dataclass(frozen=True)
class Pencil:
    q1: ProjQuadric
    q2: ProjQuadric
    det_form: BinaryForm = field(init=False, repr=False)

    def __post_init__(self):
        q1 = ProjQuadric(self.q1)
        q2 = ProjQuadric(self.q2)
        object.__setattr__(self, "q1", q1)
        object.__setattr__(self, "q2", q2)
        if q1.n != q2.n:
            raise ValueError("pencil members must have equal size")
        if q1.distance(q2) < 1e-9:
            raise DependentQuadrics("pencil generators are proportional")
        object.__setattr__(self, "det_form", pencil_det_form(q1, q2))

    def member(self, pt) -> ProjQuadric:
        lam, mu = pt.z if isinstance(pt, ProjPoint1) else pt
        return ProjQuadric(lam * self.q1.m + mu * self.q2.m)

    def members_matrix(self, lam, mu) -> np.ndarray:
        return lam * self.q1.m + mu * self.q2.m


def _fourier_samples(a: np.ndarray, b: np.ndarray, d: int):
    """Sample points (1, s*w^j) for j < d+1 with s balancing the two terms."""
    s = np.linalg.norm(a) / np.linalg.norm(b)
    w = np.exp(2j * np.pi * np.arange(d + 1) / (d + 1))
    return s, w


def _interpolate(values: np.ndarray, s: float, d: int) -> np.ndarray:
    # values[j] = sum_k c_k (s w^j)^k  ->  c_k s^k = mean_j values[j] w^(-jk)
    c = np.fft.fft(values, axis=0) / (d + 1)
    return c / (s ** np.arange(d + 1)).reshape((-1,) + (1,) * (c.ndim - 1))


def pencil_det_form(q1, q2) -> BinaryForm:
    """Coefficients of det(lam*Q1 + mu*Q2) by interpolation at roots of unity.

    A form of degree n cannot vanish at n+1 distinct points unless it is
    identically zero, so the samples decide that flag deterministically.
    """
    a = ProjQuadric(q1).m
    b = ProjQuadric(q2).m
    n = a.shape[0]
    s, w = _fourier_samples(a, b, n)
    mats = a[None] + (s * w)[:, None, None] * b[None]
    vals = np.linalg.det(mats)
    scale = max(np.linalg.norm(a), s * np.linalg.norm(b))
    if np.all(np.abs(vals) < _DET_ZERO * scale ** n):
        return BinaryForm(n, np.zeros(n + 1), identically_zero=True)
    return BinaryForm(n, _interpolate(vals, s, n))


def pencil_minor_forms(a: np.ndarray, b: np.ndarray, r: int) -> np.ndarray:
    """All r x r minors of lam*A + mu*B as rows of degree-r form coefficients."""
    n = a.shape[0]
    s, w = _fourier_samples(a, b, r)
    mats = a[None] + (s * w)[:, None, None] * b[None]
    combos = list(itertools.combinations(range(n), r))
    rows, cols = np.array(combos), np.array(combos)
    ri = rows[:, None, :, None]
    ci = cols[None, :, None, :]
    subs = mats[:, ri, ci]  # samples x nr x nc x r x r
    vals = np.linalg.det(subs).reshape(r + 1, -1)
    return _interpolate(vals, s, r).T


def pencil_rank_drop_points(a, b, r: int, tol: float = TOL, seed: int = 0):
    """Points of the pencil where the rank falls below ``r``.

    Returns a list of (ProjPoint1, member matrix, residual) with residual
    sigma_r / sigma_1 of the member, or None if the whole pencil qualifies.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    cand = common_roots(pencil_minor_forms(a, b, r), seed=seed)
    if cand is None:
        return None
    out = []
    # a multiple root splits symmetrically, so the cluster mean is accurate
    merged = [ProjPoint1(c) for c, _ in cluster_projective([p.z for p in cand], TOL_CLUSTER,
                                                          ring=False)] if cand else []
    for pt in merged:
        lam, mu = pt.z
        mem = lam * a + mu * b
        sv = np.linalg.svd(mem, compute_uv=False)
        resid = sv[r - 1] / sv[0]
        if resid < tol and all(pt.distance(o[0]) > 1e-6 for o in out):
            out.append((pt, mem, float(resid)))
    return out


def _unit_pair(p: Pencil):
    a = p.q1.m
    b = p.q2.m
    return a / np.linalg.norm(a), b / np.linalg.norm(b), np.linalg.norm(a), np.linalg.norm(b)


def _to_raw(pt, na: float, nb: float) -> ProjPoint1:
    # a member lam*A/na + mu*B/nb equals (lam/na)*A + (mu/nb)*B
    return ProjPoint1(pt[0] / na, pt[1] / nb)


def pencil_singular_points(p: Pencil, tol: float = TOL,
                           tol_cluster: float = TOL_CLUSTER):
    """Roots of the determinant form with the rank profile of each member.

    Roots are computed as generalized eigenvalues of the pair (QZ), which
    keeps multiple roots at semisimple points accurate to rounding; their
    multiplicities come from clustering and sum to the matrix size.
    """
    if p.det_form.identically_zero:
        raise PencilInsideDeterminantal(
            "det vanishes along the whole pencil; sample ranks instead")
    a, b, na, nb = _unit_pair(p)
    alpha, beta = scipy.linalg.eigvals(a, -b, homogeneous_eigvals=True)
    # beta*A + alpha*B is singular
    pts = [np.array([be, al]) for al, be in zip(alpha, beta)]
    out = []
    for centre, mult in cluster_projective(pts, tol_cluster):
        mem = centre[0] * a + centre[1] * b
        out.append((_to_raw(centre, na, nb), numeric_rank(mem, tol), mult))
    return out


def pencil_meets_rank_one(p: Pencil, tol: float = TOL, seed: int = 0):
    """The rank-one member of the pencil with its location, or None.

    Located as common roots of all 2x2 minors, which does not require the
    determinant form to be nonzero.
    """
    a, b, na, nb = _unit_pair(p)
    found = pencil_rank_drop_points(a, b, 2, tol, seed)
    if not found:
        return None
    pt, mem, _ = min(found, key=lambda item: item[2])
    return _to_raw(pt.z, na, nb), ProjQuadric(mem)


# ---------------------------------------------------------------------------
# factorizations


def _sign_canonical(u: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(u) >= np.abs(u).max() * (1 - 1e-9)))
    if u[k].real < 0 or (u[k].real == 0 and u[k].imag < 0):
        return -u
    return u


def factor_rank_one(q, tol: float = TOL) -> np.ndarray:
    """u with u u^T equal to the canonical form of ``q``."""
    q = ProjQuadric(q)
    prof = numeric_rank(q, tol)
    if prof.rank != 1:
        raise RankMismatch(f"expected rank 1, got {prof.rank}")
    m = q.canonical().m
    j = int(np.argmax(np.abs(np.diag(m))))
    u = m[:, j] / cmath.sqrt(m[j, j])
    return _sign_canonical(u)


def _balance_pair(u: np.ndarray, v: np.ndarray):
    # u v^T is invariant under u -> c u, v -> v / c
    c = np.sqrt(np.linalg.norm(v) / np.linalg.norm(u))
    u, v = u * c, v / c
    k = int(np.argmax(np.abs(u) >= np.abs(u).max() * (1 - 1e-9)))
    ph = abs(u[k]) / u[k]
    u, v = u * ph, v / ph
    pair = sorted([(u, v), (v, u)], key=lambda t: tuple(np.round(np.abs(t[0]), 9)))
    return pair[0]


def factor_binary_quadratic(B: np.ndarray):
    """(a, b) with B = (a b^T + b a^T)/2 for a nonsingular symmetric 2x2 B."""
    form = BinaryForm(2, np.array([B[0, 0], 2 * B[0, 1], B[1, 1]]))
    roots = binary_form_roots(form, ring=False)
    if len(roots) == 1:
        (r1, _), = roots
        r2 = r1
    else:
        (r1, _), (r2, _) = roots
    # linear forms vanishing at the two roots
    a = np.array([r1.z[1], -r1.z[0]])
    b = np.array([r2.z[1], -r2.z[0]])
    sym = 0.5 * (np.outer(a, b) + np.outer(b, a))
    i, j = np.unravel_index(np.argmax(np.abs(sym)), sym.shape)
    kappa = B[i, j] / sym[i, j]
    root = cmath.sqrt(kappa)
    return a * root, b * root


def factor_rank_two(q, tol: float = TOL):
    """Unordered pair (u, v) with canonical q = (u v^T + v u^T)/2.

    The form is restricted to its 2-dimensional column space, where it is a
    binary quadratic, and split there into two linear factors.
    """
    q = ProjQuadric(q)
    prof = numeric_rank(q, tol)
    if prof.rank != 2:
        raise RankMismatch(f"expected rank 2, got {prof.rank}")
    m = q.canonical().m
    U, _, _ = np.linalg.svd(m)
    U2 = U[:, :2]
    B = U2.conj().T @ m @ U2.conj()
    B = 0.5 * (B + B.T)
    a, b = factor_binary_quadratic(B)
    u = U2 @ a
    v = U2 @ b
    return _balance_pair(u, v)


# ---------------------------------------------------------------------------
# singular pencils


@dataclass(frozen=True)
class FixedVertex:
    """All members are cones with one common vertex."""

    vertex: np.ndarray
    rank_two_points: list  # (ProjPoint1, multiplicity), multiplicities sum to 3


@dataclass(frozen=True)
class MovingVertex:
    """Members are cones whose vertex moves along a line."""

    axis: tuple
    rank_two_points: list


@dataclass(frozen=True)
class InRankTwo:
    """Every member has rank at most two.

    ``family`` is "M27" when the pencil holds no double-plane, "F26" with two
    and "T5" with one (tangent to the Veronese locus).
    """

    family: str
    double_planes: list  # (ProjPoint1, ProjQuadric)


def _kernel_vector(m: np.ndarray) -> np.ndarray:
    _, _, vh = np.linalg.svd(m)
    return vh[-1].conj()


def restrict_away_from(vertex: np.ndarray):
    """Rows L (n-1 x n) with x = W L x + c*vertex for a complementary basis W.

    Returns (W, L).  For a form Q with Q vertex = 0, x^T Q x = (Lx)^T W^T Q W (Lx).
    """
    v = np.asarray(vertex, dtype=complex)
    n = len(v)
    _, _, vh = np.linalg.svd(v.conj()[None, :])
    W = vh[1:].conj().T  # n x (n-1), Hermitian-orthogonal to v
    V = np.column_stack([W, v])
    L = np.linalg.inv(V)[: n - 1]
    return W, L


def classify_singular_pencil(p: Pencil, tol: float = TOL,
                             tol_cluster: float = TOL_CLUSTER, seed: int = 0):
    if not p.det_form.identically_zero:
        raise NotSingularPencil("the determinant form is not identically zero")
    a, b, na, nb = _unit_pair(p)
    rng = np.random.default_rng(seed)
    t1, t2 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    m1 = a + t1 * b
    m2 = a + t2 * b
    rank = numeric_rank(m1, tol).rank
    n = a.shape[0]
    if rank <= n - 2:
        found = pencil_rank_drop_points(a, b, 2, tol, seed) or []
        planes = [(_to_raw(pt.z, na, nb), ProjQuadric(mem)) for pt, mem, _ in found]
        family = {0: "M27", 1: "T5", 2: "F26"}.get(len(planes), "other")
        return InRankTwo(family, planes)
    k1 = _kernel_vector(m1)
    k2 = _kernel_vector(m2)
    if projective_distance(k1, k2) < 1e-6:
        W, _ = restrict_away_from(k1)
        sub = Pencil(W.T @ a @ W, W.T @ b @ W)
        if sub.det_form.identically_zero:
            pts = []
        else:
            pts = [(_to_raw(pt.z, na, nb), mult)
                   for pt, _, mult in pencil_singular_points(sub, tol, tol_cluster)]
        return FixedVertex(canonical_phase(k1), pts)
    found = pencil_rank_drop_points(a, b, n - 1, tol, seed) or []
    pts = [(_to_raw(pt.z, na, nb), 1) for pt, _, _ in found]
    return MovingVertex((canonical_phase(k1), canonical_phase(k2)), pts)


# ---------------------------------------------------------------------------
# cross-ratio


def _bracket(x: ProjPoint1, y: ProjPoint1) -> complex:
    return complex(x.z[0] * y.z[1] - x.z[1] * y.z[0])


def cross_ratio(a: ProjPoint1, b: ProjPoint1, u: ProjPoint1, v: ProjPoint1,
                tol: float = 1e-12) -> complex:
    """(a,b;u,v) = [a,u][b,v] / ([a,v][b,u]).

    In an affine chart this is (a-u)/(a-v) * (b-v)/(b-u).  A vanishing
    denominator gives complex infinity; 0/0 raises :class:`Indeterminate`.
    """
    num = _bracket(a, u) * _bracket(b, v)
    den = _bracket(a, v) * _bracket(b, u)
    num_zero = abs(num) <= tol
    den_zero = abs(den) <= tol
    if num_zero and den_zero:
        raise Indeterminate("cross-ratio of the form 0/0")
    if den_zero:
        return complex("inf")
    return num / den
