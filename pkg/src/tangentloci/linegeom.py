"""Lines of P3 in Plücker coordinates and their tangency to quadrics.

Plücker coordinates are ordered (x12, x13, x14, x23, x24, x34).  The second
compound ``nu(Q)`` of a quadric turns tangency into a quadratic condition:
a line x touches q exactly when x^T nu(Q) x = 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import kernels
from .config import TOL, TOL_CLUSTER
from .errors import (
    AtInfinity,
    CoincidentPoints,
    NonGeneric,
    NonGenericPair,
    NullDirection,
    Singular,
    SingularIntersection,
)
from .resultant import intersect_plane_curves
from .symqr import (
    BinaryForm,
    ProjQuadric,
    _random_unitary,
    binary_form_roots,
    canonical_phase,
    numeric_rank,
    projective_distance,
)

PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

# x^T G x = g(x) = 2(x12 x34 - x13 x24 + x14 x23)
G = np.zeros((6, 6))
G[0, 5] = G[5, 0] = 1.0
G[1, 4] = G[4, 1] = -1.0
G[2, 3] = G[3, 2] = 1.0
G.flags.writeable = False


def wedge(x1, x2) -> np.ndarray:
    """Plücker vector of x1 ^ x2; works on stacks of points."""
    x1 = np.asarray(x1, dtype=complex)
    x2 = np.asarray(x2, dtype=complex)
    return np.stack([x1[..., i] * x2[..., j] - x1[..., j] * x2[..., i]
                     for i, j in PAIRS], axis=-1)


def plucker_relation(x) -> complex:
    x = np.asarray(x, dtype=complex)
    return 2.0 * (x[0] * x[5] - x[1] * x[4] + x[2] * x[3])


class PluckerLine:
    """A line of P3 as a canonicalized point of the Plücker quadric."""

    __slots__ = ("x",)

    def __init__(self, x):
        x = canonical_phase(np.asarray(x, dtype=complex).ravel())
        if x.shape != (6,):
            raise ValueError("Plücker vectors have six components")
        x.flags.writeable = False
        self.x = x

    @property
    def relation_residual(self) -> float:
        return float(abs(plucker_relation(self.x)))

    def antisymmetric(self) -> np.ndarray:
        X = np.zeros((4, 4), dtype=complex)
        for k, (i, j) in enumerate(PAIRS):
            X[i, j] = self.x[k]
            X[j, i] = -self.x[k]
        return X

    def spanning_points(self):
        """Two points spanning the line (an orthonormal basis of it)."""
        U, _, _ = np.linalg.svd(self.antisymmetric())
        return U[:, 0], U[:, 1]

    def distance(self, other: "PluckerLine") -> float:
        return projective_distance(self.x, other.x)

    def __repr__(self) -> str:
        return f"PluckerLine({np.array2string(self.x, precision=4)})"


@dataclass(frozen=True)
class PVLine:
    """Affine line through the foot point p with direction v, <p, v> = 0."""

    p: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", np.asarray(self.p, dtype=complex))
        object.__setattr__(self, "v", np.asarray(self.v, dtype=complex))

    @classmethod
    def through(cls, point, direction) -> "PVLine":
        """Line through any point, moved to its foot point."""
        point = np.asarray(point, dtype=complex)
        v = np.asarray(direction, dtype=complex)
        return cls(point - v * (point @ v) / (v @ v), v)


@dataclass(frozen=True)
class TangencyQuadric:
    n: np.ndarray


def plucker_from_points(x1, x2) -> PluckerLine:
    x1 = np.asarray(x1, dtype=complex)
    x2 = np.asarray(x2, dtype=complex)
    x = wedge(x1, x2)
    if np.linalg.norm(x) <= 1e-12 * np.linalg.norm(x1) * np.linalg.norm(x2):
        raise CoincidentPoints("the two points do not span a line")
    return PluckerLine(x)


def pv_to_plucker(line: PVLine) -> PluckerLine:
    p = np.append(line.p, 1.0)
    v = np.append(line.v, 0.0)
    return plucker_from_points(p, v)


def plucker_to_pv(line, tol: float = 1e-12) -> PVLine:
    """Foot point and direction; the inverse of :func:`pv_to_plucker`."""
    x = line.x if isinstance(line, PluckerLine) else np.asarray(line, dtype=complex)
    v = -np.array([x[2], x[4], x[5]])
    if np.linalg.norm(v) <= tol * np.linalg.norm(x):
        raise AtInfinity("the line lies in the plane at infinity")
    w = v @ v
    if abs(w) <= tol * np.vdot(v, v).real:
        raise NullDirection("<v, v> = 0")
    m = np.array([x[3], -x[1], x[0]])  # p x v
    p = np.cross(v, m) / w
    return PVLine(p, v)


def nu(q) -> TangencyQuadric:
    """Second compound of Q: entries Q_ik Q_jl - Q_il Q_jk."""
    m = q.m if isinstance(q, ProjQuadric) else np.asarray(q, dtype=complex)
    return TangencyQuadric(kernels.compound2(m))


def tangency_residual(x, q) -> float:
    x = x.x if isinstance(x, PluckerLine) else np.asarray(x, dtype=complex)
    n = nu(q).n
    x = x / np.linalg.norm(x)
    return float(abs(x @ (n / np.linalg.norm(n)) @ x))


def is_tangent(line, q, tol: float = TOL):
    r = tangency_residual(line, q)
    return r < tol, r


def _null_bilinear(rows: np.ndarray) -> np.ndarray:
    """Basis (as columns) of {w : rows @ w = 0}."""
    _, s, vh = np.linalg.svd(rows)
    k = int(np.sum(s > 1e-12 * s[0]))
    return vh[k:].conj().T


def plucker_orthogonal(line: PluckerLine) -> PluckerLine:
    """The line {w : <w,u> = <w,v> = 0} for u, v spanning ``line``."""
    u, v = line.spanning_points()
    N = _null_bilinear(np.vstack([u, v]))
    return PluckerLine(wedge(N[:, 0], N[:, 1]))


def adjugate(m: np.ndarray) -> np.ndarray:
    """Transpose of the cofactor matrix, from (n-1)x(n-1) minors only."""
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    C = np.empty_like(m)
    for i, j in itertools.product(range(n), repeat=2):
        minor = np.delete(np.delete(m, i, 0), j, 1)
        C[i, j] = (-1) ** (i + j) * np.linalg.det(minor)
    return C.T


def dual_quadric(q, tol: float = TOL) -> ProjQuadric:
    q = ProjQuadric(q)
    if numeric_rank(q, tol).rank < q.n:
        raise Singular("the dual of a singular quadric is not a quadric of full rank")
    return ProjQuadric(adjugate(q.canonical().m))


def duality_identity_residual(q, tol: float = TOL) -> float:
    """Projective distance between nu(adj Q) and G nu(Q) G."""
    q = ProjQuadric(q)
    lhs = nu(dual_quadric(q, tol)).n
    rhs = G @ nu(q.canonical()).n @ G
    return projective_distance(lhs, rhs)


# ---------------------------------------------------------------------------
# rulings


def _standard_ruling_points(family: int):
    """Coefficient vectors (a1, b1, a2, b2): P1 = s a1 + t b1, P2 = s a2 + t b2.

    Both points lie on y1^2+y2^2+y3^2+y4^2 = 0 together with the line they span.
    """
    h = 0.5
    if family == 1:
        a1 = np.array([0, 0, h, -1j * h])
        b2 = np.array([0, 0, -h, -1j * h])
    else:
        a1 = np.array([0, 0, h, 1j * h])
        b2 = np.array([0, 0, -h, 1j * h])
    b1 = np.array([h, -1j * h, 0, 0])
    a2 = np.array([h, 1j * h, 0, 0])
    return a1, b1, a2, b2


def symmetric_normal_form(m: np.ndarray, seed: int = 0, max_cond: float = 1e8):
    """T with T^T M T = I for a nonsingular complex symmetric M.

    M is first rotated by a random unitary R, then reduced by unpivoted
    symmetric elimination M' = L D L^T; T = R L^-T D^-1/2 with principal
    square roots.  Badly conditioned attempts are retried with a new R.
    """
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    rng = np.random.default_rng(seed)
    for _ in range(8):
        R = _random_unitary(rng, n)
        A = R.T @ m @ R
        L = np.eye(n, dtype=complex)
        D = np.zeros(n, dtype=complex)
        work = A.copy()
        ok = True
        for k in range(n):
            D[k] = work[k, k]
            if abs(D[k]) < 1e-10 * np.abs(A).max():
                ok = False
                break
            L[k + 1:, k] = work[k + 1:, k] / D[k]
            work[k + 1:, k + 1:] -= np.outer(L[k + 1:, k], work[k, k + 1:])
        if not ok:
            continue
        T = R @ np.linalg.inv(L).T @ np.diag(1.0 / np.sqrt(D))
        if np.linalg.cond(T) <= max_cond:
            return T
    raise NonGeneric("no well-conditioned symmetric factorization found")


class Rulings:
    """The two families of lines on a smooth quadric."""

    def __init__(self, q, seed: int = 0, tol: float = TOL):
        q = ProjQuadric(q)
        if numeric_rank(q, tol).rank < 4:
            raise Singular("rulings need a smooth quadric")
        self.q = q.canonical()
        self.T = symmetric_normal_form(self.q.m, seed)

    def points(self, family: int, s, t=1.0):
        a1, b1, a2, b2 = _standard_ruling_points(family)
        return self.T @ (s * a1 + t * b1), self.T @ (s * a2 + t * b2)

    def plucker_quadratic(self, family: int):
        """(A, B, C) with Plücker(s, t) = s^2 A + s t B + t^2 C."""
        a1, b1, a2, b2 = (self.T @ w for w in _standard_ruling_points(family))
        A = wedge(a1, a2)
        B = wedge(a1, b2) + wedge(b1, a2)
        C = wedge(b1, b2)
        return A, B, C

    def line(self, family: int, t) -> PluckerLine:
        s, t = (0.0, 1.0) if np.isinf(t) else (t, 1.0)
        return plucker_from_points(*self.points(family, s, t))

    def __call__(self, family: int, t) -> PluckerLine:
        return self.line(family, t)


def rulings(q, seed: int = 0, tol: float = TOL) -> Rulings:
    return Rulings(q, seed, tol)


def ruling_tangency_points(q1, q2, tol: float = TOL,
                           tol_cluster: float = TOL_CLUSTER, seed: int = 0):
    """The 16 lines on q1 or q2 that are tangent to the other quadric."""
    q1 = ProjQuadric(q1)
    q2 = ProjQuadric(q2)
    out = []
    for qa, qb in ((q1, q2), (q2, q1)):
        rul = Rulings(qa, seed, tol)
        n = nu(qb.canonical()).n
        n = n / np.linalg.norm(n)
        for family in (1, 2):
            A, B, C = rul.plucker_quadratic(family)
            coeffs = np.array([A @ n @ A, 2 * A @ n @ B, B @ n @ B + 2 * A @ n @ C,
                               2 * B @ n @ C, C @ n @ C])
            scale = max(np.linalg.norm(A), np.linalg.norm(C)) ** 2
            if np.abs(coeffs).max() < 1e-12 * scale:
                raise NonGenericPair("every line of the ruling is tangent")
            roots = binary_form_roots(BinaryForm(4, coeffs), tol_cluster, seed, ring=False)
            if len(roots) != 4:
                raise NonGenericPair("ruling tangency roots cluster")
            for pt, _ in roots:
                s, t = pt.z
                out.append(PluckerLine(s * s * A + s * t * B + t * t * C))
    return out


# ---------------------------------------------------------------------------
# tangents along the base curve of a pencil


def _tangent_line(x: np.ndarray, m1: np.ndarray, m2: np.ndarray):
    rows = np.vstack([m1 @ x, m2 @ x])
    _, s, vh = np.linalg.svd(rows)
    if s[1] < 1e-9 * s[0]:
        return None
    N = vh[2:].conj().T
    return PluckerLine(wedge(N[:, 0], N[:, 1]))


def intersection_curve_tangents(q1, q2, n: int = 20, seed: int = 0,
                                tol_cluster: float = TOL_CLUSTER,
                                max_failures: int = 50, return_points: bool = False):
    """Tangent lines to the curve q1 = q2 = 0 at ``n`` sampled points.

    Points come from random plane sections: the two conics in a plane meet
    in four points, found by the resultant root finder.
    """
    m1 = ProjQuadric(q1).canonical().m
    m2 = ProjQuadric(q2).canonical().m
    rng = np.random.default_rng(seed)
    lines, points = [], []
    failures = 0
    while len(lines) < n:
        P, _ = np.linalg.qr(rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3)))
        c1 = P.T @ m1 @ P
        c2 = P.T @ m2 @ P

        def f(w, c=c1):
            return np.einsum("...i,ij,...j->...", w, c, w)

        def g(w, c=c2):
            return np.einsum("...i,ij,...j->...", w, c, w)

        inter = intersect_plane_curves(f, g, 2, 2, seed=int(rng.integers(2**31)),
                                       tol_cluster=tol_cluster)
        pts = [w for w, mult in inter.points if mult == 1]
        # |a x b| is the sine of the angle between unit vectors a, b
        ok = len(pts) == 4 and all(
            np.linalg.norm(np.cross(a, b)) > tol_cluster
            for a, b in itertools.combinations(pts, 2))
        if ok:
            new = []
            for w in pts:
                x = P @ w
                line = _tangent_line(x, m1, m2)
                if line is None:
                    ok = False
                    break
                new.append((x, line))
            if ok:
                for x, line in new[: n - len(lines)]:
                    points.append(x)
                    lines.append(line)
                failures = 0
                continue
        failures += 1
        if failures >= max_failures:
            raise SingularIntersection("plane sections keep producing clustered points")
    return (lines, points) if return_points else lines
