"""Common tangent lines to four spheres.

A sphere with center c and radius r is the quadric with coordinates
a = (1 : -c : <c,c> - r^2) in the four-dimensional family of spheres.  A line
is written as p + t v with foot point p (<p, v> = 0).  It touches the sphere
with center c and radius r exactly when

    <p - c, p - c> <v, v> - <p - c, v>^2 = r^2 <v, v>.

After translating the first center to the origin these conditions become
linear in p once v is fixed, which leaves two plane curves in v:

* affinely independent centers: a cubic and a quartic (12 solutions);
* coplanar centers: a conic and a sextic (12 solutions);
* collinear centers: every tangent configuration is a surface of
  revolution about the common axis, handled by :func:`classify_collinear`.

The meridian y^2 = A x^2 + B x + C of a ruled surface of revolution touches
the meridian circle (x - x_i)^2 + y^2 = r_i^2 of sphere i doubly iff

    (B - 2 x_i)^2 = 4 (A + 1)(C + x_i^2 - r_i^2),

which is linear in (u, A, B) with u = B^2 - 4 (A + 1) C:

    u + 4 A (r_i^2 - x_i^2) - 4 B x_i = -4 r_i^2.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .config import TOL, TOL_CLUSTER
from .errors import (
    BorderlineGeometry,
    CoincidentPoints,
    DefectiveCount,
    DuplicateCenters,
    FrameDegenerate,
    InputError,
    PerturbedSolution,
    RankTooLow,
    ThreeCollinear,
)
from .linegeom import PVLine, pv_to_plucker, tangency_residual
from .resultant import intersect_plane_curves
from .symqr import ProjQuadric, numeric_rank

BORDERLINE_LOW = 1e-9
BORDERLINE_HIGH = 1e-7
ACCEPT = 1e-7


@dataclass(frozen=True)
class Sphere:
    center: tuple
    radius: float

    def __post_init__(self):
        c = tuple(float(x) for x in np.asarray(self.center, dtype=float).ravel())
        if len(c) != 3 or not all(np.isfinite(c)):
            raise InputError("a sphere center has three finite coordinates")
        r = float(self.radius)
        if not (np.isfinite(r) and r > 0):
            raise InputError(f"radius must be positive, got {self.radius!r}")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", r)

    @property
    def c(self) -> np.ndarray:
        return np.array(self.center)


@dataclass(frozen=True)
class SphereCoords:
    """Projective coordinates (a0 : a1 : a2 : a3 : a4) of a sphere-quadric."""

    a: np.ndarray

    def matrix(self) -> np.ndarray:
        a = np.asarray(self.a, dtype=float)
        m = np.zeros((4, 4))
        m[:3, :3] = a[0] * np.eye(3)
        m[:3, 3] = m[3, :3] = a[1:4]
        m[3, 3] = a[4]
        return m

    def det_formula(self) -> float:
        a = np.asarray(self.a, dtype=float)
        return -a[0] ** 2 * (a[1] ** 2 + a[2] ** 2 + a[3] ** 2 - a[0] * a[4])

    def det_identity_residual(self) -> float:
        """Relative gap between det(Q) and -a0^2 (a1^2 + a2^2 + a3^2 - a0 a4)."""
        lhs = np.linalg.det(self.matrix())
        rhs = self.det_formula()
        scale = max(np.abs(self.a).max() ** 4, np.finfo(float).tiny)
        return float(abs(lhs - rhs) / scale)


T_POINT = np.array([0.0, 0.0, 0.0, 0.0, 1.0])


def sphere_coords(s: Sphere) -> SphereCoords:
    c = s.c
    return SphereCoords(np.concatenate([[1.0], -c, [c @ c - s.radius ** 2]]))


def sphere_to_quadric(s: Sphere):
    sc = sphere_coords(s)
    return sc, ProjQuadric(sc.matrix())


def as_spheres(spheres) -> list:
    out = []
    for s in spheres:
        if isinstance(s, Sphere):
            out.append(s)
        elif isinstance(s, dict):
            out.append(Sphere(s["center"], s["radius"]))
        else:
            c, r = s
            out.append(Sphere(c, r))
    return out


# ---------------------------------------------------------------------------
# regime detection


@dataclass(frozen=True)
class CenterGeometry:
    regime: str  # "generic" | "coplanar" | "collinear"
    singular_values: tuple  # of the centered 4x3 matrix, relative to the largest
    three_collinear: bool
    borderline: bool
    scale: float


def _check_distinct(spheres, tol: float):
    cs = np.array([s.c for s in spheres])
    spread = np.sqrt(np.mean(np.sum((cs - cs.mean(0)) ** 2, axis=1)))
    scale = max(spread, max(s.radius for s in spheres))
    for i in range(len(spheres)):
        for j in range(i + 1, len(spheres)):
            if np.linalg.norm(cs[i] - cs[j]) <= tol * scale:
                same = abs(spheres[i].radius - spheres[j].radius) <= tol * scale
                kind = "identical spheres" if same else "concentric spheres"
                raise DuplicateCenters(f"{kind} {i} and {j}")


def center_geometry(spheres, tol: float = TOL) -> CenterGeometry:
    spheres = as_spheres(spheres)
    if len(spheres) != 4:
        raise InputError("exactly four spheres are required")
    _check_distinct(spheres, tol)
    cs = np.array([s.c for s in spheres])
    centered = cs - cs.mean(0)
    sv = np.linalg.svd(centered, compute_uv=False)
    rel = sv / sv[0]
    if rel[1] <= tol:
        regime = "collinear"
    elif rel[2] <= tol:
        regime = "coplanar"
    else:
        regime = "generic"
    borderline = any(BORDERLINE_LOW < x < BORDERLINE_HIGH for x in rel[1:])
    three = False
    if regime == "coplanar":
        for drop in range(4):
            tri = np.delete(cs, drop, axis=0)
            s3 = np.linalg.svd(tri - tri.mean(0), compute_uv=False)
            if s3[1] <= tol * sv[0]:
                three = True
    scale = float(sv[0] / 2.0)
    return CenterGeometry(regime, tuple(float(x) for x in rel), three, borderline, scale)


# ---------------------------------------------------------------------------
# finite solvers


@dataclass
class TangentSolution:
    p: np.ndarray
    v: np.ndarray
    multiplicity: int
    is_real: bool
    residuals: tuple
    newton_residual: float = 0.0

    @property
    def line(self) -> PVLine:
        return PVLine(self.p, self.v)


def distance_to_line(center, p, v) -> float:
    """Euclidean distance from a point to the real line p + t v."""
    p = np.real(np.asarray(p))
    v = np.real(np.asarray(v))
    return float(np.linalg.norm(np.cross(np.asarray(center) - p, v)) / np.linalg.norm(v))


class _Frame:
    """Similarity x -> R (x - origin) / scale that normalizes a configuration."""

    def __init__(self, spheres, R=None, origin=None):
        cs = np.array([s.c for s in spheres])
        self.origin = cs[0] if origin is None else origin
        self.R = np.eye(3) if R is None else R
        d = cs - self.origin
        self.scale = float(np.max(np.linalg.norm(d, axis=1)))
        self.centers = d @ self.R.T / self.scale
        self.radii = np.array([s.radius for s in spheres]) / self.scale

    def to_world(self, p, v):
        pw = self.origin + self.scale * (self.R.T @ p)
        vw = self.R.T @ v
        return pw, vw


def _normalize_direction(v: np.ndarray) -> np.ndarray:
    v = v / np.linalg.norm(v)
    k = int(np.argmax(np.abs(v)))
    return v * (abs(v[k]) / v[k])


class TangentList(list):
    """Finite tangents; ``at_infinity`` counts intersection points on <v,v> = 0."""

    def __init__(self, items=(), at_infinity: int = 0):
        super().__init__(items)
        self.at_infinity = at_infinity


NEAR_NULL = 1e-4
# beyond this distance (in units of the configuration size) a line is
# numerically indistinguishable from a line at infinity
FAR_LIMIT = 1e6
NULL_DIRECTION = 1e-8


def _package(frame: _Frame, quads, p, v, m, r) -> TangentSolution:
    pw, vw = frame.to_world(p, v)
    vw = _normalize_direction(vw)
    line = PVLine.through(pw, vw)
    size = 1.0 + np.linalg.norm(line.p)
    is_real = bool(np.abs(vw.imag).max() < 1e-7
                   and np.abs(line.p.imag).max() < 1e-7 * size)
    if is_real:
        line = PVLine(line.p.real.astype(complex), vw.real.astype(complex))
        vw = line.v
    x = pv_to_plucker(line)
    resid = tuple(tangency_residual(x, q) for q in quads)
    return TangentSolution(line.p, vw, int(m), is_real, resid, float(r))


def _finish(frame: _Frame, spheres, candidates) -> TangentList:
    """Newton-refine candidates (p, v, mult, w) and package the finite ones.

    Candidates with <v,v> close to zero are limits of tangents escaping to
    infinity.  They are kept only when Newton converges from them to a
    new, moderately sized solution; otherwise they count as at infinity.
    """
    quads = [sphere_to_quadric(s)[1] for s in spheres]
    at_inf = sum(m for p, v, m, w in candidates if p is None)
    cand = [c for c in candidates if c[0] is not None]
    if not cand:
        return TangentList([], at_inf)
    P, V, res, _ = kernels.refine_tangents(np.array([c[0] for c in cand]),
                                            np.array([c[1] for c in cand]),
                                            frame.centers, frame.radii)
    sols, near = [], []
    for (p0, v0, m, w), p, v, r in zip(cand, P, V, res):
        if not (np.all(np.isfinite(p)) and np.all(np.isfinite(v))) or \
                np.linalg.norm(v) < 1e-12:
            at_inf += m  # Newton ran away: no finite solution near this start
            continue
        try:
            sol = _package(frame, quads, p, v, m, r)
        except CoincidentPoints:  # foot point so far out the line degenerates
            at_inf += m
            continue
        w_end = abs(v @ v) / np.vdot(v, v).real
        if min(abs(w), w_end) >= NEAR_NULL and np.linalg.norm(p) < FAR_LIMIT:
            sols.append(sol)
        else:
            near.append((sol, p, m, w_end))
    for sol, p, m, w_end in near:
        # a null final direction has no foot point: the (p, v) chart excludes it
        far = np.linalg.norm(sol.p - frame.origin) / frame.scale
        ok = (w_end >= NULL_DIRECTION
              and sol.newton_residual < 1e-10 * (1 + np.linalg.norm(p) ** 2)
              and max(sol.residuals) < ACCEPT
              and max(far, np.linalg.norm(p)) < FAR_LIMIT
              and not any(pv_to_plucker(sol.line).distance(pv_to_plucker(t.line)) < 1e-6
                          for t in sols))
        if ok:
            sols.append(sol)
        else:
            at_inf += m
    return TangentList(sols, at_inf)


def _phi0(centers: np.ndarray, radii: np.ndarray) -> np.ndarray:
    """|c_i|^2 + r_0^2 - r_i^2 for i = 1, 2, 3 (first center at the origin)."""
    c = centers[1:]
    return np.sum(c * c, axis=1) + radii[0] ** 2 - radii[1:] ** 2


def _count(solutions) -> int:
    return int(sum(s.multiplicity for s in solutions))


def _check_count(solutions, regime: str):
    n = _count(solutions) + solutions.at_infinity
    if n != 12:
        raise DefectiveCount(f"{regime} solver accounted for {n} of 12 tangents"
                             f" ({solutions.at_infinity} at infinity)",
                             result=solutions)
    return solutions


def common_tangents_generic(spheres, seed: int = 0, tol: float = TOL,
                            tol_cluster: float = TOL_CLUSTER):
    """The twelve complex common tangents for affinely independent centers."""
    spheres = as_spheres(spheres)
    frame = _Frame(spheres)
    C = frame.centers
    M = C[1:]
    Minv = np.linalg.inv(M)
    phi0 = _phi0(C, frame.radii)
    r0sq = frame.radii[0] ** 2

    def u_of(v):
        phi2 = -(v @ M.T) ** 2
        w = np.sum(v * v, axis=-1)
        return (phi2 + w[..., None] * phi0) @ Minv.T, w

    def cubic(v):
        u, _ = u_of(v)
        return np.sum(u * v, axis=-1)

    def quartic(v):
        u, w = u_of(v)
        return np.sum(u * u, axis=-1) - 4 * r0sq * w * w

    inter = intersect_plane_curves(cubic, quartic, 3, 4, seed=seed, tol_cluster=tol_cluster)
    cand = []
    for v, m in inter.points:
        u, w = u_of(v)
        cand.append((None if abs(w) < 1e-10 else u / (2 * w), v, m, w))
    return _check_count(_finish(frame, spheres, cand), "generic")


def _plane_frame(spheres):
    cs = np.array([s.c for s in spheres])
    _, _, vh = np.linalg.svd(cs[1:] - cs[0])
    R = vh.copy()
    if np.linalg.det(R) < 0:
        R[2] *= -1
    return R


def common_tangents_coplanar(spheres, seed: int = 0, tol: float = TOL,
                             tol_cluster: float = TOL_CLUSTER,
                             allow_three_collinear: bool = False):
    """Common tangents for coplanar centers: a conic and a sextic in v."""
    spheres = as_spheres(spheres)
    geo = center_geometry(spheres, tol)
    if geo.three_collinear and not allow_three_collinear:
        raise ThreeCollinear("three of the centers are collinear")
    frame = _Frame(spheres, R=_plane_frame(spheres))
    C = frame.centers.copy()
    C[:, 2] = 0.0
    M = C[1:, :2]
    phi0 = _phi0(C, frame.radii)
    r0sq = frame.radii[0] ** 2
    # the best conditioned pair of rows for the 2x2 solve
    pairs = [(0, 1), (0, 2), (1, 2)]
    i, j = max(pairs, key=lambda ij: abs(np.linalg.det(M[list(ij)])))
    B = np.linalg.inv(M[[i, j]])
    k = np.linalg.svd(M.T)[2][-1]  # k^T M = 0

    def parts(v):
        v12 = v[..., :2]
        phi2 = -(v12 @ M.T) ** 2
        w = np.sum(v * v, axis=-1)
        return phi2, w

    def conic(v):
        phi2, w = parts(v)
        return phi2 @ k + w * (phi0 @ k)

    def psi_of(v):
        phi2, w = parts(v)
        rhs = phi2[..., [i, j]] + w[..., None] * phi0[[i, j]]
        return rhs @ B.T, w

    def sextic(v):
        psi, w = psi_of(v)
        v12 = v[..., :2]
        v3 = v[..., 2]
        return (v3 ** 2 * np.sum(psi * psi, axis=-1) + np.sum(psi * v12, axis=-1) ** 2
                - 4 * w ** 2 * v3 ** 2 * r0sq)

    inter = intersect_plane_curves(conic, sextic, 2, 6, seed=seed, tol_cluster=tol_cluster)
    cand = []
    for v, m in inter.points:
        psi, w = psi_of(v)
        if abs(w) < 1e-10:
            cand.append((None, v, m, w))
            continue
        p12 = psi / (2 * w)
        if abs(v[2]) > 1e-8:
            cand.append((np.append(p12, -(p12 @ v[:2]) / v[2]), v, m, w))
        else:
            # direction parallel to the plane: p3 = +-sqrt(r0^2 - |p12|^2)
            h = np.sqrt(r0sq - p12 @ p12 + 0j)
            for sgn in (1, -1):
                cand.append((np.append(p12, sgn * h), v, max(m // 2, 1), w))
    return _check_count(_finish(frame, spheres, cand), "coplanar")


def foot_point(p, v, origin) -> np.ndarray:
    """Point of the line p + t v closest to ``origin`` (bilinear, so complex lines work)."""
    q = np.asarray(p) - np.asarray(origin)
    v = np.asarray(v)
    return np.asarray(origin) + q - v * (q @ v) / (v @ v)


def parallelogram_foot(spheres):
    """Closed form for p_12 when the centers are c0 = o+a, c1 = o+b, c2 = o-a, c3 = o-b.

    With the foot point p taken relative to the center o, subtracting the
    conditions for opposite spheres gives <a, p> = (r2^2 - r0^2)/4 and
    <b, p> = (r3^2 - r1^2)/4.  Returns o plus the in-plane component of p,
    which is the same for every common tangent.
    """
    spheres = as_spheres(spheres)
    cs = np.array([s.c for s in spheres])
    r2 = np.array([s.radius for s in spheres]) ** 2
    o = cs.mean(0)
    a = cs[0] - o
    b = cs[1] - o
    if np.linalg.norm(cs[2] - (o - a)) > 1e-9 * np.linalg.norm(a) or \
            np.linalg.norm(cs[3] - (o - b)) > 1e-9 * np.linalg.norm(b):
        raise InputError("centers are not a parallelogram in the order o+a, o+b, o-a, o-b")
    rhs = np.array([(r2[2] - r2[0]) / 4, (r2[3] - r2[1]) / 4])
    x = np.linalg.lstsq(np.vstack([a, b]), rhs, rcond=None)[0]
    return o + x


# ---------------------------------------------------------------------------
# collinear centers


@dataclass(frozen=True)
class CommonCircle:
    center_x: float
    rho: float
    name = "CommonCircle"


@dataclass(frozen=True)
class CommonPoint:
    x: float
    name = "CommonPoint"


@dataclass(frozen=True)
class Cylinder:
    A: float
    B: float
    C: float
    name = "Cylinder"


@dataclass(frozen=True)
class Cone:
    A: float
    B: float
    C: float
    name = "Cone"


@dataclass(frozen=True)
class Hyperboloid:
    A: float
    B: float
    C: float
    name = "Hyperboloid"


@dataclass(frozen=True)
class ComplexOnly:
    A: float
    B: float
    C: float
    name = "ComplexOnly"


RULED = (Cylinder, Cone, Hyperboloid)


@dataclass
class DegenerateReport:
    classes: list
    sample_tangents: list
    axis_point: np.ndarray
    axis_direction: np.ndarray
    abscissae: np.ndarray
    consistency: float
    notes: list = field(default_factory=list)

    @property
    def names(self) -> list:
        return [c.name for c in self.classes]


def _axis(spheres):
    cs = np.array([s.c for s in spheres])
    m = cs.mean(0)
    d = np.linalg.svd(cs - m)[2][0]
    d = d * np.sign(d[int(np.argmax(np.abs(d)))])
    o = m - (m @ d) * d
    e1 = np.linalg.svd(d[None, :])[2][1]
    e2 = np.cross(d, e1)
    return o, d, e1, e2, cs @ d


def _meridian_system(x, r):
    K = np.column_stack([np.ones_like(x), 4 * (r ** 2 - x ** 2), -4 * x])
    rhs = -4 * r ** 2
    return K, rhs


def _ruled_samples(cls, o, d, e1, e2, count: int):
    lines = []
    for phi in 2 * np.pi * np.arange(count) / count:
        c, s = np.cos(phi), np.sin(phi)
        if isinstance(cls, Cylinder):
            x0, rad, a = 0.0, np.sqrt(cls.C), 0.0
        else:
            a = np.sqrt(cls.A)
            x0 = -cls.B / (2 * cls.A)
            rad = np.sqrt(max(cls.C - cls.B ** 2 / (4 * cls.A), 0.0))
        point = o + x0 * d + rad * (c * e1 + s * e2)
        direction = d + a * (-s * e1 + c * e2)
        lines.append(PVLine.through(point, direction))
    return lines


def _circle_samples(x, rho, o, d, e1, e2, count: int):
    lines = []
    for phi in 2 * np.pi * np.arange(count) / count:
        c, s = np.cos(phi), np.sin(phi)
        point = o + x * d + rho * (c * e1 + s * e2)
        if rho > 0:
            direction = -s * e1 + c * e2
        else:
            direction = c * e1 + s * e2
        lines.append(PVLine.through(point, direction))
    return lines


def classify_collinear(spheres, tol: float = TOL, samples: int = 10) -> DegenerateReport:
    """Infinite families of real common tangents for collinear centers.

    Coordinates along the axis are x_i = <c_i, d> with d the unit axis
    direction oriented so its largest component is positive.
    """
    spheres = as_spheres(spheres)
    o, d, e1, e2, x = _axis(spheres)
    r = np.array([s.radius for s in spheres])
    scale = max(np.ptp(x), r.max())
    classes, notes, samples_out = [], [], []

    # common circle: all radical planes coincide
    xs = []
    for i in range(4):
        for j in range(i + 1, 4):
            xs.append(((x[i] ** 2 - x[j] ** 2) - (r[i] ** 2 - r[j] ** 2)) / (2 * (x[i] - x[j])))
    xs = np.array(xs)
    if np.ptp(xs) <= tol * scale:
        xstar = float(xs.mean())
        rho2 = float(np.mean(r ** 2 - (xstar - x) ** 2))
        if abs(rho2) <= tol * scale ** 2:
            classes.append(CommonPoint(xstar))
            samples_out += _circle_samples(xstar, 0.0, o, d, e1, e2, samples)
        elif rho2 > 0:
            rho = float(np.sqrt(rho2))
            classes.append(CommonCircle(xstar, rho))
            samples_out += _circle_samples(xstar, rho, o, d, e1, e2, samples)
        else:
            notes.append("radical planes coincide but the common circle is imaginary")

    # ruled surface of revolution touching every sphere along a circle
    K, rhs = _meridian_system(x, r)
    aug = np.column_stack([K, rhs])
    sa = np.linalg.svd(aug, compute_uv=False)
    sk = np.linalg.svd(K, compute_uv=False)
    consistency = float(sa[3] / sa[0])
    if sk[2] <= tol * sk[0]:
        notes.append("meridian system is rank deficient")
    elif consistency <= tol:
        u, A, B = np.linalg.lstsq(K, rhs, rcond=None)[0]
        if abs(A + 1) <= tol:
            notes.append("meridian is a circle: the basket would be a sphere")
        else:
            C = (B * B - u) / (4 * (A + 1))
            A, B, C = float(A), float(B), float(C)
            cls = _ruled_class(A, B, C, tol, scale)
            classes.append(cls)
            if isinstance(cls, RULED):
                samples_out += _ruled_samples(cls, o, d, e1, e2, samples)
    return DegenerateReport(classes, samples_out, o, d, x, consistency, notes)


def _ruled_class(A, B, C, tol, scale):
    if abs(A) <= tol:
        if abs(B) <= tol * scale and C > tol * scale ** 2:
            return Cylinder(0.0, 0.0, C)
        return ComplexOnly(A, B, C)
    if A < 0:
        return ComplexOnly(A, B, C)
    k = C - B * B / (4 * A)
    if abs(k) <= tol * scale ** 2:
        return Cone(A, B, C)
    if k > 0:
        return Hyperboloid(A, B, C)
    return ComplexOnly(A, B, C)


def certify_samples(report: DegenerateReport, spheres, tol: float = TOL) -> float:
    """Largest Euclidean tangency defect |dist(c_i, line) - r_i| / r_i over samples."""
    spheres = as_spheres(spheres)
    worst = 0.0
    for line in report.sample_tangents:
        for s in spheres:
            worst = max(worst, abs(distance_to_line(s.c, line.p, line.v) - s.radius) / s.radius)
    return worst


# ---------------------------------------------------------------------------
# dispatcher


@dataclass
class SolveResult:
    regime: str
    tangents: list
    degenerate: DegenerateReport | None
    seed: int
    tol: float
    tol_cluster: float
    warnings: list = field(default_factory=list)
    at_infinity: int = 0

    @property
    def complex_count(self) -> int:
        return _count(self.tangents)

    @property
    def real_count(self) -> int:
        return int(sum(s.multiplicity for s in self.tangents if s.is_real))


def _perturbed_tangents(spheres, seed, tol, tol_cluster):
    """Tangents of a slightly perturbed configuration, refined on the original."""
    rng = np.random.default_rng(seed)
    cs = np.array([s.c for s in spheres])
    scale = max(np.ptp(cs, axis=0).max(), 1e-300)
    moved = [Sphere(s.c + 1e-6 * scale * rng.standard_normal(3), s.radius) for s in spheres]
    try:
        sols = common_tangents_generic(moved, seed, tol, tol_cluster)
    except DefectiveCount as exc:
        sols = exc.result or []
    frame = _Frame(spheres)
    cand = [((s.p - frame.origin) / frame.scale, s.v, s.multiplicity, s.v @ s.v)
            for s in sols]
    refined = _finish(frame, spheres, cand)
    kept = []
    for s in refined:
        if max(s.residuals) < ACCEPT and not any(
                np.linalg.norm(s.p - t.p) + np.linalg.norm(s.v - t.v) < 1e-6 for t in kept):
            kept.append(s)
    return kept


def solve(spheres, seed: int = 0, tol: float = TOL, tol_cluster: float = TOL_CLUSTER):
    """Common tangent lines to four spheres in every regime."""
    spheres = as_spheres(spheres)
    warn = []
    try:
        geo = center_geometry(spheres, tol)
    except DuplicateCenters as exc:
        if "concentric" in str(exc):
            return SolveResult("concentric", [], None, seed, tol, tol_cluster,
                               [f"{exc}: no common tangents away from infinity"])
        raise
    if geo.borderline:
        msg = f"center geometry near a regime boundary (relative singular values {geo.singular_values})"
        warnings.warn(msg, BorderlineGeometry, stacklevel=2)
        warn.append(msg)
    if geo.regime == "collinear":
        report = classify_collinear(spheres, tol)
        tangents = []
        if not any(isinstance(c, RULED + (CommonCircle, CommonPoint)) for c in report.classes):
            tangents = [t for t in _perturbed_tangents(spheres, seed, tol, tol_cluster)]
            if tangents:
                msg = "isolated tangents found by perturbing the centers off the axis"
                warnings.warn(msg, PerturbedSolution, stacklevel=2)
                warn.append(msg)
        return SolveResult("collinear", tangents, report, seed, tol, tol_cluster, warn)
    if geo.regime == "coplanar":
        if geo.three_collinear:
            warn.append("three centers are collinear; solving with a nonsingular pair")
        sols = common_tangents_coplanar(spheres, seed, tol, tol_cluster,
                                        allow_three_collinear=True)
        if geo.borderline:
            warn.append(_cross_check(spheres, "coplanar", seed, tol, tol_cluster))
        return SolveResult("coplanar", sols, None, seed, tol, tol_cluster, warn,
                           sols.at_infinity)
    sols = common_tangents_generic(spheres, seed, tol, tol_cluster)
    if geo.borderline:
        warn.append(_cross_check(spheres, "generic", seed, tol, tol_cluster))
    return SolveResult("generic", sols, None, seed, tol, tol_cluster, warn,
                       sols.at_infinity)


def _cross_check(spheres, regime, seed, tol, tol_cluster) -> str:
    """Run the neighbouring finite solver and report its count."""
    try:
        if regime == "generic":
            alt = common_tangents_coplanar(spheres, seed, tol, tol_cluster,
                                           allow_three_collinear=True)
        else:
            alt = common_tangents_generic(spheres, seed, tol, tol_cluster)
        return f"cross-check: {_count(alt)} tangents in the neighbouring regime"
    except Exception as exc:  # diagnostic only
        return f"cross-check failed: {type(exc).__name__}"


# ---------------------------------------------------------------------------
# basket conditions inside the family of spheres


def basket_conditions_spheres(spheres, tol: float = TOL) -> dict:
    """Necessary conditions for a common basket of three or four spheres.

    Triples: T = (0:0:0:0:1) lies in the span of the sphere coordinates,
    cross-checked against collinearity of the centers.  Quadruples: in the
    frame (T, q1, q2) with q3 = a0 T + a1 q1 + a2 q2 and q4 = b0 T + b1 q1 + b2 q2
    the conic through T, q1..q4 tangent to {a0 = 0} at T exists iff
    a0 (1/a1 + 1/a2) = b0 (1/b1 + 1/b2).
    """
    spheres = as_spheres(spheres)
    n = len(spheres)
    if n not in (3, 4):
        raise InputError("basket conditions take three or four spheres")
    for s in spheres:
        if numeric_rank(sphere_to_quadric(s)[1], tol).rank < 3:
            raise RankTooLow("sphere quadric of rank below three")
    A = np.array([sphere_coords(s).a for s in spheres])
    cs = np.array([s.c for s in spheres])
    sv = np.linalg.svd(cs - cs.mean(0), compute_uv=False)
    collinear_residual = float(sv[1] / sv[0]) if sv[0] > 0 else 0.0
    report = {"n": n, "collinear_residual": collinear_residual,
              "centers_collinear": collinear_residual < tol}
    if n == 3:
        s = np.linalg.svd(np.vstack([A / np.linalg.norm(A, axis=1, keepdims=True),
                                     T_POINT]), compute_uv=False)
        span_res = float(s[3] / s[0])
        report["span_residual"] = span_res
        report["span_contains_T"] = span_res < tol
        report["consistent"] = report["span_contains_T"] == report["centers_collinear"]
        report["ok"] = report["span_contains_T"]
        return report
    for i, j in ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)):
        frame = np.column_stack([T_POINT, A[i], A[j]])
        s = np.linalg.svd(frame, compute_uv=False)
        if s[2] > 1e-9 * s[0]:
            break
    else:
        raise FrameDegenerate("no pair of spheres spans a plane with T")
    rest = [k for k in range(4) if k not in (i, j)]
    coeffs, plane_res = [], 0.0
    for k in rest:
        c, *_ = np.linalg.lstsq(frame, A[k], rcond=None)
        plane_res = max(plane_res, float(np.linalg.norm(frame @ c - A[k]) / np.linalg.norm(A[k])))
        coeffs.append(c)

    def side(c):
        return c[0] * (1 / c[1] + 1 / c[2])

    lhs, rhs = side(coeffs[0]), side(coeffs[1])
    conic_res = float(abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)))
    report.update(frame_pair=(i, j), plane_residual=plane_res, conic_residual=conic_res,
                  ok=bool(plane_res < tol and conic_res < tol))
    return report
