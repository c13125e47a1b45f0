"""Baskets: quadrics touching along a conic, and the configurations they form.

A quadric b of rank at least three is a basket for q when the pencil [b, q]
holds a double plane.  Everything here reduces to that test, to linear
algebra in the space of quadrics, or to cross-ratios on a line.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .config import TOL, TOL_CLUSTER
from .errors import (ClusteredRoots, CoincidentVertices, DegenerateParameter,
                     Indeterminate, NoIntersection, NoSolution, NotFixedVertex,
                     NotInPerspective, PlaneThroughVertex, RankTooLow)
from .symqr import (FixedVertex, Pencil, ProjPoint1, ProjQuadric,
                    classify_singular_pencil, cross_ratio, factor_rank_one,
                    factor_rank_two, numeric_rank, pencil_meets_rank_one,
                    pencil_rank_drop_points, restrict_away_from)

# coplanarity gate for two lines in quadric space, relative to tol
_MEET_FACTOR = 1e3


def _q(x) -> ProjQuadric:
    return x if isinstance(x, ProjQuadric) else ProjQuadric(x)


def _unit(m: np.ndarray) -> np.ndarray:
    return m / np.linalg.norm(m)


def _vecs(ms) -> np.ndarray:
    """Columns are the isometric vectorizations of the given matrices."""
    return np.column_stack([_q(m).vec() for m in ms])


def _rank_one_residual(m) -> float:
    s = np.linalg.svd(np.asarray(m, dtype=complex), compute_uv=False)
    return float(s[1] / s[0])


def _null_vector(a: np.ndarray):
    """Smallest right singular vector with the gap sigma_min / sigma_max."""
    _, s, vh = np.linalg.svd(a)
    return vh[-1].conj(), float(s[-1] / s[0]), s


def _location(m, b: np.ndarray, q: np.ndarray) -> ProjPoint1:
    """(lam:mu) with m proportional to lam*b + mu*q."""
    a = np.column_stack([_q(b).vec(), _q(q).vec()])
    c = np.linalg.lstsq(a, _q(m).vec(), rcond=None)[0]
    return ProjPoint1(c[0], c[1])


def _subspace_distance(x: np.ndarray, basis: np.ndarray) -> float:
    """Sine of the angle between the vector x and the column span of basis."""
    qb, _ = np.linalg.qr(basis)
    x = x / np.linalg.norm(x)
    return float(np.linalg.norm(x - qb @ (qb.conj().T @ x)))


# ---------------------------------------------------------------------------
# pairs


@dataclass(frozen=True)
class PairWitness:
    location: ProjPoint1  # (lam:mu) on [b, q] in the raw generator scale
    d: ProjQuadric
    residual: float


@dataclass(frozen=True)
class BasketWitness:
    basket: ProjQuadric
    witnesses: list  # PairWitness per input quadric
    residuals: list = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "residuals", [w.residual for w in self.witnesses])

    def ok(self, tol: float = TOL) -> bool:
        return all(r < tol for r in self.residuals)


def _check_rank(x: ProjQuadric, tol: float, name: str) -> None:
    r = numeric_rank(x, tol).rank
    if r <= 2:
        raise RankTooLow(f"{name} has rank {r}; baskets need rank at least 3")


def is_basket_pair(b, q, tol: float = TOL, seed: int = 0):
    """Witness for b being a basket of q, or None.

    The pencil [b, q] is searched for a member with all 2x2 minors zero.
    """
    b, q = _q(b), _q(q)
    _check_rank(b, tol, "b")
    _check_rank(q, tol, "q")
    found = pencil_meets_rank_one(Pencil(b, q), tol, seed)
    if found is None:
        return None
    loc, d = found
    return PairWitness(loc, d.canonical(), _rank_one_residual(d.m))


def _witness(b: ProjQuadric, q: ProjQuadric, d: np.ndarray) -> PairWitness:
    return PairWitness(_location(d, b.m, q.m), ProjQuadric(d).canonical(),
                       _rank_one_residual(d))


@dataclass(frozen=True)
class BasketCurve:
    """A rational curve of common baskets for q1, q2.

    ``kind`` is "conic" for a rank-two anchor p = (u v^T + v u^T)/2, swept by
    the double planes (u + s v)^2 and (u - s v)^2, and "pencil" when the
    anchor is a double plane, in which case every member of [q1, q2] of rank
    at least three is a common basket.
    """

    q1: ProjQuadric
    q2: ProjQuadric
    anchor: ProjQuadric
    location: ProjPoint1
    kind: str
    factors: tuple = ()

    def double_planes(self, s):
        u, v = self.factors
        return np.outer(u + s * v, u + s * v), np.outer(u - s * v, u - s * v)


def common_basket_curves(q1, q2, tol: float = TOL, seed: int = 0):
    q1, q2 = _q(q1), _q(q2)
    a, b = q1.m, q2.m
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    found = pencil_rank_drop_points(a / na, b / nb, 3, tol, seed) or []
    curves = []
    for pt, mem, _ in found:
        loc = ProjPoint1(pt.z[0] / na, pt.z[1] / nb)
        anchor = ProjQuadric(mem)
        rank = numeric_rank(anchor, tol).rank
        if rank == 1:
            curves.append(BasketCurve(q1, q2, anchor, loc, "pencil",
                                      (factor_rank_one(anchor, tol),)))
        else:
            u, v = factor_rank_two(anchor, tol)
            curves.append(BasketCurve(q1, q2, anchor, loc, "conic", (u, v)))
    return curves


def _is_degenerate_s(s) -> bool:
    if s is None:
        return True
    s = complex(s)
    return s == 0 or not np.isfinite(abs(s))


def sample_basket(c: BasketCurve, s, tol: float = TOL) -> BasketWitness:
    if _is_degenerate_s(s):
        raise DegenerateParameter("s = 0 and s = infinity are the tangency points")
    s = complex(s)
    q1, q2 = _unit(c.q1.m), _unit(c.q2.m)
    if c.kind == "pencil":
        d = c.anchor.m
        bm = q1 + s * q2
        if numeric_rank(bm, tol).rank <= 2:
            raise DegenerateParameter(f"member at s={s} has rank at most two")
        b = ProjQuadric(bm)
        return BasketWitness(b, [_witness(b, c.q1, d), _witness(b, c.q2, d)])
    d1, d2 = c.double_planes(s)
    a = _vecs([q1, _unit(d1), -q2, -_unit(d2)])
    x, gap, sv = _null_vector(a)
    if gap > _MEET_FACTOR * tol or sv[-2] / sv[0] < _MEET_FACTOR * tol:
        raise NoIntersection(
            f"lines [q1,d1] and [q2,d2] do not meet in a single point (gap {gap:.2e})")
    bm = x[0] * q1 + x[1] * _unit(d1)
    if numeric_rank(bm, tol).rank <= 2:
        raise DegenerateParameter(f"the basket at s={s} has rank at most two")
    b = ProjQuadric(bm)
    return BasketWitness(b, [_witness(b, c.q1, d1), _witness(b, c.q2, d2)])


# ---------------------------------------------------------------------------
# triples


def trio_of_double_planes(p: Pencil, tol: float = TOL,
                          tol_cluster: float = TOL_CLUSTER, seed: int = 0):
    """The three double planes spanning a pencil of cones with a common vertex.

    On a complement of the vertex the pencil is a pair of ternary forms; the
    generalized eigenvectors diagonalize both at once, and the rows of the
    inverse eigenvector matrix are the three linear forms.
    """
    if not p.det_form.identically_zero:
        raise NotFixedVertex("the pencil has a nonsingular member")
    kind = classify_singular_pencil(p, tol, tol_cluster, seed)
    if not isinstance(kind, FixedVertex):
        raise NotFixedVertex(f"pencil is {type(kind).__name__}, not fixed-vertex")
    if len(kind.rank_two_points) != 3 or any(m != 1 for _, m in kind.rank_two_points):
        raise ClusteredRoots("the rank-two points of the pencil are not distinct")
    W, L = restrict_away_from(kind.vertex)
    a = W.T @ _unit(p.q1.m) @ W
    b = W.T @ _unit(p.q2.m) @ W
    rng = np.random.default_rng(seed)
    t = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    _, vecs = scipy.linalg.eig(a + t[0] * b, a + t[1] * b)
    rows = np.linalg.inv(vecs)
    out = []
    for r in rows:
        u = r @ L
        out.append(ProjQuadric(np.outer(u, u)).canonical())
    return tuple(out)


def _c1_ratios(p1, p2, p3, q1, q2, q3, tol):
    return (cross_ratio(p1, p2, p3, q1, tol), cross_ratio(p2, p3, p1, q2, tol),
            cross_ratio(p3, p1, p2, q3, tol))


def check_c1(p1, p2, p3, q1, q2, q3, tol: float = 1e-12) -> float:
    """Deviation of the three-cross-ratio relation from 3/2.

    With w_i = a_i b_i for the line a and centre b in the frame of the
    triangle, the ratios are w2/(w2+w3), w3/(w3+w1), w1/(w1+w2), so the sum
    is 3/2 only when two of the w_i agree.  See ``check_c1_product`` for the
    relation that holds for every centre.
    """
    return float(abs(sum(_c1_ratios(p1, p2, p3, q1, q2, q3, tol)) - 1.5))


def check_c1_product(p1, p2, p3, q1, q2, q3, tol: float = 1e-12) -> float:
    """Relative deviation of X1 X2 X3 = (1 - X1)(1 - X2)(1 - X3).

    This is the Ceva condition for the lines [q_i, d_i] to be concurrent.
    """
    x = _c1_ratios(p1, p2, p3, q1, q2, q3, tol)
    lhs = x[0] * x[1] * x[2]
    rhs = (1 - x[0]) * (1 - x[1]) * (1 - x[2])
    return float(abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)))


def line_chart(ell: np.ndarray):
    """A basis (e, f) of the plane points on the line ell . x = 0."""
    ell = np.asarray(ell, dtype=complex)
    _, _, vh = np.linalg.svd(ell[None, :])
    e, f = vh[1].conj(), vh[2].conj()
    return e, f


def point_on_line(x: np.ndarray, chart) -> ProjPoint1:
    e, f = chart
    c = np.linalg.lstsq(np.column_stack([e, f]), np.asarray(x, dtype=complex),
                        rcond=None)[0]
    return ProjPoint1(c[0], c[1])


def c1_marks(d, b, ell, chart=None):
    """(p, q) marks of the (c1) relation for a triangle d in a projective plane.

    Points are coordinate 3-vectors: p_i = ell meets [d_j, d_k] and
    q_i = ell meets [b, d_i].  Returned as points of ell in ``chart``.
    """
    d = [np.asarray(x, dtype=complex) for x in d]
    b = np.asarray(b, dtype=complex)
    ell = np.asarray(ell, dtype=complex)
    chart = chart or line_chart(ell)
    p = [np.cross(ell, np.cross(d[(i + 1) % 3], d[(i + 2) % 3])) for i in range(3)]
    q = [np.cross(ell, np.cross(b, d[i])) for i in range(3)]
    return [point_on_line(x, chart) for x in p], [point_on_line(x, chart) for x in q]


def desargues_basket(q, d, tol: float = TOL) -> BasketWitness:
    """Centre of perspectivity of the triangles (q_i) and (d_i) as a basket.

    Solves a_1 q_1 + c_1 d_1 = a_2 q_2 + c_2 d_2 = a_3 q_3 + c_3 d_3.
    """
    qs = [_q(x) for x in q]
    ds = [_q(x) for x in d]
    if len(qs) != 3 or len(ds) != 3:
        raise ValueError("need three quadrics and three double planes")
    for qi, di in zip(qs, ds):
        if qi.distance(di) < 1e-9:
            raise NotInPerspective("a line [q_i, d_i] is undefined since q_i = d_i")
    qm = [_unit(x.m) for x in qs]
    dm = [_unit(x.m) for x in ds]
    cols = [_vecs([m]).ravel() for m in qm + dm]
    z = np.zeros_like(cols[0])
    # rows: (line 1) - (line 2), (line 1) - (line 3)
    a = np.vstack([
        np.column_stack([cols[0], cols[3], -cols[1], -cols[4], z, z]),
        np.column_stack([cols[0], cols[3], z, z, -cols[2], -cols[5]]),
    ])
    x, gap, sv = _null_vector(a)
    if gap > _MEET_FACTOR * tol or sv[-2] / sv[0] < _MEET_FACTOR * tol:
        raise NotInPerspective(f"the lines [q_i, d_i] are not concurrent (gap {gap:.2e})")
    bm = x[0] * qm[0] + x[1] * dm[0]
    b = ProjQuadric(bm)
    return BasketWitness(b, [_witness(b, qi, di.m) for qi, di in zip(qs, ds)])


# ---------------------------------------------------------------------------
# triangles inscribed in the conic of squares


def _involution(c: np.ndarray) -> np.ndarray:
    """Mobius map t -> t' with d(t), d(t'), c collinear, d(t) = (1, t, t^2)."""
    return np.array([[c[1], -c[2]], [c[0], -c[1]]], dtype=complex)


def conic_point(t) -> np.ndarray:
    """(1, t, t^2), or (0, 0, 1) at infinity, in the basis u u^T, u v^T + v u^T, v v^T."""
    lam, mu = t.z if isinstance(t, ProjPoint1) else ProjPoint1.from_affine(t).z
    return np.array([mu ** 2, lam * mu, lam ** 2])


def _conic_basis(u, v) -> np.ndarray:
    u, v = np.asarray(u, dtype=complex), np.asarray(v, dtype=complex)
    return np.stack([np.outer(u, u), np.outer(u, v) + np.outer(v, u), np.outer(v, v)])


def _plane_coords(x, basis: np.ndarray) -> np.ndarray:
    x = np.asarray(x.m if isinstance(x, ProjQuadric) else x, dtype=complex)
    if x.ndim == 1:
        return x
    a = np.column_stack([m.ravel() for m in basis])
    return np.linalg.lstsq(a, x.ravel(), rcond=None)[0]


@dataclass(frozen=True)
class InscribedTriangle:
    params: tuple  # three ProjPoint1 on the conic
    vertices: tuple  # ProjQuadric double planes
    residual: float  # worst collinearity residual of an edge with its mark


def _collinearity(x, y, z) -> float:
    m = np.vstack([x / np.linalg.norm(x), y / np.linalg.norm(y), z / np.linalg.norm(z)])
    return float(abs(np.linalg.det(m)))


def inscribed_triangles(frame, marks, ell=None, tol: float = 1e-9,
                        tol_cluster: float = TOL_CLUSTER):
    """Triangles d_1 d_2 d_3 on the conic with p12, p23, p31 on the edges.

    ``frame`` is (u, v); marks and ell are coordinate 3-vectors in the basis
    (u u^T, u v^T + v u^T, v v^T), or marks may be symmetric matrices in the
    plane of that basis.  d_1 is a fixed point of the composite of the three
    involutions centred at the marks.
    """
    basis = _conic_basis(*frame)
    p12, p23, p31 = (_plane_coords(m, basis) for m in marks)
    for c in (p12, p23, p31):
        if abs(c[1] ** 2 - c[0] * c[2]) <= tol * np.linalg.norm(c) ** 2:
            raise NoSolution("a mark lies on the conic")
    if ell is None:
        ell = np.cross(p12, p23)
    ell = np.asarray(ell, dtype=complex)
    # points where ell meets the conic: ell0 + ell1 t + ell2 t^2 = 0
    contact = []
    for c in (p12, p23, p31):
        if abs(np.dot(ell, c)) > 1e-7 * np.linalg.norm(ell) * np.linalg.norm(c):
            raise NoSolution("the marks are not on the given line")
    disc = ell[1] ** 2 - 4 * ell[0] * ell[2]
    tangent = abs(disc) <= 1e-10 * max(np.abs(ell).max() ** 2, 1e-300)
    if abs(ell[2]) > 1e-14 * np.abs(ell).max():
        contact = [ProjPoint1(r, 1) for r in np.roots(ell[::-1])]
    else:
        contact = [ProjPoint1(1, 0)]
        if abs(ell[1]) > 1e-14 * np.abs(ell).max():
            contact.append(ProjPoint1(-ell[0] / ell[1], 1))
    m = _involution(p31) @ _involution(p23) @ _involution(p12)
    m = m / np.linalg.norm(m)
    if np.linalg.norm(m - m[0, 0] * np.eye(2)) < 1e-12:
        raise NoSolution("every point closes a triangle (porism); no isolated solutions")
    _, vecs = np.linalg.eig(m)
    cands = [ProjPoint1(vecs[:, k]) for k in range(2)]
    if cands[0].distance(cands[1]) < tol_cluster:
        cands = cands[:1]
    out = []
    for t1 in cands:
        if any(t1.distance(c) < 1e-6 for c in contact):
            continue
        t2 = ProjPoint1(_involution(p12) @ t1.z)
        t3 = ProjPoint1(_involution(p23) @ t2.z)
        ts = (t1, t2, t3)
        if min(x.distance(y) for x, y in itertools.combinations(ts, 2)) < 1e-6:
            continue
        pts = [conic_point(t) for t in ts]
        res = max(_collinearity(pts[0], pts[1], p12), _collinearity(pts[1], pts[2], p23),
                  _collinearity(pts[2], pts[0], p31))
        verts = tuple(ProjQuadric(np.einsum("i,ijk->jk", x, basis)).canonical()
                      for x in pts)
        out.append(InscribedTriangle(ts, verts, res))
    if not out:
        raise NoSolution("no admissible triangle")
    if tangent and len(out) > 1:
        out = out[:1]
    return out


# ---------------------------------------------------------------------------
# complete quadrilaterals


_PAIRS = list(itertools.combinations(range(4), 2))


@dataclass(frozen=True)
class CompleteQuadrilateral:
    """Four lines in a plane of quadric space and their six meeting points.

    ``vertices[(i, j)]`` is the meet of lines i and j.  For a quadrilateral
    cut from a tetrahedron of double planes it lies on the edge spanned by
    the two remaining double planes.
    """

    plane: tuple  # three ProjQuadric
    lines: tuple  # four pairs of ProjQuadric spanning each line
    vertices: dict  # (i, j) -> ProjQuadric
    ranks: dict  # (i, j) -> RankProfile
    classification: str

    def incidence(self, tol: float = 1e-8) -> np.ndarray:
        """4 x 6 membership of vertices on lines."""
        out = np.zeros((4, 6), dtype=bool)
        for i, (a, b) in enumerate(self.lines):
            basis = _vecs([a, b])
            for k, pair in enumerate(_PAIRS):
                x = self.vertices[pair].vec()
                out[i, k] = _subspace_distance(x, basis) < tol
        return out


def construct_typical_quadrilateral(d, plane, tol: float = TOL) -> CompleteQuadrilateral:
    """Trace of a plane on the faces of the tetrahedron of double planes d."""
    ds = [_q(x) for x in d]
    planes = [_q(x) for x in plane]
    dm = np.column_stack([_unit(x.m).ravel() for x in ds])
    if np.linalg.matrix_rank(dm, tol=1e-10 * np.linalg.norm(dm)) < 4:
        raise ValueError("the four double planes are linearly dependent")
    coeffs = []
    for x in planes:
        c, *_ = np.linalg.lstsq(dm, _unit(x.m).ravel(), rcond=None)
        if np.linalg.norm(dm @ c - _unit(x.m).ravel()) > 1e-8:
            raise ValueError("the plane is not inside the span of the double planes")
        coeffs.append(c)
    n, gap, sv = _null_vector(np.array(coeffs))
    if sv[-2] / sv[0] < 1e-10:
        raise ValueError("the three plane quadrics do not span a plane")
    n = n / np.abs(n).max()
    for i in range(4):
        if abs(n[i]) < 1e-8:
            raise PlaneThroughVertex(f"the plane contains d_{i + 1}")
    units = [_unit(x.m) for x in ds]
    vertices, ranks = {}, {}
    for i, j in _PAIRS:
        k, l = (x for x in range(4) if x not in (i, j))
        m = n[l] * units[k] - n[k] * units[l]
        vertices[(i, j)] = ProjQuadric(m)
        ranks[(i, j)] = numeric_rank(m, tol)
    lines = []
    for i in range(4):
        on = [p for p in _PAIRS if i in p]
        lines.append((vertices[on[0]], vertices[on[1]]))
    typical = all(r.rank == 2 for r in ranks.values())
    return CompleteQuadrilateral(tuple(planes), tuple(lines), vertices, ranks,
                                 "Typical" if typical else "Other")


def _common_kernel(ms, dim: int = 1) -> np.ndarray:
    stack = np.vstack([_unit(np.asarray(m)) for m in ms])
    _, s, vh = np.linalg.svd(stack)
    return vh[-dim:].conj(), s


def _tetrahedron_from_kernels(cq: CompleteQuadrilateral):
    vs = []
    for a, b in cq.lines:
        k, s = _common_kernel([a.m, b.m])
        if s[-2] / s[0] < 1e-8:
            raise CoincidentVertices("a line of the quadrilateral has a 2-dimensional vertex")
        vs.append(k[0])
    vmat = np.array([v / np.linalg.norm(v) for v in vs])
    s = np.linalg.svd(vmat, compute_uv=False)
    if s[-1] / s[0] < 1e-8:
        raise CoincidentVertices("the cone vertices are not in general position")
    out = []
    for i in range(4):
        others = np.array([vs[j] for j in range(4) if j != i])
        u, _ = _common_kernel([others])
        out.append(ProjQuadric(np.outer(u[0], u[0])).canonical())
    return out


def _tetrahedron_common_vertex(cq: CompleteQuadrilateral):
    # every cone shares one vertex w; work with conics on a complement of w
    ms = [m for line in cq.lines for m in (line[0].m, line[1].m)]
    k, s = _common_kernel(ms)
    if s[-2] / s[0] < 1e-8:
        raise CoincidentVertices("the quadrilateral has no single common vertex")
    W, L = restrict_away_from(k[0])
    # the vertex (i, j) has kernel orthogonal to the factors u_k, u_l
    kern = {}
    for pair, x in cq.vertices.items():
        c = W.T @ x.m @ W
        kv, _ = _common_kernel([c])
        kern[pair] = kv[0]
    out = []
    for i in range(4):
        rows = np.array([kern[p] for p in _PAIRS if i not in p])
        u, _ = _common_kernel([rows])
        full = u[0] @ L
        out.append(ProjQuadric(np.outer(full, full)).canonical())
    return out


def reconstruct_tetrahedron(cq: CompleteQuadrilateral):
    """Double planes d_1..d_4 whose faces cut out the quadrilateral.

    Each line is a pencil of cones; its vertex v_i lies on the three planes
    u_j, u_k, u_l, so u_i is the plane through the other three vertices.
    When all vertices coincide the same kernel argument runs on conics.
    """
    try:
        return _tetrahedron_from_kernels(cq)
    except CoincidentVertices:
        return _tetrahedron_common_vertex(cq)


# ---------------------------------------------------------------------------
# condition (c3)


def _pair(marks, i, j):
    return marks[(i, j)] if (i, j) in marks else marks[(j, i)]


def c3_marks(ts, ell, chart=None):
    """Marks p_ij = ell meets [d_k, d_l] for d_i = conic_point(ts[i]).

    Returns (marks, contact) with contact the points of ell on the conic,
    all as ProjPoint1 in ``chart``.
    """
    ell = np.asarray(ell, dtype=complex)
    chart = chart or line_chart(ell)
    d = [conic_point(t) for t in ts]
    marks = {}
    for i, j in _PAIRS:
        k, l = (x for x in range(4) if x not in (i, j))
        marks[(i, j)] = point_on_line(np.cross(ell, np.cross(d[k], d[l])), chart)
    disc = ell[1] ** 2 - 4 * ell[0] * ell[2]
    if abs(ell[2]) > 1e-14 * np.abs(ell).max():
        roots = np.roots(ell[::-1])
        if abs(disc) <= 1e-12 * np.abs(ell).max() ** 2:
            roots = roots[:1]
        contact = [point_on_line(conic_point(r), chart) for r in roots]
    else:
        contact = [point_on_line(conic_point(None), chart)]
        if abs(ell[1]) > 1e-14 * np.abs(ell).max():
            contact.append(point_on_line(conic_point(-ell[0] / ell[1]), chart))
    return marks, contact


def _rel(x: complex, y: complex) -> float:
    if not (np.isfinite(abs(x)) and np.isfinite(abs(y))):
        return 0.0 if np.isinf(abs(x)) and np.isinf(abs(y)) else float("inf")
    return abs(x - y) / max(1.0, abs(x), abs(y))


def check_c3(marks, A=None, B=None, T=None, tol: float = 1e-12) -> float:
    """Worst relative deviation of the cross-ratio relations among six marks.

    ``marks`` maps index pairs (i, j), 0 <= i < j <= 3, to points of the
    line.  With secant points A and B the relation compares
    (A,B;p_jk,p_jl) and (A,B;p_ik,p_il); with a tangency point T it is the
    product relation eliminating the second contact point.
    """
    if (A is None) != (B is None) or (A is None) == (T is None):
        raise ValueError("give either both secant points A, B or a tangency point T")
    idx = range(4)
    worst = 0.0
    if T is not None:
        for p in marks.values():
            if T.distance(p) < 1e-9:
                raise Indeterminate("the tangency point coincides with a mark")
        for i, j, k, l in itertools.permutations(idx):
            pij, pkl = _pair(marks, i, j), _pair(marks, k, l)
            lhs = (cross_ratio(T, pkl, _pair(marks, l, j), _pair(marks, j, k), tol)
                   * cross_ratio(pkl, T, _pair(marks, l, i), _pair(marks, i, k), tol))
            rhs = (cross_ratio(T, pij, _pair(marks, j, l), _pair(marks, l, i), tol)
                   * cross_ratio(pij, T, _pair(marks, j, k), _pair(marks, k, i), tol))
            worst = max(worst, _rel(lhs, rhs))
        return float(worst)
    for i, j, k, l in itertools.permutations(idx):
        lhs = cross_ratio(A, B, _pair(marks, j, k), _pair(marks, j, l), tol)
        rhs = cross_ratio(A, B, _pair(marks, i, k), _pair(marks, i, l), tol)
        worst = max(worst, _rel(lhs, rhs))
    return float(worst)


# ---------------------------------------------------------------------------
# the double four and Reye's configuration


def _diag(*x) -> ProjQuadric:
    return ProjQuadric(np.diag(np.asarray(x, dtype=float)))


@dataclass
class ReyeConfiguration:
    q: list
    b: list
    d: list
    points: list  # (label, ProjQuadric)
    lines: list  # (label, (ProjQuadric, ProjQuadric))
    incidence: np.ndarray  # points x lines

    def transformed(self, a) -> "ReyeConfiguration":
        """Pull every quadric back along x -> A x."""
        a = np.asarray(a, dtype=complex)

        def pull(x):
            return ProjQuadric(a.T @ x.m @ a)

        return ReyeConfiguration(
            [pull(x) for x in self.q], [pull(x) for x in self.b], [pull(x) for x in self.d],
            [(lab, pull(x)) for lab, x in self.points],
            [(lab, (pull(x), pull(y))) for lab, (x, y) in self.lines],
            self.incidence.copy())


def _meet_planes(p: list, q: list) -> tuple:
    """Two quadrics spanning the intersection of span(p) and span(q)."""
    a = np.column_stack([_vecs(p), -_vecs(q)])
    _, s, vh = np.linalg.svd(a)
    null = vh[-2:].conj()
    n = len(p)
    out = []
    for x in null:
        m = sum(c * _unit(y.m) for c, y in zip(x[:n], p))
        out.append(ProjQuadric(m))
    return tuple(out)


def _incidence(points, lines, tol: float) -> np.ndarray:
    inc = np.zeros((len(points), len(lines)), dtype=bool)
    bases = [_vecs(pair) for _, pair in lines]
    for i, (_, x) in enumerate(points):
        v = x.vec()
        for j, basis in enumerate(bases):
            inc[i, j] = _subspace_distance(v, basis) < tol
    return inc


def standard_double_four(tol: float = 1e-8) -> ReyeConfiguration:
    """The diagonal model: q_i = sum x_j^2 - 2 x_i^2, d_i = x_i^2.

    The b-tetrad is sum x_j^2 and sum x_j^2 - 2 (x_1^2 + x_a^2), a = 2, 3, 4.
    Point p_ij(+/-) is x_k^2 +/- x_l^2 with {k, l} complementary to {i, j};
    line (i, a) is the meet of the q-face opposite q_i with the b-face
    opposite b^a.
    """
    eye = np.eye(4)
    q = [ProjQuadric(eye - 2 * np.diag(e)) for e in eye]
    b = [_diag(1, 1, 1, 1), _diag(-1, -1, 1, 1), _diag(-1, 1, -1, 1), _diag(-1, 1, 1, -1)]
    d = [ProjQuadric(np.diag(e)) for e in eye]
    points = []
    for i, j in _PAIRS:
        k, l = (x for x in range(4) if x not in (i, j))
        for sgn, tag in ((1, "+"), (-1, "-")):
            points.append((f"p{i + 1}{j + 1}{tag}", ProjQuadric(np.diag(eye[k] + sgn * eye[l]))))
    lines = []
    for i in range(4):
        qf = [q[j] for j in range(4) if j != i]
        for a in range(4):
            bf = [b[j] for j in range(4) if j != a]
            lines.append((f"l{i + 1}^{a + 1}", _meet_planes(qf, bf)))
    return ReyeConfiguration(q, b, d, points, lines, _incidence(points, lines, tol))


def reye_incidence(r: ReyeConfiguration, tol: float = 1e-8):
    inc = _incidence(r.points, r.lines, tol)
    pdeg = [int(x) for x in inc.sum(axis=1)]
    ldeg = [int(x) for x in inc.sum(axis=0)]
    ok = (len(pdeg) == 12 and len(ldeg) == 16
          and all(x == 4 for x in pdeg) and all(x == 3 for x in ldeg))
    return pdeg, ldeg, ok


# ---------------------------------------------------------------------------
# the double five of conics


def _chart_conic(x: complex, z: float) -> np.ndarray:
    """The conic at (x, z) on the slice s11 + s22 = 2, with x = s11 - s22 over 2 plus i s12."""
    re, im = complex(x).real, complex(x).imag
    return np.array([[1 + re, im, 0], [im, 1 - re, 0], [0, 0, z]], dtype=float)


@dataclass(frozen=True)
class DoubleFiveReport:
    found: np.ndarray  # 5 x 5 bools, pencil [q_i, b_j] meets rank one
    residuals: np.ndarray  # sigma_2 / sigma_1 of the rank-one member, nan if absent
    count: int


def double_five_report(q, b, tol: float = TOL, seed: int = 0) -> DoubleFiveReport:
    found = np.zeros((len(q), len(b)), dtype=bool)
    res = np.full((len(q), len(b)), np.nan)
    for i, qi in enumerate(q):
        for j, bj in enumerate(b):
            hit = pencil_meets_rank_one(Pencil(qi, bj), tol, seed)
            if hit is not None:
                found[i, j] = True
                res[i, j] = _rank_one_residual(hit[1].m)
    return DoubleFiveReport(found, res, int(found.sum()))


def double_five(tol: float = TOL, seed: int = 0):
    """Two quintets of conics with every pencil [q_i, b_j] holding a double line.

    Chart: a symmetric 3x3 matrix with s11 + s22 = 2, s13 = s23 = 0 is the
    point ((s11 - s22)/2 + i s12, s33).  Double lines of the plane s33 = 0
    sit on the unit circle there.
    """
    omega = np.exp(2j * np.pi * np.arange(1, 4) / 3)
    qpts = [(0, -1)] + [(-2 * w, -1) for w in omega] + [(0, 1 / 3)]
    bpts = [(0, 1)] + [(-2 * w, 1) for w in omega] + [(0, -1 / 3)]
    q = [ProjQuadric(_chart_conic(*p)) for p in qpts]
    b = [ProjQuadric(_chart_conic(*p)) for p in bpts]
    return q, b, double_five_report(q, b, tol, seed)
