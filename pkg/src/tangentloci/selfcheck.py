"""Invariant suite run by ``tangentloci selfcheck``.

Every check returns a measured value and the threshold it must stay below.
Thresholds are fixed; the working tolerance only enters through the library
calls.  A coarse tolerance such as 1e-2 is expected to fail exactly these:

* ``rank_threshold``: a singular value of 1e-3 no longer counts toward rank;
* ``thin_tetrahedron``: centers of relative thickness 3e-3 are taken as coplanar;
* ``basket_equivariance`` and ``duality_identity``: random quadrics with a
  small singular value are rejected as rank deficient;
* ``desargues_roundtrip`` and ``cone_pair_curves``: the line-meeting gate
  (1e3 times tol) can no longer separate one meeting point from a plane.
"""

import itertools
import warnings

import numpy as np

from . import baskets, fixtures, linegeom, spheres, symqr
from .config import TOL, TOL_CLUSTER
from .errors import TangentLociError


def _rank_threshold(rng, tol, tol_cluster):
    r = symqr.numeric_rank(np.diag([1.0, 1.0, 1e-3, 1e-14]), tol).rank
    return abs(r - 3), 0.5


def _twelve(rng, tol, tol_cluster):
    worst = 0.0
    for _ in range(5):
        sph = fixtures.generic_spheres(rng)
        res = spheres.solve(sph, int(rng.integers(2**31)), tol, tol_cluster)
        if res.complex_count != 12:
            return float(abs(res.complex_count - 12)), 0.5
        worst = max([worst] + [max(t.residuals) for t in res.tangents])
    return worst, 1e-7


def _thin(rng, tol, tol_cluster):
    sph = [spheres.Sphere((0, 0, 0), 0.7), spheres.Sphere((1, 0, 0), 0.6),
           spheres.Sphere((0, 1, 0), 0.65), spheres.Sphere((0.4, 0.45, 0.006), 0.5)]
    try:
        res = spheres.solve(sph, 0, tol, tol_cluster)
    except TangentLociError:
        return float("inf"), 1e-7
    if res.regime != "generic" or res.complex_count != 12:
        return float("inf"), 1e-7
    return max(max(t.residuals) for t in res.tangents), 1e-7


def _parallelogram(rng, tol, tol_cluster):
    worst = 0.0
    for _ in range(3):
        sph = fixtures.parallelogram_spheres(rng)
        res = spheres.solve(sph, 0, tol, tol_cluster)
        if res.complex_count + res.at_infinity != 12:
            return float("inf"), 1e-9
        cs = np.array([x.c for x in sph])
        o = cs.mean(0)
        target = spheres.parallelogram_foot(sph) - o
        basis, _ = np.linalg.qr((cs[:2] - o).T)
        for t in res.tangents:
            f = spheres.foot_point(t.p, t.v, o) - o
            worst = max(worst, float(np.linalg.norm(basis @ (basis.T @ f) - target)))
    return worst, 1e-9


def _cylinder(rng, tol, tol_cluster):
    sph = fixtures.collinear_spheres([0, 1, 2, 3], [1, 1, 1, 1], rng)
    rep = spheres.classify_collinear(sph, tol)
    if rep.names != ["Cylinder"]:
        return float("inf"), 1e-8
    c = rep.classes[0]
    err = max(abs(c.A), abs(c.B), abs(c.C - 1))
    return max(err, spheres.certify_samples(rep, sph)), 1e-8


def _det_identity(rng, tol, tol_cluster):
    worst = 0.0
    for _ in range(200):
        worst = max(worst, spheres.SphereCoords(rng.standard_normal(5)).det_identity_residual())
    return worst, 1e-12


def _basket_symmetry(rng, tol, tol_cluster):
    bad = 0
    for k in range(10):
        b, q = fixtures.basket_positive(rng, complex_=k % 2 == 1)
        x = baskets.is_basket_pair(b, q, tol) is not None
        y = baskets.is_basket_pair(q, b, tol) is not None
        bad += (not x) + (not y)
        b2, q2 = fixtures.random_symmetric(rng), fixtures.random_symmetric(rng)
        bad += (baskets.is_basket_pair(b2, q2, tol) is not None)
        bad += (baskets.is_basket_pair(q2, b2, tol) is not None)
    return float(bad), 0.5


def _basket_equivariance(rng, tol, tol_cluster):
    worst = 0.0
    for _ in range(5):
        b, q = fixtures.basket_positive(rng)
        a = rng.standard_normal((4, 4))
        w1 = baskets.is_basket_pair(b, q, tol)
        w2 = baskets.is_basket_pair(a.T @ b @ a, a.T @ q @ a, tol)
        if w1 is None or w2 is None:
            return float("inf"), 1e-8
        moved = symqr.ProjQuadric(a.T @ w1.d.m @ a)
        worst = max(worst, moved.distance(w2.d), abs(w1.residual - w2.residual))
    return worst, 1e-8


def _c1_fixture(rng, tol, tol_cluster):
    p, q = baskets.c1_marks(np.eye(3), [1, 1, 1], [1, 1, 1])
    return baskets.check_c1(*p, *q), 1e-12


def _desargues(rng, tol, tol_cluster):
    worst = 0.0
    for _ in range(5):
        b = fixtures.random_symmetric(rng)
        us = rng.standard_normal((3, 4))
        d = [np.outer(u, u) for u in us]
        q = [b + rng.uniform(0.3, 2) * x for x in d]
        w = baskets.desargues_basket(q, d, tol)
        worst = max(worst, w.basket.distance(symqr.ProjQuadric(b)), *w.residuals)
    return worst, 1e-9


def _c3(rng, tol, tol_cluster):
    ts = rng.uniform(-2, 2, 4)
    marks, contact = baskets.c3_marks(ts, rng.standard_normal(3))
    if len(contact) != 2:
        return float("inf"), 1e-9
    secant = baskets.check_c3(marks, A=contact[0], B=contact[1])
    t0 = float(rng.uniform(-1, 1))
    marks, contact = baskets.c3_marks(ts, np.array([t0 * t0, -2 * t0, 1.0]))
    tangent = baskets.check_c3(marks, T=contact[0])
    return max(secant, tangent), 1e-9


def _reye(rng, tol, tol_cluster):
    r = baskets.standard_double_four()
    _, _, ok = baskets.reye_incidence(r)
    witnesses = all(baskets.is_basket_pair(q, b, tol) is not None for q in r.q for b in r.b)
    return (0.0 if ok and witnesses else 1.0), 0.5


def _double_five(rng, tol, tol_cluster):
    _, _, rep = baskets.double_five(tol)
    if rep.count != 25:
        return float(25 - rep.count), 0.5
    return float(np.nanmax(rep.residuals)), 1e-9


def _trio(rng, tol, tol_cluster):
    a = rng.standard_normal((4, 4))
    p = symqr.Pencil(a.T @ np.diag([1.0, 1, 0, 0]) @ a, a.T @ np.diag([0.0, 1, 1, 0]) @ a)
    trio = baskets.trio_of_double_planes(p, tol, tol_cluster)
    worst = 0.0
    for e in np.eye(4)[:3]:
        target = symqr.ProjQuadric(a.T @ np.outer(e, e) @ a)
        worst = max(worst, min(target.distance(x) for x in trio))
    return worst, 1e-9


def _cone_curves(rng, tol, tol_cluster):
    curves = baskets.common_basket_curves(np.diag([1.0, 1, 1, 0]), np.diag([1.0, 4, 9, 0]), tol)
    if len(curves) != 3:
        return float(abs(len(curves) - 3)), 0.5
    worst = 0.0
    for c in curves:
        w = baskets.sample_basket(c, complex(rng.uniform(0.5, 2), rng.uniform(-1, 1)), tol)
        for q in (c.q1, c.q2):
            hit = baskets.is_basket_pair(w.basket, q, tol)
            worst = max(worst, float("inf") if hit is None else hit.residual)
    return worst, 1e-8


def _duality(rng, tol, tol_cluster):
    worst = 0.0
    for _ in range(50):
        q = fixtures.random_symmetric(rng, complex_=True)
        worst = max(worst, linegeom.duality_identity_residual(q, tol))
    return worst, 1e-10


def _orthogonality(rng, tol, tol_cluster):
    worst = 0.0
    for _ in range(50):
        q = fixtures.random_symmetric(rng, complex_=True)
        x, y = fixtures.tangent_line_to(q, rng)
        line = linegeom.plucker_from_points(x, y)
        perp = linegeom.plucker_orthogonal(line)
        worst = max(worst, linegeom.tangency_residual(perp, linegeom.dual_quadric(q, tol)))
    return worst, 1e-8


def _sixteen(rng, tol, tol_cluster):
    q1, q2 = np.diag([1.0, 1, 1, -1]), np.diag([1.0, 2, 3, -4])
    lines = linegeom.ruling_tangency_points(q1, q2, tol, tol_cluster)
    if len(lines) != 16:
        return float("inf"), 1e-8
    worst = max(max(linegeom.tangency_residual(x, q1), linegeom.tangency_residual(x, q2))
                for x in lines)
    sep = min(a.distance(b) for a, b in itertools.combinations(lines, 2))
    return (worst if sep > 1e-6 else float("inf")), 1e-8


def _grassmann(rng, tol, tol_cluster):
    x = linegeom.wedge(rng.standard_normal(4), rng.standard_normal(4))
    g = linegeom.G
    return max(float(np.abs(g @ g - np.eye(6)).max()),
               abs(linegeom.plucker_relation(x)) / np.linalg.norm(x) ** 2), 1e-12


CHECKS = [
    ("rank_threshold", _rank_threshold),
    ("twelve_tangents", _twelve),
    ("thin_tetrahedron", _thin),
    ("parallelogram_closed_form", _parallelogram),
    ("cylinder_class", _cylinder),
    ("sphere_det_identity", _det_identity),
    ("basket_symmetry", _basket_symmetry),
    ("basket_equivariance", _basket_equivariance),
    ("c1_fixture", _c1_fixture),
    ("desargues_roundtrip", _desargues),
    ("c3_relations", _c3),
    ("reye_incidence", _reye),
    ("double_five", _double_five),
    ("trio_of_double_planes", _trio),
    ("cone_pair_curves", _cone_curves),
    ("duality_identity", _duality),
    ("orthogonality_transfer", _orthogonality),
    ("sixteen_tangents", _sixteen),
    ("grassmann_quadric", _grassmann),
]


def run(seed: int = 0, tol: float = TOL, tol_cluster: float = TOL_CLUSTER, names=None):
    """List of {name, ok, value, threshold, error} dicts, in fixed order."""
    out = []
    for k, (name, fn) in enumerate(CHECKS):
        if names and name not in names:
            continue
        rng = np.random.default_rng([seed, k])
        err = None
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            try:
                value, threshold = fn(rng, tol, tol_cluster)
            except (TangentLociError, ValueError, np.linalg.LinAlgError) as exc:
                value, threshold, err = float("inf"), 0.0, f"{type(exc).__name__}: {exc}"
        value = float(value)
        out.append({"name": name, "ok": bool(np.isfinite(value) and value < threshold),
                    "value": value, "threshold": float(threshold), "error": err})
    return out
