import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tangentloci import fixtures
from tangentloci.errors import DuplicateCenters, FrameDegenerate
from tangentloci.linegeom import plucker_from_points
from tangentloci.spheres import (Cone, Cylinder, Hyperboloid, CommonCircle, CommonPoint,
                                 ComplexOnly, Sphere, SphereCoords, basket_conditions_spheres,
                                 center_geometry, certify_samples, classify_collinear,
                                 common_tangents_coplanar, common_tangents_generic, foot_point,
                                 parallelogram_foot, solve, sphere_to_quadric)


def dist(c, p, v):
    """Distance from c to the line p + t v, straight from the cross product."""
    p, v = np.real(p), np.real(v)
    return np.linalg.norm(np.cross(c - p, v)) / np.linalg.norm(v)


def spheres_at(centers, radii):
    return [Sphere(c, r) for c, r in zip(centers, radii)]


def line_of(t):
    p, v = np.asarray(t.p), np.asarray(t.v)
    return plucker_from_points(np.append(p, 1), np.append(v, 0))


E = np.eye(3)
TETRA = [np.zeros(3), E[0], E[1], E[2]]


def test_sphere_coordinates():
    sc, q = sphere_to_quadric(Sphere((0, 0, 0), 1))
    assert np.allclose(sc.a, [1, 0, 0, 0, -1])
    assert abs(np.linalg.det(q.m / q.m[0, 0]) + 1) < 1e-12
    sc, _ = sphere_to_quadric(Sphere((1, 0, 0), 1))
    assert np.allclose(sc.a, [1, -1, 0, 0, 0])


def test_det_identity(rng):
    for _ in range(1000):
        s = Sphere(tuple(rng.uniform(-5, 5, 3)), float(rng.uniform(0.1, 5)))
        assert sphere_to_quadric(s)[0].det_identity_residual() < 1e-12
        assert SphereCoords(rng.standard_normal(5)).det_identity_residual() < 1e-12


def test_rejects_bad_radius():
    with pytest.raises(ValueError):
        Sphere((0, 0, 0), -1)


@pytest.mark.parametrize("centers, regime", [
    (TETRA, "generic"),
    ([np.zeros(3), E[0], E[1], E[0] + E[1]], "coplanar"),
    ([np.zeros(3), E[0], 2 * E[0], 3 * E[0]], "collinear"),
])
def test_center_geometry(centers, regime):
    assert center_geometry(spheres_at(centers, [0.5] * 4)).regime == regime


def test_duplicate_centers():
    s = spheres_at([np.zeros(3), np.zeros(3), E[1], E[2]], [1, 1, 1, 1])
    with pytest.raises(DuplicateCenters):
        center_geometry(s)
    s = spheres_at([np.zeros(3), np.zeros(3), E[1], E[2]], [1, 2, 1, 1])
    res = solve(s)
    assert res.regime == "concentric" and res.tangents == [] and res.warnings


def check_solutions(sph, sols, total=12):
    assert sum(t.multiplicity for t in sols) + getattr(sols, "at_infinity", 0) == total
    for t in sols:
        assert max(t.residuals) < 1e-7
        assert abs(np.dot(t.p, t.v)) < 1e-7 * max(1, np.linalg.norm(t.p))
        if t.is_real:
            for s in sph:
                assert abs(dist(s.c, t.p, t.v) - s.radius) < 1e-8


def test_tetrahedron_example():
    sph = spheres_at(TETRA, [0.4] * 4)
    sols = common_tangents_generic(sph)
    check_solutions(sph, sols)
    assert sum(t.multiplicity for t in sols if t.is_real) <= 12


def test_generic_ensemble(rng):
    for k in range(100):
        sph = fixtures.generic_spheres(rng)
        sols = common_tangents_generic(sph, seed=k)
        check_solutions(sph, sols)


def test_coplanar_ensemble(rng):
    for k in range(50):
        sph = fixtures.coplanar_spheres(rng)
        res = solve(sph, seed=k)
        assert res.regime == "coplanar"
        # a rare conjugate pair lies beyond the far-distance cutoff and is
        # counted at infinity, so the finite part alone may fall short of 12
        check_solutions(sph, res.tangents)
        assert res.complex_count + res.at_infinity == 12


def test_parallelogram_foot_points(rng):
    for _ in range(10):
        sph = fixtures.parallelogram_spheres(rng)
        sols = common_tangents_coplanar(sph)
        assert sum(t.multiplicity for t in sols) + sols.at_infinity == 12
        cs = np.array([s.c for s in sph])
        o = cs.mean(0)
        a, b = cs[0] - o, cs[1] - o
        r = [s.radius for s in sph]
        # <a,p> = (r3^2 - r1^2)/4, <b,p> = (r4^2 - r2^2)/4 for p the in-plane foot
        rhs = np.array([(r[2] ** 2 - r[0] ** 2) / 4, (r[3] ** 2 - r[1] ** 2) / 4])
        expected = o + np.linalg.lstsq(np.vstack([a, b]), rhs, rcond=None)[0]
        assert np.linalg.norm(parallelogram_foot(sph) - expected) < 1e-12
        basis, _ = np.linalg.qr(np.column_stack([a, b]))
        for t in sols:
            f = foot_point(t.p, t.v, o) - o
            inplane = basis @ (basis.T @ f)
            assert np.linalg.norm(inplane - (expected - o)) < 1e-9


def test_square_orbit():
    sph = spheres_at([E[0], E[1], -E[0], -E[1]], [0.8] * 4)
    sols = common_tangents_coplanar(sph)
    lines = [line_of(t) for t in sols]
    rot = np.array([[0, -1, 0], [1, 0, 0], [0, 0, 1.0]])
    for g in (rot, np.diag([1, 1, -1.0]), np.diag([-1, 1, 1.0])):
        for t in sols:
            image = line_of(type("L", (), {"p": g @ t.p, "v": g @ t.v})())
            assert min(image.distance(x) for x in lines) < 1e-8


def test_similarity_equivariance(rng):
    for k in range(10):
        sph = fixtures.generic_spheres(rng)
        q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        scale, shift = rng.uniform(0.5, 2), rng.standard_normal(3)
        moved = [Sphere(scale * q @ s.c + shift, scale * s.radius) for s in sph]
        a = solve(sph, seed=k).tangents
        b = [line_of(t) for t in solve(moved, seed=k + 1).tangents]
        for t in a:
            image = type("L", (), {"p": scale * q @ t.p + shift, "v": q @ t.v})()
            assert min(line_of(image).distance(x) for x in b) < 1e-6


def test_no_common_component_system(rng):
    # on the null conic v = (1 - s^2, i (1 + s^2), 2 s) the cubic and quartic
    # leading parts never vanish together for random real centers
    c = rng.uniform(-1, 1, (3, 3))
    minv = np.linalg.inv(c)
    grid = np.linspace(-3, 3, 121)
    s = (grid[:, None] + 1j * grid[None, :]).ravel()
    v = np.stack([1 - s ** 2, 1j * (1 + s ** 2), 2 * s], axis=1)
    v = v / np.linalg.norm(v, axis=1, keepdims=True)
    phi = -(v @ c.T) ** 2
    w = phi @ minv.T
    f = np.einsum("ij,ij->i", w, v)
    g = np.einsum("ij,ij->i", w, w)
    assert np.min(np.abs(f) + np.abs(g)) > 1e-6


def test_cylinder():
    sph = fixtures.collinear_spheres([0, 1, 2, 3], [1, 1, 1, 1])
    rep = classify_collinear(sph)
    assert rep.names == ["Cylinder"]
    c = rep.classes[0]
    assert np.allclose([c.A, c.B, c.C], [0, 0, 1], atol=1e-12)
    assert len(rep.sample_tangents) >= 10
    assert certify_samples(rep, sph) < 1e-8


def test_cone():
    xs = np.array([1.0, 2, 3, 4])
    rep = classify_collinear(fixtures.collinear_spheres(xs, xs / np.sqrt(2)))
    assert rep.names == ["Cone"]
    c = rep.classes[0]
    assert np.allclose([c.A, c.B, c.C], [1, 0, 0], atol=1e-10)


def test_hyperboloid():
    xs = np.array([0.0, 1, 2, 3])
    rep = classify_collinear(fixtures.collinear_spheres(xs, np.sqrt(1 + xs ** 2 / 2)))
    assert rep.names == ["Hyperboloid"]
    c = rep.classes[0]
    assert np.allclose([c.A, c.B, c.C], [1, 0, 1], atol=1e-10)


def test_common_circle():
    # all spheres through the circle x = 0, y^2 + z^2 = 1
    xs = np.array([-1.0, 0.5, 1, 2])
    rep = classify_collinear(fixtures.collinear_spheres(xs, np.sqrt(1 + xs ** 2)))
    assert "CommonCircle" in rep.names
    circ = next(c for c in rep.classes if isinstance(c, CommonCircle))
    assert abs(circ.center_x) < 1e-10 and abs(circ.rho - 1) < 1e-10
    sph = fixtures.collinear_spheres(xs, np.sqrt(1 + xs ** 2))
    assert certify_samples(rep, sph) < 1e-8


def test_common_point():
    xs = np.array([1.0, 2, 3, 4])
    rep = classify_collinear(fixtures.collinear_spheres(xs, xs))
    assert "CommonPoint" in rep.names


def test_incompatible_radii():
    sph = fixtures.collinear_spheres([0, 1, 2, 3], [1, 0.5, 1.3, 0.7])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = solve(sph)
    assert res.regime == "collinear"
    assert not any(isinstance(c, (Cylinder, Cone, Hyperboloid)) for c in res.degenerate.classes)
    for t in res.tangents:
        assert max(t.residuals) < 1e-7


@settings(max_examples=25, deadline=None)
@given(st.floats(-0.9, 0.9), st.floats(-1, 1), st.floats(0.2, 2),
       st.lists(st.floats(-3, 3), min_size=4, max_size=4, unique=True))
def test_classifier_recovers_meridian(a, b, c, xs):
    # spheres inscribed in y^2 = A x^2 + B x + C: tangency radius at center x0
    xs = np.array(xs)
    if min(abs(x - y) for i, x in enumerate(xs) for y in xs[i + 1:]) < 0.2:
        return
    A, B = a * a, b if a * a > 0.05 else 0.0
    C = c + (B * B / (4 * A) if A > 0.05 else 0.0)
    if A <= 0.05:
        A, B = 0.0, 0.0
    # double root of (x - x0)^2 + A x^2 + B x + C - r^2 in x
    r2 = C + A * xs ** 2 / (1 + A) + B * xs / (1 + A) - B * B / (4 * (1 + A))
    if np.min(r2) <= 0.05:
        return
    sph = fixtures.collinear_spheres(xs, np.sqrt(r2), np.random.default_rng(7))
    rep = classify_collinear(sph)
    ruled = [k for k in rep.classes if isinstance(k, (Cylinder, Cone, Hyperboloid))]
    assert len(ruled) == 1
    k = ruled[0]
    # abscissae are measured from the foot of the world origin on the axis
    sh = rep.abscissae[0] - xs[0]
    want = [A, B - 2 * A * sh, A * sh * sh - B * sh + C]
    assert np.allclose([k.A, k.B, k.C], want, atol=1e-8)
    assert certify_samples(rep, sph) < 1e-7


def test_basket_conditions_cone_triple():
    xs = np.array([1.0, 2, 3])
    rep = basket_conditions_spheres(fixtures.collinear_spheres(xs, xs / np.sqrt(2)))
    assert rep["ok"] and rep["consistent"] and rep["span_residual"] < 1e-9


def test_basket_conditions_hyperboloid_quadruple():
    xs = np.array([0.0, 1, 2, 3])
    rep = basket_conditions_spheres(fixtures.collinear_spheres(xs, np.sqrt(1 + xs ** 2 / 2),
                                                                np.random.default_rng(3)))
    assert rep["conic_residual"] < 1e-9


def test_basket_conditions_generic_fail(rng):
    rep = basket_conditions_spheres(fixtures.generic_spheres(rng))
    assert not rep["ok"] and max(rep["conic_residual"], rep["plane_residual"]) > 1e-3


def test_basket_conditions_concentric_frame():
    s = spheres_at([np.zeros(3), np.zeros(3), np.zeros(3), np.zeros(3)], [1, 2, 3, 4])
    with pytest.raises(FrameDegenerate):
        basket_conditions_spheres(s)


def test_solve_is_deterministic(rng):
    sph = fixtures.generic_spheres(rng)
    a, b = solve(sph, seed=4), solve(sph, seed=4)
    assert all(np.array_equal(x.p, y.p) and np.array_equal(x.v, y.v)
               for x, y in zip(a.tangents, b.tangents))
