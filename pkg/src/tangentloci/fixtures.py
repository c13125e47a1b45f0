"""Seeded generators for test and self-check instances."""

import numpy as np

from .spheres import Sphere


def random_symmetric(rng, n: int = 4, complex_: bool = False) -> np.ndarray:
    a = rng.standard_normal((n, n))
    if complex_:
        a = a + 1j * rng.standard_normal((n, n))
    return a + a.T


def generic_spheres(rng, min_volume: float = 0.05):
    """Four spheres with affinely independent centers in the unit cube."""
    while True:
        cs = rng.uniform(-1, 1, (4, 3))
        vol = abs(np.linalg.det(cs[1:] - cs[0])) / 6
        if vol > min_volume:
            break
    radii = rng.uniform(0.3, 1.2, 4)
    return [Sphere(tuple(c), float(r)) for c, r in zip(cs, radii)]


def _plane_basis(rng):
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    return q[:, 0], q[:, 1]


def coplanar_spheres(rng, min_area: float = 0.1):
    """Four spheres with centers on a random plane, no three collinear."""
    e1, e2 = _plane_basis(rng)
    o = rng.uniform(-1, 1, 3)
    while True:
        xy = rng.uniform(-1, 1, (4, 2))
        areas = [abs(np.linalg.det(np.delete(xy, k, 0)[1:] - np.delete(xy, k, 0)[0])) / 2
                 for k in range(4)]
        if min(areas) > min_area:
            break
    cs = [o + x * e1 + y * e2 for x, y in xy]
    radii = rng.uniform(0.3, 1.2, 4)
    return [Sphere(tuple(c), float(r)) for c, r in zip(cs, radii)]


def parallelogram_spheres(rng, min_sine: float = 0.3):
    """Centers o + a, o + b, o - a, o - b in that order."""
    while True:
        a, b = rng.uniform(-1, 1, (2, 3))
        na, nb = np.linalg.norm(a), np.linalg.norm(b)
        if min(na, nb) > 0.3 and np.linalg.norm(np.cross(a, b)) / (na * nb) > min_sine:
            break
    o = rng.uniform(-1, 1, 3)
    radii = rng.uniform(0.3, 1.2, 4)
    cs = [o + a, o + b, o - a, o - b]
    return [Sphere(tuple(c), float(r)) for c, r in zip(cs, radii)]


def _axis_frame(rng):
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    return rng.uniform(-1, 1, 3), q[:, 0]


def collinear_spheres(xs, radii, rng=None):
    """Spheres centred at o + x_i d on an axis, o = 0 and d = e1 without rng."""
    if rng is None:
        o, d = np.zeros(3), np.array([1.0, 0.0, 0.0])
    else:
        o, d = _axis_frame(rng)
    return [Sphere(tuple(o + x * d), float(r)) for x, r in zip(xs, radii)]


def tangent_line_to(q: np.ndarray, rng):
    """Two points spanning a line tangent to the quadric q."""
    while True:
        a = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        b = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        # (a + t b)^T Q (a + t b) = 0
        roots = np.roots([b @ q @ b, 2 * a @ q @ b, a @ q @ a])
        if len(roots) == 2:
            break
    x = a + roots[0] * b
    y = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    g = q @ x
    # move y into the tangent plane g . y = 0 at x
    k = int(np.argmax(np.abs(g)))
    y = y - (g @ y) / g[k] * np.eye(4)[k]
    return x, y


def basket_positive(rng, complex_: bool = False):
    """(b, q) with q = b + t u u^T, so [b, q] holds the double plane u^2."""
    b = random_symmetric(rng, 4, complex_)
    u = rng.standard_normal(4)
    if complex_:
        u = u + 1j * rng.standard_normal(4)
    return b, b + rng.uniform(0.2, 3.0) * np.outer(u, u)
