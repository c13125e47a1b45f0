"""Intersection of two plane curves by a Sylvester resultant.

The curves are ternary forms f, g of degrees m, n on P2, passed as vectorized
callables on arrays of shape (..., 3).  Eliminating the last coordinate
gives a binary form of degree m*n whose roots are the projections of the
intersection points; each is lifted back through the common root of the two
univariate restrictions.  Only evaluations of f and g are needed: every
coefficient is obtained by discrete Fourier interpolation on the unit circle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .config import TOL_CLUSTER
from .symqr import BinaryForm, _random_unitary, binary_form_roots

Form = Callable[[np.ndarray], np.ndarray]


@dataclass
class PlaneIntersection:
    points: list  # (unit 3-vector, multiplicity)
    degree: int
    attempts: int
    notes: list = field(default_factory=list)


def _roots_of_unity(k: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(k) / k)


def z_coefficients(f: Form, deg: int, xy: np.ndarray) -> np.ndarray:
    """Coefficients a_i of f(x, y, z) = sum_i a_i z^i for each row of ``xy``.

    Returns an array of shape (len(xy), deg + 1), ascending in z.
    """
    zs = _roots_of_unity(deg + 1)
    pts = np.empty((len(xy), deg + 1, 3), dtype=complex)
    pts[:, :, 0] = xy[:, 0, None]
    pts[:, :, 1] = xy[:, 1, None]
    pts[:, :, 2] = zs[None, :]
    vals = f(pts)
    return np.fft.fft(vals, axis=1) / (deg + 1)


def sylvester_matrices(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Stack of Sylvester matrices for rows of ascending coefficients."""
    m = a.shape[1] - 1
    n = b.shape[1] - 1
    S = np.zeros((a.shape[0], m + n, m + n), dtype=complex)
    for i in range(n):
        S[:, i, i:i + m + 1] = a[:, ::-1]
    for i in range(m):
        S[:, n + i, i:i + n + 1] = b[:, ::-1]
    return S


def resultant_form(f: Form, g: Form, m: int, n: int) -> BinaryForm:
    """Res_z(f, g) as a binary form of degree m*n in (x:y)."""
    N = m * n
    w = _roots_of_unity(N + 1)
    xy = np.column_stack([np.ones(N + 1), w])
    a = z_coefficients(f, m, xy)
    b = z_coefficients(g, n, xy)
    vals = np.linalg.det(sylvester_matrices(a, b))
    coeffs = np.fft.fft(vals) / (N + 1)
    return BinaryForm(N, coeffs, identically_zero=not np.any(np.abs(coeffs) > 0))


def _lift(f: Form, g: Form, m: int, n: int, xy: np.ndarray):
    """Common z for the line through (x:y:0) and (0:0:1); (z, mismatch)."""
    a = z_coefficients(f, m, xy[None])[0]
    b = z_coefficients(g, n, xy[None])[0]
    ra = np.roots(a[::-1])
    rb = np.roots(b[::-1])
    best = None
    for za in ra:
        for zb in rb:
            d = abs(za - zb) / (1 + abs(za))
            if best is None or d < best[0]:
                best = (d, 0.5 * (za + zb))
    return best[1], best[0]


def intersect_plane_curves(f: Form, g: Form, m: int, n: int, seed: int = 0,
                           tol_cluster: float = TOL_CLUSTER, attempts: int = 5,
                           lead_floor: float = 1e-8,
                           lift_tol: float = 1e-4) -> PlaneIntersection:
    """Common zeros of ternary forms f (degree m) and g (degree n).

    Each attempt applies a seeded random unitary change of frame.  An
    attempt is rejected when either leading z-coefficient is below
    ``lead_floor`` of the coefficient norm or a root of the resultant does
    not lift to a common zero.
    """
    rng = np.random.default_rng(seed)
    notes = []
    last = None
    for attempt in range(1, attempts + 1):
        U = _random_unitary(rng, 3)

        def fr(w, U=U):
            return f(w @ U.T)

        def gr(w, U=U):
            return g(w @ U.T)

        probe = np.array([[0.0, 0.0]])
        ca = z_coefficients(fr, m, probe)[0]
        cb = z_coefficients(gr, n, probe)[0]
        if (abs(ca[-1]) < lead_floor * np.linalg.norm(ca)
                or abs(cb[-1]) < lead_floor * np.linalg.norm(cb)):
            notes.append(f"attempt {attempt}: small leading coefficient")
            continue
        res = resultant_form(fr, gr, m, n)
        if res.identically_zero:
            notes.append(f"attempt {attempt}: resultant vanishes identically")
            continue
        roots = binary_form_roots(res, tol_cluster=tol_cluster, ring=False,
                                  seed=int(rng.integers(2**31)))
        pts = []
        worst = 0.0
        for pt, mult in roots:
            xy = np.asarray(pt.z)
            z, mismatch = _lift(fr, gr, m, n, xy)
            worst = max(worst, mismatch)
            w = np.array([xy[0], xy[1], z])
            v = U @ w
            pts.append((v / np.linalg.norm(v), mult))
        last = PlaneIntersection(pts, m * n, attempt, notes)
        if worst <= lift_tol:
            return last
        notes.append(f"attempt {attempt}: lift mismatch {worst:.3g}")
    if last is None:
        return PlaneIntersection([], m * n, attempts, notes)
    return last
