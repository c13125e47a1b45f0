"""Batched numerical kernels: compound matrices, tangency residuals, Newton refinement."""

import numpy as np

_I = np.array([0, 0, 0, 1, 1, 2])
_J = np.array([1, 2, 3, 2, 3, 3])


def compound2(m):
    """Second compound matrices of a stack of 4x4 matrices."""
    m = np.asarray(m, dtype=complex)
    i, j = _I[:, None], _J[:, None]
    k, l = _I[None, :], _J[None, :]
    return m[..., i, k] * m[..., j, l] - m[..., i, l] * m[..., j, k]


def tangency_residuals(lines, quadrics):
    """|x^T nu(Q) x| for unit x and Frobenius-unit nu(Q); shape (L, K)."""
    x = np.asarray(lines, dtype=complex)
    x = x / np.linalg.norm(x, axis=1, keepdims=True)
    n = compound2(quadrics)
    n = n / np.linalg.norm(n, axis=(1, 2), keepdims=True)
    return np.abs(np.einsum("li,kij,lj->lk", x, n, x))


def tangent_system(P, V, centers, radii, vref):
    """Residual F and Jacobian J of the (p, v) tangent system.

    Equations: <p,v> = 0; for every sphere |a|^2 w - <a,v>^2 - r^2 w = 0
    with a = p - c and w = <v,v>; and the scaling <vref, v> = 1.
    """
    k = P.shape[0]
    A = P[:, None, :] - centers[None, :, :]
    w = np.sum(V * V, axis=1)
    s = np.einsum("kij,kj->ki", A, V)
    aa = np.sum(A * A, axis=2)
    r2 = radii ** 2
    ns = centers.shape[0]
    F = np.empty((k, ns + 2), dtype=complex)
    F[:, 0] = np.sum(P * V, axis=1)
    F[:, 1:ns + 1] = aa * w[:, None] - s * s - r2[None, :] * w[:, None]
    F[:, ns + 1] = np.sum(vref * V, axis=1) - 1.0
    J = np.zeros((k, ns + 2, 6), dtype=complex)
    J[:, 0, :3] = V
    J[:, 0, 3:] = P
    J[:, 1:ns + 1, :3] = 2 * A * w[:, None, None] - 2 * s[:, :, None] * V[:, None, :]
    J[:, 1:ns + 1, 3:] = (2 * (aa - r2[None, :])[:, :, None] * V[:, None, :]
                          - 2 * s[:, :, None] * A)
    J[:, ns + 1, 3:] = vref
    return F, J


def refine_tangents(P, V, centers, radii, max_iter=40, tol=1e-15):
    """Newton iteration on the tangent system for a batch of starts.

    Returns refined (P, V), the final residual norms and the iteration count.
    """
    P = np.array(P, dtype=complex)
    V = np.array(V, dtype=complex)
    centers = np.asarray(centers, dtype=float)
    radii = np.asarray(radii, dtype=float)
    V = V / np.linalg.norm(V, axis=1, keepdims=True)
    vref = V.conj()
    active = np.ones(len(P), dtype=bool)
    iters = 0
    for iters in range(1, max_iter + 1):
        if not active.any():
            break
        F, J = tangent_system(P[active], V[active], centers, radii, vref[active])
        try:
            d = np.linalg.solve(J, -F[..., None])[..., 0]
        except np.linalg.LinAlgError:
            d = np.stack([np.linalg.lstsq(j, -f, rcond=None)[0] for j, f in zip(J, F)])
        P[active] += d[:, :3]
        V[active] += d[:, 3:]
        step = np.linalg.norm(d, axis=1) / (1 + np.linalg.norm(P[active], axis=1))
        idx = np.flatnonzero(active)
        active[idx[step <= tol]] = False
    F, _ = tangent_system(P, V, centers, radii, vref)
    return P, V, np.linalg.norm(F, axis=1), iters
