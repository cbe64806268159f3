"""
Primitives of C^2 = R^4 restricted to the unit sphere S^3.

Points and vectors are numpy arrays whose last axis has length 4 and holds
the real coordinates ``(x1, y1, x2, y2)`` of ``(z1, z2) = (x1 + i y1, x2 + i y2)``.
Every function broadcasts over leading axes, so a whole grid of samples can
be processed in one call.
"""

import numpy as np

UNIT_TOL = 1e-12


def as_point(z, tol=UNIT_TOL):
    """Return ``z`` as a float array after checking it lies on S^3."""
    z = np.asarray(z, dtype=float)
    if z.shape[-1] != 4:
        raise ValueError(f"expected trailing axis of length 4, got shape {z.shape}")
    err = np.max(np.abs(np.sum(z * z, axis=-1) - 1.0))
    if err > tol:
        raise ValueError(f"point is not on the unit sphere (|z|^2 - 1 = {err:.3e})")
    return z


def inner(v, w):
    """Euclidean inner product ``Re(v, w)`` over the last axis."""
    return np.sum(np.asarray(v, dtype=float) * np.asarray(w, dtype=float), axis=-1)


def norm(v):
    return np.sqrt(inner(v, v))


def j_mul(v):
    """Multiplication by ``i``: ``(x1, y1, x2, y2) -> (-y1, x1, -y2, x2)``."""
    v = np.asarray(v, dtype=float)
    out = np.empty_like(v)
    out[..., 0] = -v[..., 1]
    out[..., 1] = v[..., 0]
    out[..., 2] = -v[..., 3]
    out[..., 3] = v[..., 2]
    return out


def reeb(z):
    """Reeb field ``xi(z) = i z``; unit and tangent to S^3 at ``z``."""
    return j_mul(z)


def tangent_project(z, v):
    """Orthogonal projection of ``v`` onto ``T_z S^3``."""
    z = np.asarray(z, dtype=float)
    v = np.asarray(v, dtype=float)
    return v - inner(v, z)[..., None] * z


def covariant_derivative(z, X, dV, V):
    """
    Levi-Civita derivative of a tangent field of S^3.

    Parameters
    ----------
    z : array_like
        Base point on S^3.
    X : array_like
        Direction of differentiation, tangent at ``z``.
    dV : array_like
        Euclidean directional derivative of the field ``V`` along ``X``.
    V : array_like
        Value of the field at ``z``, tangent at ``z``.

    Returns
    -------
    ndarray
        ``dV + <V, X> z``. Because ``<V, z>`` vanishes identically,
        ``<dV, z> = -<V, X>`` and this is exactly the tangential part of ``dV``.
    """
    z = np.asarray(z, dtype=float)
    return np.asarray(dV, dtype=float) + inner(V, X)[..., None] * z


def cross4(a, b, c):
    """
    Vector orthogonal to ``a``, ``b`` and ``c`` in R^4.

    Components are the signed 3x3 minors, chosen so that
    ``det[a, b, c, cross4(a, b, c)] = |cross4(a, b, c)|^2 >= 0``. The norm
    equals the 3-volume spanned by the three vectors.
    """
    m = np.stack(np.broadcast_arrays(
        np.asarray(a, dtype=float), np.asarray(b, dtype=float), np.asarray(c, dtype=float)
    ), axis=-1)  # (..., 4, 3), columns a, b, c
    out = np.empty(m.shape[:-1])
    rows = np.arange(4)
    for k in range(4):
        minor = m[..., rows != k, :]
        out[..., k] = (-1) ** (k + 3) * np.linalg.det(minor)
    return out


def det4(a, b, c, d):
    """Determinant of the 4x4 matrix with columns ``a, b, c, d``."""
    return np.linalg.det(np.stack(np.broadcast_arrays(a, b, c, d), axis=-1))
