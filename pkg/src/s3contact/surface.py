"""
Parametrized surface patches in S^3 and their adapted frames.

A patch maps a parameter rectangle into S^3. Jets (position plus first and
second parameter derivatives) come either from closed forms or from central
differences of a position map. The adapted frame ``(e1, e2, e3)`` and the
contact angle ``beta`` are built pointwise from a jet with the convention

    sin(beta) = <e3, xi>,     cos(beta) = -<e3, i e1> >= 0,

which fixes the sign of ``e1`` once the orientation of ``e3`` is chosen.
"""

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from s3contact.ambient import cross4, inner, j_mul, norm, reeb, tangent_project

EPS_IMM = 1e-12
EPS_DEG = 1e-6
H_JET = 1e-4


class DomainError(ValueError):
    """Parameter point outside the patch domain."""


class DegenerateImmersionError(ValueError):
    """Tangent vectors fail to span a plane."""


@dataclass(frozen=True)
class Jet2:
    """Position and parameter derivatives up to order two; arrays of shape (..., 4)."""

    F: np.ndarray
    Fu: np.ndarray
    Fv: np.ndarray
    Fuu: np.ndarray
    Fuv: np.ndarray
    Fvv: np.ndarray

    def gram_det(self):
        E, F, G = inner(self.Fu, self.Fu), inner(self.Fu, self.Fv), inner(self.Fv, self.Fv)
        return E * G - F * F

    def check(self, tol=1e-10, eps_imm=EPS_IMM):
        """Raise if the jet leaves S^3 or stops being an immersion."""
        err_norm = np.max(np.abs(inner(self.F, self.F) - 1.0))
        err_tan = max(np.max(np.abs(inner(self.Fu, self.F))), np.max(np.abs(inner(self.Fv, self.F))))
        if err_norm > tol or err_tan > tol:
            raise ValueError(f"jet is not on S^3 (norm err {err_norm:.2e}, tangency err {err_tan:.2e})")
        if np.min(self.gram_det()) <= eps_imm:
            raise DegenerateImmersionError("Fu and Fv are linearly dependent")
        return self


@dataclass(frozen=True)
class GridSpec:
    """Sampling grid: ``nu x nv`` points, optionally over a sub-rectangle (u0, u1, v0, v1)."""

    nu: int
    nv: int
    rect: Optional[tuple] = None

    def __post_init__(self):
        if self.nu < 2 or self.nv < 2:
            raise ValueError(f"grid resolution must be >= 2 per axis, got {self.nu}x{self.nv}")

    def as_dict(self):
        return {"nu": self.nu, "nv": self.nv, "rect": list(self.rect) if self.rect else None}


@dataclass(frozen=True)
class SurfacePatch:
    """
    An immersed patch ``(u, v) -> S^3``.

    Exactly one of ``jet_fn`` (closed-form jets) or ``position_fn``
    (position only, differentiated with step ``h_jet``) must be given.
    ``orientation`` is +1 or -1 and selects the side of the unit normal.
    """

    name: str
    domain: tuple
    periodic_u: bool = False
    periodic_v: bool = False
    jet_fn: Optional[Callable] = None
    position_fn: Optional[Callable] = None
    h_jet: float = H_JET
    orientation: int = 1
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        u0, u1, v0, v1 = self.domain
        if not (u1 > u0 and v1 > v0):
            raise ValueError(f"degenerate domain {self.domain}")
        if (self.jet_fn is None) == (self.position_fn is None):
            raise ValueError("provide exactly one of jet_fn or position_fn")
        if self.position_fn is not None and not self.h_jet > 0:
            raise ValueError("h_jet must be positive")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")

    @property
    def analytic(self):
        return self.jet_fn is not None

    def jet(self, u, v):
        """Jet at arbitrary parameters, without domain checks (used by stencils)."""
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        if self.jet_fn is not None:
            return self.jet_fn(u, v)
        return _fd_jet(self.position_fn, u, v, self.h_jet)

    def contains(self, u, v):
        u0, u1, v0, v1 = self.domain
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        ok = np.ones(np.broadcast(u, v).shape, dtype=bool)
        if not self.periodic_u:
            ok &= (u >= u0) & (u <= u1)
        if not self.periodic_v:
            ok &= (v >= v0) & (v <= v1)
        return ok

    def grid(self, spec):
        """Parameter arrays of shape (nu, nv), u varying along axis 0 (row-major)."""
        u0, u1, v0, v1 = spec.rect if spec.rect is not None else self.domain
        us = _axis(u0, u1, spec.nu, self.periodic_u and spec.rect is None)
        vs = _axis(v0, v1, spec.nv, self.periodic_v and spec.rect is None)
        return np.meshgrid(us, vs, indexing="ij")

    def flipped(self):
        return replace(self, orientation=-self.orientation)


def _axis(a, b, n, periodic):
    if periodic:
        return a + (b - a) * np.arange(n) / n
    return np.linspace(a, b, n)


def _fd_jet(pos, u, v, h):
    """Central-difference jet of a position map, corrected back onto S^3."""
    p00 = pos(u, v)
    pp0, pm0 = pos(u + h, v), pos(u - h, v)
    p0p, p0m = pos(u, v + h), pos(u, v - h)
    F = p00 / norm(p00)[..., None]
    Fu = tangent_project(F, (pp0 - pm0) / (2 * h))
    Fv = tangent_project(F, (p0p - p0m) / (2 * h))
    Fuu = (pp0 - 2 * p00 + pm0) / h**2
    Fvv = (p0p - 2 * p00 + p0m) / h**2
    Fuv = (pos(u + h, v + h) - pos(u + h, v - h) - pos(u - h, v + h) + pos(u - h, v - h)) / (4 * h * h)
    # differentiating <F, F> = 1 twice: <F_ij, F> = -<F_i, F_j>
    Fuu = Fuu - (inner(Fuu, F) + inner(Fu, Fu))[..., None] * F
    Fuv = Fuv - (inner(Fuv, F) + inner(Fu, Fv))[..., None] * F
    Fvv = Fvv - (inner(Fvv, F) + inner(Fv, Fv))[..., None] * F
    return Jet2(F, Fu, Fv, Fuu, Fuv, Fvv)


def eval_jet(patch, u, v, eps_imm=EPS_IMM):
    """Checked jet evaluation: raises on points outside the domain or degenerate immersions."""
    if not np.all(patch.contains(u, v)):
        raise DomainError(f"parameter point outside domain {patch.domain} of {patch.name}")
    jet = patch.jet(u, v)
    return jet.check(eps_imm=eps_imm)


def reparametrize_linear(patch, matrix, domain=None, offset=(0.0, 0.0)):
    """
    Compose ``patch`` with ``(s, t) -> matrix @ (s, t) + offset``.

    ``matrix`` must have positive determinant so that the normal, and
    hence the contact angle, is preserved.
    """
    a = np.asarray(matrix, dtype=float)
    if np.linalg.det(a) <= 0:
        raise ValueError("reparametrization must preserve orientation")
    (a11, a12), (a21, a22) = a
    ou, ov = offset

    def jet_fn(s, t):
        j = patch.jet(a11 * s + a12 * t + ou, a21 * s + a22 * t + ov)
        return Jet2(
            j.F,
            a11 * j.Fu + a21 * j.Fv,
            a12 * j.Fu + a22 * j.Fv,
            a11 * a11 * j.Fuu + 2 * a11 * a21 * j.Fuv + a21 * a21 * j.Fvv,
            a11 * a12 * j.Fuu + (a11 * a22 + a21 * a12) * j.Fuv + a21 * a22 * j.Fvv,
            a12 * a12 * j.Fuu + 2 * a12 * a22 * j.Fuv + a22 * a22 * j.Fvv,
        )

    return SurfacePatch(
        name=f"{patch.name}-reparam",
        domain=domain if domain is not None else patch.domain,
        periodic_u=patch.periodic_u,
        periodic_v=patch.periodic_v,
        jet_fn=jet_fn,
        orientation=patch.orientation,
        params=dict(patch.params),
    )


def unit_normal(jet, orientation=1):
    """
    Unit normal of the surface inside ``T_F S^3``.

    The sign makes ``det[F, Fu, Fv, e3]`` carry the sign of ``orientation``.
    """
    n = cross4(jet.F, jet.Fu, jet.Fv)
    length = norm(n)
    if np.any(length <= np.sqrt(EPS_IMM)):
        raise DegenerateImmersionError("tangent plane is degenerate")
    return orientation * n / length[..., None]


@dataclass(frozen=True)
class AdaptedFrame:
    """Adapted frame and contact angle; arrays broadcast over sample axes."""

    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray
    beta: np.ndarray
    sin_beta: np.ndarray
    cos_beta: np.ndarray
    degenerate: np.ndarray

    def __getitem__(self, idx):
        return AdaptedFrame(*(getattr(self, f)[idx] for f in self.__dataclass_fields__))


def adapted_frame(jet, orientation=1, eps_deg=EPS_DEG):
    """
    Adapted frame ``(e1, e2, e3)`` and contact angle at each sample of ``jet``.

    ``e1`` spans the intersection of the tangent plane with the contact
    distribution. It is obtained as the unit vector orthogonal to ``F``,
    ``xi`` and ``e3``, whose norm before normalisation equals ``cos(beta)``;
    points with ``cos(beta) < eps_deg`` are flagged degenerate and get an
    arbitrary unit tangent for ``e1``.
    """
    F = jet.F
    e3 = unit_normal(jet, orientation)
    xi = reeb(F)
    raw = cross4(F, xi, e3)
    length = norm(raw)
    fallback = jet.Fu / norm(jet.Fu)[..., None]
    safe = length > 1e-300
    e1 = np.where(safe[..., None], raw / np.where(safe, length, 1.0)[..., None], fallback)
    c = -inner(e3, j_mul(e1))
    e1 = np.where((c < 0)[..., None], -e1, e1)
    c = np.abs(c)
    s = inner(e3, xi)
    r = np.hypot(s, c)
    s, c = s / r, c / r
    e2 = s[..., None] * j_mul(e1) + c[..., None] * xi
    beta = np.arctan2(s, c)
    return AdaptedFrame(e1, e2, e3, beta, s, c, np.asarray(c < eps_deg))


def frame_field(patch, grid, eps_deg=EPS_DEG):
    """Adapted frames over a grid: returns ``(u, v, frame)`` with arrays of shape (nu, nv, ...)."""
    u, v = patch.grid(grid)
    jet = eval_jet(patch, u, v)
    return u, v, adapted_frame(jet, patch.orientation, eps_deg)


def position_only(patch, h_jet=H_JET):
    """Copy of ``patch`` that forgets its closed-form jets and differences the position map."""
    if patch.jet_fn is None:
        return replace(patch, h_jet=h_jet)

    def pos(u, v):
        return patch.jet_fn(u, v).F

    return replace(patch, jet_fn=None, position_fn=pos, h_jet=h_jet)
