"""
Differential operators on surface patches.

Fundamental forms and curvatures come straight from jets. Gradients,
Laplacians and the connection coefficient ``w_2^1`` of the ambient frame
``(f1, f2, f3) = (e1, i e1, i z)`` use central differences of exact
pointwise evaluations; there is no global interpolant.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from s3contact.ambient import covariant_derivative, inner, j_mul
from s3contact.surface import EPS_DEG, EPS_IMM, DegenerateImmersionError, adapted_frame

H_F = 1e-4
H_LAP = 1e-3
H_METRIC = 1e-3


@dataclass(frozen=True)
class Steps:
    """Differencing steps and degeneracy thresholds shared by all samplers."""

    h_f: float = H_F
    h_lap: float = H_LAP
    h_metric: float = H_METRIC
    eps_deg: float = EPS_DEG

    def __post_init__(self):
        for name in ("h_f", "h_lap", "h_metric", "eps_deg"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class MetricData:
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    # first derivatives keyed "E_u", "E_v", ...; second ones "E_vv", "F_uv", "G_uu"
    derivatives: Optional[dict] = None

    @property
    def det(self):
        return self.E * self.G - self.F * self.F

    def inverse(self):
        d = self.det
        return self.G / d, -self.F / d, self.E / d


@dataclass(frozen=True)
class ShapeData:
    l: np.ndarray
    m: np.ndarray
    n: np.ndarray
    metric: MetricData
    A_frame: Optional[np.ndarray] = None  # (..., 2, 2) in the (e1, e2) basis

    @property
    def H(self):
        return mean_curvature(self)

    @property
    def K_ext(self):
        return gauss_curvature_extrinsic(self)


@dataclass(frozen=True)
class GeomSample:
    """Pointwise geometric data over a set of parameter points."""

    u: np.ndarray
    v: np.ndarray
    frame: object
    beta: np.ndarray
    beta1: np.ndarray
    beta2: np.ndarray
    grad_beta: np.ndarray
    lap_beta: np.ndarray
    H: np.ndarray
    K_ext: np.ndarray
    K_int: np.ndarray
    A_frame: np.ndarray
    degenerate: np.ndarray

    @property
    def e1(self):
        return self.frame.e1


def _check_metric(metric):
    if np.any(metric.det <= EPS_IMM):
        raise DegenerateImmersionError("first fundamental form is degenerate")


def first_fundamental_form(jet):
    metric = MetricData(inner(jet.Fu, jet.Fu), inner(jet.Fu, jet.Fv), inner(jet.Fv, jet.Fv))
    _check_metric(metric)
    return metric


def _metric_first_derivatives(jet):
    Fu, Fv, Fuu, Fuv, Fvv = jet.Fu, jet.Fv, jet.Fuu, jet.Fuv, jet.Fvv
    return {
        "E_u": 2 * inner(Fu, Fuu),
        "E_v": 2 * inner(Fu, Fuv),
        "F_u": inner(Fuu, Fv) + inner(Fu, Fuv),
        "F_v": inner(Fuv, Fv) + inner(Fu, Fvv),
        "G_u": 2 * inner(Fv, Fuv),
        "G_v": 2 * inner(Fv, Fvv),
    }


def metric_with_derivatives(patch, u, v, h=H_METRIC):
    """
    First fundamental form with the derivatives needed for intrinsic curvature.

    First derivatives follow exactly from the jet; the three second
    derivatives entering the Brioschi formula are central differences
    of those, accurate to O(h^2).
    """
    jet = patch.jet(u, v)
    base = first_fundamental_form(jet)
    d = _metric_first_derivatives(jet)
    up, um = _metric_first_derivatives(patch.jet(u + h, v)), _metric_first_derivatives(patch.jet(u - h, v))
    vp, vm = _metric_first_derivatives(patch.jet(u, v + h)), _metric_first_derivatives(patch.jet(u, v - h))
    d["E_vv"] = (vp["E_v"] - vm["E_v"]) / (2 * h)
    d["G_uu"] = (up["G_u"] - um["G_u"]) / (2 * h)
    d["F_uv"] = 0.5 * ((vp["F_u"] - vm["F_u"]) + (up["F_v"] - um["F_v"])) / (2 * h)
    return MetricData(base.E, base.F, base.G, d)


def gauss_curvature_intrinsic(metric):
    """Gaussian curvature from the metric alone (Brioschi formula)."""
    if metric.derivatives is None:
        raise ValueError("metric derivatives are required")
    _check_metric(metric)
    E, F, G = metric.E, metric.F, metric.G
    d = metric.derivatives
    m1 = np.stack([
        np.stack([-0.5 * d["E_vv"] + d["F_uv"] - 0.5 * d["G_uu"], 0.5 * d["E_u"], d["F_u"] - 0.5 * d["E_v"]], -1),
        np.stack([d["F_v"] - 0.5 * d["G_u"], E, F], -1),
        np.stack([0.5 * d["G_v"], F, G], -1),
    ], -2)
    zero = np.zeros_like(E)
    m2 = np.stack([
        np.stack([zero, 0.5 * d["E_v"], 0.5 * d["G_u"]], -1),
        np.stack([0.5 * d["E_v"], E, F], -1),
        np.stack([0.5 * d["G_u"], F, G], -1),
    ], -2)
    return (np.linalg.det(m1) - np.linalg.det(m2)) / metric.det**2


def _frame_coefficients(jet, metric, vec):
    """Coordinates ``(a, b)`` with ``vec = a Fu + b Fv`` for a tangent ``vec``."""
    gi11, gi12, gi22 = metric.inverse()
    pu, pv = inner(vec, jet.Fu), inner(vec, jet.Fv)
    return gi11 * pu + gi12 * pv, gi12 * pu + gi22 * pv


def second_fundamental_form(jet, e3, e1=None, e2=None):
    """
    Second fundamental form ``II_ij = <F_ij, e3>`` in the coordinate basis.

    When ``e1`` and ``e2`` are supplied the matrix in that basis is
    returned as ``A_frame``.
    """
    metric = first_fundamental_form(jet)
    l, m, n = inner(jet.Fuu, e3), inner(jet.Fuv, e3), inner(jet.Fvv, e3)
    A = None
    if e1 is not None and e2 is not None:
        P = np.stack([
            np.stack(_frame_coefficients(jet, metric, e1), -1),
            np.stack(_frame_coefficients(jet, metric, e2), -1),
        ], -1)  # columns are frame vectors in (u, v) coordinates
        II = np.stack([np.stack([l, m], -1), np.stack([m, n], -1)], -2)
        A = np.swapaxes(P, -1, -2) @ II @ P
    return ShapeData(l, m, n, metric, A)


def mean_curvature(shape):
    g = shape.metric
    return (g.G * shape.l - 2 * g.F * shape.m + g.E * shape.n) / (2 * g.det)


def gauss_curvature_extrinsic(shape):
    """Gauss equation in the unit sphere: ``K = 1 + det(shape operator)``."""
    return 1.0 + (shape.l * shape.n - shape.m**2) / shape.metric.det


def _delta(a, b, angular):
    d = a - b
    if angular:
        d = np.arctan2(np.sin(d), np.cos(d))
    return d


def _partials(f, u, v, h, angular=False):
    fu = _delta(f(u + h, v), f(u - h, v), angular) / (2 * h)
    fv = _delta(f(u, v + h), f(u, v - h), angular) / (2 * h)
    return fu, fv


def surface_gradient(patch, f, u, v, h=H_F, angular=False):
    """
    Surface gradient of a scalar field ``f(u, v)`` as an ambient vector.

    ``angular=True`` treats ``f`` as an angle and differentiates wrapped
    increments, so branch jumps of ``f`` do not leak into the result.
    """
    jet = patch.jet(u, v)
    metric = first_fundamental_form(jet)
    fu, fv = _partials(f, u, v, h, angular)
    gi11, gi12, gi22 = metric.inverse()
    a = gi11 * fu + gi12 * fv
    b = gi12 * fu + gi22 * fv
    return a[..., None] * jet.Fu + b[..., None] * jet.Fv


def _flux(patch, f, u, v, h, angular):
    metric = first_fundamental_form(patch.jet(u, v))
    fu, fv = _partials(f, u, v, h, angular)
    gi11, gi12, gi22 = metric.inverse()
    root = np.sqrt(metric.det)
    return root * (gi11 * fu + gi12 * fv), root * (gi12 * fu + gi22 * fv)


def laplace_beltrami(patch, f, u, v, h=H_LAP, angular=False):
    """
    Laplace-Beltrami operator in divergence form,
    ``(1/sqrt(g)) d_i(sqrt(g) g^ij d_j f)``, with nested central differences.
    """
    wu_p, _ = _flux(patch, f, u + h, v, h, angular)
    wu_m, _ = _flux(patch, f, u - h, v, h, angular)
    _, wv_p = _flux(patch, f, u, v + h, h, angular)
    _, wv_m = _flux(patch, f, u, v - h, h, angular)
    root = np.sqrt(first_fundamental_form(patch.jet(u, v)).det)
    return ((wu_p - wu_m) + (wv_p - wv_m)) / (2 * h * root)


def beta_field(patch, eps_deg=EPS_DEG):
    """The contact angle as a scalar field on the parameter domain."""

    def f(u, v):
        return adapted_frame(patch.jet(u, v), patch.orientation, eps_deg).beta

    return f


def e1_field(patch, eps_deg=EPS_DEG):
    def f(u, v):
        return adapted_frame(patch.jet(u, v), patch.orientation, eps_deg).e1

    return f


def connection_w21(patch, u, v, X, h=H_F, eps_deg=EPS_DEG):
    """
    Connection coefficient ``w_2^1(X) = <D_X f2, f1>`` with ``f1 = e1``, ``f2 = i e1``.

    ``X`` is a tangent vector (or array of them) at ``F(u, v)``. The
    derivative of ``e1`` along ``X`` is taken by central differences of the
    ``e1`` field in parameter space.
    """
    jet = patch.jet(u, v)
    metric = first_fundamental_form(jet)
    frame = adapted_frame(jet, patch.orientation, eps_deg)
    e1 = e1_field(patch, eps_deg)
    a, b = _frame_coefficients(jet, metric, X)
    de1_u = (e1(u + h, v) - e1(u - h, v)) / (2 * h)
    de1_v = (e1(u, v + h) - e1(u, v - h)) / (2 * h)
    de1 = a[..., None] * de1_u + b[..., None] * de1_v
    f2 = j_mul(frame.e1)
    Df2 = covariant_derivative(jet.F, X, j_mul(de1), f2)
    return inner(Df2, frame.e1)


def sample(patch, u, v, steps=None):
    """Evaluate every pointwise scalar used by the identity checks."""
    steps = steps or Steps()
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    jet = patch.jet(u, v)
    frame = adapted_frame(jet, patch.orientation, steps.eps_deg)
    shape = second_fundamental_form(jet, frame.e3, frame.e1, frame.e2)
    beta = beta_field(patch, steps.eps_deg)
    grad = surface_gradient(patch, beta, u, v, steps.h_f, angular=True)
    lap = laplace_beltrami(patch, beta, u, v, steps.h_lap, angular=True)
    k_int = gauss_curvature_intrinsic(metric_with_derivatives(patch, u, v, steps.h_metric))
    return GeomSample(
        u=u,
        v=v,
        frame=frame,
        beta=frame.beta,
        beta1=inner(grad, frame.e1),
        beta2=inner(grad, frame.e2),
        grad_beta=grad,
        lap_beta=lap,
        H=mean_curvature(shape),
        K_ext=gauss_curvature_extrinsic(shape),
        K_int=k_int,
        A_frame=shape.A_frame,
        degenerate=frame.degenerate,
    )
