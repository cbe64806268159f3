"""Built-in surfaces with closed-form jets."""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from s3contact.surface import Jet2, SurfacePatch

TWO_PI = 2 * np.pi
SPHERE_CAP = 0.15


def _vec(*comps):
    comps = np.broadcast_arrays(*(np.asarray(c, dtype=float) for c in comps))
    return np.stack(comps, axis=-1)


def _torus_jet(a, b):
    """Jet of ``(a e^{iu}, b e^{iv})``."""

    def jet_fn(u, v):
        zero = np.zeros(np.broadcast(u, v).shape)
        cu, su = np.cos(u) + zero, np.sin(u) + zero
        cv, sv = np.cos(v) + zero, np.sin(v) + zero
        return Jet2(
            F=_vec(a * cu, a * su, b * cv, b * sv),
            Fu=_vec(-a * su, a * cu, zero, zero),
            Fv=_vec(zero, zero, -b * sv, b * cv),
            Fuu=_vec(-a * cu, -a * su, zero, zero),
            Fuv=_vec(zero, zero, zero, zero),
            Fvv=_vec(zero, zero, -b * cv, -b * sv),
        )

    return jet_fn


def clifford_torus(orientation=1):
    """Clifford torus ``(sqrt(2)/2)(e^{iu}, e^{iv})`` on ``[0, 2pi)^2``."""
    a = np.sqrt(2) / 2
    return SurfacePatch(
        name="clifford-torus",
        domain=(0.0, TWO_PI, 0.0, TWO_PI),
        periodic_u=True,
        periodic_v=True,
        jet_fn=_torus_jet(a, a),
        orientation=orientation,
    )


def product_torus(r, orientation=1):
    """
    Product torus ``(cos r e^{iu}, sin r e^{iv})`` for ``0 < r < pi/2``.

    Flat for every ``r``; minimal only at ``r = pi/4`` where it is the
    Clifford torus. Its mean curvature is ``(tan r - cot r)/2`` up to sign.
    """
    r = float(r)
    if not 0 < r < np.pi / 2:
        raise ValueError(f"product torus radius must lie in (0, pi/2), got {r}")
    return SurfacePatch(
        name="product-torus",
        domain=(0.0, TWO_PI, 0.0, TWO_PI),
        periodic_u=True,
        periodic_v=True,
        jet_fn=_torus_jet(np.cos(r), np.sin(r)),
        orientation=orientation,
        params={"r": r},
    )


def _sphere_jet(t, p):
    zero = np.zeros(np.broadcast(t, p).shape)
    st, ct = np.sin(t) + zero, np.cos(t) + zero
    sp, cp = np.sin(p) + zero, np.cos(p) + zero
    return Jet2(
        F=_vec(st * cp, st * sp, ct, zero),
        Fu=_vec(ct * cp, ct * sp, -st, zero),
        Fv=_vec(-st * sp, st * cp, zero, zero),
        Fuu=_vec(-st * cp, -st * sp, -ct, zero),
        Fuv=_vec(-ct * sp, ct * cp, zero, zero),
        Fvv=_vec(-st * cp, -st * sp, zero, zero),
    )


def geodesic_sphere(delta=SPHERE_CAP, orientation=1):
    """
    Totally geodesic sphere ``{y2 = 0}`` in the polar chart
    ``(theta, phi) -> (sin t cos p, sin t sin p, cos t, 0)``.

    The chart is cut to ``delta <= theta <= pi - delta`` to stay clear of
    the poles, where both the chart and the contact angle degenerate.
    With ``orientation=1`` the normal is ``(0, 0, 0, 1)``.
    """
    if not 0 < delta < np.pi / 2:
        raise ValueError(f"polar cap must lie in (0, pi/2), got {delta}")
    return SurfacePatch(
        name="geodesic-sphere",
        domain=(delta, np.pi - delta, 0.0, TWO_PI),
        periodic_v=True,
        jet_fn=_sphere_jet,
        orientation=orientation,
        params={"delta": delta},
    )


def sphere_reference_e1(F):
    """Characteristic field of the geodesic sphere written in ambient coordinates."""
    x1, y1, x2 = F[..., 0], F[..., 1], F[..., 2]
    w = np.sqrt(1 - x2 * x2)
    return _vec(-x1 * x2 / w, -y1 * x2 / w, (1 - x2 * x2) / w, np.zeros_like(x2))


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    factory: Callable
    params: dict = field(default_factory=dict)  # name -> (lo, hi, label)
    expected: dict = field(default_factory=dict)
    summary: str = ""

    def schema(self):
        return " ".join(f"{k}:{label}" for k, (_, _, label) in self.params.items())

    def build(self, **kwargs):
        unknown = set(kwargs) - set(self.params)
        if unknown:
            raise ValueError(f"unknown parameter(s) for {self.name}: {', '.join(sorted(unknown))}")
        for key, value in kwargs.items():
            lo, hi, label = self.params[key]
            if not lo < value < hi:
                raise ValueError(f"{self.name}: {key}={value} outside {label}")
        return self.factory(**kwargs)


CATALOG = {
    "clifford-torus": CatalogEntry(
        "clifford-torus",
        clifford_torus,
        expected={
            "beta": 0.0,
            "A_frame": [[0.0, -1.0], [-1.0, 0.0]],
            "H": 0.0,
            "K": 0.0,
        },
        summary="flat minimal torus |z1|^2 = |z2|^2 = 1/2, constant contact angle 0",
    ),
    "geodesic-sphere": CatalogEntry(
        "geodesic-sphere",
        geodesic_sphere,
        params={"delta": (0.0, np.pi / 2, "(0,π/2)")},
        expected={"sin_beta": "x2", "e3": [0.0, 0.0, 0.0, 1.0], "H": 0.0, "K": 1.0},
        summary="totally geodesic sphere y2 = 0, contact angle arcsin(x2)",
    ),
    "product-torus": CatalogEntry(
        "product-torus",
        product_torus,
        params={"r": (0.0, np.pi / 2, "(0,π/2)")},
        expected={"beta": 0.0, "K": 0.0},
        summary="flat torus (cos r e^iu, sin r e^iv); minimal only at r = π/4",
    ),
}


def get(name, **params):
    """Build the named catalog surface."""
    try:
        entry = CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown surface {name!r}; known: {', '.join(CATALOG)}") from None
    if name == "product-torus" and "r" not in params:
        raise ValueError("product-torus requires parameter r")
    return entry.build(**params)
