"""
Residual checks for the contact-angle identities of minimal surfaces in S^3.

Every checker samples a patch on a grid, evaluates a residual that
vanishes when the identity holds, and condenses it into a
:class:`ResidualReport`. Samples where ``cos(beta)`` is too small for the
identity to be well conditioned are counted and left out of the statistics.
Checkers never refuse non-minimal input; the report carries the
minimality residual so a failure can be read as "hypothesis unmet".
"""

import enum
from dataclasses import asdict, dataclass, field, replace
from typing import Optional

import numpy as np

from s3contact.ambient import inner, j_mul, reeb
from s3contact.calculus import Steps, connection_w21, sample
from s3contact.surface import EPS_DEG

BAND_TAN = 0.05
MINIMAL_TOL = 1e-6
RATIO_WINDOW = (3.5, 4.5)
ROUNDING_FLOOR = 1e-12


class IdentityKind(str, enum.Enum):
    TANGENCY = "Tangency"
    MINIMALITY = "Minimality"
    CURVATURE = "CurvatureFormula"
    LAPLACIAN = "LaplacianFormula"
    CONNECTION_E1 = "ConnectionE1"
    CONNECTION_E2 = "ConnectionE2"
    SHAPE = "ShapePrediction"

    @classmethod
    def parse(cls, name):
        key = name.strip().lower().replace("-", "").replace("_", "")
        for kind in cls:
            if kind.value.lower() == key or kind.name.lower().replace("_", "") == key:
                return kind
        raise ValueError(f"unknown identity {name!r}; valid: {', '.join(k.value for k in cls)}")


# pass/fail thresholds used by the command-line check
DEFAULT_THRESHOLDS = {
    IdentityKind.TANGENCY: 1e-9,
    IdentityKind.MINIMALITY: 1e-8,
    IdentityKind.CURVATURE: 1e-5,
    IdentityKind.LAPLACIAN: 1e-4,
    IdentityKind.CONNECTION_E1: 1e-4,
    IdentityKind.CONNECTION_E2: 1e-4,
    IdentityKind.SHAPE: 1e-5,
}


@dataclass(frozen=True)
class CheckConfig:
    h_f: float = 1e-4
    h_lap: float = 1e-3
    h_metric: float = 1e-3
    eps_deg: float = EPS_DEG
    band_tan: float = BAND_TAN

    def __post_init__(self):
        if not self.band_tan >= 0:
            raise ValueError("band_tan must be non-negative")
        self.steps  # validates the step sizes

    @property
    def steps(self):
        return Steps(self.h_f, self.h_lap, self.h_metric, self.eps_deg)

    def with_step(self, h):
        """Same configuration with every differencing step set to ``h``."""
        return replace(self, h_f=h, h_lap=h, h_metric=h)

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class ResidualReport:
    kind: IdentityKind
    grid: object
    n_total: int
    n_degenerate: int
    max_abs: Optional[float]
    mean_abs: Optional[float]
    rms: Optional[float]
    worst_point: Optional[tuple]
    config: dict
    context: dict = field(default_factory=dict)

    def passes(self, threshold):
        return self.max_abs is not None and self.max_abs < threshold

    def as_dict(self):
        return {
            "kind": self.kind.value,
            "grid": self.grid.as_dict(),
            "n_total": self.n_total,
            "n_degenerate": self.n_degenerate,
            "max_abs": self.max_abs,
            "mean_abs": self.mean_abs,
            "rms": self.rms,
            "worst_point": list(self.worst_point) if self.worst_point is not None else None,
            "config": self.config,
            "context": self.context,
        }


class GridEvaluation:
    """Pointwise data of one patch on one grid, shared between checkers."""

    def __init__(self, patch, grid, config=None):
        self.patch = patch
        self.grid = grid
        self.config = config or CheckConfig()
        self.u, self.v = patch.grid(grid)
        self.sample = sample(patch, self.u, self.v, self.config.steps)
        self._w21 = {}

    @property
    def frame(self):
        return self.sample.frame

    def w21(self, which):
        if which not in self._w21:
            X = self.frame.e1 if which == 1 else self.frame.e2
            self._w21[which] = connection_w21(
                self.patch, self.u, self.v, X, self.config.h_f, self.config.eps_deg
            )
        return self._w21[which]

    def report(self, kind, residual, excluded=None, context=None):
        excluded = self.frame.degenerate if excluded is None else excluded
        return _report(kind, self, np.abs(residual), excluded, context or {})


def _report(kind, ev, abs_res, excluded, context):
    flat = abs_res.reshape(-1)
    keep = ~np.asarray(excluded, dtype=bool).reshape(-1)
    used = flat[keep]
    if used.size:
        idx = np.flatnonzero(keep)[int(np.argmax(used))]
        worst = (float(ev.u.reshape(-1)[idx]), float(ev.v.reshape(-1)[idx]))
        stats = float(used.max()), float(used.mean()), float(np.sqrt(np.mean(used * used)))
    else:
        worst, stats = None, (None, None, None)
    return ResidualReport(
        kind=kind,
        grid=ev.grid,
        n_total=int(flat.size),
        n_degenerate=int(flat.size - used.size),
        max_abs=stats[0],
        mean_abs=stats[1],
        rms=stats[2],
        worst_point=worst,
        config=ev.config.as_dict(),
        context=context,
    )


def _evaluation(patch, grid, config, ev):
    return ev if ev is not None else GridEvaluation(patch, grid, config)


def tangency_residual(frame, F, X):
    """``sin(beta) <X, i z> - cos(beta) <X, i e1>``; zero for every tangent ``X``."""
    return frame.sin_beta * inner(X, reeb(F)) - frame.cos_beta * inner(X, j_mul(frame.e1))


def check_tangency(patch, grid, config=None, ev=None):
    ev = _evaluation(patch, grid, config, ev)
    jet = patch.jet(ev.u, ev.v)
    res = np.maximum(
        np.abs(tangency_residual(ev.frame, jet.F, jet.Fu)),
        np.abs(tangency_residual(ev.frame, jet.F, jet.Fv)),
    )
    return ev.report(IdentityKind.TANGENCY, res)


def check_minimality(patch, grid, config=None, ev=None):
    ev = _evaluation(patch, grid, config, ev)
    # H does not involve e1, so degenerate points stay in
    return ev.report(IdentityKind.MINIMALITY, ev.sample.H, excluded=np.zeros(ev.u.shape, bool))


def _minimality_context(ev):
    return {"minimality_max_abs_H": float(np.max(np.abs(ev.sample.H)))}


def check_curvature_identity(patch, grid, config=None, ev=None):
    """Residual of ``K = 1 - |grad beta + e1|^2``."""
    ev = _evaluation(patch, grid, config, ev)
    s = ev.sample
    w = s.grad_beta + s.e1
    res = s.K_ext - (1.0 - inner(w, w))
    return ev.report(IdentityKind.CURVATURE, res, context=_minimality_context(ev))


def check_laplacian_identity(patch, grid, config=None, ev=None):
    """Residual of ``Lap(beta) = -tan(beta) |grad beta + 2 e1|^2`` outside the ``band_tan`` band."""
    ev = _evaluation(patch, grid, config, ev)
    s = ev.sample
    w = s.grad_beta + 2 * s.e1
    res = s.lap_beta + np.tan(s.beta) * inner(w, w)
    excluded = s.degenerate | (np.abs(ev.frame.cos_beta) < ev.config.band_tan)
    return ev.report(IdentityKind.LAPLACIAN, res, excluded, _minimality_context(ev))


def check_connection_identities(patch, grid, config=None, ev=None):
    """
    Residuals of the two scalar relations for ``w_2^1``:

        w_2^1(e1) = beta2 / cos(beta)
        w_2^1(e2) = -(beta1 + 1 + sin^2(beta)) / cos(beta)
    """
    ev = _evaluation(patch, grid, config, ev)
    s, fr = ev.sample, ev.frame
    ctx = _minimality_context(ev)
    r1 = ev.w21(1) - s.beta2 / fr.cos_beta
    r2 = ev.w21(2) + (s.beta1 + 1 + fr.sin_beta**2) / fr.cos_beta
    return ev.report(IdentityKind.CONNECTION_E1, r1, context=ctx), ev.report(
        IdentityKind.CONNECTION_E2, r2, context=ctx
    )


def predicted_shape(beta1, beta2):
    """Frame-basis second fundamental form predicted from the derivatives of beta."""
    off = -(beta1 + 1)
    return np.stack([np.stack([beta2, off], -1), np.stack([off, -beta2], -1)], -2)


def check_shape_prediction(patch, grid, config=None, ev=None):
    ev = _evaluation(patch, grid, config, ev)
    s = ev.sample
    diff = s.A_frame - predicted_shape(s.beta1, s.beta2)
    res = np.max(np.abs(diff), axis=(-2, -1))
    return ev.report(IdentityKind.SHAPE, res, context=_minimality_context(ev))


@dataclass(frozen=True)
class Theorem1Verdict:
    is_minimal: bool
    max_abs_H: float
    beta_spread: float
    beta_constant: bool
    K_max: float
    verdict: str

    def as_dict(self):
        return asdict(self)


def theorem1_consistency(patch, grid, tol_const=1e-6, tol_flat=1e-6, config=None, ev=None):
    """
    Constant contact angle on a minimal surface forces ``K = 0``.

    The verdict is vacuously PASS when the surface is not minimal or the
    contact angle varies over the grid.
    """
    ev = _evaluation(patch, grid, config, ev)
    s = ev.sample
    max_h = float(np.max(np.abs(s.H)))
    keep = ~s.degenerate
    betas = s.beta[keep]
    spread = float(betas.max() - betas.min()) if betas.size else 0.0
    k_max = float(np.max(np.abs(s.K_ext)))
    is_minimal = max_h < MINIMAL_TOL
    constant = spread < tol_const
    ok = (not is_minimal) or (not constant) or k_max < tol_flat
    return Theorem1Verdict(is_minimal, max_h, spread, constant, k_max, "PASS" if ok else "FAIL")


_CHECKERS = {
    IdentityKind.TANGENCY: check_tangency,
    IdentityKind.MINIMALITY: check_minimality,
    IdentityKind.CURVATURE: check_curvature_identity,
    IdentityKind.LAPLACIAN: check_laplacian_identity,
    IdentityKind.SHAPE: check_shape_prediction,
}


def run_checks(patch, grid, kinds=None, config=None):
    """Run the selected identity checks on one shared grid evaluation, in enum order."""
    selected = set(IdentityKind) if kinds is None else set(kinds)
    ev = GridEvaluation(patch, grid, config)
    reports = []
    connection = None
    for kind in IdentityKind:
        if kind not in selected:
            continue
        if kind in (IdentityKind.CONNECTION_E1, IdentityKind.CONNECTION_E2):
            if connection is None:
                connection = check_connection_identities(patch, grid, ev=ev)
            reports.append(connection[0] if kind is IdentityKind.CONNECTION_E1 else connection[1])
        else:
            reports.append(_CHECKERS[kind](patch, grid, ev=ev))
    return reports, ev


def convergence_study(patch, grid, kinds, hs, config=None):
    """``max_abs`` of each identity for every step in ``hs``; rows ``(h, kind, max_abs)``."""
    hs = [float(h) for h in hs]
    if len(hs) < 3 or any(b >= a for a, b in zip(hs, hs[1:])):
        raise ValueError("need at least three strictly decreasing steps")
    base = config or CheckConfig()
    rows = []
    for h in hs:
        reports, _ = run_checks(patch, grid, kinds, base.with_step(h))
        rows.extend((h, r.kind, r.max_abs) for r in reports)
    return rows


def halving_ratios(values, floor=ROUNDING_FLOOR):
    """Ratios of consecutive errors; ``None`` where both errors sit at the rounding floor."""
    out = []
    for a, b in zip(values, values[1:]):
        out.append(None if max(a, b) < floor else a / b)
    return out


def is_second_order(values, window=RATIO_WINDOW, floor=ROUNDING_FLOOR):
    lo, hi = window
    return all(r is None or lo <= r <= hi for r in halving_ratios(values, floor))
