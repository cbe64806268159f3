"""Acceptance criteria; each check prints one PASS/FAIL line (also shown in the pytest summary)."""

import json

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from s3contact import catalog
from s3contact.ambient import inner
from s3contact.calculus import (
    connection_w21,
    gauss_curvature_extrinsic,
    gauss_curvature_intrinsic,
    laplace_beltrami,
    mean_curvature,
    metric_with_derivatives,
    second_fundamental_form,
)
from s3contact.cli import main
from s3contact.identities import (
    GridEvaluation,
    check_connection_identities,
    check_curvature_identity,
    check_laplacian_identity,
    check_shape_prediction,
    halving_ratios,
    is_second_order,
    theorem1_consistency,
)
from s3contact.surface import GridSpec, adapted_frame

GOLDEN_GRID = GridSpec(64, 64)
GRID = GridSpec(32, 32)
PI3 = np.pi / 3


def record(tag, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {tag:<4} {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def evals():
    patches = {
        "clifford": catalog.clifford_torus(),
        "sphere": catalog.geodesic_sphere(),
        "torus": catalog.product_torus(PI3),
    }
    return {k: GridEvaluation(p, GRID) for k, p in patches.items()}


def _golden(patch):
    u, v = patch.grid(GOLDEN_GRID)
    j = patch.jet(u, v)
    fr = adapted_frame(j, patch.orientation)
    shape = second_fundamental_form(j, fr.e3, fr.e1, fr.e2)
    return j, fr, shape


def test_01_clifford_golden_values():
    _, fr, shape = _golden(catalog.clifford_torus())
    beta = np.max(np.abs(fr.beta))
    A = np.max(np.abs(shape.A_frame - np.array([[0, -1], [-1, 0]])))
    H = np.max(np.abs(mean_curvature(shape)))
    K = np.max(np.abs(gauss_curvature_extrinsic(shape)))
    ok = beta < 1e-10 and A < 1e-8 and H < 1e-8 and K < 1e-8
    record("1", "Clifford golden values (64x64)", ok,
           f"max|beta|={beta:.2e} A_err={A:.2e} max|H|={H:.2e} max|K|={K:.2e}")


def test_02_sphere_golden_values():
    j, fr, shape = _golden(catalog.geodesic_sphere())
    e3_exact = bool(np.all(np.abs(fr.e3) == np.array([0, 0, 0, 1.0])))
    collinear = np.max(np.abs(np.abs(inner(fr.e1, catalog.sphere_reference_e1(j.F))) - 1))
    sin_err = np.max(np.abs(fr.sin_beta - j.F[..., 2]))
    H = np.max(np.abs(mean_curvature(shape)))
    K = np.max(np.abs(gauss_curvature_extrinsic(shape) - 1))
    II = max(np.max(np.abs(c)) for c in (shape.l, shape.m, shape.n))
    ok = e3_exact and collinear < 1e-9 and sin_err < 1e-10 and H < 1e-8 and K < 1e-8 and II < 1e-9
    record("2", "Geodesic sphere golden values (64x64)", ok,
           f"e3 exact={e3_exact} e1_collinear_err={collinear:.2e} sin(beta)-x2={sin_err:.2e} "
           f"max|H|={H:.2e} max|K-1|={K:.2e} max|II|={II:.2e}")


def test_03_curvature_identity(evals):
    c = check_curvature_identity(None, None, ev=evals["clifford"]).max_abs
    s = check_curvature_identity(None, None, ev=evals["sphere"]).max_abs
    record("3", "K = 1 - |grad beta + e1|^2", c < 1e-6 and s < 1e-5,
           f"clifford {c:.2e} (<1e-6), sphere {s:.2e} (<1e-5)")


def test_04_laplacian_identity(evals):
    sphere = evals["sphere"].patch
    u, v = evals["sphere"].u, evals["sphere"].v
    oracle = np.max(np.abs(laplace_beltrami(sphere, lambda a, b: a, u, v) - 1 / np.tan(u)))
    oracle_ok = oracle < 1e-5
    c = check_laplacian_identity(None, None, ev=evals["clifford"]).max_abs
    r = check_laplacian_identity(None, None, ev=evals["sphere"])
    ok = oracle_ok and c < 1e-8 and r.max_abs < 1e-4 and r.config["band_tan"] == 0.05
    record("4", "Lap(beta) = -tan(beta)|grad beta + 2 e1|^2", ok,
           f"oracle Lap(theta)-cot(theta)={oracle:.2e} (<1e-5), clifford {c:.2e} (<1e-8), "
           f"sphere {r.max_abs:.2e} (<1e-4, {r.n_degenerate} excluded)")


def test_05a_connection_identities(evals):
    c1, c2 = check_connection_identities(None, None, ev=evals["clifford"])
    s1, s2 = check_connection_identities(None, None, ev=evals["sphere"])
    ok = max(c1.max_abs, c2.max_abs) < 1e-6 and max(s1.max_abs, s2.max_abs) < 1e-4
    record("5a", "w(e1), w(e2) scalar relations", ok,
           f"clifford {c1.max_abs:.2e}/{c2.max_abs:.2e} (<1e-6), sphere {s1.max_abs:.2e}/{s2.max_abs:.2e} (<1e-4)")


def test_05b_clifford_w21_e2_spot_value():
    patch = catalog.clifford_torus()
    fr = adapted_frame(patch.jet(0.0, 0.0))
    w = float(connection_w21(patch, 0.0, 0.0, fr.e2))
    record("5b", "Clifford w(e2) spot value = -2", abs(w + 2) < 1e-6, f"w(e2)={w:.9f}, target -2 (tol 1e-6)")


def test_06_shape_prediction(evals):
    c = check_shape_prediction(None, None, ev=evals["clifford"]).max_abs
    s = check_shape_prediction(None, None, ev=evals["sphere"]).max_abs
    record("6", "A_frame vs [[b2, -(b1+1)], [-(b1+1), -b2]]", c < 1e-6 and s < 1e-5,
           f"clifford {c:.2e} (<1e-6), sphere {s:.2e} (<1e-5)")


def test_07_intrinsic_extrinsic_oracle(evals):
    details, ok = [], True
    for name, ev in evals.items():
        k_ext = ev.sample.K_ext
        errs = [
            float(np.max(np.abs(gauss_curvature_intrinsic(metric_with_derivatives(ev.patch, ev.u, ev.v, h)) - k_ext)))
            for h in (4e-3, 2e-3, 1e-3)
        ]
        ratios = halving_ratios(errs)
        this = errs[-1] < 5e-4 and is_second_order(errs)
        ok &= this
        shown = ",".join("floor" if r is None else f"{r:.3f}" for r in ratios)
        details.append(f"{name} {errs[-1]:.2e} ratios[{shown}]")
    record("7", "|K_int - K_ext| < 5e-4 at h=1e-3, O(h^2)", ok, "; ".join(details))


def test_08a_negative_control_not_minimal(evals):
    h = float(np.min(np.abs(evals["torus"].sample.H)))
    record("8a", "product torus pi/3: min|H| > 0.1", h > 0.1, f"min|H|={h:.4f}")


def test_08b_negative_control_curvature(evals):
    r = check_curvature_identity(None, None, ev=evals["torus"]).max_abs
    record("8b", "product torus pi/3: curvature residual > 0.1", r > 0.1, f"max residual={r:.2e}")


def test_08c_negative_control_laplacian(evals):
    r = check_laplacian_identity(None, None, ev=evals["torus"]).max_abs
    record("8c", "product torus pi/3: Laplacian residual > 0.1", r > 0.1, f"max residual={r:.2e}")


def test_08d_negative_control_exit_code(capsys):
    code = main(["check", "--surface", "product-torus", "--param", f"r={PI3!r}"])
    doc = json.loads(capsys.readouterr().out)
    record("8d", "product torus pi/3: check exits 1", code == 1, f"exit={code} failed={doc['failed']}")


def test_09_theorem1_consistency(evals):
    verdicts = {k: theorem1_consistency(None, None, ev=ev) for k, ev in evals.items()}
    ok = all(v.verdict == "PASS" for v in verdicts.values()) and verdicts["clifford"].is_minimal \
        and verdicts["clifford"].beta_constant
    detail = ", ".join(
        f"{k} {v.verdict} (minimal={v.is_minimal}, constant={v.beta_constant}, K_max={v.K_max:.1e})"
        for k, v in verdicts.items()
    )
    record("9", "constant beta on a minimal surface => K = 0", ok, detail)


def test_10_determinism(tmp_path):
    outs = []
    for name, extra in (("clifford-torus", []), ("geodesic-sphere", []),
                        ("product-torus", ["--param", f"r={PI3!r}"])):
        for i in range(2):
            path = tmp_path / f"{name}-{i}.json"
            main(["check", "--surface", name, "--out", str(path)] + extra)
            outs.append(path.read_bytes())
    ok = all(outs[i] == outs[i + 1] for i in range(0, len(outs), 2))
    record("10", "byte-identical check reports", ok, f"{len(outs) // 2} surfaces compared")
