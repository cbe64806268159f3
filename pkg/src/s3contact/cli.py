"""
Command-line driver.

    s3contact list
    s3contact sample --surface geodesic-sphere --nu 16 --nv 16 --out fields.csv
    s3contact check --surface clifford-torus --identity all --out report.json
    s3contact convergence --surface geodesic-sphere --identity LaplacianFormula --steps 4e-3,2e-3,1e-3

Exit codes: 0 success, 1 an identity exceeded its threshold, 2 usage or
configuration error, 3 I/O error.
"""

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Optional

import numpy as np

from s3contact import catalog
from s3contact.calculus import Steps, sample
from s3contact.identities import (
    DEFAULT_THRESHOLDS,
    CheckConfig,
    IdentityKind,
    convergence_study,
    run_checks,
    theorem1_consistency,
)
from s3contact.surface import GridSpec, position_only

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
SCHEMA = 1
SAMPLE_HEADER = ["u", "v", "beta", "beta1", "beta2", "H", "K_ext", "K_int", "lap_beta", "degenerate"]


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    surface: str = "clifford-torus"
    params: dict = field(default_factory=dict)
    nu: int = 16
    nv: int = 16
    h_f: float = 1e-4
    h_lap: float = 1e-3
    h_metric: float = 1e-3
    h_jet: Optional[float] = None  # None keeps closed-form jets
    eps_deg: float = 1e-6
    band_tan: float = 0.05
    identities: tuple = tuple(IdentityKind)
    thresholds: dict = field(default_factory=lambda: dict(DEFAULT_THRESHOLDS))
    steps: tuple = ()
    out: Optional[str] = None
    fmt: Optional[str] = None
    timestamp: bool = False

    def check_config(self):
        return CheckConfig(self.h_f, self.h_lap, self.h_metric, self.eps_deg, self.band_tan)

    def grid(self):
        return GridSpec(self.nu, self.nv)

    def patch(self):
        try:
            patch = catalog.get(self.surface, **self.params)
        except (KeyError, ValueError) as exc:
            raise UsageError(str(exc.args[0]) if exc.args else str(exc)) from None
        if self.h_jet is not None:
            patch = position_only(patch, self.h_jet)
        return patch

    def as_dict(self):
        return {
            "h_f": self.h_f,
            "h_lap": self.h_lap,
            "h_metric": self.h_metric,
            "h_jet": self.h_jet,
            "eps_deg": self.eps_deg,
            "band_tan": self.band_tan,
            "thresholds": {k.value: self.thresholds[k] for k in self.identities},
        }


def _fmt(x):
    return "%.17g" % x


def cmd_list():
    lines = []
    for name, entry in catalog.CATALOG.items():
        head = f"{name} {entry.schema()}".rstrip()
        lines.append(f"{head}\t{entry.summary}")
    return "\n".join(lines) + "\n"


def sample_rows(config):
    patch = config.patch()
    u, v = patch.grid(config.grid())
    s = sample(patch, u, v, Steps(config.h_f, config.h_lap, config.h_metric, config.eps_deg))
    cols = [s.u, s.v, s.beta, s.beta1, s.beta2, s.H, s.K_ext, s.K_int, s.lap_beta]
    flat = [np.asarray(c).reshape(-1) for c in cols]
    deg = np.asarray(s.degenerate).reshape(-1)
    return [[float(c[i]) for c in flat] + [bool(deg[i])] for i in range(deg.size)]


def cmd_sample(config):
    """Sampled geometric fields as CSV text, one row per grid point in row-major order."""
    rows = sample_rows(config)
    if config.fmt == "json":
        return json.dumps([dict(zip(SAMPLE_HEADER, r)) for r in rows], indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SAMPLE_HEADER)
    for r in rows:
        writer.writerow([_fmt(x) for x in r[:-1]] + [int(r[-1])])
    return buf.getvalue()


def cmd_check(config):
    """Run identity checks; returns ``(report_dict, exit_code)``."""
    if not config.identities:
        raise UsageError("identity selection is empty")
    patch = config.patch()
    grid = config.grid()
    reports, ev = run_checks(patch, grid, config.identities, config.check_config())
    verdict = theorem1_consistency(patch, grid, ev=ev)
    failed = [r.kind.value for r in reports if not r.passes(config.thresholds[r.kind])]
    doc = {
        "schema": SCHEMA,
        "surface": config.surface,
        "parameters": dict(patch.params),
        "grid": grid.as_dict(),
        "config": config.as_dict(),
        "reports": [r.as_dict() for r in reports],
        "verdicts": [dict(name="theorem1_consistency", **verdict.as_dict())],
        "failed": failed,
    }
    if config.timestamp:
        doc["generated_at"] = datetime.now(timezone.utc).isoformat()
    return doc, (EXIT_FAIL if failed else EXIT_OK)


def cmd_convergence(config):
    """Rows ``(h, identity, max_abs)`` for each step and identity."""
    if len(config.steps) < 3:
        raise UsageError("--steps needs at least three values")
    if any(b >= a for a, b in zip(config.steps, config.steps[1:])):
        raise UsageError("--steps must be strictly decreasing")
    rows = convergence_study(
        config.patch(), config.grid(), config.identities, config.steps, config.check_config()
    )
    if config.fmt == "json":
        return json.dumps(
            [{"h": h, "identity": k.value, "max_abs": m} for h, k, m in rows], indent=2
        ) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["h", "identity", "max_abs"])
    for h, kind, m in rows:
        writer.writerow([_fmt(h), kind.value, "" if m is None else _fmt(m)])
    return buf.getvalue()


def _param(text):
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return key.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"parameter {key!r} is not a number") from None


def _floats(text):
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad step list {text!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(prog="s3contact", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="list catalog surfaces")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--surface", default="clifford-torus")
    common.add_argument("--param", action="append", type=_param, default=[], metavar="NAME=VALUE")
    common.add_argument("--nu", type=int, default=None)
    common.add_argument("--nv", type=int, default=None)
    common.add_argument("--h-f", type=float, default=1e-4)
    common.add_argument("--h-lap", type=float, default=1e-3)
    common.add_argument("--h-metric", type=float, default=1e-3)
    common.add_argument("--h-jet", type=float, default=None,
                        help="difference the position map with this step instead of using exact jets")
    common.add_argument("--eps-deg", type=float, default=1e-6)
    common.add_argument("--band-tan", type=float, default=0.05)
    common.add_argument("--identity", default="all")
    common.add_argument("--threshold", action="append", type=_param, default=[], metavar="IDENTITY=VALUE")
    common.add_argument("--out", default=None)
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), default=None)
    common.add_argument("--timestamp", action="store_true")

    sub.add_parser("sample", parents=[common], help="write sampled fields as CSV")
    sub.add_parser("check", parents=[common], help="run identity checks, write a JSON report")
    conv = sub.add_parser("convergence", parents=[common], help="residuals over a list of steps")
    conv.add_argument("--steps", type=_floats, required=True)
    return parser


def _identities(text):
    if text.strip().lower() == "all":
        return tuple(IdentityKind)
    try:
        kinds = {IdentityKind.parse(n) for n in text.split(",") if n.strip()}
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not kinds:
        raise UsageError("identity selection is empty")
    return tuple(k for k in IdentityKind if k in kinds)


def config_from_args(args):
    default_n = 32 if args.command == "check" else 16
    thresholds = dict(DEFAULT_THRESHOLDS)
    for name, value in args.threshold:
        try:
            thresholds[IdentityKind.parse(name)] = value
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    cfg = RunConfig(
        surface=args.surface,
        params=dict(args.param),
        nu=args.nu if args.nu is not None else default_n,
        nv=args.nv if args.nv is not None else default_n,
        h_f=args.h_f,
        h_lap=args.h_lap,
        h_metric=args.h_metric,
        h_jet=args.h_jet,
        eps_deg=args.eps_deg,
        band_tan=args.band_tan,
        identities=_identities(args.identity),
        thresholds=thresholds,
        steps=getattr(args, "steps", ()),
        out=args.out,
        fmt=args.fmt,
        timestamp=args.timestamp,
    )
    if cfg.nu < 2 or cfg.nv < 2:
        raise UsageError(f"grid resolution must be >= 2 per axis, got {cfg.nu}x{cfg.nv}")
    for name in ("h_f", "h_lap", "h_metric", "eps_deg"):
        if not getattr(cfg, name) > 0:
            raise UsageError(f"--{name.replace('_', '-')} must be positive")
    if cfg.h_jet is not None and not cfg.h_jet > 0:
        raise UsageError("--h-jet must be positive")
    if cfg.band_tan < 0:
        raise UsageError("--band-tan must be non-negative")
    return cfg


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    code = EXIT_OK
    try:
        if args.command == "list":
            _emit(cmd_list(), None)
            return EXIT_OK
        config = config_from_args(args)
        if args.command == "sample":
            text = cmd_sample(config)
        elif args.command == "check":
            if config.fmt == "csv":
                raise UsageError("check writes JSON only")
            doc, code = cmd_check(config)
            text = json.dumps(doc, indent=2) + "\n"
        else:
            text = cmd_convergence(config)
        _emit(text, config.out)
    except UsageError as exc:
        print(f"s3contact: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"s3contact: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
