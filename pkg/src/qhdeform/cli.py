"""Command-line entry point: ``qhdeform <command> ...``.

Every command writes a JSON report (or the requested matrix dump) and exits
with status 1 if any check failed, 2 on a configuration error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import platform
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__, suites
from .errors import ConfigError, NonGenericQ
from .repcore import RepSpec
from .scalarring import NumericContext

SCHEMA = "qhdeform-report/1"
REPORT_DIR_ENV = "QHDEFORM_REPORT_DIR"
MAX_TWO_J = 30


@dataclass
class RunConfig:
    command: str
    two_j_min: int = 1
    two_j_max: int = 4
    mode: str = "exact"
    numeric: list = field(default_factory=list)  # NumericPoints
    tol: float = 1e-10
    output: Path | None = None
    seed: int = 0
    max_n: int = 6
    basis: str = "polynomial"
    fmt: str = "json"
    two_j_left: int = 1
    two_j_right: int = 1
    which: tuple = ("uq", "qh", "uh")

    def validate(self):
        if not 0 <= self.two_j_min <= self.two_j_max <= MAX_TWO_J:
            raise ConfigError(f"twoJ range must satisfy 0 <= min <= max <= {MAX_TWO_J}")
        if self.mode not in ("exact", "numeric", "both"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.mode != "exact" and not self.numeric:
            raise ConfigError("numeric mode needs at least one (q, h) point")
        if self.tol <= 0:
            raise ConfigError("tolerance must be positive")
        if min(self.two_j_left, self.two_j_right) < 0 or max(self.two_j_left, self.two_j_right) > 8:
            raise ConfigError("coproduct factors need 0 <= twoJ <= 8")
        if self.max_n < 0 or self.max_n > 20:
            raise ConfigError("max-n must lie in 0..20")

    @property
    def two_js(self):
        return range(self.two_j_min, self.two_j_max + 1)


def _complex_arg(text: str) -> complex:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}") from exc
    if len(parts) == 1:
        parts.append(0.0)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}")
    return complex(*parts)


def _environment(cfg: RunConfig) -> dict:
    import numpy
    import sympy

    return {
        "package_version": __version__,
        "python": platform.python_version(),
        "numpy": numpy.__version__,
        "sympy": sympy.__version__,
        "mode": cfg.mode,
        "two_j_range": [cfg.two_j_min, cfg.two_j_max],
        "truncation": "series in J+ stop at power dim - 1 (J+^dim = 0)",
        "seed": cfg.seed,
        "tol_abs": cfg.tol,
        "tol_rel": 1e-8,
        "points": [{"q": [p.q.real, p.q.imag], "h": [p.h.real, p.h.imag], "q_real": p.q_real}
                   for p in cfg.numeric],
        "kronecker_order": "left factor varies slowest",
        "basis_order": "index i <-> m = j - i",
    }


def _points(args) -> list:
    if args.numeric_q is not None:
        q = args.numeric_q
        h = args.numeric_h if args.numeric_h is not None else 0.5
        q_real = abs(q) if abs(abs(q) - 1) > 1e-3 else 1.5
        return [suites.NumericPoint(q, h, q_real)]
    return suites.random_points(args.points, args.seed)


def config_from_args(args) -> RunConfig:
    cfg = RunConfig(command=args.command)
    for name in ("seed", "mode", "tol", "max_n", "basis", "two_j_left", "two_j_right"):
        if hasattr(args, name) and getattr(args, name) is not None:
            setattr(cfg, name, getattr(args, name))
    if getattr(args, "format", None):
        cfg.fmt = args.format
    if getattr(args, "which", None):
        cfg.which = (args.which,) if args.which != "all" else ("uq", "qh", "uh")
    if getattr(args, "two_j_max", None) is not None:
        cfg.two_j_max = args.two_j_max
        cfg.two_j_min = min(1, args.two_j_max) if args.two_j_min is None else args.two_j_min
    if getattr(args, "two_j", None) is not None:
        cfg.two_j_min = cfg.two_j_max = args.two_j
    if hasattr(args, "numeric_q") and (args.command in ("coeffs", "rep") and args.numeric_q is None):
        cfg.numeric = []
    elif hasattr(args, "numeric_q"):
        cfg.numeric = _points(args)
    if args.command in ("coeffs", "rep") and cfg.numeric:
        cfg.mode = "numeric"
    if args.report:
        cfg.output = Path(args.report)
    else:
        base = Path(os.environ.get(REPORT_DIR_ENV, "qhdeform-reports"))
        suffix = "csv" if cfg.command == "rep" and cfg.fmt == "csv" else "json"
        cfg.output = base / f"{cfg.command}.{suffix}"
    return cfg


def collect(cfg: RunConfig) -> tuple:
    """(reports, extra payload) for a validated config."""
    reports, extra = [], {}
    cmd = cfg.command
    if cmd in ("verify", "all"):
        if cfg.mode in ("exact", "both"):
            reports += suites.exact_suite(cfg.two_js)
        if cfg.mode in ("numeric", "both"):
            reports += suites.numeric_suite(cfg.two_js, cfg.numeric, cfg.tol)
            reports += suites.symmetric_suite(range(max(cfg.two_j_min, 1), min(cfg.two_j_max, 4) + 1),
                                              cfg.numeric, cfg.tol)
    if cmd in ("limits", "all"):
        reports += suites.limits_suite(cfg.two_js)
    if cmd == "coproduct":
        ctx = cfg.numeric[0].context(cfg.tol) if cfg.mode == "numeric" else None
        reports += suites.coproduct_suite(cfg.two_j_left, cfg.two_j_right, cfg.which, ctx)
    if cmd == "all":
        for a, b in ((1, 1), (1, 2)):
            reports += suites.coproduct_suite(a, b)
        extra["coefficients"] = suites.coefficient_table(cfg.max_n)
    if cmd == "coeffs":
        ctx = cfg.numeric[0].context(cfg.tol) if cfg.numeric else None
        extra["coefficients"] = suites.coefficient_table(cfg.max_n, ctx)
    if cmd == "rep":
        ctx = cfg.numeric[0].context(cfg.tol) if cfg.numeric else None
        extra["matrices"] = suites.matrix_dump(RepSpec(cfg.two_j_max, cfg.basis), ctx)
    return reports, extra


def build_report(cfg: RunConfig, reports, extra) -> dict:
    failed = [r for r in reports if not r.passed]
    return {
        "schema": SCHEMA,
        "command": cfg.command,
        "environment": _environment(cfg),
        **extra,
        "reports": [r.to_json() for r in reports],
        "summary": {"total": len(reports), "failed": len(failed), "passed": not failed},
    }


def _csv_dump(matrices: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["matrix", "row", "col", "value"])
    for name, rows in matrices.items():
        if name == "two_m":
            continue
        for i, row in enumerate(rows):
            for k, v in enumerate(row):
                w.writerow([name, i, k, json.dumps(v, sort_keys=True)])
    return buf.getvalue()


def run(cfg: RunConfig, stream=None) -> int:
    """Run one command, write its output file, return the exit status."""
    stream = stream or sys.stdout
    cfg.validate()
    reports, extra = collect(cfg)
    report = build_report(cfg, reports, extra)
    cfg.output.parent.mkdir(parents=True, exist_ok=True)
    if cfg.command == "rep" and cfg.fmt == "csv":
        cfg.output.write_text(_csv_dump(extra["matrices"]))
    else:
        cfg.output.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    for r in reports:
        if not r.passed:
            print(r.line(), file=stream)
    s = report["summary"]
    print(f"{cfg.command}: {s['total'] - s['failed']}/{s['total']} checks passed -> {cfg.output}", file=stream)
    return 0 if s["passed"] else 1


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qhdeform", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, numeric=True):
        sp.add_argument("--report", help=f"output path (default ${REPORT_DIR_ENV}/<command>.json)")
        if numeric:
            sp.add_argument("--numeric-q", type=_complex_arg, help="q as RE,IM")
            sp.add_argument("--numeric-h", type=_complex_arg, help="h as RE,IM")
            sp.add_argument("--tol", type=float, default=1e-10)
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--points", type=int, default=5, help="random (q, h) points when --numeric-q is absent")

    sp = sub.add_parser("coeffs", help="alpha_n / beta_n table")
    sp.add_argument("--max-n", type=int, default=6)
    common(sp)

    sp = sub.add_parser("rep", help="dump generator matrices")
    sp.add_argument("--two-j", type=int, required=True)
    sp.add_argument("--basis", choices=("polynomial", "symmetric"), default="polynomial")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    common(sp)

    for name, help_ in (("verify", "identities on single irreps"), ("all", "every suite")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--two-j-max", type=int, default=4)
        sp.add_argument("--two-j-min", type=int)
        sp.add_argument("--mode", choices=("exact", "numeric", "both"), default="exact" if name == "verify" else "both")
        sp.add_argument("--max-n", type=int, default=6)
        common(sp)

    sp = sub.add_parser("coproduct", help="coproducts on V_L (x) V_R")
    sp.add_argument("--two-j-left", type=int, default=1)
    sp.add_argument("--two-j-right", type=int, default=1)
    sp.add_argument("--which", choices=("uq", "qh", "uh", "all"), default="all")
    sp.add_argument("--mode", choices=("exact", "numeric"), default="exact")
    common(sp)

    sp = sub.add_parser("limits", help="q -> 1 and h -> 0 limits")
    sp.add_argument("--two-j-max", type=int, default=4)
    sp.add_argument("--two-j-min", type=int)
    common(sp, numeric=False)
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        if cfg.command == "coproduct" and cfg.mode == "numeric" and "uh" in cfg.which:
            cfg.which = tuple(w for w in cfg.which if w != "uh")
        return run(cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except NonGenericQ as exc:
        print(f"non-generic q ([{exc.index}] vanishes): {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
