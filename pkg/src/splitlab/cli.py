"""Command line front end: ``splitlab <subcommand> ...``.

Exit codes: 0 success, 2 invalid configuration, 3 degenerate setup (most
samples uncertified), 4 a runtime invariant check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import subprocess
import sys
import time
from fractions import Fraction
from importlib import metadata
from pathlib import Path

from . import bounds as B
from .exactalg import FieldError, HomForm
from .fitting import FittingError, adjugate_kernel, fitting_generators
from .lab import (
    ConfigError,
    DegenerateSetupError,
    ExperimentConfig,
    enumerate_lines,
    line_map,
    random_curve_forms,
    resolve_bundle,
    sample_jump_distribution,
    verify_conic_example,
    verify_ramella,
    verify_schwarzenberger,
)
from .restrict import (
    BasePointError,
    CertificationError,
    InvariantViolation,
    RationalCurveMap,
    WindowError,
    jump_report,
    loads_curve,
)
from .sheaf import KERNEL, PresentationError, chern

EXIT_OK, EXIT_CONFIG, EXIT_DEGENERATE, EXIT_INVARIANT = 0, 2, 3, 4


def version_string() -> str:
    try:
        base = metadata.version("artifact")
    except metadata.PackageNotFoundError:
        base = "0.0.0"
    try:
        out = subprocess.run(
            ["git", "describe", "--tags", "--always", "--dirty"],
            cwd=Path(__file__).resolve().parent, capture_output=True, text=True, timeout=5,
        )
        if out.returncode == 0 and out.stdout.strip():
            return f"{base}+g{out.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return base


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return v if math.isfinite(v) else None
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _emit(args, command: str, payload: dict, t0: float) -> dict:
    record = {"schema": 1, "command": command, "version": version_string(), **payload}
    record["runtime_ms"] = None if args.no_clock else round((time.perf_counter() - t0) * 1000.0, 3)
    record = _jsonable(record)
    fmt = getattr(args, "format", "jsonl")
    text = _to_csv(record) if fmt == "csv" else json.dumps(record, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "a", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return record


def _to_csv(record: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["section", "key", "count", "freq", "chat", "ci_lo", "ci_hi"])
    for h in record.get("histogram", []):
        w.writerow(["histogram", h["mu"], h["count"], "", "", "", ""])
    for e in record.get("estimates", []):
        w.writerow(["estimate", e["threshold"], e["count"], e["freq"], e["chat"], e["ci_lo"], e["ci_hi"]])
    w.writerow(["rejected", "", record.get("rejected", ""), "", "", "", ""])
    return buf.getvalue()


def _thresholds(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(t) for t in text.split(",") if t.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad thresholds {text!r}") from exc


def _common(p, *, field_default=32003):
    p.add_argument("--field", type=int, default=field_default, help="prime field order q")
    p.add_argument("--out", help="append the record to this JSONL file")
    p.add_argument("--no-clock", action="store_true", help="omit wall-clock time (byte-reproducible output)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="splitlab", description="Splitting types of bundles on P^2 along rational curves.")
    ap.add_argument("--version", action="version", version=f"splitlab {version_string()}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("splitting", help="splitting type of one bundle on one curve")
    p.add_argument("--bundle", default="tangent")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--curve", help="curve file (field, degree, three form lines)")
    g.add_argument("--line", help="line a,b,c (dual coordinates)")
    p.add_argument("--degree", type=int, default=1, help="degree of a random curve")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, help="freeness constant for the extra codimension bound")
    _common(p)

    p = sub.add_parser("sample", help="sample random curves and histogram the defect")
    p.add_argument("--bundle", default="tangent")
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--thresholds", default="1")
    p.add_argument("--workers", type=int, help="worker processes (default: LAB_THREADS or CPU count)")
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    _common(p)

    p = sub.add_parser("lines", help="splitting on every line over a small field")
    p.add_argument("--bundle", default="tangent")
    _common(p, field_default=7)

    p = sub.add_parser("bounds", help="evaluate every applicable bound")
    for name in ("dQ", "e", "f", "k", "d", "dimM"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--g", type=int, default=0)
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--dimX", type=int, default=2)
    p.add_argument("--mu", type=Fraction)
    p.add_argument("--a-value", dest="a_value", type=Fraction)
    p.add_argument("--out")
    p.add_argument("--no-clock", action="store_true")

    p = sub.add_parser("verify-example", help="reproduce a worked example")
    p.add_argument("example", choices=("ramella", "schwarzenberger", "conic"))
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--degrees", default=None, help="comma list of curve degrees")
    _common(p, field_default=None)

    p = sub.add_parser("fitting", help="Fitting ideal generators and an adjugate certificate")
    p.add_argument("--bundle", default="schwarzenberger:4,0")
    p.add_argument("--j", type=int, default=None, help="Fitting index (default: the rank)")
    _common(p)
    return ap


def _cmd_splitting(args, t0):
    pres = resolve_bundle(args.bundle, args.field)
    F = pres.field
    if args.curve:
        s = loads_curve(Path(args.curve).read_text())
        if s.field != F:
            raise ConfigError(f"curve over {s.field}, bundle over {F}")
    elif args.line:
        s = line_map(tuple(int(x) % args.field for x in args.line.split(",")), args.field)
    else:
        rng = random.Random(f"{args.seed}:0")
        while True:
            forms = random_curve_forms(F, args.degree, rng)
            try:
                s = RationalCurveMap(forms)
                break
            except BasePointError:
                continue
    rep = jump_report(pres, s, k=args.k)
    c = chern(pres)
    return _emit(args, "splitting", {
        "config": {"bundle": str(args.bundle), "field_order": args.field, "seed": args.seed},
        "curve": s.to_json(),
        "chern": {"rank": c.rank, "c1": c.c1, "c2": c.c2},
        "report": rep.to_json(),
    }, t0)


def _cmd_sample(args, t0):
    cfg = ExperimentConfig(args.bundle, args.degree, args.field, args.trials, args.seed, _thresholds(args.thresholds))
    try:
        hist = sample_jump_distribution(cfg, workers=args.workers)
    except DegenerateSetupError as exc:
        _emit(args, "sample", {**exc.histogram.to_json(), "seed": args.seed, "degenerate": True}, t0)
        print(f"splitlab: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    _emit(args, "sample", {**hist.to_json(), "seed": args.seed}, t0)
    return EXIT_OK


def _cmd_lines(args, t0):
    table = enumerate_lines(args.bundle, args.field)
    return _emit(args, "lines", {
        "config": {"bundle": str(args.bundle), "field_order": args.field},
        "lines": [r.to_json() for r in table.records],
        "jumping": [list(r.line) for r in table.jumping_lines],
        "uncertified": [list(r.line) for r in table.uncertified],
    }, t0)


def _cmd_bounds(args, t0):
    inputs = B.BoundInputs(dQ=args.dQ, e=args.e, f=args.f, mu=args.mu, g=args.g, k=args.k,
                           rank=args.rank, dimX=args.dimX, d=args.d, a_value=args.a_value, dimM=args.dimM)
    vals = B.all_bounds(inputs)
    if not vals:
        raise ConfigError("no bound is computable from the given inputs")
    return _emit(args, "bounds", {"config": {k: v for k, v in vars(inputs).items() if v is not None},
                                  "bounds": vals}, t0)


def _cmd_verify(args, t0):
    degrees = [int(x) for x in args.degrees.split(",")] if args.degrees else None
    if args.example == "ramella":
        q = args.field or 101
        res = verify_ramella(degrees or range(1, 7), q, args.trials or 2000, args.seed)
        ok = all(v["balanced_fraction"] >= 0.95 for v in res.values())
    elif args.example == "schwarzenberger":
        q = args.field or 7
        res = verify_schwarzenberger(4, 0, q)
        ok = res["jumping_count"] == q + 1 and res["tangency"]["matches"]
    else:
        q = args.field or 101
        res = {d: verify_conic_example(d, q, args.trials or 200, args.seed) for d in (degrees or (1, 2, 3))}
        gaps = [res[d]["gap"] for d in sorted(res)]
        ok = all(a <= b for a, b in zip(gaps, gaps[1:]))
    _emit(args, "verify-example", {
        "config": {"example": args.example, "field_order": q, "trials": args.trials, "seed": args.seed},
        "result": res, "ok": ok,
    }, t0)
    return EXIT_OK


def _cmd_fitting(args, t0):
    pres = resolve_bundle(args.bundle, args.field)
    M = [list(row) for row in pres.matrix]
    if pres.kind == KERNEL:
        # the dual of a kernel bundle is the cokernel of the transposed matrix
        M = [list(col) for col in zip(*M)]
    n = len(M)
    j = pres.rank if args.j is None else args.j
    gens = fitting_generators(M, n, j)
    payload = {
        "config": {"bundle": str(args.bundle), "field_order": args.field, "j": j},
        "minor_size": gens.minor_size,
        "unit": gens.unit,
        "generators": [_form_text(f) for f in gens.minors],
    }
    r = min(len(M), len(M[0]))
    try:
        cert = adjugate_kernel(M, r)
        payload["certificate"] = cert.to_text()
        payload["det_in_generators"] = gens.minor_size == r and gens.contains_up_to_sign(cert.detA)
    except FittingError as exc:
        payload["certificate"] = None
        payload["certificate_error"] = str(exc)
    return _emit(args, "fitting", payload, t0)


def _form_text(f: HomForm) -> str:
    return " ".join(f"{c}:{','.join(map(str, m))}" for m, c in f.terms().items())


COMMANDS = {
    "splitting": _cmd_splitting,
    "sample": _cmd_sample,
    "lines": _cmd_lines,
    "bounds": _cmd_bounds,
    "verify-example": _cmd_verify,
    "fitting": _cmd_fitting,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        rc = COMMANDS[args.command](args, t0)
    except InvariantViolation as exc:
        print(f"splitlab: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ConfigError, FieldError, PresentationError, CertificationError, WindowError,
            B.BoundError, FittingError, ValueError, OSError) as exc:
        print(f"splitlab: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return rc if isinstance(rc, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
