"""Command-line front end.

Subcommands: curve, selftest, simulate, sweep, compare. Exit codes are the
contract: 0 success, 1 run/selftest failure, 2 configuration or validation
error (with a machine-readable {"error": kind, "message": ...} emitted).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import catalog, codes, curves, sim
from .exceptions import AgdmmError, ConfigInvalid, DecodeFailed
from .linalg import Matrix, matmul


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error_json(exc):
    kind = exc.kind if isinstance(exc, AgdmmError) else type(exc).__name__
    return json.dumps({"error": kind, "message": str(exc)}) + "\n"


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigInvalid(f"cannot read config {path}: {exc}") from exc


def _require_config(args):
    if not args.config:
        raise ConfigInvalid("this command needs --config <path>")
    return _load_json(args.config)


# -- curve ---------------------------------------------------------------------

def cmd_curve(args):
    curve = curves.curve_from_json(_require_config(args))
    census = curves.place_census(curve)
    pd = curves.pole_data(curve)
    deg = curves.extension_degree(curve)
    poly_rep = curves.verify_friendly(curve, "poly", deg)
    matdot_rep = curves.verify_friendly(curve, "matdot", deg)
    report = {
        "kind": curve.kind,
        "field": curve.field.to_json(),
        "extension_degree": deg,
        "genus": curves.genus(curve),
        "rational_places": census["total"],
        "census": {k: v for k, v in census.items() if k != "total"},
        "pole_data": {
            "y_pole_x_codes": list(pd.y_pole_x_codes),
            "y_pole_at_infinity": pd.y_pole_at_infinity,
            "y_pole_degree": pd.y_pole_degree,
            "x_pole_degree": pd.x_pole_degree,
        },
        "hasse_weil_ok": curves.hasse_weil_check(curve),
        "friendly": {
            "poly": {"m": deg, "passed": poly_rep.passed,
                     "checks": dict(poly_rep.checks)},
            "matdot": {"m": deg, "passed": matdot_rep.passed,
                       "checks": dict(matdot_rep.checks)},
        },
    }
    if args.format == "csv":
        buf = io.StringIO()
        curves.places_to_csv(curve, buf)
        _emit(buf.getvalue(), args.out)
    elif args.format == "json":
        _emit(json.dumps(report, indent=2) + "\n", args.out)
    else:
        lines = [
            f"{curve.kind} curve over GF({curve.field.q}), extension degree {deg}",
            f"  genus:            {report['genus']}",
            f"  rational places:  {report['rational_places']}  {report['census']}",
            f"  pole data:        y {pd.y_pole_degree} (at infinity: {pd.y_pole_at_infinity}), "
            f"x {pd.x_pole_degree}",
            f"  hasse-weil bound: {'ok' if report['hasse_weil_ok'] else 'VIOLATED'}",
            f"  poly-friendly(m={deg}):   {'pass' if poly_rep.passed else 'fail'}",
            f"  matdot-friendly(m={deg}): {'pass' if matdot_rep.passed else 'fail'}",
        ]
        _emit("\n".join(lines) + "\n", args.out)
    return 0


# -- selftest --------------------------------------------------------------------

def _selftest_checks(seed):
    """(name, callable) pairs; each callable returns (passed, detail)."""

    def curve_check(builder, want_genus, want_places):
        def run():
            curve = builder()
            g = curves.genus(curve)
            n = len(curves.enumerate_places(curve))
            ok = g == want_genus and n == want_places
            return ok, f"genus {g} (want {want_genus}), places {n} (want {want_places})"
        return run

    def threshold_check(make_params, want):
        def run():
            got = codes.recovery_threshold(make_params())
            return got == want, f"threshold {got} (want {want})"
        return run

    def roundtrip_check(make_params):
        def run():
            params = make_params()
            rng = np.random.default_rng(seed)
            a = Matrix.random(params.curve.field, params.r, params.s, rng)
            b = Matrix.random(params.curve.field, params.s, params.t, rng)
            desc = codes.basis_descriptor(params)
            usable = curves.usable_places(params.curve, params.scheme)
            blocks = codes.partition(a, b, params)
            tasks = codes.encode(blocks[0], blocks[1], desc, usable[:desc.threshold])
            results = [codes.worker_multiply(t)[0] for t in tasks]
            decoded = codes.decode(results, desc, params)
            direct, _ = matmul(a, b)
            return decoded == direct, f"decode from {desc.threshold} responses"
        return run

    ex1 = catalog.kummer_gf25_degree8
    ex2 = catalog.trace_gf27_degree9
    ex3 = catalog.kummer_gf25_matdot3
    return [
        ("kummer-gf25-deg8 curve data", curve_check(ex1, 7, 52)),
        ("trace-gf27-deg9 curve data", curve_check(ex2, 8, 56)),
        ("kummer-gf25-cubic curve data", curve_check(ex3, 2, 46)),
        ("poly_ag threshold (m=8, n=5)", threshold_check(
            lambda: codes.scheme_params("poly_ag", ex1(), 8, 5, r=16, s=6, t=10), 47)),
        ("rational_poly threshold (m=4, n=6)", threshold_check(
            lambda: codes.scheme_params("rational_poly", catalog.rational_gf25(),
                                        4, 6, r=8, s=6, t=12), 24)),
        ("matdot_ag threshold (m=3)", threshold_check(
            lambda: codes.scheme_params("matdot_ag", ex3(), 3, r=6, s=6, t=6), 9)),
        ("rational_matdot threshold (m=3)", threshold_check(
            lambda: codes.scheme_params("rational_matdot", catalog.rational_gf25(),
                                        3, r=4, s=6, t=5), 5)),
        ("poly_ag end-to-end decode", roundtrip_check(
            lambda: codes.scheme_params("poly_ag", ex1(), 8, 5, r=16, s=6, t=10))),
        ("rational_poly end-to-end decode", roundtrip_check(
            lambda: codes.scheme_params("rational_poly", catalog.rational_gf25(),
                                        4, 6, r=8, s=6, t=12))),
        ("matdot_ag end-to-end decode", roundtrip_check(
            lambda: codes.scheme_params("matdot_ag", ex3(), 3, r=6, s=6, t=6))),
        ("rational_matdot end-to-end decode", roundtrip_check(
            lambda: codes.scheme_params("rational_matdot", catalog.rational_gf25(),
                                        3, r=4, s=6, t=5))),
    ]


def run_selftest(seed=0):
    rows = []
    for name, fn in _selftest_checks(seed):
        try:
            passed, detail = fn()
        except Exception as exc:  # a crash is a failure, not an abort
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        rows.append({"check": name, "passed": bool(passed), "detail": detail})
    return rows


def cmd_selftest(args):
    rows = run_selftest(seed=args.seed if args.seed is not None else 0)
    if args.format == "json":
        _emit(json.dumps(rows, indent=2) + "\n", args.out)
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["check", "passed", "detail"])
        writer.writeheader()
        writer.writerows(rows)
        _emit(buf.getvalue(), args.out)
    else:
        width = max(len(r["check"]) for r in rows)
        lines = [f"{r['check']:<{width}}  {'PASS' if r['passed'] else 'FAIL'}  {r['detail']}"
                 for r in rows]
        n_bad = sum(not r["passed"] for r in rows)
        lines.append(f"{len(rows) - n_bad}/{len(rows)} checks passed")
        _emit("\n".join(lines) + "\n", args.out)
    return 0 if all(r["passed"] for r in rows) else 1


# -- simulate / sweep ------------------------------------------------------------

def _sim_config(args, allow_sweep=False):
    obj = _require_config(args)
    sweep_spec = obj.pop("sweep", None) if allow_sweep else None
    cfg = sim.sim_config_from_json(obj)
    if args.seed is not None:
        from dataclasses import replace
        cfg = replace(cfg, rng_seed=args.seed)
    return cfg, sweep_spec


def cmd_simulate(args):
    cfg, _ = _sim_config(args)
    try:
        report = sim.run_simulation(cfg)
    except DecodeFailed as exc:
        _emit(_error_json(exc), args.out)
        return 1
    payload = report.to_json_dict()
    if args.format == "pretty":
        lines = [
            f"scheme {report.scheme}: {report.workers} workers, threshold {report.threshold}",
            f"  decode:    {'ok' if report.decode_success else 'FAILED'}",
            f"  headroom:  {report.max_stragglers_tolerated} stragglers tolerated",
            f"  ops:       {report.op_counts}",
        ]
        _emit("\n".join(lines) + "\n", args.out)
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["scheme", "workers", "threshold", "decode_success",
                         "max_stragglers_tolerated"])
        writer.writerow([report.scheme, report.workers, report.threshold,
                         int(report.decode_success), report.max_stragglers_tolerated])
        _emit(buf.getvalue(), args.out)
    else:
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0 if report.decode_success else 1


_SWEEP_KEYS = {"k_min", "k_max", "trials"}


def cmd_sweep(args):
    cfg, sweep_spec = _sim_config(args, allow_sweep=True)
    if sweep_spec is None:
        raise ConfigInvalid("sweep config needs a 'sweep' section")
    extra = set(sweep_spec) - _SWEEP_KEYS
    if extra:
        raise ConfigInvalid(f"unknown sweep keys {sorted(extra)}")
    k_min = int(sweep_spec.get("k_min", 0))
    k_max = int(sweep_spec["k_max"]) if "k_max" in sweep_spec else cfg.workers
    trials = int(sweep_spec.get("trials", 3))
    rows = sim.straggler_sweep(cfg, range(k_min, k_max + 1), trials=trials)
    if args.format == "json":
        _emit(json.dumps(rows, indent=2) + "\n", args.out)
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["k", "trials", "successes", "rate"])
        writer.writeheader()
        writer.writerows(rows)
        _emit(buf.getvalue(), args.out)
    headroom = cfg.workers - codes.recovery_threshold(cfg.params)
    return 0 if all(row["rate"] == 1.0 for row in rows if row["k"] <= headroom) else 1


# -- compare ---------------------------------------------------------------------

_COMPARE_KEYS = {"curve", "m", "n", "r", "s", "t", "rational_m", "rational_n"}


def cmd_compare(args):
    obj = _require_config(args)
    extra = set(obj) - _COMPARE_KEYS
    if extra:
        raise ConfigInvalid(f"unknown compare keys {sorted(extra)}")
    missing = {"curve", "m", "r", "s", "t"} - set(obj)
    if missing:
        raise ConfigInvalid(f"missing compare keys {sorted(missing)}")
    curve = curves.curve_from_json(obj["curve"])
    n = obj.get("n")
    report = sim.compare_rational_baseline(
        curve, int(obj["m"]), None if n is None else int(n),
        (int(obj["r"]), int(obj["s"]), int(obj["t"])),
        rational_m=obj.get("rational_m"), rational_n=obj.get("rational_n"))
    if args.format == "pretty":
        lines = [f"{report['mode']} comparison over GF({curve.field.q}), dims {report['dims']}"]
        for side in ("curve", "rational"):
            col = report[side]
            lines.append(f"  {side:<9} kind={col['curve_kind']} genus={col['genus']} "
                         f"R={col['threshold']} max_workers={col['max_workers']} "
                         f"headroom={col['straggler_headroom']} worker_mults={col['worker_mults']}")
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(json.dumps(report, indent=2) + "\n", args.out)
    return 0


# -- entry point -----------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="agdmm",
        description="Coded distributed matrix multiplication over function fields")
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="path to a JSON config file")
    common.add_argument("--out", help="write output to this path instead of stdout")
    common.add_argument("--format", choices=["json", "csv", "pretty"], default="pretty")
    common.add_argument("--seed", type=int, default=None, help="override the run seed")
    sub.add_parser("curve", parents=[common],
                   help="inspect a curve: genus, places, pole data, friendliness")
    sub.add_parser("selftest", parents=[common],
                   help="run the built-in reference checks")
    sub.add_parser("simulate", parents=[common],
                   help="run one straggler simulation from a config file")
    sub.add_parser("sweep", parents=[common],
                   help="sweep straggler counts and report success rates")
    sub.add_parser("compare", parents=[common],
                   help="compare a curve against the rational baseline")
    return parser


_COMMANDS = {
    "curve": cmd_curve,
    "selftest": cmd_selftest,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "compare": cmd_compare,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except AgdmmError as exc:
        sys.stdout.write(_error_json(exc))
        return 2


def entrypoint():
    raise SystemExit(main())
