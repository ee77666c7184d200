"""Command line front end.

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from . import __version__
from .analytics import half_transition_lambda
from .config import RunConfig, SweepConfig, canonical_json, config_hash
from .errors import ConfigError, GhzChainError, NoConvergence, ValidationError
from .output import write_csv, write_json
from .runner import (
    BENCH_COLUMNS,
    FIG1_VARIANTS,
    SWEEP_COLUMNS,
    TRAJECTORY_COLUMNS,
    run_bench,
    run_design,
    run_preset,
    run_sweep,
    simulate,
)

log = logging.getLogger("nwise_ghz")

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4

DEFAULT_RUN = {
    "chain": {"n_qubits": 4, "gamma_x": math.sqrt(half_transition_lambda())},
    "drive": {"kind": "linear_symmetric", "tau_i": -100.0, "tau_f": 100.0, "alpha": 1.0},
    "initial": "----",
}


def _read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})", field="config") from exc


def _common(p: argparse.ArgumentParser, *, config=True, parallel=False) -> None:
    if config:
        p.add_argument("--config", metavar="PATH", help="JSON configuration file")
    p.add_argument("--out", metavar="DIR", default=".", help="output directory (default: .)")
    p.add_argument("--tol", type=float, help="step-halving tolerance on amplitudes")
    p.add_argument("--samples", type=int, help="number of output samples")
    p.add_argument("--seed", type=int, help="seed recorded in the configuration")
    if parallel:
        p.add_argument("--parallel", type=int, default=1, metavar="J", help="worker processes")


def _run_overrides(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("model overrides")
    g.add_argument("--n", type=int, dest="n_qubits")
    g.add_argument("--lambda", type=float, dest="lambda_", help="sets gamma_x = sqrt(lambda * alpha)")
    g.add_argument("--gamma-x", type=float)
    g.add_argument("--gamma-y", type=float)
    g.add_argument("--gamma-z", type=float)
    g.add_argument("--kind", choices=["linear_symmetric", "linear_asymmetric", "tangent", "constant"])
    g.add_argument("--alpha", type=float)
    g.add_argument("--tau-i", type=float)
    g.add_argument("--tau-f", type=float)
    g.add_argument("--omega0", type=float)
    g.add_argument("--tangent-scale", type=float)
    g.add_argument("--initial", help="bitstring such as '----'; first character is the ancilla")
    g.add_argument("--method", choices=["pair", "full"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nwise-ghz",
        description="GHZ generation by a single sweep on one qubit of an N-wise coupled chain.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="single propagation -> trajectory.csv, report.json")
    _common(p)
    _run_overrides(p)

    p = sub.add_parser("fig1", help="preset sweeps a (full), b (half, symmetric), c (half, asymmetric)")
    p.add_argument("variant", choices=FIG1_VARIANTS)
    p.add_argument("--n", type=int, dest="n_qubits", default=4)
    _common(p, config=False)

    p = sub.add_parser("sweep", help="parameter sweep -> sweep.csv, manifest.json")
    _common(p, parallel=True)
    p.add_argument("--axis", choices=["lambda", "n", "tau_window"])
    p.add_argument("--values", help="comma-separated, strictly monotone")
    p.add_argument("--cross-check", action="store_true", help="compare with full-space runs (N <= 10)")

    p = sub.add_parser("bench", help="full-space vs pair propagation timing -> bench.csv")
    _common(p, config=False)
    p.add_argument("--n-list", default="2,4,6,8,10,12", help="comma-separated qubit counts")
    p.add_argument("--reps", type=int, default=1)

    p = sub.add_parser("design", help="slope and duration for a target transition -> design.json")
    p.add_argument("--out", metavar="DIR", default=".")
    p.add_argument("--gamma-hz", type=float, required=True)
    p.add_argument("--target", choices=["full", "half"], required=True)
    p.add_argument("--ramp", choices=["symmetric", "asymmetric"], default="symmetric")
    p.add_argument("--tau-window", type=float, default=200.0)
    p.add_argument("--approx", action="store_true", help="accept P = 1/2 - epsilon when 1/2 is unreachable")
    return parser


def _apply_common(doc: dict, args) -> dict:
    if args.tol is not None:
        doc["tol"] = args.tol
    if args.samples is not None:
        doc["n_samples"] = args.samples
    if args.seed is not None:
        doc["seed"] = args.seed
    return doc


def _apply_run_overrides(doc: dict, args) -> dict:
    chain, drive = doc.setdefault("chain", {}), doc.setdefault("drive", {})
    for attr, key in (("n_qubits", "n_qubits"), ("gamma_x", "gamma_x"), ("gamma_y", "gamma_y"), ("gamma_z", "gamma_z")):
        if getattr(args, attr) is not None:
            chain[key] = getattr(args, attr)
    for attr in ("kind", "alpha", "tau_i", "tau_f", "omega0", "tangent_scale"):
        if getattr(args, attr) is not None:
            drive[attr] = getattr(args, attr)
    if args.tau_f is not None and args.tau_i is None:
        if drive.get("kind") == "linear_symmetric":
            drive["tau_i"] = -args.tau_f
        elif drive.get("kind") == "linear_asymmetric":
            drive["tau_i"] = 0.0
    if args.lambda_ is not None:
        chain["gamma_x"] = math.sqrt(args.lambda_ * drive.get("alpha", 1.0))
    if args.initial is not None:
        doc["initial"] = args.initial
    elif args.n_qubits is not None and len(doc.get("initial", "")) != args.n_qubits:
        if len(set(doc.get("initial", "-"))) <= 1:
            doc["initial"] = (doc.get("initial") or "-")[0] * args.n_qubits
    if args.method is not None:
        doc["method"] = args.method
    return doc


def _out_dir(path: str) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _manifest(out: Path, cfg_hash: str, command: str, files, extra=None) -> None:
    doc = {"tool": "nwise-ghz", "version": __version__, "config_hash": cfg_hash,
           "command": command, "files": sorted(files)}
    if extra:
        doc.update(extra)
    write_json(out / "manifest.json", doc)


def _write_simulation(out: Path, result, command: str) -> None:
    cfg_hash = result.config.hash
    write_csv(out / "trajectory.csv", TRAJECTORY_COLUMNS, result.trajectory_rows(), cfg_hash)
    write_json(out / "report.json", result.report)
    _manifest(out, cfg_hash, command, ["trajectory.csv", "report.json"],
              {"config": result.report["config"]})


def cmd_simulate(args) -> int:
    doc = _read_json(args.config) if args.config else json.loads(json.dumps(DEFAULT_RUN))
    doc = _apply_run_overrides(_apply_common(doc, args), args)
    cfg = RunConfig.from_dict(doc)
    result = simulate(cfg)
    _write_simulation(_out_dir(args.out), result, "simulate")
    rep = result.report
    print(f"final P = {rep['final_p']:.6f}  tail P = {rep['tail_p']:.6f}  "
          f"fidelity = {rep['ghz']['fidelity']:.6f}")
    return EXIT_OK


def cmd_fig1(args) -> int:
    result = run_preset(args.variant, args.n_qubits, args.tol or 1e-10, args.samples or 2001)
    _write_simulation(_out_dir(args.out), result, f"fig1 {args.variant}")
    rep = result.report
    print(f"fig1{args.variant}: tail P = {rep['tail_p']:.6f}  reference = "
          f"{rep['reference_asymptote']:.6f}  deviation = {rep['deviation']:+.2e}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    if not args.config:
        raise ConfigError("sweep needs --config with a sweep document", field="config")
    raw = _read_json(args.config)
    base = raw.setdefault("base", {})
    _apply_common(base, args)
    if args.axis:
        raw["axis"] = args.axis
    if args.values:
        try:
            raw["values"] = [float(v) for v in args.values.split(",") if v.strip()]
        except ValueError as exc:
            raise ConfigError(f"values: {exc}", field="values") from exc
    if args.cross_check:
        raw["cross_check"] = True
    if args.parallel < 1:
        raise ConfigError("--parallel must be >= 1", field="parallel")
    sweep = SweepConfig.from_dict(raw)
    rows = run_sweep(sweep, args.parallel)
    out = _out_dir(args.out)
    write_csv(out / "sweep.csv", SWEEP_COLUMNS, rows, sweep.hash)
    _manifest(out, sweep.hash, "sweep", ["sweep.csv"], {"config": sweep.doc})
    failed = [r for r in rows if r["status"] != "ok"]
    for r in failed:
        print(f"point {r['value']}: {r['status']}", file=sys.stderr)
    return EXIT_NUMERICAL if failed else EXIT_OK


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"n-list: {exc}", field="n-list") from exc


def cmd_bench(args) -> int:
    n_list = _int_list(args.n_list)
    tol = args.tol or 1e-10
    samples = args.samples or 201
    inputs = {"n_list": n_list, "reps": args.reps, "tol": tol, "n_samples": samples}
    rows = run_bench(n_list, args.reps, tol, samples)
    out = _out_dir(args.out)
    cfg_hash = config_hash(inputs)
    write_csv(out / "bench.csv", BENCH_COLUMNS, rows, cfg_hash)
    _manifest(out, cfg_hash, "bench", ["bench.csv"], {"config": inputs})
    for r in rows:
        print(f"N={r['n_qubits']:2d}  full {r['t_full_s']:.3f}s  pair {r['t_pair_s']:.3f}s  "
              f"speedup {r['speedup']:.1f}x  deviation {r['max_deviation']:.1e}")
    return EXIT_OK if all(r["status"] == "ok" for r in rows) else EXIT_NUMERICAL


def cmd_design(args) -> int:
    design = run_design(args.gamma_hz, args.target, args.ramp, args.tau_window, args.approx)
    design["config_hash"] = config_hash(design["inputs"])
    for w in design["warnings"]:
        log.warning(w)
    out = _out_dir(args.out)
    write_json(out / "design.json", design)
    print(canonical_json({k: design[k] for k in ("lambda", "alpha_over_hbar_s2", "duration_s", "predicted_p")}))
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "fig1": cmd_fig1,
    "sweep": cmd_sweep,
    "bench": cmd_bench,
    "design": cmd_design,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NoConvergence as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except GhzChainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
