"""High-level runs behind the command line: simulate, presets, sweeps, bench, design.

Everything here returns plain data; :mod:`nwise_ghz.output` turns it into files.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .analytics import (
    DimensionlessParams,
    HardwareParams,
    RampKind,
    adiabaticity,
    asymptotic_probability,
    estimate_duration,
    half_transition_lambda,
    lambda_for_probability,
    tail_average,
)
from .config import RunConfig, SweepConfig
from .errors import DimensionTooLarge, GhzChainError, UnreachableTarget, ValidationError
from .ghz import pair_report
from .model import ChainSpec, DriveKind, DriveProfile, build_chain, format_bitstring
from .propagator import (
    MAX_FULL_QUBITS,
    embed_pair_trajectory,
    propagate_full,
    propagate_two_level,
)
from .subspace import effective_two_level, ghz_pair, pair_of

__all__ = [
    "SimulationResult",
    "simulate",
    "preset_config",
    "run_preset",
    "run_sweep",
    "run_bench",
    "run_design",
    "TRAJECTORY_COLUMNS",
    "SWEEP_COLUMNS",
    "BENCH_COLUMNS",
    "FIG1_VARIANTS",
    "DESIGN_EPSILON",
    "FULL_TRANSITION_LAMBDA",
]

TOOL = "nwise-ghz"
TRAJECTORY_COLUMNS = ("tau", "p_target", "p_initial", "re_a", "im_a", "re_b", "im_b", "norm")
SWEEP_COLUMNS = (
    "value",
    "status",
    "final_p",
    "tail_p",
    "reference",
    "deviation",
    "fidelity",
    "oracle_deviation",
    "wall_time_s",
)
BENCH_COLUMNS = (
    "n_qubits",
    "reps",
    "t_full_s",
    "t_pair_s",
    "speedup",
    "max_deviation",
    "status",
)
FIG1_VARIANTS = ("a", "b", "c")
# distance below the 1/2 ceiling used when an asymmetric half transition is requested
DESIGN_EPSILON = 1e-3
# lambda used for "full transition" designs
FULL_TRANSITION_LAMBDA = 2.0
# largest N for which sweeps run the full-space cross-check
CROSS_CHECK_MAX_N = 10


def _ramp_kind(drive: DriveProfile) -> RampKind | None:
    if drive.kind is DriveKind.LINEAR_SYMMETRIC:
        return RampKind.SYMMETRIC
    if drive.kind is DriveKind.LINEAR_ASYMMETRIC:
        return RampKind.ASYMMETRIC
    return None


@dataclass(frozen=True)
class SimulationResult:
    config: RunConfig
    taus: np.ndarray
    amp_rep: np.ndarray
    amp_partner: np.ndarray
    norms: np.ndarray
    report: dict

    def trajectory_rows(self):
        initial = self.report["initial_index"]
        rep = self.report["pair"][0]
        a, b = self.amp_rep, self.amp_partner
        p_a, p_b = np.abs(a) ** 2, np.abs(b) ** 2
        p_initial, p_target = (p_a, p_b) if initial == rep else (p_b, p_a)
        return np.column_stack(
            (self.taus, p_target, p_initial, a.real, a.imag, b.real, b.imag, self.norms)
        )


def simulate(cfg: RunConfig) -> SimulationResult:
    """One propagation from a basis state, with P(tau) and GHZ diagnostics."""
    model = cfg.model()
    doc = cfg.doc
    n = model.n_qubits
    initial = cfg.initial_index
    pair = pair_of(initial, n)
    target = pair.other(initial)
    problem = effective_two_level(model, pair)

    extra = {}
    if doc["method"] == "pair":
        traj = propagate_two_level(problem, initial, doc["tol"], doc["n_samples"])
        a, b = traj.amplitudes[:, 0], traj.amplitudes[:, 1]
        norms = traj.norms
    else:
        traj = propagate_full(model, initial, doc["tol"], doc["n_samples"])
        a, b = traj.amplitudes[:, pair.representative], traj.amplitudes[:, pair.partner]
        norms = traj.norms
        extra["leakage"] = float(np.max(norms - np.abs(a) ** 2 - np.abs(b) ** 2))

    p_target = np.abs(b if target == pair.partner else a) ** 2
    ghz = pair_report(complex(a[-1]), complex(b[-1]))

    lam = model.lambda_
    lam_eff = problem.lambda_effective
    ramp = _ramp_kind(model.drive)
    reference = asymptotic_probability(lam_eff, ramp) if ramp is not None else None
    tail_p = tail_average(p_target)
    klass = adiabaticity(DimensionlessParams(lam_eff))[0].value if lam_eff is not None else None

    integrator = {
        k: traj.meta[k]
        for k in ("method", "tol", "h", "n_steps", "total_steps", "refinements", "halving_change")
    }
    report = {
        "tool": TOOL,
        "version": __version__,
        "config_hash": cfg.hash,
        "config": {k: v for k, v in doc.items() if k != "outputs"},
        "route": traj.meta["route"],
        "n_qubits": n,
        "initial": doc["initial"],
        "initial_index": initial,
        "target": format_bitstring(target, n),
        "target_index": target,
        "pair": [pair.representative, pair.partner],
        "coupling": [problem.coupling.real, problem.coupling.imag],
        "lambda": lam,
        "lambda_effective": lam_eff,
        "adiabaticity": klass,
        "diagonal_dynamics": model.spec.is_diagonal,
        "final_p": float(p_target[-1]),
        "tail_p": tail_p,
        "tail_fraction": 0.1,
        "reference_asymptote": reference,
        "reference_formula": None if ramp is None else (
            "1 - exp(-2 pi lambda)" if ramp is RampKind.SYMMETRIC else "(1 - exp(-pi lambda / 2)) / 2"
        ),
        "deviation": None if reference is None else tail_p - reference,
        "max_norm_drift": float(np.max(np.abs(norms - 1))),
        "ghz": ghz.as_dict(),
        "integrator": integrator,
        **extra,
    }
    return SimulationResult(cfg, traj.taus, a, b, norms, report)


def preset_config(
    variant: str, n_qubits: int = 4, tol: float = 1e-10, n_samples: int = 2001
) -> RunConfig:
    """Configurations for the three sweep scenarios.

    a: lambda = 2, symmetric ramp on [-100, 100] (full inversion)
    b: lambda = ln2 / 2pi, symmetric ramp on [-100, 100] (half transition)
    c: lambda = 2, ramp from the crossing, [0, 100]
    """
    if variant not in FIG1_VARIANTS:
        raise ValidationError(f"variant must be one of {FIG1_VARIANTS}, got {variant!r}")
    lam = half_transition_lambda() if variant == "b" else 2.0
    if variant == "c":
        drive = {"kind": "linear_asymmetric", "tau_i": 0.0, "tau_f": 100.0, "alpha": 1.0}
    else:
        drive = {"kind": "linear_symmetric", "tau_i": -100.0, "tau_f": 100.0, "alpha": 1.0}
    return RunConfig.from_dict(
        {
            "chain": {"n_qubits": n_qubits, "gamma_x": math.sqrt(lam)},
            "drive": drive,
            "initial": "-" * n_qubits,
            "tol": tol,
            "n_samples": n_samples,
        }
    )


def run_preset(variant: str, n_qubits: int = 4, tol: float = 1e-10, n_samples: int = 2001):
    """Run a preset and also record phi* for the doubled window."""
    cfg = preset_config(variant, n_qubits, tol, n_samples)
    result = simulate(cfg)
    tau_f = cfg.doc["drive"]["tau_f"]
    doubled = {"drive.tau_f": 2 * tau_f}
    if cfg.doc["drive"]["kind"] == "linear_symmetric":
        doubled["drive.tau_i"] = -2 * tau_f
    longer = simulate(cfg.with_updates(**doubled))
    result.report["variant"] = variant
    result.report["phi_star_doubled_window"] = longer.report["ghz"]["phi_star"]
    result.report["tail_p_doubled_window"] = longer.report["tail_p"]
    return result


def _sweep_point(args):
    sweep, value = args
    start = time.perf_counter()
    row = dict.fromkeys(SWEEP_COLUMNS)
    row["value"] = value
    try:
        cfg = sweep.point(value)
        result = simulate(cfg)
        rep = result.report
        row.update(
            status="ok",
            final_p=rep["final_p"],
            tail_p=rep["tail_p"],
            reference=rep["reference_asymptote"],
            deviation=rep["deviation"],
            fidelity=rep["ghz"]["fidelity"],
        )
        if sweep.cross_check and cfg.n_qubits <= CROSS_CHECK_MAX_N:
            model = cfg.model()
            full = propagate_full(model, cfg.initial_index, cfg.doc["tol"], cfg.doc["n_samples"])
            rep_i, par_i = rep["pair"]
            dev = max(
                np.max(np.abs(full.amplitudes[:, rep_i] - result.amp_rep)),
                np.max(np.abs(full.amplitudes[:, par_i] - result.amp_partner)),
            )
            row["oracle_deviation"] = float(dev)
    except GhzChainError as exc:
        row["status"] = f"error: {type(exc).__name__}: {exc}"
    row["wall_time_s"] = time.perf_counter() - start
    return row


def run_sweep(sweep: SweepConfig, parallel: int = 1) -> list[dict]:
    """One row per sweep value, in the order the values were given."""
    jobs = [(sweep, v) for v in sweep.values]
    if parallel > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            return list(pool.map(_sweep_point, jobs))
    return [_sweep_point(job) for job in jobs]


def run_bench(
    n_list, reps: int = 1, tol: float = 1e-10, n_samples: int = 201, lambda_: float = 2.0,
    tau_f: float = 100.0,
) -> list[dict]:
    """Full-space versus single-pair propagation of the GHZ pair."""
    if reps < 1:
        raise ValidationError(f"reps must be >= 1, got {reps}")
    n_list = list(n_list)
    if not n_list:
        raise ValidationError("n_list must not be empty")
    if max(n_list) > MAX_FULL_QUBITS:
        raise DimensionTooLarge(f"bench is limited to N <= {MAX_FULL_QUBITS}")
    rows = []
    for n in n_list:
        model = build_chain(ChainSpec(n, math.sqrt(lambda_)), DriveProfile.symmetric(tau_f))
        pair = ghz_pair(n)
        problem = effective_two_level(model, pair)
        t_full = t_pair = 0.0
        for _ in range(reps):
            start = time.perf_counter()
            full = propagate_full(model, pair.representative, tol, n_samples)
            t_full += time.perf_counter() - start
            start = time.perf_counter()
            reduced = propagate_two_level(problem, "representative", tol, n_samples)
            t_pair += time.perf_counter() - start
        deviation = float(np.max(np.abs(embed_pair_trajectory(reduced, n) - full.amplitudes)))
        rows.append(
            {
                "n_qubits": n,
                "reps": reps,
                "t_full_s": t_full / reps,
                "t_pair_s": t_pair / reps,
                "speedup": t_full / t_pair if t_pair > 0 else math.inf,
                "max_deviation": deviation,
                "status": "ok" if deviation <= 1e-8 else "deviation above 1e-8",
            }
        )
    return rows


def run_design(
    gamma_hz: float,
    target: str,
    ramp_kind,
    tau_window: float,
    approx: bool = False,
    epsilon: float = DESIGN_EPSILON,
) -> dict:
    """Sweep slope and duration that realise a full or half transition."""
    if not gamma_hz > 0:
        raise ValidationError(f"gamma_hz must be positive, got {gamma_hz}")
    ramp = RampKind(ramp_kind)
    warnings = []
    if target == "full":
        if ramp is RampKind.ASYMMETRIC:
            raise UnreachableTarget("a ramp starting at the crossing never exceeds P = 1/2")
        lam = FULL_TRANSITION_LAMBDA
    elif target == "half":
        if ramp is RampKind.SYMMETRIC:
            lam = half_transition_lambda()
        elif not approx:
            raise UnreachableTarget(
                "P = 1/2 is the supremum for a ramp starting at the crossing; "
                "pass --approx to target 1/2 - epsilon"
            )
        else:
            lam = lambda_for_probability(0.5 - epsilon, ramp)
            warnings.append(f"targeting P = 1/2 - {epsilon:g}; exact 1/2 is unreachable")
    else:
        raise ValidationError(f"target must be 'full' or 'half', got {target!r}")
    est = estimate_duration(HardwareParams(gamma_hz, lam, tau_window))
    return {
        "tool": TOOL,
        "version": __version__,
        "inputs": {
            "gamma_hz": gamma_hz,
            "target": target,
            "ramp_kind": ramp.value,
            "tau_window": tau_window,
            "approx": approx,
            "epsilon": epsilon if (approx and target == "half" and ramp is RampKind.ASYMMETRIC) else None,
        },
        "lambda": lam,
        "adiabaticity": adiabaticity(DimensionlessParams(lam))[0].value,
        "alpha_over_hbar_s2": est.alpha_over_hbar,
        "duration_s": est.duration_s,
        "predicted_p": asymptotic_probability(lam, ramp),
        "convention": est.convention,
        "warnings": warnings,
    }
