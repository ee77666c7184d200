"""Time-dependent Schrodinger propagation for pair problems and the full chain.

Both routes solve ``i d psi / d tau = H(tau) / time_scale psi`` with an 8th
order Runge-Kutta tableau whose local step is ``h / (1 + |H(tau)|)``, so steps
shrink where the detuning is large.  A run is accepted once halving ``h``
changes every sampled amplitude by at most ``tol``; the finer of the two runs
is returned.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernel
from .errors import (
    DimensionMismatch,
    DimensionTooLarge,
    NoConvergence,
    TargetOutOfRange,
    ValidationError,
)
from .model import ChainModel, DriveKind, DriveProfile, TANGENT_CLAMP, basis_state
from .subspace import TwoLevelProblem

__all__ = [
    "TrajectoryRecord",
    "propagate_two_level",
    "propagate_full",
    "transition_probability",
    "embed_pair_trajectory",
    "DEFAULT_TOL",
    "DEFAULT_SAMPLES",
    "MAX_FULL_QUBITS",
]

DEFAULT_TOL = 1e-10
DEFAULT_SAMPLES = 2001
MAX_FULL_QUBITS = 14
TOL_RANGE = (1e-13, 1e-6)

_H_START = 1.0
_H_MIN = 1.0 / 2**12
# amplitude entries kept in memory by a single full-space run
_MAX_STORED = 1 << 27


@dataclass(frozen=True)
class TrajectoryRecord:
    """Sampled amplitudes of one propagation.

    ``basis`` lists the computational basis index of each amplitude column
    for pair runs, ``(representative, partner)``; it is None for full runs,
    where column ``b`` is basis state ``b``.
    """

    taus: np.ndarray
    amplitudes: np.ndarray
    basis: tuple[int, ...] | None = None
    meta: dict = field(default_factory=dict)

    @property
    def final(self) -> np.ndarray:
        return self.amplitudes[-1]

    @property
    def norms(self) -> np.ndarray:
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)

    def column(self, target) -> int:
        """Resolve a target (basis index or pair label) to a column."""
        n_cols = self.amplitudes.shape[1]
        if isinstance(target, str):
            if self.basis is None:
                raise TargetOutOfRange("labels only apply to pair trajectories")
            try:
                return {"representative": 0, "rep": 0, "partner": 1}[target]
            except KeyError:
                raise TargetOutOfRange(f"unknown label {target!r}") from None
        if isinstance(target, (bool, np.bool_)) or not isinstance(target, (int, np.integer)):
            raise TargetOutOfRange(f"target must be a basis index or label, got {target!r}")
        if self.basis is not None:
            if target not in self.basis:
                raise TargetOutOfRange(f"basis state {target} is not in pair {self.basis}")
            return self.basis.index(target)
        if not 0 <= target < n_cols:
            raise TargetOutOfRange(f"basis index {target} outside [0, {n_cols})")
        return int(target)


def _check_tol(tol: float, n_samples: int) -> None:
    if not TOL_RANGE[0] <= tol <= TOL_RANGE[1]:
        raise ValidationError(f"tol must lie in [{TOL_RANGE[0]}, {TOL_RANGE[1]}], got {tol}")
    if n_samples < 2:
        raise ValidationError(f"n_samples must be >= 2, got {n_samples}")


def _drive_code(drive: DriveProfile) -> tuple[int, np.ndarray]:
    scale = drive.time_scale
    if drive.kind.is_linear:
        # sqrt(alpha) * tau / 2 divided by sqrt(alpha)
        return _kernel.DRIVE_LINEAR, np.array([0.5, drive.tau_f, TANGENT_CLAMP])
    if drive.kind is DriveKind.CONSTANT:
        return _kernel.DRIVE_CONSTANT, np.array([drive.omega0 / scale, drive.tau_f, TANGENT_CLAMP])
    return _kernel.DRIVE_TANGENT, np.array(
        [drive.tangent_scale / scale, drive.tau_f, TANGENT_CLAMP]
    )


def _clamp_points(drive: DriveProfile) -> list[float]:
    """Times where the clamped tangent drive has a kink."""
    if drive.kind is not DriveKind.TANGENT:
        return []
    edge = drive.tau_f * (1 - 2 * TANGENT_CLAMP / math.pi)
    return [t for t in (-edge, edge) if drive.tau_i < t < drive.tau_f]


def _with_breakpoints(taus: np.ndarray, points) -> tuple[np.ndarray, np.ndarray]:
    """Insert extra stopping times so no step straddles a kink in the drive.

    Returns the stepping grid and the indices of the original samples in it.
    """
    extra = [t for t in points if t not in taus]
    if not extra:
        return taus, np.arange(len(taus))
    grid = np.sort(np.concatenate([taus, extra]))
    return grid, np.searchsorted(grid, taus)


def _solve(psi0, drive, z, d, f, tol, n_samples):
    """Step-halving driver around the compiled integrator."""
    taus = np.linspace(drive.tau_i, drive.tau_f, n_samples)
    scale = drive.time_scale
    kind, params = _drive_code(drive)
    z = np.ascontiguousarray(z, dtype=np.float64)
    d = np.ascontiguousarray(d / scale, dtype=np.float64)
    f = np.ascontiguousarray(f / scale, dtype=np.complex128)
    static_norm = float(np.max(np.abs(d)) + np.max(np.abs(f)))
    psi0 = np.ascontiguousarray(psi0, dtype=np.complex128)
    grid, keep = _with_breakpoints(taus, _clamp_points(drive))

    def run(h):
        out, steps = _kernel.integrate(psi0, grid, h, kind, params, z, d, f, static_norm)
        return out[keep], steps

    h = _H_START
    coarse, steps = run(h)
    total = steps
    refinements = 0
    while True:
        fine, steps = run(h / 2)
        total += steps
        refinements += 1
        change = float(np.max(np.abs(fine - coarse)))
        h /= 2
        if change <= tol:
            break
        if h / 2 < _H_MIN:
            raise NoConvergence(
                f"step halving stalled at h={h:.3g} with change {change:.3g} > tol={tol:.3g}"
            )
        coarse = fine
    stats = {
        "method": f"fixed-tableau RK{_kernel.ORDER}, step = h/(1+|H|), step-halving acceptance",
        "tol": tol,
        "h": h,
        "n_steps": steps,
        "total_steps": total,
        "refinements": refinements,
        "halving_change": change,
    }
    return taus, fine, stats


def propagate_two_level(
    problem: TwoLevelProblem,
    initial="representative",
    tol: float = DEFAULT_TOL,
    n_samples: int = DEFAULT_SAMPLES,
) -> TrajectoryRecord:
    """Propagate one invariant pair from one of its two basis states.

    ``initial`` is ``"representative"``, ``"partner"`` or the basis index of
    either.  The trace of the pair Hamiltonian is removed before integration
    and restored as an exact global phase.
    """
    _check_tol(tol, n_samples)
    pair = problem.pair
    if isinstance(initial, str):
        labels = {"representative": 0, "rep": 0, "partner": 1}
        if initial not in labels:
            raise ValidationError(f"unknown initial label {initial!r}")
        start = labels[initial]
    elif initial in pair:
        start = pair.indices.index(initial)
    else:
        raise ValidationError(f"initial state {initial!r} is not in pair {pair.indices}")

    s = problem.detuning_sign
    d_rep, d_par = problem.diagonal_offset
    mean = (d_rep + d_par) / 2
    z = np.array([s, -s], dtype=float)
    d = np.array([d_rep - mean, d_par - mean])
    c = problem.coupling
    f = np.array([np.conj(c), c])
    psi0 = np.zeros(2, dtype=complex)
    psi0[start] = 1.0

    drive = problem.drive
    taus, amps, stats = _solve(psi0, drive, z, d, f, tol, n_samples)
    if mean != 0:
        amps = amps * np.exp(-1j * mean / drive.time_scale * (taus - taus[0]))[:, None]
    meta = {
        "route": "pair",
        "pair": pair.indices,
        "initial": pair.indices[start],
        "n_qubits": pair.n_qubits,
        "drive": drive,
        "coupling": c,
        **stats,
    }
    return TrajectoryRecord(taus, amps, pair.indices, meta)


def propagate_full(
    model: ChainModel,
    initial,
    tol: float = DEFAULT_TOL,
    n_samples: int = DEFAULT_SAMPLES,
) -> TrajectoryRecord:
    """Propagate the whole 2**N state vector with the matrix-free action.

    ``initial`` is a basis index or a state vector of length 2**N.
    """
    _check_tol(tol, n_samples)
    n = model.n_qubits
    if n > MAX_FULL_QUBITS:
        raise DimensionTooLarge(f"full-space runs are limited to N <= {MAX_FULL_QUBITS}")
    if n_samples * model.dim > _MAX_STORED:
        raise DimensionTooLarge(
            f"{n_samples} samples x {model.dim} amplitudes exceeds the storage limit; "
            "request fewer samples"
        )
    if isinstance(initial, (int, np.integer)):
        psi0 = basis_state(n, int(initial))
    else:
        psi0 = np.asarray(initial, dtype=complex)
        if psi0.shape != (model.dim,):
            raise DimensionMismatch(f"initial state has shape {psi0.shape}, expected ({model.dim},)")
    terms = model.terms
    taus, amps, stats = _solve(
        psi0, model.drive, terms.drive_pattern, terms.static_diag, terms.flip, tol, n_samples
    )
    meta = {"route": "full", "n_qubits": n, "drive": model.drive, **stats}
    return TrajectoryRecord(taus, amps, None, meta)


def transition_probability(traj: TrajectoryRecord, target) -> np.ndarray:
    """``(n_samples, 2)`` array of ``(tau, |<target|psi(tau)>|**2)``."""
    col = traj.column(target)
    return np.column_stack((traj.taus, np.abs(traj.amplitudes[:, col]) ** 2))


def embed_pair_trajectory(traj: TrajectoryRecord, n_qubits: int) -> np.ndarray:
    """Pair amplitudes placed into ``(n_samples, 2**N)`` arrays."""
    if traj.basis is None:
        raise ValidationError("trajectory is already full-space")
    out = np.zeros((len(traj.taus), 1 << n_qubits), dtype=complex)
    for col, index in enumerate(traj.basis):
        out[:, index] = traj.amplitudes[:, col]
    return out

