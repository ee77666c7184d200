"""Chain Hamiltonian with an all-qubit coupling and a drive on the ancilla.

Basis convention: a computational basis index ``b`` has bit ``k`` set when
spin ``k`` points up (sigma_z eigenvalue +1).  The driven ancilla is spin 0,
i.e. the least significant bit.  ``|-...->`` is index 0 and ``|+...+>`` is
``2**N - 1``.

Units: hbar = 1.  Time is the dimensionless ``tau = sqrt(alpha) * t`` for the
linear and tangent ramps and plain ``t`` for the constant profile.  Energies
stay physical here; the propagator divides by :attr:`DriveProfile.time_scale`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np

from .errors import DimensionMismatch, InvalidSpec, InvalidWindow, OutOfWindow

__all__ = [
    "ChainSpec",
    "DriveKind",
    "DriveProfile",
    "ChainModel",
    "HamiltonianTerms",
    "build_chain",
    "drive_value",
    "apply_hamiltonian",
    "apply_static",
    "basis_state",
    "parse_bitstring",
    "format_bitstring",
    "TANGENT_CLAMP",
]

# |argument| of the tangent ramp stays below pi/2 - TANGENT_CLAMP
TANGENT_CLAMP = 1e-6
# relative slack on window endpoints for drive evaluation
_WINDOW_SLACK = 1e-12


class DriveKind(str, Enum):
    LINEAR_SYMMETRIC = "linear_symmetric"
    LINEAR_ASYMMETRIC = "linear_asymmetric"
    TANGENT = "tangent"
    CONSTANT = "constant"

    @property
    def is_linear(self) -> bool:
        return self in (DriveKind.LINEAR_SYMMETRIC, DriveKind.LINEAR_ASYMMETRIC)


@dataclass(frozen=True)
class ChainSpec:
    """Number of qubits and the strengths of the N-wise couplings."""

    n_qubits: int
    gamma_x: float
    gamma_y: float = 0.0
    gamma_z: float = 0.0

    def __post_init__(self):
        if isinstance(self.n_qubits, bool) or int(self.n_qubits) != self.n_qubits:
            raise InvalidSpec(f"n_qubits must be an integer, got {self.n_qubits!r}")
        if self.n_qubits < 2:
            raise InvalidSpec(f"n_qubits must be >= 2, got {self.n_qubits}")
        for name in ("gamma_x", "gamma_y", "gamma_z"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidSpec(f"{name} must be finite")

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    @property
    def mask(self) -> int:
        return self.dim - 1

    @property
    def is_diagonal(self) -> bool:
        """True when no flip term exists, so populations never move."""
        return self.gamma_x == 0 and self.gamma_y == 0


@dataclass(frozen=True)
class DriveProfile:
    """Time-dependent detuning applied to the ancilla."""

    kind: DriveKind
    tau_i: float
    tau_f: float
    alpha: float = 1.0
    omega0: float = 0.0
    tangent_scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", DriveKind(self.kind))
        if not (math.isfinite(self.tau_i) and math.isfinite(self.tau_f)):
            raise InvalidWindow("window bounds must be finite")
        if self.tau_i >= self.tau_f:
            raise InvalidWindow(f"need tau_i < tau_f, got [{self.tau_i}, {self.tau_f}]")
        if self.kind is DriveKind.LINEAR_SYMMETRIC and self.tau_i != -self.tau_f:
            raise InvalidWindow(
                f"symmetric ramp needs tau_i = -tau_f, got [{self.tau_i}, {self.tau_f}]"
            )
        if self.kind is DriveKind.LINEAR_ASYMMETRIC and self.tau_i != 0:
            raise InvalidWindow(f"asymmetric ramp starts at tau_i = 0, got {self.tau_i}")
        if self.kind is DriveKind.TANGENT and self.tau_f <= 0:
            raise InvalidWindow("tangent ramp needs tau_f > 0")
        if self.kind is not DriveKind.CONSTANT and not self.alpha > 0:
            raise InvalidSpec(f"alpha must be positive, got {self.alpha}")

    @classmethod
    def symmetric(cls, tau_f: float, alpha: float = 1.0) -> "DriveProfile":
        return cls(DriveKind.LINEAR_SYMMETRIC, -tau_f, tau_f, alpha=alpha)

    @classmethod
    def asymmetric(cls, tau_f: float, alpha: float = 1.0) -> "DriveProfile":
        return cls(DriveKind.LINEAR_ASYMMETRIC, 0.0, tau_f, alpha=alpha)

    @classmethod
    def constant(cls, omega0: float, tau_i: float, tau_f: float) -> "DriveProfile":
        return cls(DriveKind.CONSTANT, tau_i, tau_f, omega0=omega0)

    @classmethod
    def tangent(
        cls, tangent_scale: float, tau_i: float, tau_f: float, alpha: float = 1.0
    ) -> "DriveProfile":
        return cls(DriveKind.TANGENT, tau_i, tau_f, alpha=alpha, tangent_scale=tangent_scale)

    @property
    def time_scale(self) -> float:
        """Energy unit of the dimensionless time: sqrt(alpha), or 1 for a constant field."""
        if self.kind is DriveKind.CONSTANT:
            return 1.0
        return math.sqrt(self.alpha)

    @property
    def span(self) -> float:
        return self.tau_f - self.tau_i


@dataclass(frozen=True)
class HamiltonianTerms:
    """Diagonal and flip coefficients of H(tau) over the full basis.

    ``H(tau) psi = omega(tau) * drive_pattern * psi + static_diag * psi
    + flip * psi[b XOR mask]``.  Since ``b XOR mask == mask - b``, the flipped
    amplitudes are simply ``psi[::-1]``.
    """

    drive_pattern: np.ndarray
    static_diag: np.ndarray
    flip: np.ndarray


@dataclass(frozen=True)
class ChainModel:
    spec: ChainSpec
    drive: DriveProfile

    @property
    def n_qubits(self) -> int:
        return self.spec.n_qubits

    @property
    def dim(self) -> int:
        return self.spec.dim

    @property
    def lambda_(self) -> float | None:
        """gamma_x**2 / alpha; None for the constant profile, which has no slope."""
        if self.drive.kind is DriveKind.CONSTANT:
            return None
        return self.spec.gamma_x**2 / self.drive.alpha

    @cached_property
    def terms(self) -> HamiltonianTerms:
        return _build_terms(self.spec)


def _build_terms(spec: ChainSpec) -> HamiltonianTerms:
    n = spec.n_qubits
    b = np.arange(spec.dim, dtype=np.uint64)
    ones = np.bitwise_count(b).astype(np.int64)
    zeros = n - ones

    drive_pattern = np.where(b & np.uint64(1), 1.0, -1.0)
    # product of single-spin sigma_z eigenvalues
    static_diag = spec.gamma_z * np.where(zeros % 2 == 0, 1.0, -1.0)
    # <b| sigma_y^{(x)N} |b ^ mask>: each down spin of b contributes +i and
    # each up spin contributes -i
    y_phase = np.array([1, 1j, -1, -1j])[(zeros - ones) % 4]
    flip = (spec.gamma_x + spec.gamma_y * y_phase).astype(complex)

    for arr in (drive_pattern, static_diag, flip):
        arr.setflags(write=False)
    return HamiltonianTerms(drive_pattern, static_diag, flip)


def build_chain(spec: ChainSpec, drive: DriveProfile) -> ChainModel:
    """Bundle a chain and a drive into an immutable model.

    Both dataclasses validate themselves on construction; this re-checks
    the types so plain dicts or mismatched objects fail loudly.
    """
    if not isinstance(spec, ChainSpec):
        raise InvalidSpec(f"expected ChainSpec, got {type(spec).__name__}")
    if not isinstance(drive, DriveProfile):
        raise InvalidWindow(f"expected DriveProfile, got {type(drive).__name__}")
    return ChainModel(spec, drive)


def _tangent_argument(drive: DriveProfile, tau: float) -> float:
    limit = math.pi / 2 - TANGENT_CLAMP
    return min(max(math.pi / 2 * tau / drive.tau_f, -limit), limit)


def drive_value(drive: DriveProfile, tau: float) -> float:
    """Detuning hbar*omega_1 of the ancilla at dimensionless time ``tau``.

    Linear ramps give ``sqrt(alpha) * tau / 2`` so that, after dividing by
    the time scale sqrt(alpha), the detuning seen in tau is ``tau / 2``.
    The tangent ramp is ``tangent_scale * tan(pi/2 * tau / tau_f)`` with the
    argument clamped to ``pi/2 - TANGENT_CLAMP`` in magnitude.
    """
    slack = _WINDOW_SLACK * max(1.0, abs(drive.tau_i), abs(drive.tau_f))
    if not (drive.tau_i - slack <= tau <= drive.tau_f + slack):
        raise OutOfWindow(f"tau={tau} outside [{drive.tau_i}, {drive.tau_f}]")
    kind = drive.kind
    if kind.is_linear:
        return math.sqrt(drive.alpha) * tau / 2
    if kind is DriveKind.CONSTANT:
        return float(drive.omega0)
    return drive.tangent_scale * math.tan(_tangent_argument(drive, tau))


def _check_dim(model: ChainModel, psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi)
    if psi.shape != (model.dim,):
        raise DimensionMismatch(f"state has shape {psi.shape}, expected ({model.dim},)")
    return psi


def apply_static(model: ChainModel, psi: np.ndarray) -> np.ndarray:
    """Time-independent part of H acting on ``psi`` (all coupling terms)."""
    psi = _check_dim(model, psi)
    t = model.terms
    return t.static_diag * psi + t.flip * psi[::-1]


def apply_hamiltonian(model: ChainModel, tau: float, psi: np.ndarray) -> np.ndarray:
    """Matrix-free ``H(tau) @ psi``."""
    psi = _check_dim(model, psi)
    omega = drive_value(model.drive, tau)
    t = model.terms
    return (omega * t.drive_pattern + t.static_diag) * psi + t.flip * psi[::-1]


def basis_state(n_qubits: int, index: int) -> np.ndarray:
    psi = np.zeros(1 << n_qubits, dtype=complex)
    psi[index] = 1.0
    return psi


_SPIN_CHARS = {"+": 1, "-": 0, "−": 0}


def parse_bitstring(text: str) -> int:
    """``"+--"`` -> basis index.  The first character is spin 0 (the ancilla)."""
    index = 0
    for k, ch in enumerate(text):
        try:
            index |= _SPIN_CHARS[ch] << k
        except KeyError:
            raise InvalidSpec(f"invalid spin character {ch!r} in {text!r}") from None
    return index


def format_bitstring(index: int, n_qubits: int) -> str:
    return "".join("+" if (index >> k) & 1 else "-" for k in range(n_qubits))
