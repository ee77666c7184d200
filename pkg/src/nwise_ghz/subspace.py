"""Invariant two-dimensional subspaces and their effective two-level problems.

Every product ``sigma_z^i sigma_z^j`` commutes with the chain Hamiltonian, so
each basis state ``|b>`` only ever mixes with its fully flipped partner
``|b XOR mask>``.  The 2**N basis splits into 2**(N-1) such pairs.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable

import numpy as np

from .errors import IndexOutOfRange, InvalidSpec
from .model import (
    ChainModel,
    DriveKind,
    DriveProfile,
    apply_hamiltonian,
    apply_static,
    basis_state,
    drive_value,
    format_bitstring,
)

__all__ = [
    "SubspacePair",
    "TwoLevelProblem",
    "ConstantsOfMotionReport",
    "pair_of",
    "enumerate_subspaces",
    "ghz_pair",
    "effective_two_level",
    "check_constants_of_motion",
    "zz_diagonal",
]


@dataclass(frozen=True)
class SubspacePair:
    representative: int
    partner: int
    n_qubits: int

    def __post_init__(self):
        mask = (1 << self.n_qubits) - 1
        if self.partner != self.representative ^ mask:
            raise InvalidSpec(
                f"{self.partner} is not the flipped partner of {self.representative}"
            )
        if not self.representative < self.partner:
            raise InvalidSpec("representative must be the smaller index")

    def __contains__(self, index: int) -> bool:
        return index in (self.representative, self.partner)

    @property
    def indices(self) -> tuple[int, int]:
        return self.representative, self.partner

    def other(self, index: int) -> int:
        if index == self.representative:
            return self.partner
        if index == self.partner:
            return self.representative
        raise IndexOutOfRange(f"{index} is not in pair {self}")

    def label(self) -> str:
        return (
            f"{format_bitstring(self.representative, self.n_qubits)}/"
            f"{format_bitstring(self.partner, self.n_qubits)}"
        )


def pair_of(basis_index: int, n_qubits: int) -> SubspacePair:
    dim = 1 << n_qubits
    if not 0 <= basis_index < dim:
        raise IndexOutOfRange(f"basis index {basis_index} outside [0, {dim})")
    flipped = basis_index ^ (dim - 1)
    lo, hi = sorted((basis_index, flipped))
    return SubspacePair(lo, hi, n_qubits)


def enumerate_subspaces(n_qubits: int) -> list[SubspacePair]:
    """All 2**(N-1) pairs, ordered by representative.

    Representatives are exactly the indices below 2**(N-1): the top bit of
    ``b`` and of ``b XOR mask`` differ, so the smaller one has it cleared.
    """
    if n_qubits < 2:
        raise InvalidSpec(f"n_qubits must be >= 2, got {n_qubits}")
    mask = (1 << n_qubits) - 1
    return [SubspacePair(b, b ^ mask, n_qubits) for b in range(1 << (n_qubits - 1))]


def ghz_pair(n_qubits: int) -> SubspacePair:
    """The pair {|-...->, |+...+>}."""
    return pair_of(0, n_qubits)


@dataclass(frozen=True)
class TwoLevelProblem:
    """Restriction of H(tau) to one invariant pair.

    In the ordered basis (representative, partner)::

        H = [[s*w(tau) + d_rep,  conj(c)          ],
             [c,                 -s*w(tau) + d_par]]

    with ``s = detuning_sign`` and ``c = coupling = <partner|H|rep>``.
    """

    pair: SubspacePair
    detuning_sign: int
    coupling: complex
    diagonal_offset: tuple[float, float]
    drive: DriveProfile

    def hamiltonian(self, tau: float) -> np.ndarray:
        w = self.detuning_sign * drive_value(self.drive, tau)
        d_rep, d_par = self.diagonal_offset
        c = self.coupling
        return np.array([[w + d_rep, np.conj(c)], [c, -w + d_par]], dtype=complex)

    @property
    def lambda_effective(self) -> float | None:
        """|coupling|**2 / alpha, the adiabaticity parameter of this pair."""
        if self.drive.kind is DriveKind.CONSTANT:
            return None
        return abs(self.coupling) ** 2 / self.drive.alpha


def effective_two_level(model: ChainModel, pair: SubspacePair) -> TwoLevelProblem:
    """Read the pair's 2x2 block off exact matrix elements of the full H."""
    if pair.n_qubits != model.n_qubits:
        raise IndexOutOfRange(
            f"pair built for N={pair.n_qubits}, model has N={model.n_qubits}"
        )
    rep, par = pair.indices
    col_rep = apply_static(model, basis_state(model.n_qubits, rep))
    col_par = apply_static(model, basis_state(model.n_qubits, par))
    coupling = complex(col_rep[par])
    offsets = (float(col_rep[rep].real), float(col_par[par].real))
    sign = 1 if rep & 1 else -1
    return TwoLevelProblem(pair, sign, coupling, offsets, model.drive)


def zz_diagonal(n_qubits: int, i: int, j: int) -> np.ndarray:
    """Diagonal of sigma_z^i sigma_z^j in the computational basis."""
    b = np.arange(1 << n_qubits)
    zi = 2 * ((b >> i) & 1) - 1
    zj = 2 * ((b >> j) & 1) - 1
    return (zi * zj).astype(float)


@dataclass(frozen=True)
class ConstantsOfMotionReport:
    max_residual: float
    worst_pair: tuple[int, int]
    n_checks: int
    threshold: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.threshold


def check_constants_of_motion(
    model: ChainModel,
    n_samples: int,
    rng: np.random.Generator | None = None,
    apply: Callable[[ChainModel, float, np.ndarray], np.ndarray] | None = None,
    threshold: float = 1e-12,
) -> ConstantsOfMotionReport:
    """Check ``[Z_i Z_j, H(tau)] psi == 0`` at random times on random states.

    ``apply`` swaps in a different Hamiltonian action; tests use it to inject
    a symmetry-breaking term.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(rng)
    apply = apply or apply_hamiltonian
    n = model.n_qubits
    drive = model.drive
    zz = {(i, j): zz_diagonal(n, i, j) for i, j in combinations(range(n), 2)}

    worst, worst_pair, checks = 0.0, (0, 1), 0
    for _ in range(n_samples):
        tau = rng.uniform(drive.tau_i, drive.tau_f)
        psi = rng.normal(size=model.dim) + 1j * rng.normal(size=model.dim)
        psi /= np.linalg.norm(psi)
        h_psi = apply(model, tau, psi)
        for key, z in zz.items():
            residual = np.linalg.norm(z * h_psi - apply(model, tau, z * psi))
            checks += 1
            if residual > worst:
                worst, worst_pair = float(residual), key
    return ConstantsOfMotionReport(worst, worst_pair, checks, threshold)
