"""GHZ-like targets and pair fidelity diagnostics."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotNormalized
from .subspace import SubspacePair

__all__ = ["GhzReport", "ghz_like_target", "ghz_fidelity", "pair_report", "wrap_phase"]

# amplitudes below this are treated as absent when defining the relative phase
_DEGENERATE = 1e-12
_NORM_TOL = 1e-8


@dataclass(frozen=True)
class GhzReport:
    p_rep: float
    p_partner: float
    coherence_mag: float
    phi_star: float
    fidelity: float
    degenerate: bool = False

    def as_dict(self) -> dict:
        return {
            "p_rep": self.p_rep,
            "p_partner": self.p_partner,
            "coherence_mag": self.coherence_mag,
            "phi_star": self.phi_star,
            "fidelity": self.fidelity,
            "degenerate": self.degenerate,
        }


def wrap_phase(phi: float) -> float:
    """Map an angle into (-pi, pi]."""
    wrapped = math.remainder(phi, 2 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


def ghz_like_target(pair: SubspacePair, phi: float) -> np.ndarray:
    """``(|rep> + e^{i phi} |partner>) / sqrt(2)`` in the full 2**N basis."""
    psi = np.zeros(1 << pair.n_qubits, dtype=complex)
    psi[pair.representative] = 1 / math.sqrt(2)
    psi[pair.partner] = np.exp(1j * phi) / math.sqrt(2)
    return psi


def pair_report(a: complex, b: complex) -> GhzReport:
    """Fidelity diagnostics from the two pair amplitudes ``a = <rep|psi>``, ``b = <partner|psi>``.

    Maximising ``|<GHZ_phi|psi>|**2 = (|a|**2 + |b|**2 + 2|a||b|cos(arg b - arg a - phi)) / 2``
    over phi gives ``phi* = arg b - arg a``.
    """
    ma, mb = abs(a), abs(b)
    degenerate = min(ma, mb) < _DEGENERATE
    phi = 0.0 if degenerate else wrap_phase(np.angle(b) - np.angle(a))
    coherence = ma * mb
    return GhzReport(
        p_rep=ma**2,
        p_partner=mb**2,
        coherence_mag=coherence,
        phi_star=phi,
        fidelity=(ma**2 + mb**2) / 2 + coherence,
        degenerate=degenerate,
    )


def ghz_fidelity(psi: np.ndarray, pair: SubspacePair) -> GhzReport:
    psi = np.asarray(psi)
    if psi.shape != (1 << pair.n_qubits,):
        raise DimensionMismatch(f"state has shape {psi.shape}, expected ({1 << pair.n_qubits},)")
    norm = float(np.vdot(psi, psi).real)
    if abs(norm - 1) > _NORM_TOL:
        raise NotNormalized(f"state norm^2 is {norm}")
    return pair_report(complex(psi[pair.representative]), complex(psi[pair.partner]))
