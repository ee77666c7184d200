"""Asymptotic sweep probabilities, their inversion, and physical time scales.

All formulas use the dimensionless ``lambda = gamma**2 / (hbar * alpha)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import UnreachableTarget, ValidationError

__all__ = [
    "RampKind",
    "Adiabaticity",
    "DimensionlessParams",
    "HardwareParams",
    "DurationEstimate",
    "lmsz_asymptotic_symmetric",
    "lmsz_asymptotic_half_ramp",
    "asymptotic_probability",
    "half_transition_lambda",
    "solve_slope_for_probability",
    "lambda_for_probability",
    "adiabaticity",
    "estimate_duration",
    "tail_average",
    "tail_peak_to_peak",
    "ADIABATIC_THRESHOLD",
    "NONADIABATIC_THRESHOLD",
    "TAIL_FRACTION",
]

ADIABATIC_THRESHOLD = 1.0
NONADIABATIC_THRESHOLD = 0.25
TAIL_FRACTION = 0.1


class RampKind(str, Enum):
    SYMMETRIC = "symmetric"
    ASYMMETRIC = "asymmetric"


class Adiabaticity(str, Enum):
    ADIABATIC = "adiabatic"
    INTERMEDIATE = "intermediate"
    NON_ADIABATIC = "non_adiabatic"


@dataclass(frozen=True)
class DimensionlessParams:
    lambda_: float
    ramp_kind: RampKind = RampKind.SYMMETRIC

    def __post_init__(self):
        object.__setattr__(self, "ramp_kind", RampKind(self.ramp_kind))
        if not self.lambda_ >= 0:
            raise ValidationError(f"lambda must be >= 0, got {self.lambda_}")


@dataclass(frozen=True)
class HardwareParams:
    """Coupling in Hz (gamma_x / hbar / 2pi), lambda, and total window in tau."""

    gamma_hz: float
    lambda_: float
    tau_window: float

    def __post_init__(self):
        if not self.gamma_hz > 0:
            raise ValidationError(f"gamma_hz must be positive, got {self.gamma_hz}")
        if not self.tau_window > 0:
            raise ValidationError(f"tau_window must be positive, got {self.tau_window}")
        if not self.lambda_ > 0:
            raise ValidationError(f"lambda must be positive, got {self.lambda_}")


@dataclass(frozen=True)
class DurationEstimate:
    duration_s: float
    alpha_over_hbar: float  # s^-2
    convention: str = "gamma_x / hbar = 2 pi gamma_hz (angular frequency)"


def lmsz_asymptotic_symmetric(params: DimensionlessParams) -> float:
    """``1 - exp(-2 pi lambda)`` for a ramp through the crossing from -inf to +inf."""
    if params.ramp_kind is not RampKind.SYMMETRIC:
        raise ValidationError("symmetric formula called with an asymmetric ramp")
    return -math.expm1(-2 * math.pi * params.lambda_)


def lmsz_asymptotic_half_ramp(params: DimensionlessParams) -> float:
    """``(1 - exp(-pi lambda / 2)) / 2`` for a ramp starting at the crossing."""
    if params.ramp_kind is not RampKind.ASYMMETRIC:
        raise ValidationError("half-ramp formula called with a symmetric ramp")
    return -math.expm1(-math.pi * params.lambda_ / 2) / 2


def asymptotic_probability(lambda_: float, ramp_kind) -> float:
    params = DimensionlessParams(lambda_, ramp_kind)
    if params.ramp_kind is RampKind.SYMMETRIC:
        return lmsz_asymptotic_symmetric(params)
    return lmsz_asymptotic_half_ramp(params)


def half_transition_lambda() -> float:
    """lambda at which the symmetric sweep ends in an equal superposition."""
    return math.log(2) / (2 * math.pi)


def lambda_for_probability(p_target: float, ramp_kind) -> float:
    """Invert the asymptotic formulas for lambda."""
    ramp_kind = RampKind(ramp_kind)
    ceiling = 1.0 if ramp_kind is RampKind.SYMMETRIC else 0.5
    if not 0 < p_target < ceiling:
        raise UnreachableTarget(
            f"p_target={p_target} outside (0, {ceiling}) for a {ramp_kind.value} ramp"
        )
    if ramp_kind is RampKind.SYMMETRIC:
        return -math.log1p(-p_target) / (2 * math.pi)
    return -2 * math.log1p(-2 * p_target) / math.pi


def solve_slope_for_probability(gamma: float, p_target: float, ramp_kind, hbar: float = 1.0) -> float:
    """Slope alpha giving asymptotic probability ``p_target`` at coupling ``gamma``."""
    if gamma == 0:
        raise UnreachableTarget("no finite slope gives a transition without coupling")
    lam = lambda_for_probability(p_target, ramp_kind)
    return gamma**2 / (hbar * lam)


def adiabaticity(params: DimensionlessParams) -> tuple[Adiabaticity, float]:
    lam = params.lambda_
    if lam >= ADIABATIC_THRESHOLD:
        cls = Adiabaticity.ADIABATIC
    elif lam <= NONADIABATIC_THRESHOLD:
        cls = Adiabaticity.NON_ADIABATIC
    else:
        cls = Adiabaticity.INTERMEDIATE
    return cls, lam


def estimate_duration(hw: HardwareParams) -> DurationEstimate:
    """Wall-clock length of a sweep covering ``tau_window``.

    ``alpha / hbar = (2 pi gamma_hz)**2 / lambda`` and ``t = tau / sqrt(alpha / hbar)``.
    """
    alpha_over_hbar = (2 * math.pi * hw.gamma_hz) ** 2 / hw.lambda_
    return DurationEstimate(hw.tau_window / math.sqrt(alpha_over_hbar), alpha_over_hbar)


def _tail_slice(n: int, fraction: float) -> slice:
    if not 0 < fraction <= 1:
        raise ValidationError(f"fraction must lie in (0, 1], got {fraction}")
    start = int(round((1 - fraction) * (n - 1)))
    return slice(start, n)


def tail_average(values, fraction: float = TAIL_FRACTION) -> float:
    """Mean over the last ``fraction`` of evenly spaced samples."""
    values = np.asarray(values, dtype=float)
    return float(np.mean(values[_tail_slice(len(values), fraction)]))


def tail_peak_to_peak(values, fraction: float = TAIL_FRACTION) -> float:
    values = np.asarray(values, dtype=float)
    return float(np.ptp(values[_tail_slice(len(values), fraction)]))
