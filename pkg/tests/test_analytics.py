import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nwise_ghz.analytics import (
    Adiabaticity,
    DimensionlessParams,
    HardwareParams,
    RampKind,
    adiabaticity,
    asymptotic_probability,
    estimate_duration,
    half_transition_lambda,
    lambda_for_probability,
    lmsz_asymptotic_half_ramp,
    lmsz_asymptotic_symmetric,
    solve_slope_for_probability,
    tail_average,
    tail_peak_to_peak,
)
from nwise_ghz.errors import UnreachableTarget, ValidationError


class TestAsymptotes:
    @pytest.mark.parametrize(
        "lam,expected",
        [(0.0, 0.0), (0.05, 1 - math.exp(-0.1 * math.pi)), (2.0, 0.9999965126576), (10.0, 1.0)],
    )
    def test_symmetric(self, lam, expected):
        p = lmsz_asymptotic_symmetric(DimensionlessParams(lam))
        assert p == pytest.approx(expected, abs=1e-12)

    def test_half_ramp_value_at_two(self):
        p = lmsz_asymptotic_half_ramp(DimensionlessParams(2.0, RampKind.ASYMMETRIC))
        assert p == pytest.approx((1 - math.exp(-math.pi)) / 2, abs=1e-15)
        assert p == pytest.approx(0.478393, abs=1e-6)

    def test_small_lambda_accuracy(self):
        # expm1 keeps full relative precision where 1 - exp() would not
        p = lmsz_asymptotic_symmetric(DimensionlessParams(1e-12))
        assert p == pytest.approx(2 * math.pi * 1e-12, rel=1e-9)

    def test_formula_ramp_mismatch(self):
        with pytest.raises(ValidationError):
            lmsz_asymptotic_symmetric(DimensionlessParams(1.0, "asymmetric"))
        with pytest.raises(ValidationError):
            lmsz_asymptotic_half_ramp(DimensionlessParams(1.0))

    def test_negative_lambda(self):
        with pytest.raises(ValidationError):
            DimensionlessParams(-0.1)

    def test_half_transition(self):
        lam = half_transition_lambda()
        assert lam == pytest.approx(0.110318, abs=1e-6)
        assert asymptotic_probability(lam, "symmetric") == pytest.approx(0.5, abs=1e-15)

    @given(st.floats(0, 50))
    def test_half_ramp_never_reaches_one_half(self, lam):
        assert 0 <= asymptotic_probability(lam, RampKind.ASYMMETRIC) <= 0.5

    @given(st.floats(0, 5), st.floats(0, 5))
    def test_monotone_in_lambda(self, a, b):
        lo, hi = sorted((a, b))
        for kind in RampKind:
            assert asymptotic_probability(lo, kind) <= asymptotic_probability(hi, kind)


class TestInversion:
    @given(st.floats(1e-6, 0.999999))
    def test_symmetric_roundtrip(self, p):
        lam = lambda_for_probability(p, "symmetric")
        assert asymptotic_probability(lam, "symmetric") == pytest.approx(p, rel=1e-9)

    @given(st.floats(1e-6, 0.499999))
    def test_asymmetric_roundtrip(self, p):
        lam = lambda_for_probability(p, "asymmetric")
        assert asymptotic_probability(lam, "asymmetric") == pytest.approx(p, rel=1e-9)

    @pytest.mark.parametrize("p,kind", [(1.0, "symmetric"), (0.0, "symmetric"), (0.5, "asymmetric"), (0.7, "asymmetric")])
    def test_unreachable(self, p, kind):
        with pytest.raises(UnreachableTarget):
            lambda_for_probability(p, kind)

    def test_slope_formulas(self):
        g, p = 0.3, 0.4
        sym = solve_slope_for_probability(g, p, "symmetric")
        assert sym == pytest.approx(-2 * math.pi * g**2 / math.log(1 - p), rel=1e-14)
        asym = solve_slope_for_probability(g, p, "asymmetric")
        assert asym == pytest.approx(-math.pi * g**2 / (2 * math.log(1 - 2 * p)), rel=1e-14)

    def test_slope_scales_with_hbar(self):
        assert solve_slope_for_probability(1.0, 0.5, "symmetric", hbar=2.0) == pytest.approx(
            solve_slope_for_probability(1.0, 0.5, "symmetric") / 2
        )

    def test_no_coupling(self):
        with pytest.raises(UnreachableTarget):
            solve_slope_for_probability(0.0, 0.5, "symmetric")


class TestClassification:
    @pytest.mark.parametrize(
        "lam,cls",
        [
            (0.0, Adiabaticity.NON_ADIABATIC),
            (0.25, Adiabaticity.NON_ADIABATIC),
            (0.2500001, Adiabaticity.INTERMEDIATE),
            (0.999, Adiabaticity.INTERMEDIATE),
            (1.0, Adiabaticity.ADIABATIC),
            (7.0, Adiabaticity.ADIABATIC),
        ],
    )
    def test_thresholds(self, lam, cls):
        assert adiabaticity(DimensionlessParams(lam)) == (cls, lam)


class TestDuration:
    def test_megahertz_half_transition(self):
        est = estimate_duration(HardwareParams(1e6, half_transition_lambda(), 200.0))
        assert est.alpha_over_hbar == pytest.approx((2 * math.pi * 1e6) ** 2 / 0.110318, rel=1e-5)
        assert est.duration_s == pytest.approx(1.06e-5, rel=5e-3)

    @given(st.floats(1e3, 1e9), st.floats(0.01, 10), st.floats(1, 1000))
    def test_duration_scaling(self, f, lam, window):
        est = estimate_duration(HardwareParams(f, lam, window))
        assert est.duration_s * 2 * math.pi * f == pytest.approx(window * math.sqrt(lam), rel=1e-12)

    @pytest.mark.parametrize("args", [(0, 1, 1), (1, 0, 1), (1, 1, -5)])
    def test_invalid_hardware(self, args):
        with pytest.raises(ValidationError):
            HardwareParams(*args)


class TestTail:
    def test_last_tenth(self):
        values = np.arange(101, dtype=float)
        assert tail_average(values) == pytest.approx(95.0)
        assert tail_peak_to_peak(values) == 10.0

    def test_fraction_bounds(self):
        with pytest.raises(ValidationError):
            tail_average([1.0, 2.0], fraction=0.0)
        assert tail_average([1.0, 3.0], fraction=1.0) == 2.0

    @given(st.floats(-5, 5), st.integers(2, 500))
    def test_constant_signal(self, c, n):
        assert tail_average(np.full(n, c)) == pytest.approx(c)
        assert tail_peak_to_peak(np.full(n, c)) == 0.0
