import math

import numpy as np
import pytest

from hcscatter.covariance import MassFractions, d_closed_form
from hcscatter.scattering import (
    ScatterParams,
    ZeroEntanglementClass,
    asymptotic_entanglement,
    d_asymptotic,
    is_zero_entanglement,
)

# Frozen from the arbitrary-precision oracle in test_covariance.
REF_D = math.sqrt(1.72015625)
REF_ENTROPY_BITS = 1.797380017291221


class TestScatterParams:
    def test_masses_normalized_immediately(self):
        params = ScatterParams(2.0, 6.0, 1.0, 1.0)
        assert params.mass1 == 0.25
        assert params.mass2 == 0.75
        assert params.fractions.mu1 == 0.25

    def test_from_fractions(self):
        params = ScatterParams.from_fractions(0.3, 4.0, 1.0)
        assert params.mass1 == pytest.approx(0.3, abs=1e-15)
        assert params.mass2 == pytest.approx(0.7, abs=1e-15)

    def test_default_centers_clear_the_core(self):
        params = ScatterParams(1.0, 1.0, 9.0, 1.0, core_radius=0.5)
        assert params.q1 == pytest.approx(8.0 * 3.0 + 0.5)
        assert params.q2 == params.q1

    def test_packets(self):
        params = ScatterParams(1.0, 1.0, 2.0, 3.0, momentum=5.0, q1=7.0, q2=9.0)
        assert params.packet1.center == 7.0
        assert params.packet1.momentum == -5.0
        assert params.packet1.width_sq == 2.0
        assert params.packet2.center == -9.0
        assert params.packet2.momentum == 5.0
        assert params.packet2.width_sq == 3.0

    def test_width_ratio(self):
        assert ScatterParams(1.0, 1.0, 100.0, 1.0).width_ratio == 10.0

    @pytest.mark.parametrize(
        "kwargs, match",
        [
            (dict(momentum=0.0), "momentum must be positive"),
            (dict(momentum=-2.0), "momentum must be positive"),
            (dict(core_radius=-1.0), "non-negative"),
            (dict(q1=0.2, core_radius=0.5), "outside the core"),
            (dict(q2=0.5, core_radius=0.5), "outside the core"),
        ],
    )
    def test_rejects_invalid(self, kwargs, match):
        with pytest.raises(ValueError, match=match):
            ScatterParams(1.0, 1.0, 1.0, 1.0, **kwargs)

    def test_rejects_nonpositive_widths(self):
        with pytest.raises(ValueError, match="widths must be positive"):
            ScatterParams(1.0, 1.0, 0.0, 1.0)

    def test_rejects_nonpositive_masses(self):
        with pytest.raises(ValueError, match="masses must be positive"):
            ScatterParams(0.0, 1.0, 1.0, 1.0)


class TestAsymptoticEntanglement:
    def test_equal_masses_generate_nothing(self):
        result = asymptotic_entanglement(ScatterParams(1.0, 1.0, 50.0, 0.5))
        assert result.d_value == 0.5
        assert result.entropy_bits == 0.0
        assert result.purity == 1.0

    def test_reference_scenario(self):
        result = asymptotic_entanglement(ScatterParams.from_fractions(0.25, 100.0, 1.0))
        assert result.d_value == pytest.approx(REF_D, abs=1e-15)
        assert result.entropy_bits == pytest.approx(REF_ENTROPY_BITS, abs=1e-12)
        assert result.purity == pytest.approx(1.0 / (2.0 * REF_D), abs=1e-15)

    def test_momentum_never_enters(self):
        results = [
            asymptotic_entanglement(
                ScatterParams.from_fractions(0.25, 100.0, 1.0, momentum=k)
            )
            for k in (1.0, 5.0, 50.0)
        ]
        assert all(r == results[0] for r in results)

    def test_geometry_never_enters(self):
        rng = np.random.default_rng(31)
        baseline = asymptotic_entanglement(ScatterParams.from_fractions(0.6, 9.0, 1.0))
        for _ in range(10):
            params = ScatterParams.from_fractions(
                0.6,
                9.0,
                1.0,
                momentum=float(rng.uniform(0.1, 40.0)),
                core_radius=float(rng.uniform(0.0, 2.0)),
                q1=float(rng.uniform(5.0, 200.0)),
                q2=float(rng.uniform(5.0, 200.0)),
            )
            assert asymptotic_entanglement(params) == baseline


class TestZeroEntanglementClassification:
    def test_equal_masses(self):
        params = ScatterParams(3.0, 3.0, 7.0, 1.0)
        assert is_zero_entanglement(params) is ZeroEntanglementClass.EQUAL_MASS

    def test_width_mass_balance(self):
        params = ScatterParams.from_fractions(0.25, 3.0, 1.0)
        assert is_zero_entanglement(params) is ZeroEntanglementClass.WIDTH_MASS_BALANCE

    def test_generic_case(self):
        params = ScatterParams.from_fractions(0.7, 1.0, 1.0)
        assert is_zero_entanglement(params) is ZeroEntanglementClass.NONE

    def test_equal_mass_takes_precedence(self):
        # Equal masses and equal widths satisfy both conditions at once.
        params = ScatterParams(1.0, 1.0, 1.0, 1.0)
        assert is_zero_entanglement(params) is ZeroEntanglementClass.EQUAL_MASS

    def test_tolerance_widens_the_balance_band(self):
        params = ScatterParams.from_fractions(0.25, 3.001, 1.0)
        assert is_zero_entanglement(params) is ZeroEntanglementClass.NONE
        assert is_zero_entanglement(params, tol=1e-2) is (
            ZeroEntanglementClass.WIDTH_MASS_BALANCE
        )

    def test_rejects_negative_tolerance(self):
        with pytest.raises(ValueError, match="non-negative"):
            is_zero_entanglement(ScatterParams(1.0, 2.0, 1.0, 1.0), tol=-1.0)

    def test_classified_scenarios_carry_no_entropy(self):
        equal = ScatterParams(2.0, 2.0, 5.0, 1.0)
        assert asymptotic_entanglement(equal).entropy_bits <= 1e-9
        mu = MassFractions(0.3)
        balance = ScatterParams.from_fractions(0.3, 2.0, mu.mu1 * 2.0 / mu.mu2)
        assert asymptotic_entanglement(balance).entropy_bits <= 1e-9


class TestDAsymptotic:
    def test_local_maximum_value(self):
        # |2/4 - 1| * 1/4 * 10, evaluated by hand.
        assert d_asymptotic(0.25, 10.0) == pytest.approx(1.25, abs=1e-15)

    def test_global_maximum_at_unit_fraction(self):
        assert d_asymptotic(1.0, 10.0) == 10.0
        assert d_asymptotic(1.0, 10.0) / d_asymptotic(0.25, 10.0) == (
            pytest.approx(8.0, abs=1e-12)
        )

    def test_vanishes_at_equal_masses(self):
        assert d_asymptotic(0.5, 10.0) == 0.0

    def test_accepts_mass_fractions(self):
        assert d_asymptotic(MassFractions(0.25), 10.0) == d_asymptotic(0.25, 10.0)

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError, match="width ratio"):
            d_asymptotic(0.5, 0.0)
        with pytest.raises(ValueError, match="mu1"):
            d_asymptotic(0.0, 10.0)
        with pytest.raises(ValueError, match="mu1"):
            d_asymptotic(1.1, 10.0)

    def test_local_extremum_structure(self):
        # The quadratic mu (1 - 2 mu) on [0, 1/2] peaks at mu = 1/4; over the
        # whole of (0, 1] the expression peaks at mu = 1.
        left = np.linspace(1e-4, 0.5, 5001)
        idx = np.argmax(left * (1.0 - 2.0 * left))
        assert left[idx] == pytest.approx(0.25, abs=1e-4)
        full = np.linspace(1e-4, 1.0, 5001)
        values = [d_asymptotic(m, 10.0) for m in full]
        assert full[int(np.argmax(values))] == 1.0

    def test_agreement_with_exact_value(self):
        # At ratio 10 the leading term tracks the exact d within 15%
        # wherever |2 mu - 1| mu >= 0.1; it degrades only near its zeros.
        for mu1 in np.linspace(0.01, 0.99, 99):
            if abs(2.0 * mu1 - 1.0) * mu1 < 0.1:
                continue
            exact = d_closed_form(MassFractions(mu1), 100.0, 1.0)
            approx = d_asymptotic(mu1, 10.0)
            assert abs(approx - exact) / exact <= 0.15
