import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from skewinfo.errors import QuadratureError
from skewinfo.quadrature import QuadratureConfig, integrate, integrate_unit, substitution_power


def beta(a, b):
    return math.gamma(a) * math.gamma(b) / math.gamma(a + b)


class TestIntegrate:
    def test_polynomial_exact(self):
        value, err = integrate(lambda x: 3 * x**2 + 1, 0.0, 2.0)
        assert value == pytest.approx(10.0, rel=1e-14)
        assert err < 1e-12

    def test_breakpoints_handle_kinks(self):
        value, _ = integrate(lambda x: np.abs(x - 0.3), 0.0, 1.0, breakpoints=(0.3,))
        assert value == pytest.approx(0.5 * (0.3**2 + 0.7**2), rel=1e-13)

    def test_reversed_interval_rejected(self):
        assert integrate(np.exp, 1.0, 1.0) == (0.0, 0.0)
        with pytest.raises(ValueError):
            integrate(np.exp, 1.0, 0.0)

    def test_failure_reports_achieved_error(self):
        cfg = QuadratureConfig(max_subdivisions=3)
        with pytest.raises(QuadratureError) as info:
            integrate(lambda x: np.sin(200 * x) ** 2 / np.sqrt(x), 0.0, 1.0, cfg)
        assert info.value.error > 0
        assert math.isfinite(info.value.value)

    def test_nonfinite_integrand_rejected(self):
        with pytest.raises(QuadratureError):
            integrate(lambda x: np.where(x > 0.5, np.nan, x), 0.0, 1.0)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            QuadratureConfig(rel_tol=-1.0)
        with pytest.raises(ValueError):
            QuadratureConfig(max_subdivisions=0)


class TestUnitInterval:
    @pytest.mark.parametrize("a", [-0.9, -0.5, -0.1, 0.0, 0.5, 1.5])
    @pytest.mark.parametrize("b", [-0.7, 0.0, 0.3])
    def test_beta_integrals(self, a, b):
        # oracle: Euler's Beta function
        value, _ = integrate_unit(lambda lam, lamc: lam**a * lamc**b, (a, b))
        assert value == pytest.approx(beta(a + 1, b + 1), rel=1e-9)

    def test_substitution_power(self):
        assert substitution_power(-0.5) == pytest.approx(4.0)
        assert substitution_power(-0.2) == pytest.approx(2.5)
        assert substitution_power(0.5) == 2.0
        assert substitution_power(0.0) == 1.0
        assert substitution_power(2.0) == 1.0

    @settings(max_examples=30, deadline=None)
    @given(st.floats(-0.95, 2.0), st.floats(-0.95, 2.0))
    def test_beta_property(self, a, b):
        value, _ = integrate_unit(lambda lam, lamc: lam**a * lamc**b, (a, b))
        assert value == pytest.approx(beta(a + 1, b + 1), rel=1e-8)
