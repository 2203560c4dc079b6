import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from skewinfo.errors import DomainError, ParameterError, RegularityError
from skewinfo.mcfunc import (
    NON_REGULAR,
    KernelGrid,
    MCFunction,
    builtin,
    check_axioms,
    eval_c,
    eval_c_hat,
    eval_d,
    eval_f_lambda,
    metric_constant,
    numeric_metric_constant,
    perturbed,
    variant_bridge_dfdp,
    variant_bridge_dfdp_published,
    variant_bridge_f,
)

positive = st.floats(1e-6, 1e6)

ALL = [
    builtin("wyd", p=0.1),
    builtin("wyd", p=0.3),
    builtin("wy"),
    builtin("bures"),
    builtin("kubo"),
    builtin("bridge", gamma=0.0),
    builtin("bridge", gamma=0.4),
    builtin("bridge", gamma=1.0),
    builtin("extreme", lam=0.0),
    builtin("extreme", lam=0.3),
    builtin("extreme", lam=1.0),
    builtin("variant_bridge", p=0.0),
    builtin("variant_bridge", p=0.6),
]


def kubo_direct(x, y):
    return (math.log(x) - math.log(y)) / (x - y)


class TestClosedForms:
    # oracles: the defining formulas written out independently
    @pytest.mark.parametrize("x,y", [(4.0, 1.0), (0.2, 0.7), (3e-4, 2.0), (5.0, 5.0)])
    def test_wy(self, x, y):
        assert eval_c(builtin("wy"), x, y) == pytest.approx(4.0 / (math.sqrt(x) + math.sqrt(y)) ** 2, rel=1e-14)

    @pytest.mark.parametrize("x,y", [(4.0, 1.0), (0.2, 0.7), (3e-4, 2.0)])
    def test_bures(self, x, y):
        assert eval_c(builtin("bures"), x, y) == pytest.approx(2.0 / (x + y), rel=1e-14)

    @pytest.mark.parametrize("x,y", [(4.0, 1.0), (0.2, 0.7), (3e-4, 2.0), (1.0 + 1e-9, 1.0)])
    def test_kubo(self, x, y):
        assert eval_c(builtin("kubo"), x, y) == pytest.approx(kubo_direct(x, y), rel=1e-7)

    def test_kubo_diagonal(self):
        assert eval_c(builtin("kubo"), 2.5, 2.5) == pytest.approx(0.4, rel=1e-15)

    @pytest.mark.parametrize("p", [0.1, 0.3, 0.5, 0.9])
    @pytest.mark.parametrize("x,y", [(4.0, 1.0), (0.2, 0.7), (1e-3, 1e3)])
    def test_wyd(self, p, x, y):
        q = 1.0 - p
        expected = (x**p - y**p) * (x**q - y**q) / (p * q * (x - y) ** 2)
        assert eval_c(builtin("wyd", p=p), x, y) == pytest.approx(expected, rel=1e-10)

    def test_wyd_near_diagonal_is_smooth(self):
        mc = builtin("wyd", p=0.3)
        vals = [eval_c(mc, 1.0 + h, 1.0) for h in (1e-5, 1e-7, 1e-9, 1e-11, 0.0)]
        assert np.all(np.abs(np.diff(vals)) < 1e-5)
        assert vals[-1] == pytest.approx(1.0, rel=1e-14)

    @pytest.mark.parametrize("lam", [0.0, 0.3, 1.0])
    def test_extreme(self, lam):
        x, y = 2.0, 0.5
        expected = 0.5 * (1 + lam) * (1 / (x + lam * y) + 1 / (lam * x + y))
        assert eval_c(builtin("extreme", lam=lam), x, y) == pytest.approx(expected, rel=1e-14)

    def test_extreme_endpoints(self):
        # lam = 1 is Bures; lam = 0 is the maximal metric (x + y)/(2xy)
        x, y = 0.3, 1.7
        assert eval_c(builtin("extreme", lam=1.0), x, y) == pytest.approx(2.0 / (x + y))
        assert eval_c(builtin("extreme", lam=0.0), x, y) == pytest.approx((x + y) / (2 * x * y))

    @pytest.mark.parametrize("gamma", [0.0, 0.25, 0.5, 1.0])
    def test_bridge(self, gamma):
        x, y = 3.0, 0.4
        f = (x / y) ** gamma * ((x / y + 1) / 2) ** (1 - 2 * gamma)
        assert eval_c(builtin("bridge", gamma=gamma), x, y) == pytest.approx(1 / (y * f), rel=1e-13)

    def test_variant_bridge_zero_is_bures(self):
        grid = KernelGrid.log_spaced(1e-4, 1e4, 9)
        a = eval_c(builtin("variant_bridge", p=0.0), grid.x, grid.y)
        b = eval_c(builtin("bures"), grid.x, grid.y)
        np.testing.assert_allclose(a, b, rtol=1e-15)

    def test_f_matches_kernel(self):
        mc = builtin("wyd", p=0.2)
        assert mc.f(3.0) == pytest.approx(1.0 / eval_c(mc, 3.0, 1.0))

    def test_vectorized(self):
        x = np.array([0.1, 1.0, 10.0])
        out = eval_c(builtin("wy"), x, np.ones(3))
        assert out.shape == (3,)


class TestValidation:
    def test_unknown(self):
        with pytest.raises(ParameterError):
            builtin("nonsense")

    @pytest.mark.parametrize(
        "name,params",
        [("wyd", {"p": 0.0}), ("wyd", {"p": 1.2}), ("wyd", {}), ("bridge", {"gamma": 1.5}), ("extreme", {"lam": -0.1})],
    )
    def test_bad_parameters(self, name, params):
        with pytest.raises(ParameterError):
            builtin(name, **params)

    def test_domain(self):
        with pytest.raises(DomainError):
            eval_c(builtin("bures"), 0.0, 1.0)
        with pytest.raises(DomainError):
            eval_c(builtin("bures"), -1.0, 1.0)

    def test_hyphen_alias(self):
        assert builtin("variant-bridge", p=0.5).name == "variant_bridge"

    def test_label(self):
        assert builtin("wyd", p=0.3).label == "wyd(p=0.3)"
        assert builtin("bures").label == "bures"


class TestAxiomsProperty:
    @settings(max_examples=200, deadline=None)
    @given(positive, positive, st.sampled_from(ALL))
    def test_symmetry(self, x, y, mc):
        assert eval_c(mc, x, y) == pytest.approx(eval_c(mc, y, x), rel=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3), st.floats(1e-3, 1e3), st.sampled_from(ALL))
    def test_homogeneity(self, x, y, s, mc):
        assert eval_c(mc, s * x, s * y) == pytest.approx(eval_c(mc, x, y) / s, rel=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(1e-6, 1e6), st.sampled_from(ALL))
    def test_functional_equation(self, t, mc):
        assert mc.f(t) == pytest.approx(t * mc.f(1.0 / t), rel=1e-12)

    @pytest.mark.parametrize("mc", ALL, ids=lambda m: m.label)
    def test_check_axioms_passes(self, mc):
        report = check_axioms(mc, KernelGrid.log_spaced(1e-6, 1e6, 9), seed=3)
        assert report.passed, report.cases[:3]
        assert report.trials > 0

    def test_check_axioms_detects_non_monotone(self):
        # the r=3 power mean is symmetric and normalized but not operator monotone
        def kernel(x, y):
            return 1.0 / (y * ((1.0 + (x / y) ** 3) / 2.0) ** (1.0 / 3.0))

        fake = MCFunction("powermean3", {}, kernel)
        report = check_axioms(fake, KernelGrid.log_spaced(), seed=0, matrix_trials=100)
        assert not report.passed

    def test_check_axioms_detects_asymmetry(self):
        fake = MCFunction("skewed", {}, lambda x, y: 1.0 / (x + 2.0 * y) * 3.0)
        assert not check_axioms(fake, KernelGrid.log_spaced()).passed


class TestMetricConstant:
    @pytest.mark.parametrize("p", [0.1, 0.3, 0.5, 0.8])
    def test_wyd(self, p):
        assert metric_constant(builtin("wyd", p=p)) == pytest.approx(p * (1 - p), rel=1e-15)

    @pytest.mark.parametrize(
        "mc,expected",
        [
            (builtin("wy"), 0.25),
            (builtin("bures"), 0.5),
            (builtin("extreme", lam=0.3), 0.6 / 1.69),
            (builtin("bridge", gamma=0.0), 0.5),
        ],
        ids=["wy", "bures", "extreme", "bridge0"],
    )
    def test_known(self, mc, expected):
        assert metric_constant(mc) == pytest.approx(expected, rel=1e-14)
        assert numeric_metric_constant(mc) == pytest.approx(expected, rel=1e-6)

    @pytest.mark.parametrize(
        "mc", [builtin("kubo"), builtin("bridge", gamma=0.3), builtin("extreme", lam=0.0)], ids=lambda m: m.label
    )
    def test_non_regular(self, mc):
        assert metric_constant(mc) is NON_REGULAR
        assert numeric_metric_constant(mc) is NON_REGULAR
        assert not NON_REGULAR

    @pytest.mark.parametrize("p", [0.2, 0.5, 0.9])
    def test_variant_bridge_from_f_at_zero(self, p):
        # oracle: m(c) = f(0) evaluated straight from the defining f_p
        f0 = 0.5 * (4 * (1 - p) / (2 - p) ** 2) ** p
        mc = builtin("variant_bridge", p=p)
        assert metric_constant(mc) == pytest.approx(f0, rel=1e-14)
        assert numeric_metric_constant(mc) == pytest.approx(f0, rel=1e-8)

    def test_numeric_only_kernel(self):
        mc = MCFunction("bures-copy", {}, lambda x, y: 2.0 / (x + y))
        assert metric_constant(mc) == pytest.approx(0.5, rel=1e-8)


class TestDerivedKernels:
    @pytest.mark.parametrize("p", [0.2, 0.5, 0.7])
    def test_c_hat_wyd_on_unit_trace_pairs(self, p):
        # for x + y = 2 the representing function reduces to 2 - x^p y^q - x^q y^p
        q = 1 - p
        mc = builtin("wyd", p=p)
        for x in (0.1, 0.5, 1.3, 1.9):
            y = 2.0 - x
            expected = (2.0 - x**p * y**q - x**q * y**p) / (p * q)
            assert eval_c_hat(mc, x, y) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("p", [0.2, 0.5, 0.7])
    @pytest.mark.parametrize("x,y", [(0.01, 3.0), (7.0, 0.2)])
    def test_c_hat_wyd_general(self, p, x, y):
        q = 1 - p
        expected = (x + y - x**p * y**q - x**q * y**p) / (p * q)
        assert eval_c_hat(builtin("wyd", p=p), x, y) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("mc", [m for m in ALL if metric_constant(m)], ids=lambda m: m.label)
    def test_d_identity(self, mc):
        m = metric_constant(mc)
        grid = KernelGrid.log_spaced(1e-3, 1e3, 7)
        d = eval_d(mc, grid.x, grid.y)
        expected = (grid.x + grid.y) / m - (grid.x - grid.y) ** 2 * eval_c(mc, grid.x, grid.y)
        np.testing.assert_allclose(d, expected, rtol=1e-9, atol=1e-9 * np.max(np.abs(expected)))

    @pytest.mark.parametrize("mc", [m for m in ALL if metric_constant(m)], ids=lambda m: m.label)
    def test_d_vanishes_on_axes(self, mc):
        assert eval_d(mc, 0.0, 2.0) == 0.0
        assert eval_d(mc, 3.0, 0.0) == 0.0
        # and continuously so
        # continuously, though only Holder: d(x, 1) ~ x**p near the axis
        assert abs(eval_d(mc, 1e-200, 1.0)) < 1e-10

    def test_d_on_diagonal(self):
        mc = builtin("wyd", p=0.3)
        assert eval_d(mc, 0.4, 0.4) == pytest.approx(0.8 / 0.21, rel=1e-14)

    def test_d_requires_regular(self):
        with pytest.raises(RegularityError):
            eval_d(builtin("kubo"), 1.0, 2.0)

    def test_c_hat_axes(self):
        assert eval_c_hat(builtin("bures"), 0.0, 3.0) == pytest.approx(6.0)
        assert eval_c_hat(builtin("kubo"), 0.0, 3.0) == math.inf
        assert eval_c_hat(builtin("kubo"), 0.0, 0.0) == 0.0

    def test_f_lambda(self):
        lam, x, y = 0.4, 2.0, 3.0
        c = 0.5 * (1 + lam) * (1 / (x + lam * y) + 1 / (lam * x + y))
        assert eval_f_lambda(lam, x, y) == pytest.approx(x * y * c, rel=1e-15)
        with pytest.raises(DomainError):
            eval_f_lambda(1.5, x, y)


class TestPerturbed:
    def test_kernel_shift(self):
        mc = builtin("bures")
        bad = perturbed(mc, 1e-3)
        assert eval_c(bad, 1.0, 2.0) == pytest.approx(eval_c(mc, 1.0, 2.0) + 1e-3)
        assert bad.label == "bures+fault"
        assert metric_constant(bad) == metric_constant(mc)

    def test_d_follows_kernel(self):
        mc = builtin("wyd", p=0.4)
        bad = perturbed(mc, 1e-3)
        assert eval_d(bad, 0.2, 0.7) == pytest.approx(eval_d(mc, 0.2, 0.7) - 1e-3 * 0.25, rel=1e-13)

    def test_d_shift(self):
        mc = builtin("wy")
        bad = perturbed(mc, 1e-3, kernel="d")
        assert eval_d(bad, 0.2, 0.7) == pytest.approx(eval_d(mc, 0.2, 0.7) + 1e-3, rel=1e-13)
        with pytest.raises(ValueError):
            perturbed(mc, 1e-3, kernel="x")


class TestVariantBridgeDerivative:
    @pytest.mark.parametrize("p", [0.1, 0.3, 0.6, 0.9])
    @pytest.mark.parametrize("t", [1e-3, 0.5, 2.0, 1e3])
    def test_exact_derivative_matches_finite_difference(self, p, t):
        h = 1e-6
        fd = (variant_bridge_f(p + h, t) - variant_bridge_f(p - h, t)) / (2 * h)
        assert variant_bridge_dfdp(p, t) == pytest.approx(fd, rel=1e-7, abs=1e-12)

    def test_published_form_omits_log_term(self):
        p, t = 0.3, 0.5
        q = 2 * variant_bridge_f(p, t) / (1 + t)
        gap = variant_bridge_dfdp(p, t) - variant_bridge_dfdp_published(p, t)
        assert gap == pytest.approx(variant_bridge_f(p, t) * math.log(q ** (1 / p)), rel=1e-10)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0.01, 0.99), st.floats(1e-4, 1e4).filter(lambda t: abs(t - 1) > 1e-3))
    def test_decreasing_in_p(self, p, t):
        assert variant_bridge_dfdp(p, t) < 0

    def test_flat_at_one(self):
        assert variant_bridge_dfdp(0.4, 1.0) == pytest.approx(0.0, abs=1e-15)
