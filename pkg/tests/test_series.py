import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from fracchain.errors import SingularityError, ValidationError
from fracchain.numerics import gen_binom
from fracchain.series import (
    TruncatedPowerSeries,
    counting_pmf_table_via_gf,
    counting_pmf_via_gf,
    ps_binomial,
    ps_inv,
    ps_mul,
)
from fracchain.stochastic import geometric_pmf_vector, sibuya_pmf_vector

TPS = TruncatedPowerSeries


def series(coeffs, horizon=None):
    coeffs = list(coeffs)
    return TPS.from_coeffs(coeffs, len(coeffs) - 1 if horizon is None else horizon)


class TestProduct:
    def test_unit_is_neutral(self):
        ones = TPS.from_coeffs(np.ones(6), 5)
        assert np.array_equal(ps_mul(ones, TPS.constant(1.0, 5)).coeffs, np.ones(6))

    def test_square_of_binomial(self):
        a = series([1, 1], 2)
        assert ps_mul(a, a).coeffs.tolist() == [1.0, 2.0, 1.0]

    def test_geometric_square_is_sum_of_two_geometrics(self):
        H, p = 20, 0.3
        g = geometric_pmf_vector(p, H)
        brute = np.array([sum(g[k] * g[t - k] for k in range(t + 1)) for t in range(H + 1)])
        got = ps_mul(TPS(g), TPS(g)).coeffs
        np.testing.assert_allclose(got, brute, atol=1e-15)
        # and both match the negative binomial law of the sum
        shifted = stats.nbinom.pmf(np.arange(H + 1) - 2, 2, p)
        np.testing.assert_allclose(got, shifted, atol=1e-15)

    def test_horizon_mismatch(self):
        with pytest.raises(ValidationError, match="horizon"):
            ps_mul(TPS.constant(1.0, 3), TPS.constant(1.0, 4))

    def test_operators_agree_with_functions(self):
        a, b = series([1, 2, 3]), series([0.5, -1, 4])
        np.testing.assert_array_equal((a * b).coeffs, ps_mul(a, b).coeffs)
        np.testing.assert_allclose((a / b * b).coeffs, a.coeffs, atol=1e-13)
        np.testing.assert_array_equal((a**2).coeffs, ps_mul(a, a).coeffs)
        assert a.shift(1).coeffs.tolist() == [0.0, 1.0, 2.0]

    def test_rejects_nonfinite(self):
        with pytest.raises(ValidationError):
            TPS(np.array([1.0, np.nan]))


class TestInverse:
    def test_geometric_series(self):
        q = 0.4
        got = ps_inv(series([1, -q, 0, 0, 0, 0])).coeffs
        np.testing.assert_allclose(got, q ** np.arange(6), rtol=1e-15)

    def test_constant(self):
        assert ps_inv(series([2, 0, 0])).coeffs.tolist() == [0.5, 0.0, 0.0]

    def test_square_root_inverse(self):
        H = 50
        got = ps_inv(ps_binomial(0.5, H)).coeffs
        expected = [gen_binom(-0.5, t) * (-1) ** t for t in range(H + 1)]
        np.testing.assert_allclose(got, expected, rtol=1e-13)

    def test_zero_constant_term(self):
        with pytest.raises(SingularityError):
            ps_inv(series([0, 1, 2]))

    @settings(max_examples=80)
    @given(
        st.floats(1.0, 2.0),
        st.lists(st.floats(-0.3, 0.3), min_size=1, max_size=30),
    )
    def test_inverse_gives_unit(self, a0, rest):
        a = series([a0, *rest])
        prod = ps_mul(a, ps_inv(a)).coeffs
        unit = np.zeros_like(prod)
        unit[0] = 1.0
        np.testing.assert_allclose(prod, unit, atol=1e-12)


class TestBinomialSeries:
    def test_examples(self):
        assert ps_binomial(1.0, 4).coeffs.tolist() == [1.0, -1.0, 0.0, 0.0, 0.0]
        assert ps_binomial(0.5, 3).coeffs[2] == -0.125
        assert ps_binomial(0.0, 3).coeffs.tolist() == [1.0, 0.0, 0.0, 0.0]

    @given(st.floats(0.0, 1.0), st.integers(0, 200))
    def test_exponents_add(self, alpha, H):
        prod = ps_mul(ps_binomial(alpha, H), ps_binomial(1.0 - alpha, H)).coeffs
        np.testing.assert_allclose(prod, ps_binomial(1.0, H).coeffs, atol=1e-12)


class TestCountingGf:
    def test_nothing_happens_at_time_zero(self):
        for mass in ([0, 1], sibuya_pmf_vector(0.4, 5)):
            assert counting_pmf_via_gf(np.asarray(mass), 0, 5)[0] == 1.0

    def test_geometric_steps_are_binomial(self):
        assert counting_pmf_via_gf(geometric_pmf_vector(0.5, 3), 1, 3)[3] == pytest.approx(0.375, abs=1e-15)

    def test_sibuya_steps(self):
        assert counting_pmf_via_gf(sibuya_pmf_vector(0.5, 2), 1, 2)[2] == pytest.approx(0.375, abs=1e-15)

    def test_mass_at_zero_rejected(self):
        with pytest.raises(ValidationError, match="mass at 0"):
            counting_pmf_via_gf(np.array([0.1, 0.9]), 1, 3)

    def test_table_matches_single_rows(self):
        mass = sibuya_pmf_vector(0.3, 40)
        table = counting_pmf_table_via_gf(mass, 40)
        for m in (0, 3, 17, 40):
            np.testing.assert_allclose(table[m], counting_pmf_via_gf(mass, m, 40), atol=1e-15)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(0.0, 1.0), min_size=1, max_size=12), st.integers(1, 60))
    def test_columns_sum_to_one(self, weights, H):
        w = np.asarray(weights)
        if w.sum() == 0.0:
            w[0] = 1.0
        mass = np.concatenate([[0.0], w / w.sum()])
        table = counting_pmf_table_via_gf(mass, H)
        np.testing.assert_allclose(table.sum(axis=0), 1.0, atol=1e-12)

    @pytest.mark.parametrize("p", [0.2, 0.5, 0.9])
    def test_bernoulli_generating_function(self, p):
        H, q = 60, 1.0 - p
        table = counting_pmf_table_via_gf(geometric_pmf_vector(p, H), H, 10)
        denom = ps_inv(series([1, -q] + [0] * (H - 1)))
        for m in range(11):
            gf = TPS.monomial(m, H, p**m) * denom ** (m + 1)
            np.testing.assert_allclose(table[m], gf.coeffs, atol=1e-12)
