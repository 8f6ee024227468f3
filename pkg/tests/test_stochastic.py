import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import within_sigma
from fracchain.errors import DomainError, ValidationError
from fracchain.numerics import gen_binom
from fracchain.series import counting_pmf_table_via_gf
from fracchain.stochastic import (
    DiscretePmf,
    FiniteStep,
    PointMass,
    RngStream,
    Sibuya,
    compound_geometric_pmf,
    counting_samples,
    dml_generating_function,
    dml_pmf,
    dml_sample,
    renewal_path,
    run_chunks,
    sibuya_counting_moments,
    sibuya_counting_pmf,
    sibuya_counting_pmf_table,
    sibuya_pmf,
    sibuya_pmf_vector,
    sibuya_potential,
    sibuya_sample,
    sibuya_survival,
    sibuya_survival_vector,
    step_from_json,
)

SURVIVAL_HALF_100 = 0.056348479009256422247  # Gamma(100.5) / (Gamma(101) Gamma(0.5)), mpmath


def gen(seed, stream=0):
    return RngStream(seed, stream).generator()


class TestSibuyaLaw:
    def test_pmf_examples(self):
        assert sibuya_pmf(1, 1) == 1.0
        assert sibuya_pmf(0.5, 2) == 0.125
        assert sibuya_pmf(0.5, 4) == pytest.approx(0.0390625, rel=1e-15)
        assert sibuya_pmf(0.5, 4) == pytest.approx(-gen_binom(0.5, 4), rel=1e-15)

    def test_survival_examples(self):
        assert sibuya_survival(0.3, 0) == 1.0
        assert sibuya_survival(0.5, 2) == 0.375
        assert sibuya_survival(0.5, 100) == pytest.approx(SURVIVAL_HALF_100, rel=1e-13)

    def test_survival_power_law(self):
        k = 10**6
        assert sibuya_survival(0.5, k) * math.gamma(0.5) * k**0.5 == pytest.approx(1.0, abs=1e-3)

    @pytest.mark.parametrize("bad", [0, -3])
    def test_pmf_domain(self, bad):
        with pytest.raises(DomainError):
            sibuya_pmf(0.5, bad)

    @pytest.mark.parametrize("alpha", [0.0, -0.1, 1.2])
    def test_alpha_domain(self, alpha):
        with pytest.raises(DomainError):
            sibuya_pmf(alpha, 1)

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
    def test_mass_plus_tail_is_one(self, alpha):
        K = 10_000
        pmf = sibuya_pmf_vector(alpha, K)
        surv = sibuya_survival_vector(alpha, K)
        np.testing.assert_allclose(np.cumsum(pmf) + surv, 1.0, atol=1e-12)

    @pytest.mark.parametrize("alpha", [Fraction(3, 10), Fraction(1, 2), Fraction(4, 5)])
    def test_against_rationals(self, alpha):
        a = float(alpha)
        for k in range(1, 40):
            assert sibuya_pmf(a, k) == pytest.approx(float(oracles.sibuya_pmf(alpha, k)), rel=1e-14)
            assert sibuya_survival(a, k) == pytest.approx(float(oracles.sibuya_survival(alpha, k)), rel=1e-14)

    @settings(max_examples=50)
    @given(st.floats(0.01, 1.0), st.integers(0, 5000))
    def test_survival_nonincreasing(self, alpha, k):
        assert sibuya_survival(alpha, k + 1) <= sibuya_survival(alpha, k)

    def test_large_argument_branch_is_continuous(self):
        # k = 64 uses the product, k = 65 the Pochhammer form
        for a in (0.2, 0.5, 0.9):
            ratio = sibuya_survival(a, 65) / sibuya_survival(a, 64)
            assert ratio == pytest.approx(1 - a / 65, rel=1e-13)


class TestSibuyaSampler:
    def test_degenerate(self):
        assert np.all(sibuya_sample(gen(1), 1.0, 1000) == 1)

    def test_frequencies(self):
        N = 10**6
        z = sibuya_sample(gen(11), 0.5, N)
        assert z.min() >= 1
        for k, target in ((1, 0.5), (2, 0.125)):
            f = np.mean(z == k)
            assert within_sigma(f, target, math.sqrt(target * (1 - target) / N))
        tail = np.mean(z > 100)
        assert within_sigma(tail, SURVIVAL_HALF_100, math.sqrt(SURVIVAL_HALF_100 / N))

    def test_far_tail(self):
        N, alpha, k = 200_000, 0.1, 10**6
        z = sibuya_sample(gen(5), alpha, N)
        s = sibuya_survival(alpha, k)
        assert within_sigma(np.mean(z > k), s, math.sqrt(s * (1 - s) / N))

    def test_scalar_draw(self):
        z = sibuya_sample(gen(3), 0.5)
        assert isinstance(z, (int, np.integer)) and z >= 1

    def test_reproducible(self):
        a = sibuya_sample(RngStream(9, 2), 0.4, 100)
        b = sibuya_sample(RngStream(9, 2), 0.4, 100)
        c = sibuya_sample(RngStream(9, 3), 0.4, 100)
        assert np.array_equal(a, b) and not np.array_equal(a, c)


class TestDml:
    def test_type_b_unit_p(self):
        assert np.all(dml_sample(gen(1), "B", 1.0, 0.5, 1000) == 1)

    def test_type_a_unit_p_is_sibuya(self):
        N = 200_000
        z = dml_sample(gen(2), "A", 1.0, 0.5, N)
        assert within_sigma(np.mean(z == 1), 0.5, math.sqrt(0.25 / N))

    def test_type_a_with_unit_steps_is_geometric(self):
        pmf = dml_pmf("A", 0.3, 1.0, 30)
        k = np.arange(1, 31)
        np.testing.assert_allclose(pmf.mass[1:], 0.3 * 0.7 ** (k - 1), rtol=1e-14)
        u = 0.6
        assert dml_generating_function("A", 0.3, 1.0, u) == pytest.approx(0.3 * u / (1 - 0.7 * u), rel=1e-15)

    def test_closed_form_value(self):
        v = dml_generating_function("A", 0.5, 0.5, 0.5)
        assert v == pytest.approx((1 - math.sqrt(0.5)) / (1 + math.sqrt(0.5)), rel=1e-15)
        assert v == pytest.approx(0.171573, abs=1e-6)

    @pytest.mark.parametrize("kind", ["A", "B"])
    def test_empirical_generating_function(self, kind):
        N, p, alpha = 10**6, 0.5, 0.5
        z = dml_sample(gen(21 if kind == "A" else 22), kind, p, alpha, N)
        for u in (0.25, 0.5, 0.75):
            w = u ** z.astype(float)
            target = dml_generating_function(kind, p, alpha, u)
            assert within_sigma(w.mean(), target, w.std() / math.sqrt(N))

    @pytest.mark.parametrize("kind", ["A", "B"])
    def test_exact_pmf_matches_generating_function(self, kind):
        H = 400
        pmf = dml_pmf(kind, 0.4, 0.6, H)
        for u in (0.2, 0.5):
            partial = np.polyval(pmf.mass[::-1], u)
            assert partial == pytest.approx(dml_generating_function(kind, 0.4, 0.6, u), abs=1e-12)
        assert pmf.mass.sum() + pmf.tail_bound == pytest.approx(1.0, abs=1e-12)

    def test_bad_parameters(self):
        with pytest.raises(ValidationError):
            dml_sample(gen(0), "C", 0.5, 0.5, 3)
        with pytest.raises(ValidationError):
            dml_sample(gen(0), "A", 0.0, 0.5, 3)
        with pytest.raises(ValidationError):
            compound_geometric_pmf("A", 1.5, PointMass(), 5)


class TestRenewal:
    def test_unit_steps(self):
        path = renewal_path(gen(0), PointMass(), 5)
        assert path.renewal_times.tolist() == [0, 1, 2, 3, 4, 5, 6]
        assert [path.count(t) for t in range(6)] == list(range(6))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32), st.integers(0, 60))
    def test_count_is_last_renewal_index(self, seed, horizon):
        path = renewal_path(seed, Sibuya(0.6), horizon)
        T = path.renewal_times
        assert T[0] == 0 and np.all(np.diff(T) > 0)
        assert T[-1] > horizon and (T.size == 1 or T[-2] <= horizon)
        for t in range(horizon + 1):
            assert path.count(t) == max(n for n in range(T.size) if T[n] <= t)

    def test_one_renewal_by_time_two(self):
        N = 10**6
        c = counting_samples(gen(31), Sibuya(0.5), [2], N)[:, 0]
        assert within_sigma(np.mean(c == 1), 0.375, math.sqrt(0.375 * 0.625 / N))

    def test_vectorized_matches_paths(self):
        # same law from the per-path and vectorized samplers
        N, t = 20_000, 7
        vec = counting_samples(gen(1), Sibuya(0.5), [t], N)[:, 0]
        g = gen(2)
        loop = np.array([renewal_path(g, Sibuya(0.5), t).count(t) for _ in range(N)])
        exact = np.array([float(p) for p in oracles.counting_law(Fraction(1, 2), t)])
        for sample in (vec, loop):
            freq = np.bincount(sample, minlength=t + 1)[: t + 1] / N
            assert np.all(np.abs(freq - exact) <= 4 * np.sqrt(exact * (1 - exact) / N) + 1e-12)

    def test_sparse_branch_law(self):
        # a far time point forces the per-time comparison branch
        N, t = 20_000, 3
        c = counting_samples(gen(4), Sibuya(0.5), [t, 3_000], N)
        assert np.all(c[:, 0] <= c[:, 1])
        exact = np.array([float(p) for p in oracles.counting_law(Fraction(1, 2), t)])
        freq = np.bincount(c[:, 0], minlength=t + 1) / N
        assert np.all(np.abs(freq - exact) <= 4 * np.sqrt(exact * (1 - exact) / N))


class TestCountingClosedForms:
    def test_examples(self):
        assert sibuya_counting_pmf(0.5, 0, 0) == 1.0
        assert sibuya_counting_pmf(0.5, 1, 0) == pytest.approx(0.5, abs=1e-15)
        assert sibuya_counting_pmf(0.5, 2, 1) == pytest.approx(0.375, abs=1e-15)
        assert sibuya_counting_pmf(0.5, 2, 5) == 0.0

    @pytest.mark.parametrize("alpha", [Fraction(3, 10), Fraction(1, 2), Fraction(4, 5)])
    def test_equals_enumeration(self, alpha):
        table = sibuya_counting_pmf_table(float(alpha), 10)
        for t in range(11):
            exact = oracles.counting_law(alpha, t)
            for m in range(t + 1):
                assert abs(table[m, t] - float(exact[m])) < 1e-14
                assert abs(sibuya_counting_pmf(float(alpha), t, m) - float(exact[m])) < 1e-14

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
    def test_columns_sum_to_one(self, alpha):
        table = sibuya_counting_pmf_table(alpha, 200)
        np.testing.assert_allclose(table.sum(axis=0), 1.0, atol=1e-10)
        assert np.all(table >= 0.0)

    def test_table_matches_generating_function(self):
        table = sibuya_counting_pmf_table(0.4, 120)
        gf = counting_pmf_table_via_gf(sibuya_pmf_vector(0.4, 120), 120)
        assert np.max(np.abs(table - gf)) < 1e-12

    def test_potential(self):
        assert sibuya_potential(0.5, 0) == 1.0
        assert sibuya_potential(0.5, 1) == 0.5
        assert sibuya_potential(0.5, 2) == 0.375
        for t in range(9):
            assert sibuya_potential(0.3, t) == pytest.approx(float(oracles.potential(Fraction(3, 10), t)), rel=1e-13)

    def test_moment_examples(self):
        m0 = sibuya_counting_moments(0.5, 0, 0)
        assert m0.mean_t1 == 0.0 and m0.second_t1 == 0.0
        m = sibuya_counting_moments(0.5, 1, 2)
        assert m.mean_t1 == pytest.approx(0.5) and m.second_t1 == pytest.approx(0.5)
        assert m.var_t1 == pytest.approx(0.25)
        assert m.mean_t2 == pytest.approx(0.875) and m.cross == pytest.approx(0.75)
        assert m.cov == pytest.approx(0.3125)

    @pytest.mark.parametrize("alpha", [Fraction(3, 10), Fraction(1, 2), Fraction(4, 5)])
    def test_moments_equal_enumeration(self, alpha):
        a = float(alpha)
        for t1 in range(0, 11, 2):
            for t2 in range(t1, 11, 3):
                m = sibuya_counting_moments(a, t1, t2)
                assert abs(m.mean_t1 - float(oracles.counting_mean(alpha, t1))) < 1e-12
                assert abs(m.second_t2 - float(oracles.counting_second(alpha, t2))) < 1e-12
                assert abs(m.cross - float(oracles.counting_cross(alpha, t1, t2))) < 1e-12

    def test_ordering_enforced(self):
        with pytest.raises(ValidationError):
            sibuya_counting_moments(0.5, 5, 2)


class TestContainers:
    def test_pmf_validation(self):
        with pytest.raises(ValidationError):
            DiscretePmf(np.array([0.5, 0.4]))
        with pytest.raises(ValidationError):
            DiscretePmf(np.array([1.1, -0.1]))
        pmf = DiscretePmf(np.array([0.0, 0.5, 0.3]), tail_bound=0.2)
        np.testing.assert_allclose(pmf.survival(), [1.0, 0.5, 0.2])
        assert pmf.support_max == 2

    def test_finite_step_rejects_zero(self):
        with pytest.raises(ValidationError):
            FiniteStep(np.array([0.5, 0.5]))

    @pytest.mark.parametrize("step", [Sibuya(0.3), PointMass(), PointMass(3), FiniteStep(np.array([0, 0.25, 0, 0.75]))])
    def test_json_round_trip(self, step):
        assert step_from_json(step.to_json()) == step


class TestChunks:
    def test_independent_of_threads(self):
        worker = lambda g, n: sibuya_sample(g, 0.5, n)  # noqa: E731
        one = run_chunks(worker, 35_000, seed=4, threads=1)
        many = run_chunks(worker, 35_000, seed=4, threads=4)
        assert one.shape == (35_000,) and np.array_equal(one, many)

    def test_streams_differ(self):
        worker = lambda g, n: g.random(n)  # noqa: E731
        a = run_chunks(worker, 100, seed=4, stream_id=0)
        b = run_chunks(worker, 100, seed=4, stream_id=1)
        assert not np.array_equal(a, b)

    def test_rejects_empty(self):
        with pytest.raises(ValidationError):
            run_chunks(lambda g, n: g.random(n), 0, seed=1)
