"""Base learner: blend, output posterior, losses and KL regularizer."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from metashift.base_learner import (
    blend,
    count_kl_table,
    count_loss_table,
    empirical_mean,
    per_task_training_loss,
    posterior,
    posterior_prior_kl,
)
from metashift.environment import TaskDataset
from metashift.grid import HyperGrid
from metashift.special_math import beta_log_pdf, BetaParams


def make_task(samples):
    samples = np.asarray(samples, dtype=np.int8)
    return TaskDataset(samples=samples, task_mean=0.5, from_source=True)


def task_with_count(count, m):
    return make_task([1] * count + [0] * (m - count))


class TestEmpiricalMean:
    def test_all_zeros(self):
        assert empirical_mean(make_task([0, 0, 0, 0])) == 0.0

    def test_three_of_ten(self):
        assert empirical_mean(task_with_count(3, 10)) == pytest.approx(0.3)

    def test_matches_vector_mean(self):
        rng = np.random.default_rng(0)
        samples = (rng.random(25) < 0.4).astype(int)
        assert empirical_mean(make_task(samples)) == pytest.approx(samples.mean())


class TestBlend:
    def test_pure_data(self):
        assert blend(0.7, 0.1, 1.0) == pytest.approx(0.7)

    def test_pure_bias(self):
        assert blend(0.7, 0.1, 0.0) == pytest.approx(0.1)

    def test_arithmetic(self):
        assert blend(0.4, 0.2, 0.55) == pytest.approx(0.31)

    @settings(max_examples=200, deadline=None)
    @given(d=st.floats(0, 1), u=st.floats(0, 1), g=st.floats(0, 1))
    def test_stays_in_unit_interval(self, d, u, g):
        assert 0.0 <= blend(d, u, g) <= 1.0

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            blend(1.5, 0.5, 0.5)


class TestPosterior:
    def test_symmetric_case(self):
        p = posterior(task_with_count(4, 10), u=0.5, data_weight=0.0, concentration=5.0)
        beta = p.to_beta()
        assert (beta.a, beta.b) == (2.5, 2.5)

    def test_blend_example(self):
        p = posterior(task_with_count(4, 10), u=0.2, data_weight=0.55, concentration=5.0)
        beta = p.to_beta()
        assert beta.a == pytest.approx(5 * 0.31)
        assert beta.b == pytest.approx(5 * 0.69)

    def test_variance_identity(self):
        p = posterior(task_with_count(4, 10), u=0.2, data_weight=0.55, concentration=5.0)
        assert p.variance == pytest.approx(0.31 * 0.69 / 6.0)
        assert p.variance == pytest.approx(p.to_beta().variance, rel=1e-12)

    def test_degenerate_corner(self):
        p = posterior(task_with_count(0, 10), u=0.0, data_weight=0.55, concentration=5.0)
        assert p.is_degenerate and p.variance == 0.0
        with pytest.raises(ValueError):
            p.to_beta()


class TestPerTaskTrainingLoss:
    def test_perfect_fit_zero(self):
        # all-zero data with zero bias: point mass at zero, zero loss
        assert per_task_training_loss(task_with_count(0, 10), 0.0, 0.0, 5.0) == 0.0

    def test_formula_arithmetic(self):
        got = per_task_training_loss(task_with_count(5, 10), 0.5, 0.0, 5.0)
        assert got == pytest.approx(0.25 / 6.0 + 0.25 - 0.5 + 0.5, rel=1e-13)

    def test_single_case_monte_carlo_oracle(self):
        rng = np.random.default_rng(42)
        task = task_with_count(4, 10)
        u, g, c = 0.35, 0.55, 5.0
        r = blend(empirical_mean(task), u, g)
        w = rng.beta(c * r, c * (1 - r), size=1_000_000)
        losses = np.mean((w[:, None] - task.samples[None, :].astype(float)) ** 2, axis=1)
        se = losses.std() / np.sqrt(losses.size)
        assert abs(per_task_training_loss(task, u, g, c) - losses.mean()) < 4 * se

    def test_randomized_monte_carlo_suite(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            m = int(rng.integers(1, 20))
            task = task_with_count(int(rng.integers(0, m + 1)), m)
            u = float(rng.uniform(0.02, 0.98))
            g = float(rng.uniform(0, 1))
            c = float(rng.uniform(0.5, 20))
            r = blend(empirical_mean(task), u, g)
            if r in (0.0, 1.0):
                w = np.full(300_000, r)
            else:
                w = rng.beta(c * r, c * (1 - r), size=300_000)
            losses = np.mean((w[:, None] - task.samples[None, :].astype(float)) ** 2, axis=1)
            se = max(losses.std() / np.sqrt(losses.size), 1e-12)
            assert abs(per_task_training_loss(task, u, g, c) - losses.mean()) < 4 * se

    def test_quadratic_in_bias(self):
        # constant second difference across the grid
        task = task_with_count(3, 10)
        u = np.linspace(0.05, 0.95, 61)
        f = np.array([per_task_training_loss(task, ui, 0.55, 5.0) for ui in u])
        second = np.diff(f, 2) / np.diff(u)[0] ** 2
        assert np.max(np.abs(second - second[0])) < 1e-6

    def test_bounded_loss(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            m = int(rng.integers(1, 15))
            task = task_with_count(int(rng.integers(0, m + 1)), m)
            loss = per_task_training_loss(
                task, float(rng.uniform(0, 1)), float(rng.uniform(0, 1)),
                float(rng.uniform(0.5, 30)),
            )
            assert 0.0 <= loss <= 1.0


class TestPosteriorPriorKl:
    def test_zero_when_pure_bias(self):
        # data_weight 0 makes posterior == prior for any dataset
        assert posterior_prior_kl(task_with_count(7, 10), 0.3, 0.0, 5.0) == pytest.approx(
            0.0, abs=1e-12
        )

    def test_pure_data_case_vs_quadrature(self):
        task = task_with_count(4, 10)
        u, c = 0.3, 5.0
        got = posterior_prior_kl(task, u, 1.0, c)
        p = BetaParams(c * 0.4, c * 0.6)
        q = BetaParams(c * u, c * (1 - u))

        def integrand(x):
            lp = beta_log_pdf(x, p)
            return np.exp(lp) * (lp - beta_log_pdf(x, q))

        ref, _ = integrate.quad(integrand, 0, 1, epsabs=1e-13, epsrel=1e-12)
        assert got == pytest.approx(ref, rel=1e-9)

    def test_vanishes_at_blend_fixed_point(self):
        # u equal to the empirical mean makes the blend a fixed point
        task = task_with_count(4, 10)
        assert posterior_prior_kl(task, 0.4, 0.55, 5.0) == pytest.approx(0.0, abs=1e-10)

    def test_nonnegative_and_positive_off_fixed_point(self):
        task = task_with_count(4, 10)
        for u in (0.1, 0.25, 0.55, 0.9):
            assert posterior_prior_kl(task, u, 0.55, 5.0) > 1e-10

    def test_endpoint_bias_gives_infinity(self):
        task = task_with_count(4, 10)
        assert posterior_prior_kl(task, 0.0, 0.55, 5.0) == np.inf
        assert posterior_prior_kl(task, 1.0, 0.55, 5.0) == np.inf


class TestCountTables:
    def test_loss_table_matches_scalar_op(self):
        grid = HyperGrid(21)
        m, g, c = 10, 0.55, 5.0
        table = count_loss_table(m, g, c, grid)
        for k in (0, 3, 10):
            task = task_with_count(k, m)
            for j in (0, 10, 20):
                assert table[k, j] == pytest.approx(
                    per_task_training_loss(task, grid.points[j], g, c), rel=1e-13
                )

    def test_kl_table_matches_scalar_op(self):
        grid = HyperGrid(21)
        m, g, c = 10, 0.55, 5.0
        table = count_kl_table(m, g, c, grid)
        for k in (0, 4, 10):
            task = task_with_count(k, m)
            for j in (0, 7, 20):
                assert table[k, j] == pytest.approx(
                    posterior_prior_kl(task, grid.points[j], g, c), rel=1e-12, abs=1e-12
                )

    def test_kl_table_degenerate_rows_infinite(self):
        grid = HyperGrid(11)
        table = count_kl_table(5, 1.0, 5.0, grid)  # pure-data blend
        assert np.all(np.isinf(table[0]))
        assert np.all(np.isinf(table[5]))
        assert np.all(np.isfinite(table[1:5]))
