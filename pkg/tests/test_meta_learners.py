"""Deterministic and Gibbs meta-learners on the shared bias grid."""

import numpy as np
import pytest
from scipy import stats

from metashift.environment import EnvironmentConfig, MetaTrainConfig, sample_meta_dataset
from metashift.grid import HyperGrid
from metashift.meta_learners import (
    DEFAULT_HYPER_PRIOR,
    GibbsPosterior,
    emrm,
    emrm_batch,
    gibbs_temperature,
    imrm_mode,
    imrm_objective,
    imrm_posterior,
    imrm_sample,
    imrm_sample_batch,
    normalize_log_weights,
    posterior_log_density,
)
from metashift.meta_objectives import meta_training_loss
from metashift.special_math import BetaParams, beta_log_pdf

FIG_ENV = EnvironmentConfig(source=BetaParams(1.5, 7.5), target=BetaParams(4.0, 5.0))
FIG_CFG = MetaTrainConfig(n_tasks=8, samples_per_task=10, source_frac=0.6,
                          source_weight=0.1, data_weight=0.55, concentration=5.0)


def fig_dataset(seed=0, cfg=FIG_CFG):
    return sample_meta_dataset(FIG_ENV, cfg, np.random.default_rng(seed))


def uniform_posterior(grid=None):
    grid = grid or HyperGrid(201)
    lw = np.zeros(grid.size)
    probs, log_norm = normalize_log_weights(lw, grid)
    return GibbsPosterior(grid=grid, log_weights=lw, probs=probs,
                          log_normalizer=float(log_norm), hyper_prior=BetaParams(1, 1))


class TestHyperGrid:
    def test_interior_uniform(self):
        grid = HyperGrid(201)
        assert grid.points[0] > 0.0 and grid.points[-1] < 1.0
        diffs = np.diff(grid.points)
        assert np.all(np.abs(diffs - grid.spacing) < 1e-12)

    def test_minimum_size(self):
        with pytest.raises(ValueError):
            HyperGrid(2)

    def test_quadrature_of_ones(self):
        grid = HyperGrid(101)
        assert grid.quadrature(np.ones(101)) == pytest.approx(1.0, abs=1e-12)


class TestEmrm:
    def test_single_task_stationary_oracle(self):
        # pure-bias learner: minimizer solves the quadratic exactly
        cfg = MetaTrainConfig(n_tasks=1, samples_per_task=10, source_frac=1.0,
                              source_weight=1.0, data_weight=0.0, concentration=5.0)
        samples = np.array([1, 0] * 5, dtype=np.int8)
        from metashift.environment import MetaDataset, TaskDataset
        task = TaskDataset(samples=samples, task_mean=0.5, from_source=True)
        data = MetaDataset(tasks=(task,), config=cfg)
        u = emrm(data, HyperGrid(201))
        assert u == pytest.approx(0.5, abs=1e-9)  # (2*0.5*6 - 1) / (2*5) = 0.5

    def test_constant_loss_tie_break(self):
        cfg = MetaTrainConfig(n_tasks=4, samples_per_task=10, source_frac=0.5,
                              source_weight=0.5, data_weight=1.0, concentration=5.0)
        data = sample_meta_dataset(FIG_ENV, cfg, np.random.default_rng(1))
        grid = HyperGrid(201)
        assert emrm(data, grid) == grid.points[0]

    def test_identical_tasks_match_single_task(self):
        from metashift.environment import MetaDataset, TaskDataset
        samples = np.array([1, 1, 0, 0, 0, 0, 0, 0, 0, 0], dtype=np.int8)
        def build(n, frac, w):
            cfg = MetaTrainConfig(n_tasks=n, samples_per_task=10, source_frac=frac,
                                  source_weight=w, data_weight=0.55, concentration=5.0)
            tasks = tuple(
                TaskDataset(samples=samples, task_mean=0.2, from_source=i < cfg.n_src)
                for i in range(n)
            )
            return MetaDataset(tasks=tasks, config=cfg)
        grid = HyperGrid(201)
        assert emrm(build(6, 0.5, 0.5), grid) == pytest.approx(
            emrm(build(1, 1.0, 1.0), grid), abs=1e-12
        )

    def test_grid_optimality_invariant(self):
        data = fig_dataset(5)
        grid = HyperGrid(201)
        u = emrm(data, grid)
        best = meta_training_loss(u, data).total
        for ug in grid.points:
            assert best <= meta_training_loss(float(ug), data).total + 1e-12

    def test_bit_identical_determinism(self):
        grid = HyperGrid(201)
        assert emrm(fig_dataset(9), grid) == emrm(fig_dataset(9), grid)

    def test_batch_matches_scalar(self):
        grid = HyperGrid(201)
        data = fig_dataset(13)
        k_src = data.source_counts[None, :]
        k_tgt = data.target_counts[None, :]
        assert emrm_batch(k_src, k_tgt, FIG_CFG, grid)[0] == emrm(data, grid)

    def test_permuting_samples_is_invisible(self):
        # learners see only counts; shuffling flips within a task is a no-op
        from metashift.environment import MetaDataset, TaskDataset
        data = fig_dataset(3)
        rng = np.random.default_rng(0)
        shuffled = tuple(
            TaskDataset(samples=rng.permutation(t.samples), task_mean=t.task_mean,
                        from_source=t.from_source)
            for t in data.tasks
        )
        data2 = MetaDataset(tasks=shuffled, config=data.config)
        grid = HyperGrid(201)
        assert emrm(data, grid) == emrm(data2, grid)


class TestImrmObjective:
    def test_pure_bias_equals_training_loss(self):
        cfg = MetaTrainConfig(n_tasks=8, samples_per_task=10, source_frac=0.6,
                              source_weight=0.1, data_weight=0.0, concentration=5.0)
        data = sample_meta_dataset(FIG_ENV, cfg, np.random.default_rng(2))
        for u in (0.2, 0.5, 0.8):
            assert imrm_objective(u, data) == pytest.approx(
                meta_training_loss(u, data).total, abs=1e-12
            )

    def test_blend_fixed_point_single_task(self):
        from metashift.environment import MetaDataset, TaskDataset
        cfg = MetaTrainConfig(n_tasks=1, samples_per_task=10, source_frac=1.0,
                              source_weight=1.0, data_weight=0.55, concentration=5.0)
        samples = np.array([1, 1, 1, 0, 0, 0, 0, 0, 0, 0], dtype=np.int8)
        data = MetaDataset(
            tasks=(TaskDataset(samples=samples, task_mean=0.3, from_source=True),),
            config=cfg,
        )
        assert imrm_objective(0.3, data) == pytest.approx(
            meta_training_loss(0.3, data).total, abs=1e-10
        )

    def test_dominates_training_loss(self):
        data = fig_dataset(6)
        for u in (0.1, 0.4, 0.9):
            assert imrm_objective(u, data) >= meta_training_loss(u, data).total - 1e-12


class TestImrmPosterior:
    def test_zero_temperature_reproduces_prior(self):
        data = fig_dataset(4)
        grid = HyperGrid(201)
        post = imrm_posterior(data, grid=grid, temperature=0.0)
        prior = np.exp(beta_log_pdf(grid.points, DEFAULT_HYPER_PRIOR))
        np.testing.assert_allclose(post.probs, prior / grid.quadrature(prior), rtol=1e-12)

    def test_uniform_prior_mode_tracks_emrm(self):
        # pure-bias learner: objective equals training loss, so the
        # posterior mode under a flat prior sits at the minimizer
        cfg = MetaTrainConfig(n_tasks=1, samples_per_task=10, source_frac=1.0,
                              source_weight=1.0, data_weight=0.0, concentration=5.0)
        data = sample_meta_dataset(FIG_ENV, cfg, np.random.default_rng(8))
        grid = HyperGrid(201)
        post = imrm_posterior(data, BetaParams(1, 1), grid)
        assert abs(imrm_mode(post) - emrm(data, grid)) <= grid.spacing

    def test_figure_parameters_unimodal_and_narrower(self):
        data = fig_dataset(12)
        post = imrm_posterior(data, grid=HyperGrid(201))
        peak = int(np.argmax(post.probs))
        assert np.all(np.diff(post.probs[: peak + 1]) >= -1e-12)
        assert np.all(np.diff(post.probs[peak:]) <= 1e-12)
        assert post.variance < DEFAULT_HYPER_PRIOR.variance

    def test_normalization_invariant(self):
        grid = HyperGrid(201)
        for seed in range(5):
            post = imrm_posterior(fig_dataset(seed), grid=grid)
            assert grid.quadrature(post.probs) == pytest.approx(1.0, abs=1e-9)

    def test_temperature_dominates_towards_emrm(self):
        grid = HyperGrid(201)
        data = fig_dataset(21)
        u_e = emrm(data, grid)
        base = gibbs_temperature(data.config)
        gaps = []
        for factor in (1, 10, 100, 1000):
            post = imrm_posterior(data, grid=grid, temperature=base * factor)
            gaps.append(abs(imrm_mode(post) - u_e))
        assert all(b <= a + 1e-12 for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] < 2 * grid.spacing


class TestImrmMode:
    def test_prior_mode_location(self):
        data = fig_dataset(0)
        grid = HyperGrid(201)
        post = imrm_posterior(data, grid=grid, temperature=0.0)
        analytic = (1.8 - 1.0) / (1.8 + 2.5 - 2.0)
        assert abs(imrm_mode(post) - analytic) <= grid.spacing

    def test_symmetric_tie_breaks_small(self):
        grid = HyperGrid(201)
        lw = np.zeros(grid.size)
        lw[50] = lw[150] = 1.0  # symmetric bimodal weights
        probs, log_norm = normalize_log_weights(lw, grid)
        post = GibbsPosterior(grid=grid, log_weights=lw, probs=probs,
                              log_normalizer=float(log_norm),
                              hyper_prior=BetaParams(1, 1))
        assert imrm_mode(post) == grid.points[50]

    def test_high_temperature_matches_emrm(self):
        grid = HyperGrid(201)
        data = fig_dataset(30)
        post = imrm_posterior(data, grid=grid, temperature=1e4)
        assert abs(imrm_mode(post) - emrm(data, grid)) <= grid.spacing


class TestImrmSample:
    def test_kolmogorov_smirnov_against_prior(self):
        # zero temperature: draws must follow the hyper-prior itself
        grid = HyperGrid(201)
        post = imrm_posterior(fig_dataset(2), grid=grid, temperature=0.0)
        rng = np.random.default_rng(123)
        draws = imrm_sample_batch(np.tile(post.probs, (1_000_000, 1)), grid, rng)
        ks = stats.kstest(draws, lambda x: stats.beta.cdf(x, 1.8, 2.5)).statistic
        assert ks < 0.005

    def test_point_mass_cell(self):
        grid = HyperGrid(201)
        probs = np.full(grid.size, 1e-12)
        probs[77] = grid.size  # essentially all mass in one cell
        probs /= grid.quadrature(probs)
        rng = np.random.default_rng(5)
        draws = imrm_sample_batch(np.tile(probs, (2000, 1)), grid, rng)
        edges = grid.cell_edges()
        assert np.all((draws >= edges[77]) & (draws <= edges[78]))

    def test_reproducible(self):
        post = imrm_posterior(fig_dataset(3), grid=HyperGrid(201))
        a = imrm_sample(post, np.random.default_rng(7))
        b = imrm_sample(post, np.random.default_rng(7))
        assert a == b


class TestPosteriorLogDensity:
    def test_exact_at_grid_points(self):
        post = imrm_posterior(fig_dataset(1), grid=HyperGrid(201))
        for g in (0, 57, 200):
            u = float(post.grid.points[g])
            assert posterior_log_density(post, u) == pytest.approx(
                float(np.log(post.probs[g])), abs=1e-12
            )

    def test_interpolated_density_integrates_to_one(self):
        post = imrm_posterior(fig_dataset(1), grid=HyperGrid(201))
        x = (np.arange(200_000) + 0.5) / 200_000
        dens = np.exp([posterior_log_density(post, float(v)) for v in x[::40]])
        # coarse subsample of a fine midpoint rule
        total = np.sum(dens) * (40.0 / 200_000)
        assert total == pytest.approx(1.0, abs=2e-4)

    def test_uniform_posterior_zero_everywhere(self):
        post = uniform_posterior()
        for u in (0.001, 0.37, 0.5, 0.999):
            assert posterior_log_density(post, u) == pytest.approx(0.0, abs=1e-12)

    def test_domain_error(self):
        post = uniform_posterior()
        with pytest.raises(ValueError):
            posterior_log_density(post, 0.0)
        with pytest.raises(ValueError):
            posterior_log_density(post, 1.0)
