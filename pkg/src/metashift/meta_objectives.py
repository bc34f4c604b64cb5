"""Meta-level losses: weighted training loss, closed-form transfer
generalization loss, Monte-Carlo oracles and excess-risk quantities.

The transfer meta-generalization loss of a bias u is the expected
squared error of the base learner's output on a fresh target-environment
task, averaged over the task, its training data and a test sample. For
the Beta-Bernoulli setting it has the closed form implemented in
``transfer_gen_loss``; ``mc_transfer_gen_loss`` is the definitional
sampler kept alongside as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base_learner import count_loss_at, count_loss_table
from .environment import EnvironmentConfig, MetaDataset
from .grid import HyperGrid
from .optimize import refine_grid_argmin
from .special_math import beta_mean_var, sample_beta

__all__ = [
    "LossBreakdown",
    "meta_training_loss",
    "transfer_gen_loss",
    "mc_transfer_gen_loss",
    "optimal_hyperparameter",
    "transfer_excess_risk",
]


@dataclass(frozen=True)
class LossBreakdown:
    """Weighted meta-training loss split into its environment blocks."""

    source_term: float
    target_term: float
    total: float


def meta_training_loss(u: float, data: MetaDataset) -> LossBreakdown:
    """Weighted average of per-task training losses at bias u.

    The source block is averaged with weight ``source_weight``, the
    target block with its complement; with a pure-source layout the
    total is just the source average.
    """
    cfg = data.config
    m, dw, c = cfg.samples_per_task, cfg.data_weight, cfg.concentration
    src = float(np.mean(count_loss_at(data.source_counts, u, m, dw, c)))
    if cfg.n_tgt == 0:
        return LossBreakdown(source_term=src, target_term=0.0, total=src)
    tgt = float(np.mean(count_loss_at(data.target_counts, u, m, dw, c)))
    a = cfg.source_weight
    return LossBreakdown(source_term=src, target_term=tgt, total=a * src + (1.0 - a) * tgt)


def transfer_gen_loss(u, env: EnvironmentConfig, data_weight: float,
                      concentration: float, samples_per_task: int):
    """Closed-form transfer meta-generalization loss at bias u.

    Derived by averaging the per-task expected squared error over the
    target task distribution; quadratic in u. Accepts scalar or array u.
    """
    g, c, m = data_weight, concentration, samples_per_task
    rp, vp = beta_mean_var(env.target)
    second = vp + rp * rp
    u = np.asarray(u, dtype=float)
    out = (
        u * (1.0 - g) * (
            1.0 / (c + 1.0)
            + u * (1.0 - g) * c / (c + 1.0)
            + 2.0 * g * rp * c / (c + 1.0)
            - 2.0 * rp
        )
        + g * rp / (c + 1.0)
        + (g * g * c / (c + 1.0)) * (rp / m + second * (1.0 - 1.0 / m))
        - 2.0 * g * second
        + rp
    )
    return float(out) if out.ndim == 0 else out


def mc_transfer_gen_loss(
    u: float,
    env: EnvironmentConfig,
    data_weight: float,
    concentration: float,
    samples_per_task: int,
    n_samples: int,
    rng: np.random.Generator,
) -> tuple[float, float]:
    """Definitional Monte-Carlo estimate of the transfer loss at bias u.

    Samples a target task, its training counts, a model parameter from
    the base learner and one test flip; returns (estimate, std_err).
    Blended means that land exactly on 0 or 1 yield a point-mass model
    parameter, matching the degenerate-corner convention.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    g, c, m = data_weight, concentration, samples_per_task
    tau = sample_beta(env.target, rng, size=n_samples)
    k = rng.binomial(m, tau)
    r = g * (k / m) + (1.0 - g) * u
    interior = (r > 0.0) & (r < 1.0)
    safe_r = np.clip(r, 1e-12, 1.0 - 1e-12)
    w = rng.beta(c * safe_r, c * (1.0 - safe_r))
    w = np.where(interior, w, r)
    z = (rng.random(n_samples) < tau).astype(float)
    losses = (w - z) ** 2
    est = float(losses.mean())
    se = float(losses.std(ddof=1) / np.sqrt(n_samples)) if n_samples > 1 else 0.0
    return est, se


def optimal_hyperparameter(
    env: EnvironmentConfig,
    data_weight: float,
    concentration: float,
    samples_per_task: int,
    grid: HyperGrid,
) -> tuple[float, float]:
    """Minimizer of the transfer generalization loss over the grid.

    Grid argmin with ties toward smaller u, then one golden-section
    refinement in the bracketing cell (the loss is quadratic in u, so
    the refinement is exact up to floating point).
    """
    def f(u):
        return transfer_gen_loss(u, env, data_weight, concentration, samples_per_task)

    return refine_grid_argmin(f(grid.points), f, grid)


def transfer_excess_risk(
    u: float,
    env: EnvironmentConfig,
    data_weight: float,
    concentration: float,
    samples_per_task: int,
    grid: HyperGrid,
) -> float:
    """Transfer generalization loss at u above its grid-refined minimum."""
    _, loss_star = optimal_hyperparameter(env, data_weight, concentration, samples_per_task, grid)
    return float(
        transfer_gen_loss(u, env, data_weight, concentration, samples_per_task) - loss_star
    )


def meta_training_loss_grid(data: MetaDataset, grid: HyperGrid) -> np.ndarray:
    """Weighted meta-training loss on every grid point (vectorized)."""
    cfg = data.config
    table = count_loss_table(cfg.samples_per_task, cfg.data_weight, cfg.concentration, grid)
    src = table[data.source_counts].mean(axis=0)
    if cfg.n_tgt == 0:
        return src
    tgt = table[data.target_counts].mean(axis=0)
    a = cfg.source_weight
    return a * src + (1.0 - a) * tgt
