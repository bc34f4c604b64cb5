"""Biased-regularization base learner for Bernoulli mean estimation.

Given a task dataset, the learner blends the empirical mean with a bias
hyperparameter and outputs a random model parameter with that blended
mean, distributed Beta with fixed total concentration. Squared-error
training losses and the posterior-vs-prior KL divergence have closed
forms in the count statistic, tabulated here for grid-sized batches.

Degenerate corners: when the blended mean lands exactly on 0 or 1 the
output law is a point mass there. The loss formulas remain valid since
the variance term r(1-r)/(c+1) is continuous (zero at the endpoints);
the KL against the prior is +inf for a degenerate posterior or prior,
which grid code avoids by construction (interior grid points, and
data_weight < 1 keeps the blend interior).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .environment import TaskDataset
from .grid import HyperGrid
from .special_math import BetaParams, kl_beta_beta_arrays

__all__ = [
    "PosteriorParams",
    "empirical_mean",
    "blend",
    "posterior",
    "per_task_training_loss",
    "posterior_prior_kl",
    "count_loss_table",
    "count_kl_table",
    "count_loss_at",
    "count_kl_at",
]


@dataclass(frozen=True)
class PosteriorParams:
    """Output law of the base learner: Beta(c*r, c*(1-r)), mean r.

    Degenerate at r in {0, 1}, where it collapses to a point mass.
    """

    r: float
    c: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.r <= 1.0:
            raise ValueError("mean must lie in [0, 1]")
        if self.c <= 0.0:
            raise ValueError("concentration must be positive")

    @property
    def mean(self) -> float:
        return self.r

    @property
    def variance(self) -> float:
        return self.r * (1.0 - self.r) / (self.c + 1.0)

    @property
    def is_degenerate(self) -> bool:
        return self.r in (0.0, 1.0)

    def to_beta(self) -> BetaParams:
        if self.is_degenerate:
            raise ValueError("degenerate posterior has no Beta representation")
        return BetaParams(self.c * self.r, self.c * (1.0 - self.r))


def empirical_mean(d: TaskDataset) -> float:
    """Fraction of ones in the task dataset."""
    return d.count / d.n_samples


def blend(d_mean: float, u: float, data_weight: float) -> float:
    """Convex combination data_weight * d_mean + (1 - data_weight) * u."""
    for name, v in (("d_mean", d_mean), ("u", u), ("data_weight", data_weight)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1]")
    return data_weight * d_mean + (1.0 - data_weight) * u


def posterior(d: TaskDataset, u: float, data_weight: float, concentration: float) -> PosteriorParams:
    """Base-learner output distribution for one task at bias u."""
    r = blend(empirical_mean(d), u, data_weight)
    return PosteriorParams(r=r, c=concentration)


def _loss_from_count_mean(r, d_mean, concentration):
    # E_W[(1/M) sum_j (W - Z_j)^2] for binary data: Var(W) + r^2 - 2 r D + D
    v = r * (1.0 - r) / (concentration + 1.0)
    return v + r * r - 2.0 * r * d_mean + d_mean


def per_task_training_loss(
    d: TaskDataset, u: float, data_weight: float, concentration: float
) -> float:
    """Expected squared-error training loss under the output posterior.

    Binary samples make the (1/M) sum of squared samples equal the
    empirical mean, which is folded in here.
    """
    d_mean = empirical_mean(d)
    r = blend(d_mean, u, data_weight)
    return float(_loss_from_count_mean(r, d_mean, concentration))


def posterior_prior_kl(
    d: TaskDataset, u: float, data_weight: float, concentration: float
) -> float:
    """KL divergence from the task posterior to the bias-centred prior.

    The prior is Beta(c*u, c*(1-u)); it is degenerate at u in {0, 1},
    in which case (and when the posterior itself is degenerate) the
    divergence is +inf. Vanishes exactly when the blend fixes u.
    """
    if not 0.0 <= u <= 1.0:
        raise ValueError("u must lie in [0, 1]")
    r = blend(empirical_mean(d), u, data_weight)
    if u in (0.0, 1.0) or r in (0.0, 1.0):
        return float("inf")
    c = concentration
    return float(
        kl_beta_beta_arrays(c * r, c * (1.0 - r), c * u, c * (1.0 - u))
    )


# ---------------------------------------------------------------------------
# Count tables: everything the meta level needs depends on a task dataset
# only through its count, so per-count rows tabulated over a grid of biases
# turn replicated simulations into small matrix products.
# ---------------------------------------------------------------------------


def _blend_counts_grid(n_samples: int, data_weight: float, grid: HyperGrid) -> np.ndarray:
    d = np.arange(n_samples + 1)[:, None] / n_samples
    return data_weight * d + (1.0 - data_weight) * grid.points[None, :]


def count_loss_table(
    n_samples: int, data_weight: float, concentration: float, grid: HyperGrid
) -> np.ndarray:
    """(n_samples+1, grid.size) table of per-task training losses."""
    d = np.arange(n_samples + 1)[:, None] / n_samples
    r = _blend_counts_grid(n_samples, data_weight, grid)
    return _loss_from_count_mean(r, d, concentration)


def count_kl_table(
    n_samples: int, data_weight: float, concentration: float, grid: HyperGrid
) -> np.ndarray:
    """(n_samples+1, grid.size) table of posterior-prior KL divergences.

    Rows whose blended mean is degenerate come out +inf; with
    data_weight < 1 and an interior grid that never happens.
    """
    c = concentration
    r = _blend_counts_grid(n_samples, data_weight, grid)
    u = np.broadcast_to(grid.points[None, :], r.shape)
    out = np.full(r.shape, np.inf)
    ok = (r > 0.0) & (r < 1.0)
    out[ok] = kl_beta_beta_arrays(
        c * r[ok], c * (1.0 - r[ok]), c * u[ok], c * (1.0 - u[ok])
    )
    return out


def count_loss_at(counts, u, n_samples: int, data_weight: float, concentration: float):
    """Per-task training losses for count arrays at bias u (broadcasting)."""
    d = np.asarray(counts, dtype=float) / n_samples
    r = data_weight * d + (1.0 - data_weight) * np.asarray(u, dtype=float)
    return _loss_from_count_mean(r, d, concentration)


def count_kl_at(counts, u, n_samples: int, data_weight: float, concentration: float):
    """Posterior-prior KLs for count arrays at interior bias u (broadcasting)."""
    d = np.asarray(counts, dtype=float) / n_samples
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0.0) or np.any(u >= 1.0):
        raise ValueError("count_kl_at requires interior u")
    c = concentration
    r = data_weight * d + (1.0 - data_weight) * u
    out = np.full(np.broadcast(r, u).shape, np.inf)
    r, u = np.broadcast_arrays(r, u)
    ok = (r > 0.0) & (r < 1.0)
    out[ok] = kl_beta_beta_arrays(c * r[ok], c * (1.0 - r[ok]), c * u[ok], c * (1.0 - u[ok]))
    return out
