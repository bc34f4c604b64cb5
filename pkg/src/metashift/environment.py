"""Source/target task environments and meta-training data generation.

A task is a Bernoulli mean tau drawn from a Beta task distribution;
a per-task dataset is a fixed number of coin flips. The meta-training
set stacks datasets from the source environment first, then from the
target environment. Hidden task means ride along for the bound
evaluators (simulator-side oracle data); meta-learners must only ever
look at the samples/counts.

Because the per-task data are exchangeable binary sequences, every
marginal quantity reduces exactly to the count statistic, which is what
the closed-form environment-shift computations below exploit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import special as _sc

from .special_math import BetaParams, beta_log_pdf, log_beta_fn, sample_beta

__all__ = [
    "EnvironmentConfig",
    "MetaTrainConfig",
    "TaskDataset",
    "MetaDataset",
    "resolve_source_count",
    "sample_meta_dataset",
    "sample_count_draws",
    "sequence_log_marginal",
    "kl_data_marginals",
    "task_log_likelihood_ratio",
]


@dataclass(frozen=True)
class EnvironmentConfig:
    """Task distributions for meta-training (source) and meta-testing (target)."""

    source: BetaParams
    target: BetaParams

    @property
    def shifted(self) -> bool:
        return self.source != self.target


def resolve_source_count(source_frac: float, n_tasks: int) -> int:
    """Number of source-environment tasks for a given fraction.

    Nearest-integer rounding, clamped so that both environments stay
    nonempty whenever the fraction is strictly below one. A fraction of
    exactly one dedicates every task to the source environment.
    """
    if not (0.0 < source_frac <= 1.0):
        raise ValueError("source_frac must lie in (0, 1]")
    if source_frac == 1.0:
        return n_tasks
    if n_tasks < 2:
        raise ValueError("source_frac < 1 needs at least two tasks")
    return int(np.clip(round(source_frac * n_tasks), 1, n_tasks - 1))


@dataclass(frozen=True)
class MetaTrainConfig:
    """Meta-training layout and base-learner constants.

    n_tasks            total number of per-task datasets
    samples_per_task   flips per dataset
    source_frac        fraction of tasks drawn from the source environment
    source_weight      weight of the source block in the meta-training loss
    data_weight        convex weight of the empirical mean in the base learner
    concentration      total Beta mass of the base learner's output
    """

    n_tasks: int
    samples_per_task: int
    source_frac: float = 1.0
    source_weight: float = 1.0
    data_weight: float = 0.5
    concentration: float = 5.0
    n_src: int = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if self.n_tasks < 1 or self.samples_per_task < 1:
            raise ValueError("n_tasks and samples_per_task must be positive")
        if not (0.0 <= self.source_weight <= 1.0):
            raise ValueError("source_weight must lie in [0, 1]")
        if not (0.0 <= self.data_weight <= 1.0):
            raise ValueError("data_weight must lie in [0, 1]")
        if self.concentration <= 0.0:
            raise ValueError("concentration must be positive")
        n_src = resolve_source_count(self.source_frac, self.n_tasks)
        if self.source_frac == 1.0 and self.source_weight != 1.0:
            raise ValueError("source_frac = 1 requires source_weight = 1")
        object.__setattr__(self, "n_src", n_src)

    @property
    def n_tgt(self) -> int:
        return self.n_tasks - self.n_src


@dataclass(frozen=True)
class TaskDataset:
    """One task's binary samples plus simulator-only metadata.

    ``task_mean`` is the hidden Bernoulli mean; it exists for the bound
    evaluators and is never read by any meta-learner code path.
    """

    samples: np.ndarray
    task_mean: float
    from_source: bool

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.int8)
        if samples.ndim != 1 or samples.size < 1:
            raise ValueError("samples must be a nonempty vector")
        if np.any((samples != 0) & (samples != 1)):
            raise ValueError("samples must be binary")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def count(self) -> int:
        return int(self.samples.sum())

    @property
    def n_samples(self) -> int:
        return int(self.samples.size)


@dataclass(frozen=True)
class MetaDataset:
    """The stacked per-task datasets: source block first, then target."""

    tasks: tuple[TaskDataset, ...]
    config: MetaTrainConfig

    def __post_init__(self) -> None:
        if len(self.tasks) != self.config.n_tasks:
            raise ValueError("task count does not match config")
        for i, t in enumerate(self.tasks):
            if t.from_source != (i < self.config.n_src):
                raise ValueError("source block must come first")
            if t.n_samples != self.config.samples_per_task:
                raise ValueError("all tasks must have samples_per_task samples")

    @property
    def counts(self) -> np.ndarray:
        return np.array([t.count for t in self.tasks], dtype=np.int64)

    @property
    def source_counts(self) -> np.ndarray:
        return self.counts[: self.config.n_src]

    @property
    def target_counts(self) -> np.ndarray:
        return self.counts[self.config.n_src:]

    @property
    def task_means(self) -> np.ndarray:
        """Hidden task means; bound-evaluator oracle data only."""
        return np.array([t.task_mean for t in self.tasks], dtype=float)


def sample_meta_dataset(
    env: EnvironmentConfig, cfg: MetaTrainConfig, rng: np.random.Generator
) -> MetaDataset:
    """Draw a full meta-training set.

    Source-block tasks draw their mean from the source task distribution,
    target-block tasks from the target one; each dataset is then i.i.d.
    Bernoulli flips at that mean.
    """
    tasks = []
    for i in range(cfg.n_tasks):
        from_source = i < cfg.n_src
        dist = env.source if from_source else env.target
        tau = float(sample_beta(dist, rng))
        samples = (rng.random(cfg.samples_per_task) < tau).astype(np.int8)
        tasks.append(TaskDataset(samples=samples, task_mean=tau, from_source=from_source))
    return MetaDataset(tasks=tuple(tasks), config=cfg)


def sample_count_draws(
    env: EnvironmentConfig, cfg: MetaTrainConfig, n_draws: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Batch-sample count sufficient statistics for many meta-datasets.

    Returns (source_counts, target_counts, task_means) with shapes
    (n_draws, n_src), (n_draws, n_tgt) and (n_draws, n_tasks). The count
    reduction is exact for every consumer in this package, so replicated
    simulations never need to materialize individual flips.
    """
    m = cfg.samples_per_task
    tau_s = sample_beta(env.source, rng, size=(n_draws, cfg.n_src))
    k_src = rng.binomial(m, tau_s)
    if cfg.n_tgt > 0:
        tau_t = sample_beta(env.target, rng, size=(n_draws, cfg.n_tgt))
        k_tgt = rng.binomial(m, tau_t)
    else:
        tau_t = np.empty((n_draws, 0))
        k_tgt = np.empty((n_draws, 0), dtype=np.int64)
    return k_src, k_tgt, np.concatenate([tau_s, tau_t], axis=1)


def sequence_log_marginal(count: int, n_samples: int, p: BetaParams):
    """Log-probability of one binary sequence with ``count`` ones.

    Under a Beta task prior the marginal sequence probability is
    B(a + k, b + M - k) / B(a, b), identical for every ordering.
    """
    count_arr = np.asarray(count)
    if np.any(count_arr < 0) or np.any(count_arr > n_samples):
        raise ValueError("count must lie in [0, n_samples]")
    out = log_beta_fn(p.a + count_arr, p.b + n_samples - count_arr) - log_beta_fn(p.a, p.b)
    return float(out) if np.ndim(out) == 0 else out


def kl_data_marginals(n_samples: int, env: EnvironmentConfig) -> float:
    """Exact KL divergence between source and target per-task data marginals.

    Grouping the 2^M sequences by their count gives
    sum_k C(M, k) p_k (ln p_k - ln q_k) with p_k, q_k the per-sequence
    marginals; computed in log space throughout.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    if not env.shifted:
        return 0.0
    k = np.arange(n_samples + 1)
    log_choose = (
        _sc.gammaln(n_samples + 1) - _sc.gammaln(k + 1) - _sc.gammaln(n_samples - k + 1)
    )
    log_p = sequence_log_marginal(k, n_samples, env.source)
    log_q = sequence_log_marginal(k, n_samples, env.target)
    return float(np.sum(np.exp(log_choose + log_p) * (log_p - log_q)))


def task_log_likelihood_ratio(tau, env: EnvironmentConfig):
    """log p_source(tau) - log p_target(tau) for an interior task mean."""
    return beta_log_pdf(tau, env.source) - beta_log_pdf(tau, env.target)
