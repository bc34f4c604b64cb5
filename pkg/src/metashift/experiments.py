"""Seeded experiment harness producing the CSV datasets behind the five
figure reproductions, plus a single-shot bound evaluation.

Every experiment is deterministic given (config, seed): replicate r of
sweep point s draws from its own stream derived as (seed, tag, s, r),
so worker scheduling cannot change any number. CSV files start with a
comment line recording the fully resolved configuration and the
artifact version.
"""

from __future__ import annotations

import concurrent.futures as _fut
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__
from .environment import (
    EnvironmentConfig,
    MetaDataset,
    MetaTrainConfig,
    TaskDataset,
    kl_data_marginals,
    sample_meta_dataset,
)
from .grid import HyperGrid
from .info_bounds import (
    ConstantHandle,
    EMRMHandle,
    IMRMGibbsHandle,
    MIBudget,
    SubGaussianConsts,
    avg_gap_bound_thm1,
    excess_risk_bound_thm2,
    pac_bound_loose_cor4,
    pac_bound_thm3,
    single_draw_bound_thm5,
)
from .meta_learners import (
    emrm,
    imrm_mode,
    imrm_posterior,
    imrm_sample,
)
from .meta_objectives import (
    meta_training_loss,
    meta_training_loss_grid,
    optimal_hyperparameter,
    transfer_gen_loss,
)
from .special_math import BetaParams, beta_log_pdf
from .streams import spawn_stream

__all__ = [
    "ConfigError",
    "NumericError",
    "ExperimentConfig",
    "ExperimentResult",
    "default_config",
    "parse_config_file",
    "apply_overrides",
    "run_fig_posterior",
    "run_fig_scaling",
    "run_fig_shift",
    "run_fig_alpha",
    "run_fig_singledraw",
    "run_bounds",
    "write_csv",
    "DEFAULT_M_VALUES",
    "DEFAULT_R_VALUES",
    "DEFAULT_ALPHA_VALUES",
    "DEFAULT_N_VALUES",
    "SINGLEDRAW_DELTAS",
]


class ConfigError(ValueError):
    """Invalid configuration input (CLI exits with code 2)."""


class NumericError(RuntimeError):
    """A non-finite value reached an output (CLI exits with code 3)."""


# stream tags per experiment
_TAG_POSTERIOR, _TAG_SCALING, _TAG_SHIFT, _TAG_ALPHA, _TAG_SINGLEDRAW, _TAG_BOUNDS = range(1, 7)
# purposes within a sweep point
_P_DATA, _P_MI, _P_DRAW = 0, 1, 2

DEFAULT_M_VALUES = (5, 10, 20, 40)
DEFAULT_R_VALUES = tuple(round(4.0 / 9.0 + k * 0.07, 6) for k in range(-4, 5))
DEFAULT_ALPHA_VALUES = tuple(round(0.1 * k, 1) for k in range(11))
DEFAULT_N_VALUES = (2, 3, 4, 5)
SINGLEDRAW_DELTAS = (0.25, 0.5, 0.75)


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved experiment parameters (flat key paths in files)."""

    env: EnvironmentConfig
    train: MetaTrainConfig
    grid_size: int = 201
    seed: int = 20260810
    replicates: int = 500
    delta: float = 0.2
    mi_replicates: int = 5000
    mi_bins: int = 40
    target_task_samples: int = 50
    hyper_prior: BetaParams = field(default_factory=lambda: BetaParams(1.8, 2.5))
    learner: str = "emrm"
    constant_bias: float = 0.5

    def __post_init__(self) -> None:
        if self.replicates < 1:
            raise ConfigError("replicates must be >= 1")
        if not 0.0 < self.delta < 1.0:
            raise ConfigError("delta must lie in (0, 1)")
        if self.grid_size < 3:
            raise ConfigError("grid_size must be >= 3")
        if self.mi_replicates < 100:
            raise ConfigError("mi_replicates must be >= 100")
        if self.mi_bins < 2 or self.target_task_samples < 1:
            raise ConfigError("mi_bins must be >= 2 and target_task_samples >= 1")
        if self.learner not in ("emrm", "imrm_gibbs", "constant"):
            raise ConfigError("learner must be emrm, imrm_gibbs or constant")

    def flat_items(self) -> list[tuple[str, str]]:
        return [
            ("env.source.a", _fmt(self.env.source.a)),
            ("env.source.b", _fmt(self.env.source.b)),
            ("env.target.a", _fmt(self.env.target.a)),
            ("env.target.b", _fmt(self.env.target.b)),
            ("train.n_tasks", str(self.train.n_tasks)),
            ("train.samples_per_task", str(self.train.samples_per_task)),
            ("train.source_frac", _fmt(self.train.source_frac)),
            ("train.source_weight", _fmt(self.train.source_weight)),
            ("train.data_weight", _fmt(self.train.data_weight)),
            ("train.concentration", _fmt(self.train.concentration)),
            ("grid_size", str(self.grid_size)),
            ("seed", str(self.seed)),
            ("replicates", str(self.replicates)),
            ("delta", _fmt(self.delta)),
            ("mi_replicates", str(self.mi_replicates)),
            ("mi_bins", str(self.mi_bins)),
            ("target_task_samples", str(self.target_task_samples)),
            ("hyper_prior.a", _fmt(self.hyper_prior.a)),
            ("hyper_prior.b", _fmt(self.hyper_prior.b)),
            ("learner", self.learner),
            ("constant_bias", _fmt(self.constant_bias)),
        ]


_FIGURE_DEFAULTS = {
    # worked-example posterior snapshot
    "fig-posterior": dict(source=(1.5, 7.5), target=(4.0, 5.0), n_tasks=8,
                          samples_per_task=10, source_frac=0.6, source_weight=0.1,
                          data_weight=0.55, concentration=5.0, replicates=1),
    # joint scaling of tasks and per-task samples
    "fig-scaling": dict(source=(1.5, 7.5), target=(4.0, 5.0), n_tasks=12,
                        samples_per_task=10, source_frac=0.48, source_weight=0.48,
                        data_weight=0.55, concentration=5.0, replicates=500),
    # environment-shift sweep against a fixed target
    "fig-shift": dict(source=(4.0, 5.0), target=(4.0, 5.0), n_tasks=10,
                      samples_per_task=5, source_frac=0.6, source_weight=0.6,
                      data_weight=0.55, concentration=5.0, replicates=500),
    # source-weight sweep
    "fig-alpha": dict(source=(1.67, 8.3), target=(4.45, 5.55), n_tasks=23,
                      samples_per_task=15, source_frac=0.4, source_weight=0.5,
                      data_weight=0.55, concentration=5.0, replicates=500),
    # single-draw bounds over the task count
    "fig-singledraw": dict(source=(1.5, 7.5), target=(4.0, 5.0), n_tasks=4,
                           samples_per_task=5, source_frac=0.25, source_weight=0.25,
                           data_weight=0.55, concentration=5.0, replicates=2000),
    # one-dataset bound breakdown, worked-example parameters
    "bounds": dict(source=(1.5, 7.5), target=(4.0, 5.0), n_tasks=8,
                   samples_per_task=10, source_frac=0.6, source_weight=0.1,
                   data_weight=0.55, concentration=5.0, replicates=1),
}


def default_config(subcommand: str) -> ExperimentConfig:
    """Experiment defaults for a subcommand (figure-caption parameters)."""
    try:
        d = _FIGURE_DEFAULTS[subcommand]
    except KeyError:
        raise ConfigError(f"unknown subcommand {subcommand!r}") from None
    return ExperimentConfig(
        env=EnvironmentConfig(source=BetaParams(*d["source"]), target=BetaParams(*d["target"])),
        train=MetaTrainConfig(
            n_tasks=d["n_tasks"],
            samples_per_task=d["samples_per_task"],
            source_frac=d["source_frac"],
            source_weight=d["source_weight"],
            data_weight=d["data_weight"],
            concentration=d["concentration"],
        ),
        replicates=d["replicates"],
    )


_CONFIG_KEYS = {
    "env.source.a": float, "env.source.b": float,
    "env.target.a": float, "env.target.b": float,
    "train.n_tasks": int, "train.samples_per_task": int,
    "train.source_frac": float, "train.source_weight": float,
    "train.data_weight": float, "train.concentration": float,
    "grid_size": int, "seed": int, "replicates": int, "delta": float,
    "mi_replicates": int, "mi_bins": int, "target_task_samples": int,
    "hyper_prior.a": float, "hyper_prior.b": float,
    "learner": str, "constant_bias": float,
}


def parse_config_file(path: str) -> dict[str, object]:
    """Read flat ``key = value`` lines; unknown keys are a hard error."""
    overrides: dict[str, object] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in _CONFIG_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
            try:
                overrides[key] = _CONFIG_KEYS[key](value)
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}") from None
    return overrides


def apply_overrides(config: ExperimentConfig, overrides: dict[str, object]) -> ExperimentConfig:
    """Rebuild a config with flat-key overrides applied."""
    vals = dict(config.flat_items())
    typed = {k: _CONFIG_KEYS[k](v) for k, v in vals.items()}
    for key, value in overrides.items():
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        typed[key] = value
    try:
        return ExperimentConfig(
            env=EnvironmentConfig(
                source=BetaParams(typed["env.source.a"], typed["env.source.b"]),
                target=BetaParams(typed["env.target.a"], typed["env.target.b"]),
            ),
            train=MetaTrainConfig(
                n_tasks=typed["train.n_tasks"],
                samples_per_task=typed["train.samples_per_task"],
                source_frac=typed["train.source_frac"],
                source_weight=typed["train.source_weight"],
                data_weight=typed["train.data_weight"],
                concentration=typed["train.concentration"],
            ),
            grid_size=typed["grid_size"],
            seed=typed["seed"],
            replicates=typed["replicates"],
            delta=typed["delta"],
            mi_replicates=typed["mi_replicates"],
            mi_bins=typed["mi_bins"],
            target_task_samples=typed["target_task_samples"],
            hyper_prior=BetaParams(typed["hyper_prior.a"], typed["hyper_prior.b"]),
            learner=typed["learner"],
            constant_bias=typed["constant_bias"],
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from None


# ---------------------------------------------------------------------------
# Result container and CSV writing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentResult:
    headers: tuple[str, ...]
    rows: tuple[tuple, ...]
    config_items: tuple[tuple[str, str], ...]


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    v = float(x)
    if not np.isfinite(v):
        raise NumericError(f"non-finite value {v!r} in output")
    return f"{v:.12g}"


def write_csv(result: ExperimentResult, path: str) -> None:
    lines = ["# config: " + " ".join(f"{k}={v}" for k, v in result.config_items)]
    lines.append(",".join(result.headers))
    for row in result.rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _config_items(config: ExperimentConfig, subcommand: str, **extra) -> tuple:
    items = [("artifact_version", __version__), ("subcommand", subcommand)]
    items += config.flat_items()
    items += [(k, str(v)) for k, v in extra.items()]
    return tuple(items)


def _run_indexed(fn, n: int, threads: int) -> list:
    """Evaluate fn(i) for i in range(n), results ordered by index.

    Replicate streams are derived from the index, so the thread count
    can never change any value.
    """
    if threads <= 1:
        return [fn(i) for i in range(n)]
    with _fut.ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(n)))


def _mean_se(values: np.ndarray) -> tuple[float, float]:
    v = np.asarray(values, dtype=float)
    se = float(v.std(ddof=1) / np.sqrt(v.size)) if v.size > 1 else 0.0
    return float(v.mean()), se


def _dataset_from_counts(counts, task_means, cfg: MetaTrainConfig) -> MetaDataset:
    """Canonical-order dataset for a draw already reduced to counts.

    The samples are exchangeable, so placing the ones first is
    distributionally equivalent and nothing downstream reads order.
    """
    m = cfg.samples_per_task
    tasks = []
    for i, (k, tau) in enumerate(zip(counts, task_means)):
        samples = np.zeros(m, dtype=np.int8)
        samples[: int(k)] = 1
        tasks.append(TaskDataset(samples=samples, task_mean=float(tau),
                                 from_source=i < cfg.n_src))
    return MetaDataset(tasks=tuple(tasks), config=cfg)


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------


def run_fig_posterior(config: ExperimentConfig) -> ExperimentResult:
    """Hyper-prior, Gibbs posterior and deterministic solution on one dataset."""
    grid = HyperGrid(config.grid_size)
    rng = spawn_stream(config.seed, _TAG_POSTERIOR, 0, _P_DATA)
    data = sample_meta_dataset(config.env, config.train, rng)
    post = imrm_posterior(data, config.hyper_prior, grid)
    u_emrm = emrm(data, grid)
    prior_density = np.exp(beta_log_pdf(grid.points, config.hyper_prior))
    rows = tuple(
        (grid.points[g], prior_density[g], post.probs[g], u_emrm)
        for g in range(grid.size)
    )
    headers = ("u", "hyper_prior_density", "imrm_posterior_density", "emrm_marker")
    return ExperimentResult(headers, rows, _config_items(config, "fig-posterior"))


def run_fig_scaling(
    config: ExperimentConfig, m_values=DEFAULT_M_VALUES, threads: int = 1
) -> ExperimentResult:
    """Mean losses and gaps of the three learners as the budget grows.

    The task count follows n = round(m / 0.85). The randomized learner's
    Gibbs average uses exact grid quadrature over its posterior; its mode
    variant evaluates the posterior mode.
    """
    if not m_values:
        raise ConfigError("m_values must be nonempty")
    grid = HyperGrid(config.grid_size)
    rows = []
    for mi, m in enumerate(m_values):
        n = int(round(m / 0.85))
        cfg = replace(config.train, n_tasks=n, samples_per_task=int(m))
        gen = {"emrm": [], "imrm_mode": [], "imrm_gibbs": []}
        train = {k: [] for k in gen}

        def one(r, cfg=cfg, mi=mi):
            rng = spawn_stream(config.seed, _TAG_SCALING, mi, r)
            data = sample_meta_dataset(config.env, cfg, rng)
            post = imrm_posterior(data, config.hyper_prior, grid)
            u_e = emrm(data, grid)
            u_m = imrm_mode(post)
            gl = transfer_gen_loss(
                grid.points, config.env, cfg.data_weight, cfg.concentration,
                cfg.samples_per_task,
            )
            tl = meta_training_loss_grid(data, grid)
            w = post.probs * grid.spacing
            out = {}
            for name, u in (("emrm", u_e), ("imrm_mode", u_m)):
                out[name] = (
                    float(transfer_gen_loss(u, config.env, cfg.data_weight,
                                            cfg.concentration, cfg.samples_per_task)),
                    meta_training_loss(u, data).total,
                )
            out["imrm_gibbs"] = (float(w @ gl), float(w @ tl))
            return out

        for res in _run_indexed(one, config.replicates, threads):
            for name, (g, t) in res.items():
                gen[name].append(g)
                train[name].append(t)
        for name in ("emrm", "imrm_mode", "imrm_gibbs"):
            g = np.array(gen[name])
            t = np.array(train[name])
            mg, sg = _mean_se(g)
            mt, st = _mean_se(t)
            mgap, sgap = _mean_se(g - t)
            rows.append((int(m), n, name, mg, sg, mt, st, mgap, sgap))
    headers = ("M", "N", "learner", "mean_gen_loss", "se_gen_loss",
               "mean_train_loss", "se_train_loss", "mean_gap", "se_gap")
    return ExperimentResult(
        headers, tuple(rows),
        _config_items(config, "fig-scaling", m_values=",".join(str(m) for m in m_values)),
    )


def run_fig_shift(
    config: ExperimentConfig, r_values=DEFAULT_R_VALUES, threads: int = 1
) -> ExperimentResult:
    """Environment-shift sweep: the source mean varies on a fixed-mass
    family while the target stays put; exact marginal KL, the average-gap
    bound for the deterministic learner, and replicate-averaged gaps."""
    for r in r_values:
        if not 0.0 < r < 1.0:
            raise ConfigError("R values must lie in (0, 1)")
    grid = HyperGrid(config.grid_size)
    cfg = config.train
    budget = MIBudget(config.mi_replicates, config.mi_bins, config.target_task_samples)
    consts = SubGaussianConsts()
    rows = []
    for ri, r_mean in enumerate(r_values):
        b = 9.0 * (1.0 - r_mean)
        a = 9.0 - b
        env = EnvironmentConfig(source=BetaParams(a, b), target=config.env.target)
        kl = kl_data_marginals(cfg.samples_per_task, env)
        bound = avg_gap_bound_thm1(
            env, cfg, EMRMHandle(grid), consts, budget,
            spawn_stream(config.seed, _TAG_SHIFT, ri, _P_MI),
        )

        def one(rep, env=env, ri=ri):
            rng = spawn_stream(config.seed, _TAG_SHIFT, ri, rep + 16)
            data = sample_meta_dataset(env, cfg, rng)
            post = imrm_posterior(data, config.hyper_prior, grid)
            out = []
            for u in (emrm(data, grid), imrm_mode(post)):
                g = float(transfer_gen_loss(u, env, cfg.data_weight, cfg.concentration,
                                            cfg.samples_per_task))
                out.append(g - meta_training_loss(u, data).total)
            return out

        res = np.array(_run_indexed(one, config.replicates, threads))
        ge, se_e = _mean_se(res[:, 0])
        gm, se_m = _mean_se(res[:, 1])
        rows.append((r_mean, a, b, kl, bound.total, ge, se_e, gm, se_m))
    headers = ("R", "a", "b", "kl_marginals", "thm1_bound",
               "emrm_gap", "se_emrm_gap", "imrm_gap", "se_imrm_gap")
    return ExperimentResult(
        headers, tuple(rows),
        _config_items(config, "fig-shift", r_values=",".join(_fmt(r) for r in r_values)),
    )


def run_fig_alpha(
    config: ExperimentConfig, alpha_values=DEFAULT_ALPHA_VALUES, threads: int = 1
) -> ExperimentResult:
    """Source-weight sweep: excess-risk bound for the deterministic
    learner against replicate-averaged empirical excess risks."""
    grid = HyperGrid(config.grid_size)
    budget = MIBudget(config.mi_replicates, config.mi_bins, config.target_task_samples)
    consts = SubGaussianConsts()
    _, loss_star = optimal_hyperparameter(
        config.env, config.train.data_weight, config.train.concentration,
        config.train.samples_per_task, grid,
    )
    rows = []
    for ai, alpha in enumerate(alpha_values):
        cfg = replace(config.train, source_weight=float(alpha))
        bound = excess_risk_bound_thm2(
            config.env, cfg, consts, grid, budget,
            spawn_stream(config.seed, _TAG_ALPHA, ai, _P_MI),
        )

        def one(rep, cfg=cfg, ai=ai):
            rng = spawn_stream(config.seed, _TAG_ALPHA, ai, rep + 16)
            data = sample_meta_dataset(config.env, cfg, rng)
            post = imrm_posterior(data, config.hyper_prior, grid)
            out = []
            for u in (emrm(data, grid), imrm_mode(post)):
                out.append(float(transfer_gen_loss(
                    u, config.env, cfg.data_weight, cfg.concentration,
                    cfg.samples_per_task)) - loss_star)
            return out

        res = np.array(_run_indexed(one, config.replicates, threads))
        ee, se_e = _mean_se(res[:, 0])
        em, se_m = _mean_se(res[:, 1])
        rows.append((float(alpha), bound.total, ee, se_e, em, se_m))
    headers = ("alpha", "thm2_bound", "emrm_excess_risk", "se_emrm_excess_risk",
               "imrm_mode_excess_risk", "se_imrm_mode_excess_risk")
    return ExperimentResult(
        headers, tuple(rows),
        _config_items(config, "fig-alpha",
                      alpha_values=",".join(_fmt(a) for a in alpha_values)),
    )


def run_fig_singledraw(
    config: ExperimentConfig, n_values=DEFAULT_N_VALUES, threads: int = 1
) -> ExperimentResult:
    """Single-draw experiment: one posterior draw per fresh dataset.

    For each task count, report the upper-tail gap quantile matching each
    confidence level (level delta maps to the 1-delta quantile), the same
    quantile of the per-draw bound values, and the per-draw violation
    frequency.
    """
    if not n_values:
        raise ConfigError("n_values must be nonempty")
    grid = HyperGrid(config.grid_size)
    consts = SubGaussianConsts()
    rows = []
    for ni, n in enumerate(n_values):
        cfg = replace(config.train, n_tasks=int(n))

        def one(d, cfg=cfg, ni=ni):
            rng = spawn_stream(config.seed, _TAG_SINGLEDRAW, ni, d)
            data = sample_meta_dataset(config.env, cfg, rng)
            post = imrm_posterior(data, config.hyper_prior, grid)
            u = imrm_sample(post, rng)
            gap = float(transfer_gen_loss(u, config.env, cfg.data_weight,
                                          cfg.concentration, cfg.samples_per_task)
                        ) - meta_training_loss(u, data).total
            bounds = [
                single_draw_bound_thm5(u, data, post, config.env, cfg, consts, dl).total
                for dl in SINGLEDRAW_DELTAS
            ]
            return [gap] + bounds

        res = np.array(_run_indexed(one, config.replicates, threads))
        gaps = res[:, 0]
        for di, dl in enumerate(SINGLEDRAW_DELTAS):
            bvals = res[:, 1 + di]
            rows.append((
                int(n), dl,
                float(np.quantile(gaps, 1.0 - dl)),
                float(np.quantile(bvals, 1.0 - dl)),
                float(np.mean(np.abs(gaps) > bvals)),
                float(gaps.min()), float(gaps.max()),
            ))
    headers = ("N", "delta", "empirical_quantile_gap", "thm5_bound_quantile",
               "violation_freq", "gap_min", "gap_max")
    return ExperimentResult(
        headers, tuple(rows),
        _config_items(config, "fig-singledraw",
                      n_values=",".join(str(n) for n in n_values)),
    )


def run_bounds(config: ExperimentConfig) -> ExperimentResult:
    """All five bounds on one seeded dataset, with term breakdowns."""
    grid = HyperGrid(config.grid_size)
    cfg = config.train
    if cfg.source_frac >= 1.0:
        raise ConfigError("the bounds command needs tasks from both environments")
    consts = SubGaussianConsts()
    budget = MIBudget(config.mi_replicates, config.mi_bins, config.target_task_samples)
    data = sample_meta_dataset(config.env, cfg, spawn_stream(config.seed, _TAG_BOUNDS, 0, _P_DATA))
    post = imrm_posterior(data, config.hyper_prior, grid)
    if config.learner == "emrm":
        learner = EMRMHandle(grid)
    elif config.learner == "imrm_gibbs":
        learner = IMRMGibbsHandle(grid, config.hyper_prior)
    else:
        learner = ConstantHandle(config.constant_bias)
    u_draw = imrm_sample(post, spawn_stream(config.seed, _TAG_BOUNDS, 0, _P_DRAW))

    reports = [
        ("avg_gap_thm1", avg_gap_bound_thm1(
            config.env, cfg, learner, consts, budget,
            spawn_stream(config.seed, _TAG_BOUNDS, 1, _P_MI))),
        ("excess_risk_thm2", excess_risk_bound_thm2(
            config.env, cfg, consts, grid, budget,
            spawn_stream(config.seed, _TAG_BOUNDS, 2, _P_MI))),
        ("pac_thm3", pac_bound_thm3(
            data, post, config.env, cfg, consts, config.delta, config.hyper_prior)),
        ("pac_loose_cor4", pac_bound_loose_cor4(
            data, post, config.env, cfg, consts, config.delta, config.hyper_prior)),
        ("single_draw_thm5", single_draw_bound_thm5(
            u_draw, data, post, config.env, cfg, consts, config.delta)),
    ]
    rows = []
    for name, rep in reports:
        extras = ";".join(f"{k}={_fmt(v)}" for k, v in sorted(rep.extra_terms.items()))
        rows.append((
            name, rep.total, "" if rep.delta is None else _fmt(rep.delta),
            rep.env_shift_term, rep.env_sensitivity_term, rep.within_task_term,
            extras, int(rep.clamped),
        ))
    headers = ("bound", "total", "delta", "env_shift_term", "env_sensitivity_term",
               "within_task_term", "extra_terms", "clamped")
    return ExperimentResult(headers, tuple(rows), _config_items(config, "bounds"))
