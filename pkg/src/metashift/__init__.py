"""Transfer meta-learning simulator and bound evaluators.

Meta-learners that transfer from a source task environment to a shifted
target environment, a Beta-Bernoulli worked example with closed-form
losses, and evaluators for average, PAC-Bayesian and single-draw bounds
on the transfer meta-generalization gap.
"""

__version__ = "0.1.0"

from .special_math import (  # noqa: F401
    BetaParams,
    beta_log_pdf,
    beta_mean_var,
    digamma,
    kl_beta_beta,
    log_beta_fn,
    sample_beta,
)
from .grid import HyperGrid  # noqa: F401
from .environment import (  # noqa: F401
    EnvironmentConfig,
    MetaDataset,
    MetaTrainConfig,
    TaskDataset,
    kl_data_marginals,
    sample_meta_dataset,
    sequence_log_marginal,
    task_log_likelihood_ratio,
)
from .base_learner import (  # noqa: F401
    PosteriorParams,
    blend,
    empirical_mean,
    per_task_training_loss,
    posterior,
    posterior_prior_kl,
)
from .meta_objectives import (  # noqa: F401
    LossBreakdown,
    mc_transfer_gen_loss,
    meta_training_loss,
    optimal_hyperparameter,
    transfer_excess_risk,
    transfer_gen_loss,
)
from .meta_learners import (  # noqa: F401
    DEFAULT_HYPER_PRIOR,
    GibbsPosterior,
    emrm,
    imrm_mode,
    imrm_objective,
    imrm_posterior,
    imrm_sample,
    posterior_log_density,
)
from .info_bounds import (  # noqa: F401
    BoundReport,
    ConstantHandle,
    EMRMHandle,
    IMRMGibbsHandle,
    MIBudget,
    MIEstimate,
    SubGaussianConsts,
    avg_gap_bound_thm1,
    excess_risk_bound_thm2,
    mi_hyper_task,
    mi_model_sample,
    pac_bound_loose_cor4,
    pac_bound_thm3,
    single_draw_bound_thm5,
)
from .estimators import EMRMLearner, IMRMLearner  # noqa: F401
