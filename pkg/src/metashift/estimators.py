"""Scikit-learn style estimator wrappers around the meta-learners.

``fit`` consumes a MetaDataset and learns the bias hyperparameter;
``adapt`` runs the base learner on a new task at the fitted bias and
``predict`` returns its point prediction for the next sample. Both
estimators follow the get_params/set_params/clone contract so they
compose with scikit-learn tooling.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .base_learner import posterior
from .environment import MetaDataset, TaskDataset
from .grid import HyperGrid
from .meta_learners import (
    DEFAULT_HYPER_PRIOR,
    emrm,
    imrm_mode,
    imrm_posterior,
    imrm_sample,
)
from .special_math import BetaParams

__all__ = ["EMRMLearner", "IMRMLearner"]


def _check_meta_dataset(x) -> MetaDataset:
    if not isinstance(x, MetaDataset):
        raise TypeError(f"expected a MetaDataset, got {type(x).__name__}")
    return x


def _check_task(task) -> TaskDataset:
    if not isinstance(task, TaskDataset):
        raise TypeError(f"expected a TaskDataset, got {type(task).__name__}")
    return task


class _FittedBiasMixin:
    """Shared adapt/predict surface once a bias has been fitted."""

    def adapt(self, task):
        """Base-learner output distribution for a new task at the fitted bias."""
        self._check_fitted()
        return posterior(_check_task(task), self.u_, self.data_weight_, self.concentration_)

    def predict(self, tasks):
        """Posterior-mean prediction of the next sample for each task."""
        self._check_fitted()
        if isinstance(tasks, TaskDataset):
            tasks = [tasks]
        return np.array([self.adapt(t).mean for t in tasks])

    def _stash_base_constants(self, data: MetaDataset) -> None:
        self.data_weight_ = data.config.data_weight
        self.concentration_ = data.config.concentration

    def _check_fitted(self):
        if not hasattr(self, "u_"):
            raise RuntimeError("estimator is not fitted")

    def __sklearn_is_fitted__(self):
        return hasattr(self, "u_")


class EMRMLearner(_FittedBiasMixin, BaseEstimator):
    """Deterministic meta-learner minimizing the weighted training loss.

    Parameters
    ----------
    grid_size : resolution of the shared bias grid.

    Attributes
    ----------
    u_ : fitted bias hyperparameter.
    grid_ : the HyperGrid used for the fit.
    """

    def __init__(self, grid_size: int = 201):
        self.grid_size = grid_size

    def fit(self, X, y=None):
        data = _check_meta_dataset(X)
        self._stash_base_constants(data)
        self.grid_ = HyperGrid(self.grid_size)
        self.u_ = emrm(data, self.grid_)
        return self


class IMRMLearner(_FittedBiasMixin, BaseEstimator):
    """Randomized meta-learner with a Gibbs posterior over the bias.

    Parameters
    ----------
    grid_size : resolution of the shared bias grid.
    hyper_prior : (a, b) shapes of the Beta hyper-prior.
    variant : "mode" picks the posterior mode, "gibbs" draws one sample.
    random_state : seed for the "gibbs" variant.

    Attributes
    ----------
    posterior_ : fitted GibbsPosterior.
    u_ : mode or drawn bias, per ``variant``.
    """

    def __init__(
        self,
        grid_size: int = 201,
        hyper_prior: tuple[float, float] = (DEFAULT_HYPER_PRIOR.a, DEFAULT_HYPER_PRIOR.b),
        variant: str = "mode",
        random_state: int | None = None,
    ):
        self.grid_size = grid_size
        self.hyper_prior = hyper_prior
        self.variant = variant
        self.random_state = random_state

    def fit(self, X, y=None):
        data = _check_meta_dataset(X)
        if self.variant not in ("mode", "gibbs"):
            raise ValueError("variant must be 'mode' or 'gibbs'")
        self._stash_base_constants(data)
        self.grid_ = HyperGrid(self.grid_size)
        self.posterior_ = imrm_posterior(data, BetaParams(*self.hyper_prior), self.grid_)
        if self.variant == "mode":
            self.u_ = imrm_mode(self.posterior_)
        else:
            self.u_ = imrm_sample(self.posterior_, np.random.default_rng(self.random_state))
        return self

    def sample(self, rng: np.random.Generator) -> float:
        """Fresh posterior draw from an externally owned stream."""
        self._check_fitted()
        return imrm_sample(self.posterior_, rng)
