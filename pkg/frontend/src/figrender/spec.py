"""Figure kinds, their expected CSV schemas and the render request."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

__all__ = ["FIGURE_KINDS", "EXPECTED_COLUMNS", "FigureSpec", "SchemaError"]

FIGURE_KINDS = ("posterior", "scaling", "shift", "alpha", "singledraw")

EXPECTED_COLUMNS = {
    "posterior": ("u", "hyper_prior_density", "imrm_posterior_density", "emrm_marker"),
    "scaling": ("M", "N", "learner", "mean_gen_loss", "se_gen_loss",
                "mean_train_loss", "se_train_loss", "mean_gap", "se_gap"),
    "shift": ("R", "a", "b", "kl_marginals", "thm1_bound",
              "emrm_gap", "se_emrm_gap", "imrm_gap", "se_imrm_gap"),
    "alpha": ("alpha", "thm2_bound", "emrm_excess_risk", "se_emrm_excess_risk",
              "imrm_mode_excess_risk", "se_imrm_mode_excess_risk"),
    "singledraw": ("N", "delta", "empirical_quantile_gap", "thm5_bound_quantile",
                   "violation_freq", "gap_min", "gap_max"),
}


class SchemaError(ValueError):
    """CSV columns do not match the figure kind's expected schema."""


@dataclass(frozen=True)
class FigureSpec:
    """One render request: which CSV, which figure, where to write."""

    csv_path: Path
    figure_kind: str
    output_path: Path
    title: str = ""

    def __post_init__(self) -> None:
        if self.figure_kind not in FIGURE_KINDS:
            raise ValueError(
                f"unknown figure kind {self.figure_kind!r}; expected one of {FIGURE_KINDS}"
            )
        object.__setattr__(self, "csv_path", Path(self.csv_path))
        object.__setattr__(self, "output_path", Path(self.output_path))
