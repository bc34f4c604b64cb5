"""Posterior snapshot: hyper-prior and posterior densities with the
deterministic solution marked. Single-axes overlay."""

from __future__ import annotations

from ._common import new_figure

N_PANELS = 1


def build(data, title=""):
    fig, (ax,) = new_figure(1, height=4.2)
    u = data.numeric("u")
    ax.plot(u, data.numeric("hyper_prior_density"), label="hyper-prior", color="tab:gray")
    ax.plot(u, data.numeric("imrm_posterior_density"), label="Gibbs posterior",
            color="tab:blue")
    ax.axvline(data.numeric("emrm_marker")[0], color="tab:red", linestyle="--",
               label="deterministic solution")
    ax.set_xlabel("bias u")
    ax.set_ylabel("density")
    ax.set_title(title or "Hyper-prior vs Gibbs posterior")
    ax.legend()
    return fig
