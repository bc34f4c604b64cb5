"""Environment-shift sweep: marginal KL on top, bound and gaps below."""

from __future__ import annotations

from ._common import new_figure

N_PANELS = 2


def build(data, title=""):
    fig, (ax_kl, ax_gap) = new_figure(2)
    r = data.numeric("R")
    ax_kl.plot(r, data.numeric("kl_marginals"), marker="o", color="tab:purple")
    ax_kl.set_ylabel("data-marginal KL")
    ax_kl.set_title(title or "Environment shift (a): KL divergence")
    ax_gap.plot(r, data.numeric("thm1_bound"), marker="d", color="tab:red",
                label="average-gap bound")
    ax_gap.errorbar(r, data.numeric("emrm_gap"), yerr=data.numeric("se_emrm_gap"),
                    marker="o", color="tab:blue", label="deterministic gap")
    ax_gap.errorbar(r, data.numeric("imrm_gap"), yerr=data.numeric("se_imrm_gap"),
                    marker="s", color="tab:orange", label="posterior-mode gap")
    ax_gap.set_xlabel("source mean R")
    ax_gap.set_ylabel("gap / bound")
    ax_gap.set_title("(b): bound and empirical gaps")
    ax_gap.legend(fontsize=7)
    return fig
