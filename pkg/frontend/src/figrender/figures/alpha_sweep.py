"""Source-weight sweep: excess-risk bound on top, empirical risks below."""

from __future__ import annotations

from ._common import new_figure

N_PANELS = 2


def build(data, title=""):
    fig, (ax_bound, ax_risk) = new_figure(2)
    a = data.numeric("alpha")
    ax_bound.plot(a, data.numeric("thm2_bound"), marker="d", color="tab:red")
    ax_bound.set_ylabel("excess-risk bound")
    ax_bound.set_title(title or "Source weight sweep (top): bound")
    ax_risk.errorbar(a, data.numeric("emrm_excess_risk"),
                     yerr=data.numeric("se_emrm_excess_risk"),
                     marker="o", color="tab:blue", label="deterministic")
    ax_risk.errorbar(a, data.numeric("imrm_mode_excess_risk"),
                     yerr=data.numeric("se_imrm_mode_excess_risk"),
                     marker="s", color="tab:orange", label="posterior mode")
    ax_risk.set_xlabel("source weight")
    ax_risk.set_ylabel("excess risk")
    ax_risk.set_title("(bottom): empirical excess risk")
    ax_risk.legend(fontsize=7)
    return fig
