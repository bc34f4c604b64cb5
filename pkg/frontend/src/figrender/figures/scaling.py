"""Budget scaling: losses per learner on top, generalization gap below."""

from __future__ import annotations

from ._common import LEARNER_STYLE, new_figure

N_PANELS = 2


def build(data, title=""):
    fig, (ax_loss, ax_gap) = new_figure(2)
    ms = data.numeric("M")
    learners = data.text("learner")
    rows = {}
    for i, name in enumerate(learners):
        rows.setdefault(name, []).append(i)
    for name, idx in rows.items():
        style = LEARNER_STYLE.get(name, {})
        x = [ms[i] for i in idx]
        gen = [data.numeric("mean_gen_loss")[i] for i in idx]
        se_gen = [data.numeric("se_gen_loss")[i] for i in idx]
        train = [data.numeric("mean_train_loss")[i] for i in idx]
        gap = [data.numeric("mean_gap")[i] for i in idx]
        se_gap = [data.numeric("se_gap")[i] for i in idx]
        ax_loss.errorbar(x, gen, yerr=se_gen, label=f"{name} generalization", **style)
        ax_loss.plot(x, train, linestyle="--", color=style.get("color"),
                     label=f"{name} training")
        ax_gap.errorbar(x, gap, yerr=se_gap, label=name, **style)
    ax_loss.set_ylabel("average loss")
    ax_loss.set_title(title or "Losses against per-task samples (a)")
    ax_loss.legend(fontsize=7)
    ax_gap.set_xlabel("per-task samples M")
    ax_gap.set_ylabel("average gap")
    ax_gap.set_title("Transfer generalization gap (b)")
    ax_gap.legend(fontsize=7)
    return fig
