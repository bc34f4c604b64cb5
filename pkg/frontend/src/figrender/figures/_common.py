"""Shared matplotlib plumbing for the figure builders."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "figrender"  # deterministic SVG ids

import matplotlib.pyplot as plt  # noqa: E402

LEARNER_STYLE = {
    "emrm": dict(color="tab:blue", marker="o"),
    "imrm_mode": dict(color="tab:orange", marker="s"),
    "imrm_gibbs": dict(color="tab:green", marker="^"),
}

DELTA_COLORS = {0.25: "tab:blue", 0.5: "tab:orange", 0.75: "tab:green"}


def new_figure(n_rows: int, height: float = 3.2):
    fig, axes = plt.subplots(n_rows, 1, figsize=(6.4, height * n_rows), squeeze=False)
    return fig, [ax for (ax,) in axes]


def add_footnote(fig, config_line: str) -> None:
    """Embed the CSV's resolved-config comment as a figure footnote."""
    fig.text(0.005, 0.002, config_line, fontsize=3.5, family="monospace",
             ha="left", va="bottom", wrap=True)


def save(fig, path: Path) -> None:
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix not in (".png", ".svg"):
        raise ValueError(f"unsupported output format {suffix!r}; use .png or .svg")
    # strip run-dependent metadata so re-rendering is byte-stable
    metadata = {"Software": None} if suffix == ".png" else {"Date": None}
    fig.savefig(path, dpi=150, metadata=metadata, bbox_inches="tight")
    plt.close(fig)
