"""Bar charts of corpus completion, written next to the CSV/JSON report."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

LEVEL_COLOR = "#4c72b0"
CATEGORY_COLOR = "#55a868"


def completion_figure(
    rows: Sequence[tuple],
    path: str | Path,
    title: str | None = None,
) -> Path:
    """Plot mean completion with one-std error bars for each report row.

    ``rows`` are the ``(scope, name, mean, std, n)`` tuples of a corpus
    report; level-4 split rows are drawn without error bars.
    """
    path = Path(path)
    names = []
    means = []
    errs = []
    colors = []
    for scope, name, mean, std, _n in rows:
        names.append(f"Level {name}" if scope == "level" else name.replace("_", "-"))
        means.append(mean)
        errs.append(std)
        colors.append(LEVEL_COLOR if scope == "level" else CATEGORY_COLOR if scope == "category" else "#c44e52")

    fig, ax = plt.subplots(figsize=(max(4.0, 0.9 * len(names) + 1.5), 3.6))
    xs = range(len(names))
    ax.bar(xs, means, color=colors, edgecolor="black", linewidth=0.5)
    with_err = [(x, m, e) for x, m, e in zip(xs, means, errs) if e is not None]
    if with_err:
        ex, em, ee = zip(*with_err)
        ax.errorbar(ex, em, yerr=ee, fmt="none", ecolor="black", capsize=3, linewidth=1)
    for x, m, e in zip(xs, means, errs):
        ax.text(x + 0.08, m + 1, f"{m:.0f}%", ha="left", va="bottom", fontsize=8)
    ax.set_xticks(list(xs))
    ax.set_xticklabels(names, rotation=30 if len(names) > 6 else 0, ha="right" if len(names) > 6 else "center")
    ax.set_ylim(0, 110)
    ax.set_ylabel("Completion (%)")
    if title:
        ax.set_title(title)
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    fig.tight_layout()
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
