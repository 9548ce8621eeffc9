"""Report figures, rendered off-screen to PNG."""
from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "savefig.dpi": 150,
    "figure.figsize": (4.8, 3.4),
}

POLICY_COLORS = {"row_major": "tab:gray", "performance_first": "tab:blue", "lifetime_first": "tab:red"}


def _save(fig, path) -> Path:
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return Path(path)


def plot_tradeoff(entries, front, path) -> Path:
    """Execution time vs. minimum effective lifetime for every archived candidate."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        finite = [e for e in entries if math.isfinite(e.lifetime)]
        for policy, color in POLICY_COLORS.items():
            pts = [e for e in finite if e.policy == policy]
            if pts:
                ax.scatter([e.exec_time for e in pts], [e.lifetime for e in pts], s=4, alpha=0.3, color=color, label=policy)
        fr = [e for e in front if math.isfinite(e.lifetime)]
        if fr:
            ax.plot([e.exec_time for e in fr], [e.lifetime for e in fr], "k.-", lw=1, ms=5, label="Pareto front")
            fast, durable = fr[0], fr[-1]
            ax.annotate("max performance", (fast.exec_time, fast.lifetime), fontsize=7, xytext=(4, -10), textcoords="offset points")
            ax.annotate("max lifetime", (durable.exec_time, durable.lifetime), fontsize=7, xytext=(4, 4), textcoords="offset points")
        ax.set_xlabel("execution time (s)")
        ax.set_ylabel("min effective lifetime (executions)")
        if finite and min(e.lifetime for e in finite) > 0:
            ax.set_yscale("log")
        ax.legend(loc="best", markerscale=2)
        return _save(fig, path)


def plot_current_map(cmap: np.ndarray, path) -> Path:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.2, 3.6))
        im = ax.imshow(cmap * 1e6, cmap="viridis", origin="upper", interpolation="nearest")
        ax.set_xlabel("bitline (column)")
        ax.set_ylabel("wordline (row)")
        fig.colorbar(im, ax=ax, label="programming current (uA)")
        return _save(fig, path)


def plot_normalized(summary: dict, path) -> Path:
    """Bar chart of the per-run best entries, normalized to the archive extremes."""
    runs = summary.get("best_per_run", [])
    labels = [f"{r['fitness_kind']}\n{r['policy']}" for r in runs]
    life = [r["normalized_lifetime"] or 0.0 for r in runs]
    speed = [1.0 / r["normalized_exec_time"] if r["normalized_exec_time"] else 0.0 for r in runs]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(max(4.8, 0.6 * len(runs) + 1), 3.4))
        x = np.arange(len(runs))
        ax.bar(x - 0.2, speed, width=0.4, label="performance (rel. to fastest)")
        ax.bar(x + 0.2, life, width=0.4, label="lifetime (rel. to longest)")
        ax.set_xticks(x)
        ax.set_xticklabels(labels, fontsize=6)
        ax.set_ylim(0, 1.1)
        ax.legend(loc="upper right")
        return _save(fig, path)
