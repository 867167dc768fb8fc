"""Report figures. Rendering uses the Agg backend and strips PNG metadata,
so repeated runs write identical files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["save_figure", "plot_verify_summary", "plot_energy_trace", "plot_order_search"]


def save_figure(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_verify_summary(reports, path: str | Path) -> Path:
    """Relative margin ``margin / |bound|`` per experiment, failures in red."""
    labels = [r.label for r in reports]
    rel = np.array([
        r.margin / abs(r.bound) if r.bound else r.margin for r in reports
    ], dtype=np.float64)
    rel = np.clip(np.nan_to_num(rel, nan=-1.0, neginf=-1.0, posinf=1.0), -1.0, 1.0)
    colors = ["tab:green" if r.passed else "tab:red" for r in reports]
    fig, ax = plt.subplots(figsize=(8, 0.28 * max(len(reports), 4) + 1))
    y = np.arange(len(reports))
    ax.barh(y, rel, color=colors)
    ax.axvline(0.0, color="k", lw=0.8)
    ax.set_yticks(y, labels, fontsize=6)
    ax.invert_yaxis()
    ax.set_xlim(-1, 1)
    ax.set_xlabel("relative margin (clipped to [-1, 1])")
    fig.tight_layout()
    return save_figure(fig, path)


def plot_energy_trace(energy, path: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.semilogy(np.arange(len(energy)), energy, marker=".", ms=3)
    ax.set_xlabel("iteration")
    ax.set_ylabel("energy")
    fig.tight_layout()
    return save_figure(fig, path)


def plot_order_search(table: list[dict], best_r: float, path: str | Path) -> Path:
    r = [row["r"] for row in table]
    loss = [row["total_loss"] for row in table]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(r, loss, marker="o")
    ax.axvline(best_r, color="tab:red", ls="--", lw=1)
    ax.set_xlabel("order r")
    ax.set_ylabel("total loss")
    fig.tight_layout()
    return save_figure(fig, path)
