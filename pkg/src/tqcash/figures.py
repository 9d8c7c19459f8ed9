"""Figure rendering for report runs.  File output only, no display."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  backend must be set first
import numpy as np  # noqa: E402


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def spectrum_figure(
    numeric: Sequence[float],
    closed_form: Sequence[float] | None,
    path: str | Path,
) -> Path:
    """Numeric eigenvalues as bars, closed-form prediction as markers."""
    numeric = np.asarray(numeric, dtype=float)
    fig, ax = plt.subplots(figsize=(7, 3.5))
    idx = np.arange(len(numeric))
    ax.bar(idx, numeric, color="#4878a8", label="numeric")
    if closed_form is not None:
        predicted = sorted(closed_form, reverse=True)
        predicted += [0.0] * (len(numeric) - len(predicted))
        ax.plot(idx, predicted, "k_", markersize=12, label="closed form")
    ax.set_xlabel("eigenvalue index")
    ax.set_ylabel("eigenvalue")
    ax.set_xticks(idx)
    ax.legend()
    return _save(fig, path)


def entropy_histogram(
    entropies: Sequence[float], path: str | Path, bound: float = 2.0
) -> Path:
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.hist(list(entropies), bins=40, color="#4878a8")
    ax.axvline(bound, color="#a83838", linestyle="--", label=f"bound {bound:g}")
    ax.set_xlabel("information bound (bits)")
    ax.set_ylabel("probes")
    ax.legend()
    return _save(fig, path)


def bar_figure(
    labels: Sequence[str],
    values: Sequence[float],
    path: str | Path,
    ylabel: str = "probability",
) -> Path:
    fig, ax = plt.subplots(figsize=(max(4, 1.2 * len(labels)), 3.5))
    ax.bar(range(len(labels)), list(values), color="#4878a8")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=20, ha="right")
    ax.set_ylabel(ylabel)
    return _save(fig, path)


def deviation_figure(
    names: Sequence[str], deviations: Sequence[float], path: str | Path
) -> Path:
    """Identity-check residuals on a log scale; exact zeros plot at the floor."""
    floor = 1e-18
    values = [max(abs(d), floor) for d in deviations]
    fig, ax = plt.subplots(figsize=(7, 0.35 * len(names) + 1.5))
    ax.barh(range(len(names)), values, color="#4878a8")
    ax.set_yticks(range(len(names)))
    ax.set_yticklabels(names)
    ax.set_xscale("log")
    ax.set_xlim(left=floor)
    ax.set_xlabel("max deviation")
    ax.invert_yaxis()
    return _save(fig, path)
