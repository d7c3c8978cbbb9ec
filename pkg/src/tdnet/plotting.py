"""Report figures, written straight to image files."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def servers_bar_chart(rows: Sequence[tuple[str, int, int, int, int]], path: str | Path) -> Path:
    """One bar per topology row ``(name, ports, diameter, servers, switches)``; log scale."""
    names = [r[0] for r in rows]
    servers = [r[3] for r in rows]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    bars = ax.bar(range(len(rows)), servers, color="#4477aa")
    ax.set_yscale("log")
    ax.set_xticks(range(len(rows)))
    ax.set_xticklabels(names, rotation=30, ha="right")
    ax.set_ylabel("servers")
    for b, v in zip(bars, servers):
        ax.annotate(f"{v:,}", (b.get_x() + b.get_width() / 2, v), ha="center", va="bottom", fontsize=7)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def length_histogram(hist: Mapping[int, int], path: str | Path, *, title: str = "", bound: float | None = None) -> Path:
    """Bar histogram of path lengths, with an optional dashed line at the length bound."""
    lengths = sorted(int(k) for k in hist)
    counts = [hist[k] if k in hist else hist[str(k)] for k in lengths]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(lengths, counts, width=0.8, color="#228833")
    if bound is not None:
        ax.axvline(bound, color="#cc3311", linestyle="--", label=f"bound {bound:g}")
        ax.legend()
    ax.set_xlabel("path length (edges)")
    ax.set_ylabel("paths")
    if lengths:
        ax.set_xticks(range(min(lengths), max(lengths) + 1))
    if title:
        ax.set_title(title, fontsize=9)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out
