"""Figures written next to the CSV/JSON reports."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

DPI = 150


def _style(ax, xlabel, ylabel, title):
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title, fontsize=10)
    ax.grid(True, linewidth=0.4, alpha=0.5)


def plot_traces(report, out_dir) -> list[Path]:
    """Normalized traces t3/(2 p^{3/2}) against a_p, and the per-prime residual."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    recs = report.records
    ps = [r.p for r in recs]
    norm = [r.t3 / (2 * r.p**1.5) for r in recs]
    norm_ap = [r.ap / (2 * r.p**1.5) for r in recs]
    fit = [r.role == "fit" for r in recs]

    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 6), sharex=True,
                                   gridspec_kw={"height_ratios": [3, 1]})
    ax1.axhspan(-1, 1, color="0.92", zorder=0)
    ax1.plot(ps, norm_ap, "o", mfc="none", color="C0", label="a_p (eta product)")
    ax1.plot([p for p, f in zip(ps, fit) if not f], [n for n, f in zip(norm, fit) if not f],
             "x", color="C3", label="t3(p), held out")
    ax1.plot([p for p, f in zip(ps, fit) if f], [n for n, f in zip(norm, fit) if f],
             "+", color="C2", ms=9, label="t3(p), fit")
    ax1.set_ylim(-1.1, 1.1)
    ax1.legend(fontsize=8, loc="lower right")
    _style(ax1, "", "t / (2 p^{3/2})", f"Frobenius traces vs newform, verdict {report.verdict}")
    ax2.bar(ps, [r.t3 - r.ap for r in recs], color="C3", width=1.2)
    ax2.axhline(0, color="k", linewidth=0.6)
    _style(ax2, "p", "t3 - a_p", "")
    fig.tight_layout()
    path = out_dir / "traces.png"
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return [path]


def plot_fibers(fibers, out_dir) -> list[Path]:
    """Hasse deviation (p + 1 - N_s)/(2 sqrt p) of each fibre over the finite s."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    p = fibers[0].p
    finite = [f for f in fibers if f.s is not None]
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.axhspan(-1, 1, color="0.92", zorder=0)
    for sing, color, label in ((False, "C0", "smooth"), (True, "C3", "singular")):
        pts = [f for f in finite if f.singular == sing]
        ax.plot([f.s for f in pts], [(p + 1 - f.N) / (2 * math.sqrt(p)) for f in pts],
                "o", color=color, ms=4, label=label)
    ax.legend(fontsize=8)
    _style(ax, "s", "(p + 1 - N_s) / (2 sqrt p)", f"Fibre counts of S over F_{p}")
    fig.tight_layout()
    path = out_dir / f"fibers_p{p}.png"
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return [path]
