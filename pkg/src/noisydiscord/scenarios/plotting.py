"""Figures written next to the CSV outputs.

matplotlib is imported lazily so the numerical core does not depend on it.
"""
from __future__ import annotations

from pathlib import Path

SEPARABLE_QD_MAX = 1 / 3

STYLE = {
    "qd": dict(color="k", ls="-", label="QD"),
    "eof": dict(color="r", ls="--", label="EoF"),
    "cc": dict(color="b", ls=":", label="CC"),
}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def figure_path(csv_path, suffix=".png") -> Path:
    return Path(csv_path).with_suffix(suffix)


def plot_trajectory(times, records, path, title=None):
    """QD, EoF and CC against omega*t."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    for name, style in STYLE.items():
        ax.plot(times, [getattr(r, name) for r in records], **style)
    ax.set_xlabel(r"$\omega t$")
    ax.set_ylabel("correlations")
    ax.set_ylim(-0.02, 1.05)
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def plot_scan(result, path, title=None):
    """Steady QD (and EoF) against the scanned parameter, 1/3 marked."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(result.values, result.column("qd"), **STYLE["qd"])
    ax.plot(result.values, result.column("eof"), **STYLE["eof"])
    ax.axhline(SEPARABLE_QD_MAX, color="r", ls="--", lw=0.8, alpha=0.6)
    for px, _ in result.peaks:
        ax.axvline(px, color="0.6", lw=0.6)
    ax.set_xlabel(rf"$\{result.parameter}$")
    ax.set_ylabel("steady state")
    ax.set_xlim(0, 1)
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def plot_table1(entries, path):
    """Computed against printed reference values, one panel per noise block."""
    plt = _pyplot()
    blocks = sorted({e.block for e in entries}, key=[e.block for e in entries].index)
    fig, axes = plt.subplots(1, len(blocks), figsize=(5 * len(blocks), 4), sharey=True)
    for ax, block in zip(axes, blocks):
        sel = [e for e in entries if e.block == block]
        ax.plot([0, 1], [0, 1], color="0.7", lw=0.8)
        ax.scatter([e.printed for e in sel], [e.computed for e in sel], s=14, color="k")
        ax.set_title(block)
        ax.set_xlabel("printed")
    axes[0].set_ylabel("computed")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def gnuplot_script(csv_path, columns, xlabel) -> str:
    """A gnuplot script plotting ``columns`` of a CSV against its first column."""
    csv_path = Path(csv_path)
    header = csv_path.read_text(encoding="utf-8").splitlines()[0].split(",")
    lines = [
        "set datafile separator ','",
        "set key autotitle columnhead",
        f"set xlabel '{xlabel}'",
        "set terminal pngcairo size 800,520",
        f"set output '{csv_path.with_suffix('.gp.png').name}'",
    ]
    parts = [f"'{csv_path.name}' using 1:{header.index(c) + 1} with lines" for c in columns]
    lines.append("plot " + ", \\\n     ".join(parts))
    return "\n".join(lines) + "\n"
