"""Tabular and figure output helpers for the command-line front end.

CSV and JSON writers keep a fixed column order so reruns diff cleanly;
the plotting helpers render PNG files next to the delimited output.
"""

from __future__ import annotations

import csv
import json
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow(row)
    return path


def write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def plot_path(out_path, suffix=""):
    """PNG sibling of a CSV/JSON output path."""
    base, _ = os.path.splitext(out_path)
    return f"{base}{suffix}.png"


def plot_series(path, xs, series, xlabel, ylabel, title, logy=False):
    """Line/marker plot of one or more named series against xs."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for name, ys in series.items():
        ax.plot(xs, ys, marker="o", markersize=3, linewidth=1, label=name)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    if logy:
        ax.set_yscale("log")
    if len(series) > 1:
        ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
