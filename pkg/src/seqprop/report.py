"""Report rendering: delimited tables and matplotlib figures."""

from __future__ import annotations

import csv
import io


def table_to_csv(headers, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(headers)
    writer.writerows(rows)
    return buf.getvalue()


def write_csv(path: str, headers, rows):
    with open(path, "w", newline="") as fh:
        fh.write(table_to_csv(headers, rows))


def plot_counts(path: str, xs, ys, title: str, xlabel: str = "n",
                ylabel: str = "count"):
    """Render a counting table as a step plot next to the CSV output."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.step(xs, ys, where="mid", lw=1.2)
    ax.plot(xs, ys, ".", ms=4)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_accept_set(path: str, values, bound: int, title: str):
    """Render an accepted-value set as a rug of markers."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8, 1.8))
    ax.vlines(values, 0, 1, lw=1.0)
    ax.set_xlim(-0.5, bound + 0.5)
    ax.set_yticks([])
    ax.set_xlabel("accepted values")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
