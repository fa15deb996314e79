"""Render suite results to a directory: a CSV summary plus PNG figures."""

from __future__ import annotations

import csv
from pathlib import Path


def write_report(results, outdir) -> list[str]:
    """Write criteria.csv, runtimes.png and cases.png under outdir.

    Returns the list of file names written.  matplotlib is imported lazily so
    the rest of the package never pays for it.
    """
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    with open(out / "criteria.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["name", "passed", "cases", "elapsed_s", "budget_s"])
        for r in results:
            w.writerow([r.name, "yes" if r.passed else "no", r.cases,
                        f"{r.elapsed:.4f}", f"{r.budget:.1f}"])
    written.append("criteria.csv")

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    names = [r.name for r in results]
    ypos = range(len(results))

    fig, ax = plt.subplots(figsize=(8, 0.5 * len(results) + 1.5))
    ax.barh(ypos, [r.budget for r in results], color="#d0d7de", label="budget")
    ax.barh(ypos, [r.elapsed for r in results],
            color=["#2da44e" if r.passed else "#cf222e" for r in results],
            label="elapsed")
    ax.set_yticks(ypos, names)
    ax.invert_yaxis()
    ax.set_xlabel("seconds (log scale)")
    ax.set_xscale("log")
    ax.set_title("suite runtimes against budgets")
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(out / "runtimes.png", dpi=120)
    plt.close(fig)
    written.append("runtimes.png")

    fig, ax = plt.subplots(figsize=(8, 0.5 * len(results) + 1.5))
    ax.barh(ypos, [r.cases for r in results],
            color=["#2da44e" if r.passed else "#cf222e" for r in results])
    for i, r in enumerate(results):
        ax.text(r.cases, i, f" {r.cases}", va="center", fontsize=8)
    ax.set_yticks(ypos, names)
    ax.invert_yaxis()
    ax.set_xlabel("checked cases")
    ax.set_title("cases per suite")
    fig.tight_layout()
    fig.savefig(out / "cases.png", dpi=120)
    plt.close(fig)
    written.append("cases.png")

    return written
