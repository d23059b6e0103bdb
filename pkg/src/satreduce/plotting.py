"""Figures and CSV summaries for a mining report."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

PAIRS = ("ss", "su", "us", "uu")
PAIR_LABELS = {
    "ss": "oracle SAT / pipeline SAT",
    "su": "oracle SAT / pipeline UNSAT",
    "us": "oracle UNSAT / pipeline SAT",
    "uu": "oracle UNSAT / pipeline UNSAT",
}


def write_clause_count_csv(report, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["clauses", "instances", *PAIRS, "iff_violations"])
        for m in sorted(report.by_clause_count):
            row = report.by_clause_count[m]
            w.writerow([m, sum(row[p] for p in PAIRS), *(row[p] for p in PAIRS), row["iff"]])
    return path


def plot_totals(report, path) -> Path:
    fig, ax = plt.subplots(figsize=(6, 3.5))
    counts = [report.totals[p] for p in PAIRS]
    bars = ax.bar(PAIRS, counts, color=["#4c72b0", "#c44e52", "#dd8452", "#55a868"])
    ax.bar_label(bars)
    ax.set_ylabel("instances")
    ax.set_title("oracle vs pipeline verdicts")
    ax.set_xticks(range(len(PAIRS)), [PAIR_LABELS[p].replace(" / ", "\n") for p in PAIRS], fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def plot_rates_by_clause_count(report, path) -> Path:
    ms = sorted(report.by_clause_count)
    unsat, missed, iff = [], [], []
    for m in ms:
        row = report.by_clause_count[m]
        total = sum(row[p] for p in PAIRS) or 1
        unsat.append((row["us"] + row["uu"]) / total)
        missed.append(row["us"] / max(row["us"] + row["uu"], 1))
        iff.append(row["iff"] / total)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.plot(ms, unsat, "o-", label="oracle UNSAT fraction")
    ax.plot(ms, missed, "s-", label="UNSAT missed by pipeline")
    ax.plot(ms, iff, "^-", label="2-SAT iff violations")
    ax.set_xlabel("clauses")
    ax.set_ylabel("fraction")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(fontsize=8, frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def render_report(report, outdir) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    return [
        write_clause_count_csv(report, outdir / "by_clause_count.csv"),
        plot_totals(report, outdir / "totals.png"),
        plot_rates_by_clause_count(report, outdir / "rates_by_clause_count.png"),
    ]
