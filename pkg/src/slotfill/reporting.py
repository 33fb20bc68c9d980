"""Report rendering: aligned text tables, delimited files and figures.

Scores print as percentages with one decimal, mirroring the layout of the
published comparison tables so runs can be eyeballed against them. The
report stage writes, for the same numbers: a text table, a CSV, and a PNG
figure rendered with the Agg backend.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Mapping

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .metrics import EvalReport
from .model import Mechanism

MECHANISM_ORDER = (
    Mechanism.TOP_K,
    Mechanism.PROB_X,
    Mechanism.CUMUL_X,
    Mechanism.COUNT_PROBE,
    Mechanism.VERIFY_PROBE,
)

OVERALL_LABEL = "Overall (avg.)"


def pct(value: float) -> str:
    return f"{value * 100:.1f}"


def _render_rows(headers: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(headers)]
    def line(cells):
        return "  ".join(cell.ljust(w) for cell, w in zip(cells, widths)).rstrip()
    rule = "-" * (sum(widths) + 2 * (len(widths) - 1))
    out = [line(headers), rule]
    out.extend(line(r) for r in rows)
    return "\n".join(out) + "\n"


def ranking_table(report: EvalReport) -> str:
    """Per-relation list quality: max-F1 ceiling, optimal k and hits@1."""
    headers = ["relation", "max-F1", "optimal k", "hits@1"]
    rows = []
    for relation in sorted(report.per_relation):
        values = report.per_relation[relation]
        rows.append([
            relation, pct(values["max_f1"]), f"{values['optimal_k']:.2f}",
            pct(values["hits_at_1"]),
        ])
    rows.append([
        OVERALL_LABEL, pct(report.overall["max_f1"]), f"{report.overall['optimal_k']:.2f}",
        pct(report.overall["hits_at_1"]),
    ])
    return _render_rows(headers, rows)


def mechanism_table(reports: Mapping[Mechanism, EvalReport]) -> str:
    """Selection quality: p/r/F1 per mechanism per relation, plus the ceiling."""
    mechanisms = [m for m in MECHANISM_ORDER if m in reports]
    headers = ["relation"]
    for mechanism in mechanisms:
        headers += [f"{mechanism.value}:p", f"{mechanism.value}:r", f"{mechanism.value}:f1"]
    headers.append("max-F1")
    relations = sorted(next(iter(reports.values())).per_relation)
    rows = []
    for relation in relations:
        row = [relation]
        for mechanism in mechanisms:
            values = reports[mechanism].per_relation[relation]
            row += [pct(values["precision"]), pct(values["recall"]), pct(values["f1"])]
        row.append(pct(reports[mechanisms[0]].per_relation[relation]["max_f1"]))
        rows.append(row)
    overall = [OVERALL_LABEL]
    for mechanism in mechanisms:
        values = reports[mechanism].overall
        overall += [pct(values["precision"]), pct(values["recall"]), pct(values["f1"])]
    overall.append(pct(reports[mechanisms[0]].overall["max_f1"]))
    rows.append(overall)
    return _render_rows(headers, rows)


def prompt_table(per_template: Mapping[tuple[str, str], dict]) -> str:
    """Per-prompt comparison: hits@1 against max-F1 for every fill template."""
    headers = ["relation", "template", "hits@1", "max-F1", "optimal k"]
    rows = []
    for (relation, template_id) in sorted(per_template):
        values = per_template[(relation, template_id)]
        rows.append([
            relation, template_id, pct(values["hits_at_1"]), pct(values["max_f1"]),
            f"{values['optimal_k']:.2f}",
        ])
    return _render_rows(headers, rows)


def write_mechanism_csv(reports: Mapping[Mechanism, EvalReport], path: Path) -> None:
    mechanisms = [m for m in MECHANISM_ORDER if m in reports]
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        header = ["relation"]
        for mechanism in mechanisms:
            header += [f"{mechanism.value}_precision", f"{mechanism.value}_recall",
                       f"{mechanism.value}_f1"]
        header.append("max_f1")
        writer.writerow(header)
        relations = sorted(next(iter(reports.values())).per_relation)
        for relation in relations + [OVERALL_LABEL]:
            row = [relation]
            for mechanism in mechanisms:
                values = (reports[mechanism].overall if relation == OVERALL_LABEL
                          else reports[mechanism].per_relation[relation])
                row += [f"{values['precision']:.6f}", f"{values['recall']:.6f}",
                        f"{values['f1']:.6f}"]
            base = (reports[mechanisms[0]].overall if relation == OVERALL_LABEL
                    else reports[mechanisms[0]].per_relation[relation])
            row.append(f"{base['max_f1']:.6f}")
            writer.writerow(row)


def write_ranking_csv(report: EvalReport, path: Path) -> None:
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["relation", "max_f1", "optimal_k", "hits_at_1"])
        for relation in sorted(report.per_relation):
            values = report.per_relation[relation]
            writer.writerow([relation, f"{values['max_f1']:.6f}",
                             f"{values['optimal_k']:.4f}", f"{values['hits_at_1']:.6f}"])
        writer.writerow([OVERALL_LABEL, f"{report.overall['max_f1']:.6f}",
                         f"{report.overall['optimal_k']:.4f}",
                         f"{report.overall['hits_at_1']:.6f}"])


def render_ranking_figure(report: EvalReport, path: Path) -> None:
    relations = sorted(report.per_relation)
    values = [report.per_relation[r]["max_f1"] * 100 for r in relations]
    fig, ax = plt.subplots(figsize=(max(6, 1.2 * len(relations)), 4))
    ax.bar(range(len(relations)), values, color="#4878a8")
    ax.axhline(report.overall["max_f1"] * 100, color="#b2453c", linestyle="--",
               label=OVERALL_LABEL)
    ax.set_xticks(range(len(relations)))
    ax.set_xticklabels(relations, rotation=20, ha="right")
    ax.set_ylabel("max-F1 (%)")
    ax.set_ylim(0, 100)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_mechanism_figure(reports: Mapping[Mechanism, EvalReport], path: Path) -> None:
    mechanisms = [m for m in MECHANISM_ORDER if m in reports]
    relations = sorted(next(iter(reports.values())).per_relation)
    width = 0.8 / max(len(mechanisms), 1)
    fig, ax = plt.subplots(figsize=(max(7, 1.6 * len(relations)), 4.5))
    for i, mechanism in enumerate(mechanisms):
        xs = [j + i * width for j in range(len(relations))]
        ys = [reports[mechanism].per_relation[r]["f1"] * 100 for r in relations]
        ax.bar(xs, ys, width=width, label=mechanism.value)
    ax.set_xticks([j + width * (len(mechanisms) - 1) / 2 for j in range(len(relations))])
    ax.set_xticklabels(relations, rotation=20, ha="right")
    ax.set_ylabel("F1 (%)")
    ax.set_ylim(0, 100)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
