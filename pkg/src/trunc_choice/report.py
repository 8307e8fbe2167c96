"""Plain-text reports and the figures rendered alongside them.

Reports are line-oriented (`CERT <name> PASS|FAIL <detail>` plus legend
and statistics lines) so they stay diffable and auditable.  When a
report path is given, small matplotlib charts of the search statistics
are written next to it; figures never draw graphs or embeddings, only
runtime/statistics summaries.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .counterexample import CounterexampleReport, GadgetVerification
from .procedure import ProcedureResult


def write_lines(path: Path, lines: Iterable[str]) -> None:
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def copy_stats_figure(report_path: Path, report: CounterexampleReport) -> Path:
    """Bar charts of per-copy search nodes and runtimes."""
    out = report_path.with_name(report_path.stem + "_copies.png")
    stats = report.copy_stats
    xs = [s.copy for s in stats]
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(10, 6), sharex=True)
    ax1.bar(xs, [s.nodes for s in stats], color="#336699", label="first order")
    ax1.bar(
        xs,
        [s.nodes_reordered for s in stats],
        color="#99bbdd",
        alpha=0.6,
        label="second order",
    )
    ax1.set_ylabel("search nodes")
    ax1.legend(loc="upper right", fontsize=8)
    ax2.bar(xs, [s.seconds * 1000 for s in stats], color="#884444")
    ax2.set_ylabel("ms per copy")
    ax2.set_xlabel("copy index (one per ordered pole pair)")
    fig.suptitle("per-copy unsatisfiability search")
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def gadget_stats_figure(report_path: Path, ver: GadgetVerification) -> Path:
    out = report_path.with_name(report_path.stem + "_gadget.png")
    names = [c.name for c in ver.certs]
    ok = [1 if c.passed else 0 for c in ver.certs]
    fig, ax = plt.subplots(figsize=(8, 0.5 + 0.35 * len(names)))
    colors = ["#2d7f2d" if v else "#aa2222" for v in ok]
    ax.barh(range(len(names)), [1] * len(names), color=colors)
    ax.set_yticks(range(len(names)))
    ax.set_yticklabels(names, fontsize=8)
    ax.set_xticks([])
    ax.invert_yaxis()
    ax.set_title(f"gadget checks (search nodes: {ver.nodes})", fontsize=10)
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def procedure_trace_figure(trace_path: Path, result: ProcedureResult) -> Path:
    """Residual and avoided-palette sizes along the colouring steps."""
    out = trace_path.with_name(trace_path.stem + "_steps.png")
    steps = [s for s in result.steps if s.in_v2]
    fig, ax = plt.subplots(figsize=(8, 4))
    if steps:
        xs = [s.step for s in steps]
        ax.plot(xs, [s.residual_size for s in steps], "o-", label="|residual|")
        ax.plot(xs, [len(s.avoid) for s in steps], "s--", label="|avoided|")
        ax.axhline(7, color="grey", lw=0.8, ls=":", label="residual floor")
        ax.axhline(6, color="black", lw=0.8, ls=":", label="avoid ceiling")
    ax.set_xlabel("step")
    ax.set_ylabel("colours")
    ax.legend(fontsize=8)
    ax.set_title("high-degree colouring budget per step", fontsize=10)
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out
