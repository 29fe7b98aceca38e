"""Figures written next to bench reports (PNG, headless backend)."""

from __future__ import annotations

import os
from pathlib import Path
from typing import Any

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _stem(report_path: str | os.PathLike) -> Path:
    p = Path(report_path)
    return p.with_name(p.stem)


def plot_checkpoints(report: dict[str, Any], report_path: str | os.PathLike) -> list[Path]:
    """Matching sizes against the oracle, and the additive gap, per checkpoint."""
    rows = report["checkpoints"]
    if not rows:
        return []
    stem = _stem(report_path)
    xs = [r["update_index"] for r in rows]
    kinds = report["config"]["engines"]
    out = []

    fig, ax = plt.subplots(figsize=(8, 4.5))
    if rows[0]["oracle_size"] is not None:
        ax.plot(xs, [r["oracle_size"] for r in rows], color="black", lw=1.2, label="maximum (oracle)")
    for kind in kinds:
        ax.plot(xs, [r["engines"][kind]["engine_size"] for r in rows], lw=1, label=kind)
    bad = [(r["update_index"], rec["engine_size"]) for r in rows for rec in r["engines"].values() if not rec["ok"]]
    if bad:
        ax.scatter(*zip(*bad), color="red", marker="x", zorder=3, label="violation")
    ax.set_xlabel("update")
    ax.set_ylabel("matching size")
    ax.legend(loc="best", fontsize="small")
    fig.tight_layout()
    path = Path(f"{stem}_sizes.png")
    fig.savefig(path, dpi=110)
    plt.close(fig)
    out.append(path)

    if rows[0]["oracle_size"] is not None:
        fig, ax = plt.subplots(figsize=(8, 3.5))
        for kind in kinds:
            ax.plot(xs, [r["engines"][kind]["additive_gap"] for r in rows], lw=1, label=kind)
        if "ors" in kinds:
            cfg = report["config"]
            ax.axhline(cfg["epsilon"] * cfg["n"], color="grey", ls="--", lw=1, label="additive budget")
        ax.set_xlabel("update")
        ax.set_ylabel("oracle - matcher")
        ax.legend(loc="best", fontsize="small")
        fig.tight_layout()
        path = Path(f"{stem}_gap.png")
        fig.savefig(path, dpi=110)
        plt.close(fig)
        out.append(path)
    return out


def plot_trend(report: dict[str, Any], report_path: str | os.PathLike) -> list[Path]:
    """Amortized matrix probes per update against n, one line per matcher."""
    stem = _stem(report_path)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for kind in report["config"]["engines"]:
        pts = sorted((s["n"], s["amortized_matrix_probes"]) for s in report["series"] if s["engine"] == kind)
        if pts:
            ax.plot(*zip(*pts), marker="o", label=kind)
    ax.set_xscale("log")
    ax.set_yscale("symlog")
    ax.set_xlabel("n")
    ax.set_ylabel("matrix probes per update")
    ax.legend(loc="best", fontsize="small")
    fig.tight_layout()
    path = Path(f"{stem}_probes.png")
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return [path]


def plot_report(report: dict[str, Any], report_path: str | os.PathLike) -> list[Path]:
    if report["kind"] == "trend":
        return plot_trend(report, report_path)
    return plot_checkpoints(report, report_path)
