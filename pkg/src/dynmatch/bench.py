"""Replay streams through matchers, check against the exact oracle, and build reports.

Reports are plain dicts ready for ``json.dump``.  Wall-clock data lives only
under ``report["header"]`` so that two runs with the same stream, config and
seed produce identical reports once the header is dropped.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from importlib import resources
from typing import Any, Callable, Protocol

import jsonschema
import numpy as np

from .engine import DynamicMatchingEngine, EngineConfig, RebuildInfo
from .errors import ConfigError
from .graph import Edge, edge
from .matching import Matching
from .oracle import ORACLE_MAX_VERTICES, MaximalBaseline, RebuildBaseline, exact_matching
from .ors import random_stream_gen
from .sparsifier import MultiplicativeWrapper
from .streams import Event, Stream

REPORT_SCHEMA_VERSION = "dynmatch-report/1"
ENGINE_KINDS = ("ors", "ors-multiplicative", "maximal", "rebuild")


class Matcher(Protocol):
    kind: str

    @property
    def matching(self) -> Matching: ...

    @property
    def rebuilds(self) -> int: ...

    def update(self, event: Event) -> bool: ...

    def work(self) -> dict[str, int]: ...


@dataclass
class BenchConfig:
    epsilon: float = 0.2
    threshold: int | None = None
    seed: int = 0
    check_every: int = 0  # 0 disables periodic checkpoints
    measure_d: bool = False
    check_invariants: bool = False
    n: int | None = None  # defaults to the stream's n

    def __post_init__(self) -> None:
        if not 0 < self.epsilon < 1:
            raise ConfigError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.check_every < 0:
            raise ConfigError("check_every must be >= 0")


def rebuild_period_for(n: int, epsilon: float) -> int:
    return max(1, math.floor(epsilon * n / 2 + 1e-9))


def make_matcher(kind: str, n: int, cfg: BenchConfig) -> Matcher:
    if kind == "ors":
        config = EngineConfig(n, cfg.epsilon, cfg.threshold, cfg.seed)
        return DynamicMatchingEngine(config, check=cfg.check_invariants, measure_d=cfg.measure_d)
    if kind == "ors-multiplicative":
        return MultiplicativeWrapper(n, cfg.epsilon, seed=cfg.seed, threshold=cfg.threshold, check=cfg.check_invariants)
    if kind == "maximal":
        return MaximalBaseline(n)
    if kind == "rebuild":
        return RebuildBaseline(n, rebuild_period_for(n, cfg.epsilon))
    raise ConfigError(f"unknown engine kind {kind!r}; choose from {', '.join(ENGINE_KINDS)}")


def guarantee_holds(kind: str, size: int, mu: int, n: int, epsilon: float) -> bool:
    """Per-kind promise: additive for the engine, multiplicative for the wrapper, 1/2 for maximal."""
    if kind == "ors":
        return size >= mu - epsilon * n - 1e-9
    if kind == "ors-multiplicative":
        return size >= (1 - epsilon) * mu - 1e-9
    if kind == "maximal":
        return 2 * size >= mu
    return True


class _PhaseTracker:
    def __init__(self) -> None:
        self.rebuilds: dict[int, int] = {}

    def __call__(self, info: RebuildInfo) -> None:
        self.rebuilds[info.phase] = self.rebuilds.get(info.phase, 0) + 1


def _replay(stream: Stream, matchers: dict[str, Matcher], n: int, cfg: BenchConfig, use_oracle: bool):
    live: set[Edge] = set()
    markers = set(stream.markers)
    rows: list[dict[str, Any]] = []
    seen_rebuilds = {k: m.rebuilds for k, m in matchers.items()}
    for idx, ev in enumerate(stream.events, start=1):
        e = edge(ev.u, ev.v)
        if ev.is_insert:
            live.add(e)
        else:
            live.discard(e)
        triggers = []
        for kind, m in matchers.items():
            m.update(ev)
            if m.rebuilds != seen_rebuilds[kind]:
                seen_rebuilds[kind] = m.rebuilds
                if "rebuild" not in triggers:
                    triggers.append("rebuild")
        if cfg.check_every and idx % cfg.check_every == 0:
            triggers.append("periodic")
        if idx in markers:
            triggers.append("marker")
        if triggers:
            rows.append(_checkpoint(idx, triggers, live, matchers, n, cfg, use_oracle))
    return rows


def _checkpoint(idx, triggers, live, matchers, n, cfg, use_oracle) -> dict[str, Any]:
    mu = exact_matching(live, n).size if use_oracle else None
    row: dict[str, Any] = {"update_index": idx, "triggers": triggers, "oracle_size": mu, "engines": {}}
    for kind, m in matchers.items():
        matching = m.matching
        size = len(matching)
        valid = all(e in live for e in matching.edges())
        rec: dict[str, Any] = {"engine_size": size, "valid": valid}
        if mu is None:
            rec.update(additive_gap=None, ratio=None, ok=valid)
        else:
            rec["additive_gap"] = mu - size
            rec["ratio"] = size / mu if mu > 0 else None
            rec["ok"] = valid and guarantee_holds(kind, size, mu, n, cfg.epsilon)
        row["engines"][kind] = rec
    return row


def _engine_sections(kind: str, m: Matcher, tracker: _PhaseTracker | None, events: int) -> dict[str, Any]:
    work = m.work()
    totals: dict[str, Any] = {
        "updates": events,
        "matrix_probes": work["matrix_probes"],
        "list_reads": work["list_reads"],
        "rebuilds": m.rebuilds,
        "amortized_matrix_probes": work["matrix_probes"] / events if events else 0.0,
        "amortized_list_reads": work["list_reads"] / events if events else 0.0,
    }
    phases: list[dict[str, Any]] = []
    certificates: list[dict[str, Any]] = []
    instances: list[dict[str, Any]] = []
    if isinstance(m, DynamicMatchingEngine):
        snap = m.metrics_snapshot()
        totals["phase_resets"] = snap.phase_resets
        totals["sampled_rebuilds"] = snap.sampled_rebuilds
        certificates = [asdict(c) for c in snap.certificate_log]
        per_phase_certs: dict[int, int] = {}
        for c in snap.certificate_log:
            per_phase_certs[c.phase] = per_phase_certs.get(c.phase, 0) + 1
        for phase in sorted(tracker.rebuilds if tracker else {}):
            phases.append(
                {
                    "phase": phase,
                    "rebuilds": tracker.rebuilds[phase],
                    "certificates": per_phase_certs.get(phase, 0),
                    "sum_inverse_d": snap.sum_inverse_d.get(phase, 0.0),
                }
            )
    elif isinstance(m, MultiplicativeWrapper):
        instances = m.instance_summary()
        for inst, rec in zip(m.instances, instances):
            rec["rebuilds"] = inst.engine.rebuilds
    return {"totals": totals, "phases": phases, "certificates": certificates, "instances": instances}


def _header(started: float) -> dict[str, Any]:
    return {
        "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "wall_seconds": round(time.perf_counter() - started, 6),
    }


def _prepare(stream: Stream, cfg: BenchConfig) -> tuple[int, bool, list[str]]:
    n = stream.n if cfg.n is None else cfg.n
    if n < stream.n:
        raise ConfigError(f"n={n} is smaller than the stream's n={stream.n}")
    warnings = []
    use_oracle = n <= ORACLE_MAX_VERTICES
    if not use_oracle:
        warnings.append(f"oracle skipped: n={n} exceeds the cap of {ORACLE_MAX_VERTICES}")
    return n, use_oracle, warnings


def run_bench(
    stream: Stream,
    kind: str,
    cfg: BenchConfig,
    *,
    use_oracle: bool = True,
    rebuild_hook: Callable[[RebuildInfo], None] | None = None,
) -> dict[str, Any]:
    """Replay ``stream`` through one matcher and check every checkpoint.

    Checkpoints fall after every update that triggered a rebuild, every
    ``cfg.check_every`` updates, and at the stream's ``#@checkpoint``
    markers.  ``report["flags"]["all_ok"]`` is True iff every checkpoint
    met the matcher's guarantee.  ``rebuild_hook`` sees every engine rebuild
    when ``kind`` is ``"ors"``.
    """
    return _run(stream, [kind], cfg, use_oracle, report_kind="run", rebuild_hook=rebuild_hook)


def compare_engines(stream: Stream, kinds: list[str], cfg: BenchConfig, *, use_oracle: bool = True) -> dict[str, Any]:
    """Replay one stream jointly through several matchers with aligned checkpoints."""
    if len(set(kinds)) != len(kinds) or not kinds:
        raise ConfigError("engine kinds must be distinct and non-empty")
    return _run(stream, kinds, cfg, use_oracle, report_kind="compare")


def _run(
    stream: Stream,
    kinds: list[str],
    cfg: BenchConfig,
    use_oracle: bool,
    report_kind: str,
    rebuild_hook: Callable[[RebuildInfo], None] | None = None,
) -> dict[str, Any]:
    started = time.perf_counter()
    n, oracle_ok, warnings = _prepare(stream, cfg)
    use_oracle = use_oracle and oracle_ok
    matchers: dict[str, Matcher] = {}
    trackers: dict[str, _PhaseTracker] = {}
    for kind in kinds:
        m = make_matcher(kind, n, cfg)
        if isinstance(m, DynamicMatchingEngine):
            trackers[kind] = _PhaseTracker()
            m.hooks.append(trackers[kind])
            if rebuild_hook is not None:
                m.hooks.append(rebuild_hook)
        matchers[kind] = m
    rows = _replay(stream, matchers, n, cfg, use_oracle)

    engines = {}
    for kind, m in matchers.items():
        sections = _engine_sections(kind, m, trackers.get(kind), len(stream.events))
        sections["totals"]["checkpoints"] = len(rows)
        sections["totals"]["violations"] = sum(not r["engines"][kind]["ok"] for r in rows)
        engines[kind] = sections
    all_ok = all(rec["ok"] for r in rows for rec in r["engines"].values())
    report = {
        "schema": REPORT_SCHEMA_VERSION,
        "kind": report_kind,
        "header": _header(started),
        "config": {
            "engines": list(kinds),
            "n": n,
            "epsilon": cfg.epsilon,
            "threshold": cfg.threshold,
            "seed": cfg.seed,
            "check_every": cfg.check_every,
            "measure_d": cfg.measure_d,
            "rebuild_period": rebuild_period_for(n, cfg.epsilon),
        },
        "stream": {"n": stream.n, "events": len(stream.events), "markers": list(stream.markers)},
        "checkpoints": rows,
        "engines": engines,
        "flags": {"all_ok": all_ok, "oracle_skipped": not use_oracle, "warnings": warnings},
    }
    return report


def trend_report(
    ns: list[int],
    epsilon: float,
    steps: int,
    seed: int,
    *,
    insert_bias: float = 0.55,
    kinds: tuple[str, ...] = ("ors", "rebuild"),
) -> dict[str, Any]:
    """Amortized work per update across graph sizes, without oracle checks."""
    started = time.perf_counter()
    series = []
    phases = []
    for n in ns:
        stream = random_stream_gen(n, steps, insert_bias, np.random.default_rng([seed, n]))
        cfg = BenchConfig(epsilon=epsilon, seed=seed)
        sub = compare_engines(stream, list(kinds), cfg, use_oracle=False)
        for kind in kinds:
            tot = sub["engines"][kind]["totals"]
            series.append(
                {
                    "n": n,
                    "engine": kind,
                    "updates": tot["updates"],
                    "rebuilds": tot["rebuilds"],
                    "matrix_probes": tot["matrix_probes"],
                    "list_reads": tot["list_reads"],
                    "amortized_matrix_probes": tot["amortized_matrix_probes"],
                    "amortized_list_reads": tot["amortized_list_reads"],
                }
            )
            for ph in sub["engines"][kind]["phases"]:
                phases.append({"n": n, "engine": kind, **ph})
    return {
        "schema": REPORT_SCHEMA_VERSION,
        "kind": "trend",
        "header": _header(started),
        "config": {"ns": list(ns), "epsilon": epsilon, "steps": steps, "seed": seed, "insert_bias": insert_bias, "engines": list(kinds)},
        "series": series,
        "phases": phases,
    }


def load_schema() -> dict[str, Any]:
    text = resources.files("dynmatch").joinpath("report_schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def validate_report(report: dict[str, Any]) -> None:
    """Raise ``jsonschema.ValidationError`` if the report does not match the bundled schema."""
    jsonschema.validate(report, load_schema())


def strip_header(report: dict[str, Any]) -> dict[str, Any]:
    return {k: v for k, v in report.items() if k != "header"}


def dumps_report(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=2) + "\n"


CSV_COLUMNS = ["update_index", "engine", "engine_size", "oracle_size", "additive_gap", "ratio", "triggers", "ok"]


def checkpoints_csv(report: dict[str, Any]) -> str:
    """Long-format table: one line per (checkpoint, engine)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in report.get("checkpoints", []):
        for kind, rec in row["engines"].items():
            ratio = rec["ratio"]
            writer.writerow(
                [
                    row["update_index"],
                    kind,
                    rec["engine_size"],
                    "" if row["oracle_size"] is None else row["oracle_size"],
                    "" if rec["additive_gap"] is None else rec["additive_gap"],
                    "" if ratio is None else f"{ratio:.6f}",
                    "|".join(row["triggers"]),
                    int(rec["ok"]),
                ]
            )
    return buf.getvalue()


def trend_csv(report: dict[str, Any]) -> str:
    buf = io.StringIO()
    cols = ["n", "engine", "updates", "rebuilds", "matrix_probes", "list_reads", "amortized_matrix_probes", "amortized_list_reads"]
    writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    writer.writeheader()
    for rec in report["series"]:
        writer.writerow(rec)
    return buf.getvalue()
