"""Throughput measurements: each filter alone, the oracle alone, and the full pipeline."""
from __future__ import annotations

import time
from dataclasses import dataclass

from .filters import raw_check
from .search import SearchConfig, _pairs, oracle_check, run_search


@dataclass
class BenchRow:
    name: str
    evaluations: int
    refuted: int
    seconds: float

    @property
    def mean_ns(self) -> float:
        return 1e9 * self.seconds / self.evaluations if self.evaluations else 0.0


@dataclass
class BenchResult:
    candidates: int
    rows: list[BenchRow]
    pipeline_seconds: float
    oracle_seconds: float

    @property
    def throughput_ratio(self) -> float:
        """Pipeline throughput over oracle-only throughput (candidates per second)."""
        if self.pipeline_seconds == 0:
            return float("inf")
        return self.oracle_seconds / self.pipeline_seconds


def run_bench(cfg: SearchConfig) -> BenchResult:
    cands = [
        (x, y, z, p)
        for z in range(1, cfg.z_max + 1)
        for x, y in _pairs(cfg, z)
        for p in cfg.p_set
    ]
    rows = []
    for fid in cfg.pipeline:
        fn = raw_check(fid, cfg.modular_moduli)
        hits = 0
        t0 = time.perf_counter()
        for x, y, z, p in cands:
            if fn(x, y, z, p) is not None:
                hits += 1
        rows.append(BenchRow(fid.value, len(cands), hits, time.perf_counter() - t0))

    solutions = 0
    t0 = time.perf_counter()
    for c in cands:
        if oracle_check(c):
            solutions += 1
    oracle_seconds = time.perf_counter() - t0
    rows.append(BenchRow("ORACLE", len(cands), len(cands) - solutions, oracle_seconds))

    report = run_search(cfg)
    return BenchResult(len(cands), rows, report.wall_time, oracle_seconds)


def format_table(result: BenchResult) -> str:
    lines = [f"{'step':<14}{'evaluations':>12}{'refuted':>12}{'mean ns':>12}"]
    for r in result.rows:
        lines.append(f"{r.name:<14}{r.evaluations:>12}{r.refuted:>12}{r.mean_ns:>12.1f}")
    lines.append(f"candidates: {result.candidates}")
    lines.append(
        f"pipeline {result.pipeline_seconds:.3f}s vs oracle-only {result.oracle_seconds:.3f}s;"
        f" throughput ratio {result.throughput_ratio:.2f}"
    )
    return "\n".join(lines)
