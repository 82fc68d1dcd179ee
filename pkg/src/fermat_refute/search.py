"""Exhaustive sweeps over candidate ranges with filter pruning and an exact oracle.

The sweep walks ``z`` in the outer loop, then ``x``, then ``y``, then the
exponents in ``p_set``. Work is sharded by contiguous ``z`` ranges; shard
results are folded in ``z`` order, so reports and certificate streams do not
depend on the worker count.
"""
from __future__ import annotations

import csv
import json
import os
import shutil
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from math import gcd
from pathlib import Path
from typing import IO, Iterator, Sequence

from . import certcheck
from .arith import is_odd_prime
from .errors import ConfigError, SearchAborted
from .filters import (
    DEFAULT_MODULI,
    DEFAULT_PIPELINE,
    EXPONENT_FREE,
    EXPONENT_FREE_CHECKS,
    Candidate,
    FilterId,
    raw_check,
    validate_moduli,
    validate_pipeline,
)


@dataclass(frozen=True)
class SearchConfig:
    x_max: int
    y_max: int
    z_max: int
    p_set: tuple[int, ...]
    pipeline: tuple[FilterId, ...] = DEFAULT_PIPELINE
    coprime_only: bool = False
    canonical_xy: bool = True
    modular_moduli: tuple[int, ...] = DEFAULT_MODULI
    # only scheduling; excluded from equality and from report documents
    worker_count: int = field(default=1, compare=False)
    z_above_y: bool = False
    generalized: bool = False
    allow_external: bool = False

    def __post_init__(self) -> None:
        for name in ("x_max", "y_max", "z_max"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise ConfigError(f"{name} must be an int >= 1, got {v!r}")
        p_set = tuple(self.p_set)
        if not p_set:
            raise ConfigError("p_set must not be empty")
        if len(set(p_set)) != len(p_set):
            raise ConfigError(f"p_set has duplicates: {list(p_set)}")
        for p in p_set:
            if isinstance(p, bool) or not isinstance(p, int) or p < 1:
                raise ConfigError(f"exponents must be ints >= 1, got {p!r}")
            if not self.generalized and not is_odd_prime(p):
                raise ConfigError(f"exponent {p} is not an odd prime (use generalized mode)")
        object.__setattr__(self, "p_set", p_set)
        object.__setattr__(
            self, "pipeline", validate_pipeline(self.pipeline, self.allow_external)
        )
        object.__setattr__(self, "modular_moduli", validate_moduli(self.modular_moduli))
        if not isinstance(self.worker_count, int) or self.worker_count < 1:
            raise ConfigError(f"worker_count must be >= 1, got {self.worker_count!r}")

    def to_dict(self, include_workers: bool = True) -> dict:
        d = {
            "x_max": self.x_max,
            "y_max": self.y_max,
            "z_max": self.z_max,
            "p_set": list(self.p_set),
            "pipeline": [f.value for f in self.pipeline],
            "coprime_only": self.coprime_only,
            "canonical_xy": self.canonical_xy,
            "modular_moduli": list(self.modular_moduli),
            "z_above_y": self.z_above_y,
            "generalized": self.generalized,
            "allow_external": self.allow_external,
        }
        if include_workers:
            d["worker_count"] = self.worker_count
        return d

    @classmethod
    def from_dict(cls, d: dict) -> SearchConfig:
        d = dict(d)
        for key in ("p_set", "pipeline", "modular_moduli"):
            if key in d:
                d[key] = tuple(d[key])
        return cls(**d)


@dataclass
class SearchReport:
    config: SearchConfig
    total_candidates: int = 0
    refuted_by_filter: dict[str, int] = field(default_factory=dict)
    survivors_to_oracle: int = 0
    oracle_solutions_found: int = 0
    solutions: list[tuple[int, int, int, int]] = field(default_factory=list)
    shard: tuple[int, int] | None = None
    certificate_mismatches: int | None = None
    complete: bool = True
    wall_time: float = field(default=0.0, compare=False)

    @classmethod
    def empty(cls, config: SearchConfig) -> SearchReport:
        return cls(config=config, refuted_by_filter={f.value: 0 for f in config.pipeline})

    @property
    def total_refuted(self) -> int:
        return sum(self.refuted_by_filter.values())

    def document(self) -> dict:
        """Deterministic JSON-ready form: no timing, no worker count."""
        return {
            "config": self.config.to_dict(include_workers=False),
            "shard": list(self.shard) if self.shard else None,
            "total_candidates": self.total_candidates,
            "refuted_by_filter": dict(self.refuted_by_filter),
            "survivors_to_oracle": self.survivors_to_oracle,
            "oracle_solutions_found": self.oracle_solutions_found,
            "solutions": [list(s) for s in self.solutions],
            "certificate_mismatches": self.certificate_mismatches,
            "complete": self.complete,
        }

    def to_json(self) -> str:
        return json.dumps(self.document(), indent=2) + "\n"

    def table_rows(self) -> list[tuple[str, int]]:
        return [(fid, n) for fid, n in self.refuted_by_filter.items()]


def write_report(report: SearchReport, path: str | os.PathLike) -> None:
    Path(path).write_text(report.to_json(), encoding="utf-8")


def write_table(report: SearchReport, path: str | os.PathLike) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["filter_id", "count"])
        writer.writerows(report.table_rows())


def _solution_key(s: tuple[int, int, int, int]) -> tuple[int, int, int, int]:
    return (s[2], s[0], s[1], s[3])


def merge_reports(a: SearchReport, b: SearchReport) -> SearchReport:
    """Fieldwise sum of two shard reports of the same configuration."""
    if a.config != b.config:
        raise ConfigError("cannot merge reports of different configurations")
    counts = {f.value: a.refuted_by_filter.get(f.value, 0) + b.refuted_by_filter.get(f.value, 0)
              for f in a.config.pipeline}
    if a.shard is None or b.shard is None:
        shard = a.shard or b.shard
    else:
        shard = (min(a.shard[0], b.shard[0]), max(a.shard[1], b.shard[1]))
    if a.certificate_mismatches is None and b.certificate_mismatches is None:
        mismatches = None
    else:
        mismatches = (a.certificate_mismatches or 0) + (b.certificate_mismatches or 0)
    return SearchReport(
        config=a.config,
        total_candidates=a.total_candidates + b.total_candidates,
        refuted_by_filter=counts,
        survivors_to_oracle=a.survivors_to_oracle + b.survivors_to_oracle,
        oracle_solutions_found=a.oracle_solutions_found + b.oracle_solutions_found,
        solutions=sorted(a.solutions + b.solutions, key=_solution_key),
        shard=shard,
        certificate_mismatches=mismatches,
        complete=a.complete and b.complete,
        wall_time=max(a.wall_time, b.wall_time),
    )


# -- oracle ------------------------------------------------------------------


def oracle_check(c: Candidate | Sequence[int]) -> bool:
    """Exact test of ``x**p + y**p == z**p``; accepts any exponent ``p >= 1``."""
    x, y, z, p = c.as_tuple() if isinstance(c, Candidate) else tuple(c)
    for v in (x, y, z, p):
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise ValueError(f"oracle needs positive ints, got {(x, y, z, p)}")
    # bit-length brackets: 2**((b-1)p) <= v**p < 2**(bp)
    bz = z.bit_length()
    bmax = max(x.bit_length(), y.bit_length())
    if bmax * p + 1 <= (bz - 1) * p or (bmax - 1) * p >= bz * p:
        return False
    return x**p + y**p == z**p


# -- enumeration -------------------------------------------------------------


def _y_limit(cfg: SearchConfig, z: int) -> int:
    return min(cfg.y_max, z - 1) if cfg.z_above_y else cfg.y_max


def _pairs(cfg: SearchConfig, z: int) -> Iterator[tuple[int, int]]:
    ylim = _y_limit(cfg, z)
    for x in range(1, cfg.x_max + 1):
        y0 = x if cfg.canonical_xy else 1
        if y0 > ylim:
            if cfg.canonical_xy:
                break
            continue
        for y in range(y0, ylim + 1):
            if cfg.coprime_only and gcd(x, y) != 1:
                continue
            yield x, y


def enumerate_candidates(
    cfg: SearchConfig, z_range: tuple[int, int] | None = None
) -> Iterator[Candidate]:
    lo, hi = z_range or (1, cfg.z_max)
    flags = [(p, not is_odd_prime(p)) for p in cfg.p_set]
    for z in range(lo, hi + 1):
        for x, y in _pairs(cfg, z):
            for p, gen in flags:
                yield Candidate(x, y, z, p, generalized=gen)


def _mobius(n: int) -> list[int]:
    mu = [1] * (n + 1)
    is_comp = bytearray(n + 1)
    for i in range(2, n + 1):
        if not is_comp[i]:
            for j in range(i, n + 1, i):
                if j > i:
                    is_comp[j] = 1
                mu[j] = -mu[j]
            sq = i * i
            for j in range(sq, n + 1, sq):
                mu[j] = 0
    return mu


def _pair_count(xm: int, ym: int, canonical: bool) -> int:
    if xm < 1 or ym < 1:
        return 0
    if not canonical:
        return xm * ym
    k = min(xm, ym)
    return k * (ym + 1) - k * (k + 1) // 2


def _coprime_pair_count(xm: int, ym: int, canonical: bool, mu: list[int]) -> int:
    # Mobius inversion over the common divisor d
    return sum(
        mu[d] * _pair_count(xm // d, ym // d, canonical)
        for d in range(1, min(xm, ym) + 1)
        if mu[d]
    )


def pairs_for_z(cfg: SearchConfig, z: int, mu: list[int] | None = None) -> int:
    """Closed-form number of ``(x, y)`` pairs enumerated at a given ``z``."""
    ylim = _y_limit(cfg, z)
    if cfg.coprime_only:
        mu = mu if mu is not None else _mobius(max(cfg.x_max, cfg.y_max))
        return _coprime_pair_count(cfg.x_max, ylim, cfg.canonical_xy, mu)
    return _pair_count(cfg.x_max, ylim, cfg.canonical_xy)


def expected_total(cfg: SearchConfig, z_range: tuple[int, int] | None = None) -> int:
    """Candidate count implied by the configuration, without enumerating."""
    lo, hi = z_range or (1, cfg.z_max)
    mu = _mobius(max(cfg.x_max, cfg.y_max)) if cfg.coprime_only else None
    if not cfg.z_above_y:
        return (hi - lo + 1) * pairs_for_z(cfg, lo, mu) * len(cfg.p_set) if hi >= lo else 0
    return sum(pairs_for_z(cfg, z, mu) for z in range(lo, hi + 1)) * len(cfg.p_set)


# -- sweep -------------------------------------------------------------------

_HEAD = '{"candidate":{"x":%d,"y":%d,"z":%d,"p":'
_TAIL = '},"filter_id":"%s","witness":%s,"external_assumption":%s}\n'
_dumps = json.JSONEncoder(separators=(",", ":")).encode


def _sweep(cfg: SearchConfig, lo: int, hi: int, out: IO[str] | None, verify: bool) -> SearchReport:
    report = SearchReport.empty(cfg)
    report.shard = (lo, hi)
    counts = report.refuted_by_filter
    mismatches = 0

    pipeline = cfg.pipeline
    n_head = 0
    while n_head < len(pipeline) and pipeline[n_head] in EXPONENT_FREE:
        n_head += 1
    head = [(f.value, EXPONENT_FREE_CHECKS[f]) for f in pipeline[:n_head]]
    tail = [
        (f.value, raw_check(f, cfg.modular_moduli), f in EXPONENT_FREE, f is FilterId.T1_EXTERNAL)
        for f in pipeline[n_head:]
    ]
    exps = [(p, is_odd_prime(p)) for p in cfg.p_set]
    domain_ps = [p for p, ok in exps if ok]
    domain_strs = [str(p) for p in domain_ps]
    n_domain = len(domain_ps)
    other_ps = [p for p, ok in exps if not ok]
    per_pair = len(exps)
    emit_lines = out is not None
    canonical, coprime = cfg.canonical_xy, cfg.coprime_only
    x_max = cfg.x_max
    survivors = []

    def recheck(x, y, z, p, fid, w, external) -> int:
        record = {
            "candidate": {"x": x, "y": y, "z": z, "p": p},
            "filter_id": fid,
            "witness": w,
            "external_assumption": external,
        }
        return certcheck.check_record(record) is not None

    for z in range(lo, hi + 1):
        buf: list[str] = []
        ylim = _y_limit(cfg, z)
        for x in range(1, x_max + 1):
            y0 = x if canonical else 1
            if y0 > ylim:
                if canonical:
                    break
                continue
            for y in range(y0, ylim + 1):
                if coprime and gcd(x, y) != 1:
                    continue
                report.total_candidates += per_pair
                w = None
                for fid, fn in head:
                    w = fn(x, y, z)
                    if w is not None:
                        break
                if w is not None:
                    if n_domain:
                        counts[fid] += n_domain
                        if emit_lines:
                            pre = _HEAD % (x, y, z)
                            post = _TAIL % (fid, _dumps(w), "false")
                            for ps in domain_strs:
                                buf.append(pre + ps + post)
                        if verify:
                            for p in domain_ps:
                                mismatches += recheck(x, y, z, p, fid, w, False)
                    for p in other_ps:
                        survivors.append((x, y, z, p))
                    continue
                cache: dict[str, dict | None] = {}
                for p, ok in exps:
                    if not ok:
                        survivors.append((x, y, z, p))
                        continue
                    for tfid, fn, free, external in tail:
                        if free:
                            if tfid not in cache:
                                cache[tfid] = fn(x, y, z, p)
                            w = cache[tfid]
                        else:
                            w = fn(x, y, z, p)
                        if w is not None:
                            counts[tfid] += 1
                            if emit_lines:
                                buf.append(
                                    _HEAD % (x, y, z) + str(p)
                                    + _TAIL % (tfid, _dumps(w), "true" if external else "false")
                                )
                            if verify:
                                mismatches += recheck(x, y, z, p, tfid, w, external)
                            break
                    else:
                        survivors.append((x, y, z, p))
        if buf:
            out.write("".join(buf))
        for cand in survivors:
            report.survivors_to_oracle += 1
            if oracle_check(cand):
                report.oracle_solutions_found += 1
                report.solutions.append(cand)
        survivors.clear()
    if verify:
        report.certificate_mismatches = mismatches
    report.solutions.sort(key=_solution_key)
    return report


def _shard_bounds(cfg: SearchConfig, lo: int, hi: int, n_shards: int) -> list[tuple[int, int]]:
    """Split ``[lo, hi]`` into contiguous ranges of roughly equal work."""
    mu = _mobius(max(cfg.x_max, cfg.y_max)) if cfg.coprime_only else None
    weights = [max(pairs_for_z(cfg, z, mu), 1) for z in range(lo, hi + 1)]
    total = sum(weights)
    n_shards = max(1, min(n_shards, hi - lo + 1))
    bounds = []
    start = lo
    acc = 0
    for i, w in enumerate(weights):
        acc += w
        z = lo + i
        if len(bounds) < n_shards - 1 and acc >= total * (len(bounds) + 1) / n_shards and z < hi:
            bounds.append((start, z))
            start = z + 1
    bounds.append((start, hi))
    return bounds


def _run_shard(args) -> SearchReport:
    cfg, lo, hi, path, verify = args
    if path is None:
        return _sweep(cfg, lo, hi, None, verify)
    with open(path, "w", encoding="utf-8", buffering=1 << 20) as fh:
        return _sweep(cfg, lo, hi, fh, verify)


def run_search(
    cfg: SearchConfig,
    certificates: str | os.PathLike | IO[str] | None = None,
    z_range: tuple[int, int] | None = None,
    verify: bool = False,
) -> SearchReport:
    """Sweep the configured range and return the aggregated report.

    Args:
        certificates: path or text stream receiving one JSON record per
            refutation, in enumeration order; ``None`` discards them.
        z_range: restrict to a shard ``(lo, hi)`` of the ``z`` range.
        verify: re-check every emitted certificate with the independent
            checker; the mismatch count lands in the report.

    Raises:
        SearchAborted: the certificate sink failed; ``partial_report`` holds
            whatever was aggregated before the failure (``complete=False``).
    """
    lo, hi = z_range or (1, cfg.z_max)
    if lo < 1 or hi > cfg.z_max or lo > hi:
        raise ConfigError(f"bad z range {(lo, hi)} for z_max={cfg.z_max}")
    t0 = time.perf_counter()
    own = None
    if certificates is None or hasattr(certificates, "write"):
        sink = certificates
    else:
        own = sink = open(certificates, "w", encoding="utf-8", buffering=1 << 20)
    report = SearchReport.empty(cfg)
    try:
        if cfg.worker_count == 1:
            try:
                report = _sweep(cfg, lo, hi, sink, verify)
            except OSError as exc:
                report.complete = False
                raise SearchAborted(f"certificate sink failed: {exc}", report) from exc
        else:
            report = _run_parallel(cfg, lo, hi, sink, verify)
    finally:
        if own is not None:
            try:
                own.close()
            except OSError:
                pass
    report.wall_time = time.perf_counter() - t0
    return report


def _run_parallel(cfg, lo, hi, sink, verify) -> SearchReport:
    shards = _shard_bounds(cfg, lo, hi, 4 * cfg.worker_count)
    tmpdir = tempfile.mkdtemp(prefix="fermat-shards-") if sink is not None else None
    jobs = [
        (cfg, a, b, None if tmpdir is None else os.path.join(tmpdir, f"shard-{i:05d}.jsonl"), verify)
        for i, (a, b) in enumerate(shards)
    ]
    merged = SearchReport.empty(cfg)
    try:
        with ProcessPoolExecutor(max_workers=cfg.worker_count) as pool:
            for job, part in zip(jobs, pool.map(_run_shard, jobs)):
                if job[3] is not None:
                    try:
                        with open(job[3], encoding="utf-8") as fh:
                            shutil.copyfileobj(fh, sink, 1 << 20)
                    except OSError as exc:
                        merged.complete = False
                        raise SearchAborted(f"certificate sink failed: {exc}", merged) from exc
                    os.remove(job[3])
                merged = merge_reports(merged, part)
    finally:
        if tmpdir is not None:
            shutil.rmtree(tmpdir, ignore_errors=True)
    return merged


def with_workers(cfg: SearchConfig, worker_count: int) -> SearchConfig:
    return replace(cfg, worker_count=worker_count)
