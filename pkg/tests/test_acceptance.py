"""Acceptance criteria, each run at its stated bound and tolerance.

A summary line per criterion is printed at the end of the session (see
``conftest.py``). Reference counts were derived by standalone brute-force
enumeration and are frozen here.
"""
import hashlib
import json
import random
import time
from dataclasses import replace
from math import gcd, isqrt

import pytest

from fermat_refute import certcheck, identities
from fermat_refute.cli import EXIT_INTERNAL, cmd_selftest
from fermat_refute.filters import FilterId, check_basic_bounds, check_t5, euclid_step_check
from fermat_refute.search import SearchConfig, expected_total, run_search, with_workers
from mutants import MUTANTS

SWEEP = SearchConfig(x_max=300, y_max=300, z_max=300, p_set=(3, 5, 7), z_above_y=True)

# Frozen reference values.
SWEEP_CANDIDATES = 13_499_850  # 3 * C(300, 3) + 3 * C(300, 2): x <= y < z <= 300
COPRIME_PAIRS_500 = 76_115  # coprime x < y <= 500
PRIMITIVE_TRIPLES_1000 = 158  # primitive Pythagorean triples, hypotenuse <= 1000
COPRIME_SWEEP_PER_P = 2_735_881  # coprime x <= y < z <= 300
OUTSIDE_OPEN_PER_P = 1_381_639  # of those, x + y outside (z, 2z)
MARGIN_PER_P = 13_525  # of those, x + y in {z + 1, 2z - 1}
EUCLID_TRIPLES = 62_375_000  # (x, y, z) with z <= 500 and z < x + y < 2z


class _HashSink:
    def __init__(self):
        self.digest = hashlib.sha256()
        self.lines = 0

    def write(self, s: str) -> int:
        self.digest.update(s.encode())
        self.lines += s.count("\n")
        return len(s)


@pytest.fixture(scope="module")
def sweep(tmp_path_factory):
    """The exhaustive sweep with one worker, certificates written to disk."""
    path = tmp_path_factory.mktemp("sweep") / "certificates.jsonl"
    t0 = time.perf_counter()
    report = run_search(SWEEP, certificates=path)
    yield {"report": report, "path": path, "sweep_seconds": time.perf_counter() - t0, "t0": t0}
    path.unlink(missing_ok=True)


@pytest.mark.criterion(1, "identity suite")
def test_identity_suite(record_property):
    rng = random.Random(1_000_003)
    t0 = time.perf_counter()
    failures = 0
    for _ in range(1000):
        x, y = rng.randint(1, 10**6), rng.randint(1, 10**6)
        n = rng.randrange(1, 22, 2)
        z = rng.randint(y + 1, 2 * 10**6)
        a, p = rng.randint(1, 10**6), rng.randint(2, 21)
        failures += (x + y) * identities.alt_factor_sum(x, y, n) != x**n + y**n
        failures += (z - y) * identities.diff_factor_sum(z, y, n) != z**n - y**n
        failures += identities.binomial_gap_expansion(y, a, p) != (y + a) ** p - y**p - a**p
    elapsed = time.perf_counter() - t0
    record_property("detail", f"1000 tuples x 3 identities, {failures} failures, {elapsed:.2f}s")
    assert failures == 0
    assert elapsed < 60


def _primitive_triples_brute(z_max):
    for x in range(1, z_max + 1):
        for y in range(x + 1, z_max + 1):
            s = x * x + y * y
            z = isqrt(s)
            if z > z_max:
                break
            if z * z == s and gcd(x, y) == 1:
                yield x, y, z


@pytest.mark.criterion(2, "reduction on solution families")
def test_reduction_families(record_property):
    family = [(x, y, x + y, 1) for y in range(2, 501) for x in range(1, y) if gcd(x, y) == 1]
    triples = list(_primitive_triples_brute(1000))
    assert len(family) == COPRIME_PAIRS_500
    assert len(triples) == PRIMITIVE_TRIPLES_1000
    family += [(x, y, z, 2) for x, y, z in triples]

    failures = []
    for x, y, z, p in family:
        try:
            w = identities.theorem1_reduce(x, y, z, p)
        except Exception as exc:
            failures.append(((x, y, z, p), repr(exc)))
            continue
        if not (
            w.a**p - 4 * w.b**p == w.c**2
            and w.c == abs(x**p - y**p)
            and gcd(w.a, w.b) == 1
        ):
            failures.append(((x, y, z, p), w))
    record_property(
        "detail",
        f"{COPRIME_PAIRS_500} pairs at p=1 + {PRIMITIVE_TRIPLES_1000} triples at p=2,"
        f" {len(failures)} failures",
    )
    assert failures == []


@pytest.mark.slow
@pytest.mark.criterion(3, "exhaustive sweep")
def test_exhaustive_sweep(sweep, record_property):
    report = sweep["report"]
    assert report.total_candidates == SWEEP_CANDIDATES == expected_total(SWEEP)
    assert report.oracle_solutions_found == 0
    assert report.complete

    lines = bad_certs = oracle_true = 0
    with open(sweep["path"], encoding="utf-8") as fh:
        for line in fh:
            lines += 1
            record = json.loads(line)
            if certcheck.check_record(record) is not None:
                bad_certs += 1
            c = record["candidate"]
            if c["x"] ** c["p"] + c["y"] ** c["p"] == c["z"] ** c["p"]:
                oracle_true += 1
    elapsed = time.perf_counter() - sweep["t0"]
    record_property(
        "detail",
        f"{report.total_candidates} candidates, {lines} certificates, {bad_certs} re-check"
        f" failures, {oracle_true} oracle-true refutations, {report.oracle_solutions_found}"
        f" solutions, sweep {sweep['sweep_seconds']:.1f}s, total {elapsed:.1f}s",
    )
    assert lines == report.total_refuted
    assert bad_certs == 0
    assert oracle_true == 0
    assert elapsed < 300


@pytest.mark.slow
@pytest.mark.criterion(4, "Euclid step")
def test_euclid_step(record_property):
    checked = failures = 0
    for z in range(1, 501):
        for x in range(1, 2 * z):
            for y in range(max(1, z + 1 - x), 2 * z - x):
                checked += 1
                if not euclid_step_check(x, y, z):
                    failures += 1
    record_property("detail", f"{checked} triples, {failures} failures")
    assert checked == EUCLID_TRIPLES
    assert failures == 0


@pytest.mark.slow
@pytest.mark.criterion(5, "T5 containment")
def test_t5_containment(record_property):
    # Both filters ignore the exponent, so one pass over (x, y, z) covers every p.
    t5_hits = basic_hits = margin_hits = 0
    missed = stray = 0
    coprime = 0
    for z in range(2, 301):
        for y in range(1, z):
            for x in range(1, y + 1):
                if gcd(x, y) != 1:
                    continue
                coprime += 1
                s = x + y
                fired = check_t5(x, y, z) is not None
                t5_hits += fired
                basic = check_basic_bounds(x, y, z) is not None
                basic_hits += basic
                in_margin = s in (z + 1, 2 * z - 1)
                margin_hits += in_margin and fired
                if not (z + 2 <= s <= 2 * (z - 1)) and not fired:
                    missed += 1
                if fired and not (s <= z or s >= 2 * z or in_margin):
                    stray += 1
    n_p = len(SWEEP.p_set)
    assert coprime == COPRIME_SWEEP_PER_P
    assert (missed, stray) == (0, 0)
    assert basic_hits == OUTSIDE_OPEN_PER_P
    assert margin_hits == MARGIN_PER_P
    assert t5_hits == basic_hits + margin_hits

    coprime_cfg = replace(SWEEP, coprime_only=True, pipeline=(FilterId.T5,))
    only_t5 = run_search(coprime_cfg)
    only_basic = run_search(replace(coprime_cfg, pipeline=(FilterId.BASIC_BOUNDS,)))
    assert only_t5.total_candidates == only_basic.total_candidates == n_p * coprime
    assert only_t5.refuted_by_filter["T5"] == n_p * t5_hits
    assert only_basic.refuted_by_filter["BASIC_BOUNDS"] == n_p * basic_hits
    record_property(
        "detail",
        f"{n_p * coprime} coprime candidates; T5 refutes {n_p * t5_hits} ="
        f" BASIC_BOUNDS {n_p * basic_hits} + margins {n_p * margin_hits}; 0 missed, 0 stray",
    )


@pytest.mark.slow
@pytest.mark.criterion(6, "determinism across worker counts")
def test_worker_determinism(sweep, record_property):
    digest = hashlib.sha256()
    with open(sweep["path"], "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 22), b""):
            digest.update(chunk)
    baseline_doc = sweep["report"].to_json()
    baseline = digest.hexdigest()

    # An identical ordered stream implies an identical multiset.
    for workers in (2, 4, 8):
        sink = _HashSink()
        report = run_search(with_workers(SWEEP, workers), certificates=sink)
        assert report.to_json() == baseline_doc, f"report differs at {workers} workers"
        assert sink.digest.hexdigest() == baseline, f"certificates differ at {workers} workers"
        assert sink.lines == report.total_refuted
    record_property("detail", f"workers 1,2,4,8 agree; certificate sha256 {baseline[:16]}...")


@pytest.mark.criterion(7, "mutation sensitivity")
@pytest.mark.parametrize("name, mutant", MUTANTS, ids=lambda m: getattr(m, "__name__", m))
def test_mutation_sensitivity(monkeypatch, capsys, name, mutant):
    monkeypatch.setattr(identities, name, mutant)
    assert cmd_selftest() == EXIT_INTERNAL
    capsys.readouterr()
