"""Built-in consistency suites run by ``fermat-refute selftest``.

Functions under test are looked up on their modules at call time, so a
patched (e.g. deliberately broken) implementation is what gets exercised.
"""
from __future__ import annotations

import io
import json
import random
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Iterator

from . import certcheck, filters, identities, search


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.passed > 0

    def record(self, ok: bool, label: str) -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < 5:
                self.failures.append(label)


def _attempt(result: SuiteResult, label: str, check: Callable[[], bool]) -> None:
    try:
        ok = bool(check())
    except Exception as exc:  # a crash inside an identity counts as a failure
        ok = False
        label = f"{label}: {type(exc).__name__}: {exc}"
    result.record(ok, label)


def primitive_pythagorean_triples(z_max: int) -> Iterator[tuple[int, int, int]]:
    """Primitive triples ``(x, y, z)`` with ``x < y`` and ``z <= z_max`` (Euclid's formula)."""
    m = 2
    while m * m + 1 <= z_max:
        for n in range(1, m):
            if (m - n) % 2 == 1 and gcd(m, n) == 1:
                z = m * m + n * n
                if z > z_max:
                    continue
                a, b = m * m - n * n, 2 * m * n
                yield (min(a, b), max(a, b), z)
        m += 1


def identity_suite(samples: int = 300, seed: int = 20240601) -> SuiteResult:
    res = SuiteResult("identities")
    rng = random.Random(seed)
    cases = [(x, y, n) for x in range(1, 7) for y in range(1, 7) for n in range(1, 10, 2)]
    cases += [
        (rng.randint(1, 10**6), rng.randint(1, 10**6), rng.randrange(1, 22, 2)) for _ in range(samples)
    ]
    for x, y, n in cases:
        _attempt(res, f"alt_factor_sum{(x, y, n)}",
                 lambda: (x + y) * identities.alt_factor_sum(x, y, n) == x**n + y**n)
        hi, lo = max(x, y) + 1, min(x, y)
        _attempt(res, f"diff_factor_sum{(hi, lo, n)}",
                 lambda: (hi - lo) * identities.diff_factor_sum(hi, lo, n) == hi**n - lo**n)
        p = n + 1
        _attempt(res, f"binomial_gap_expansion{(y, x, p)}",
                 lambda: identities.binomial_gap_expansion(y, x, p) == (y + x) ** p - y**p - x**p)
    return res


def reduction_suite(pair_max: int = 60, z_max: int = 300) -> SuiteResult:
    res = SuiteResult("reduction")
    family = [(x, y, x + y, 1) for y in range(2, pair_max + 1) for x in range(1, y) if gcd(x, y) == 1]
    family += [(x, y, z, 2) for x, y, z in primitive_pythagorean_triples(z_max)]
    for x, y, z, p in family:
        def check() -> bool:
            diff = x**p - y**p
            if identities.discriminant(x, y, z, p) != diff * diff:
                return False
            if not identities.pairwise_coprime(x, y, z):
                return False
            w = identities.theorem1_reduce(x, y, z, p)
            return (
                (w.a, w.b) == (z * z, x * y)
                and w.c == abs(diff)
                and w.a**p - 4 * w.b**p == w.c**2
                and gcd(w.a, w.b) == 1
            )

        _attempt(res, f"reduce{(x, y, z, p)}", check)
    return res


def euclid_suite(z_max: int = 80) -> SuiteResult:
    res = SuiteResult("euclid-step")
    for z in range(1, z_max + 1):
        for x in range(1, 2 * z):
            for y in range(max(1, z + 1 - x), 2 * z - x):
                _attempt(res, f"euclid{(x, y, z)}", lambda: filters.euclid_step_check(x, y, z))
    return res


def certificate_suite(n_max: int = 40) -> SuiteResult:
    res = SuiteResult("certificates")
    cfg = search.SearchConfig(x_max=n_max, y_max=n_max, z_max=n_max, p_set=(3, 5, 7))
    buf = io.StringIO()
    report = search.run_search(cfg, certificates=buf)
    lines = buf.getvalue().splitlines()
    for line in lines:
        record = json.loads(line)
        c = record["candidate"]
        _attempt(res, line, lambda: certcheck.check_record(record) is None
                 and c["x"] ** c["p"] + c["y"] ** c["p"] != c["z"] ** c["p"])
    res.record(len(lines) == report.total_refuted, "certificate count matches report")
    res.record(report.oracle_solutions_found == 0, "no oracle solutions")
    res.record(
        report.total_candidates == search.expected_total(cfg),
        "candidate count matches closed form",
    )
    return res


SUITES: dict[str, Callable[[], SuiteResult]] = {
    "identities": identity_suite,
    "reduction": reduction_suite,
    "euclid-step": euclid_suite,
    "certificates": certificate_suite,
}


def run_all() -> list[SuiteResult]:
    results = []
    for name, suite in SUITES.items():
        try:
            results.append(suite())
        except Exception as exc:
            bad = SuiteResult(name)
            bad.record(False, f"suite crashed: {type(exc).__name__}: {exc}")
            results.append(bad)
    return results
