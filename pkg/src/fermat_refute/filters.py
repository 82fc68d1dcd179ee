"""Necessary-condition filters for ``x**p + y**p == z**p`` with ``p`` an odd prime.

A filter either refutes a candidate, attaching a certificate whose witness can
be re-verified from the candidate alone, or stays silent (inconclusive). Each
filter only fires when its hypotheses are met.

The raw ``check_*`` functions work on bare ints and return the witness dict
or ``None``; the search loop calls them directly. The ``filter_*`` wrappers
take a :class:`Candidate` and return a :class:`Verdict`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from math import gcd as _gcd
from typing import Callable, Iterable, Sequence

from .arith import is_odd_prime, is_prime
from .errors import ConfigError

EXTERNAL_ASSUMPTION = "Bennett-Skinner (2004), Theorem 1.2"
DEFAULT_MODULI = (9, 25, 49)


class FilterId(str, Enum):
    BASIC_BOUNDS = "BASIC_BOUNDS"
    T2 = "T2"
    T3 = "T3"
    T4 = "T4"
    T5 = "T5"
    T6 = "T6"
    MODULAR = "MODULAR"
    T1_EXTERNAL = "T1_EXTERNAL"

    def __str__(self) -> str:
        return self.value


DEFAULT_PIPELINE = (
    FilterId.BASIC_BOUNDS,
    FilterId.T6,
    FilterId.T4,
    FilterId.T3,
    FilterId.T5,
    FilterId.T2,
    FilterId.MODULAR,
)

# Theorem filters in statement order, no modular screen: used to explain single candidates.
THEOREM_PIPELINE = (
    FilterId.BASIC_BOUNDS,
    FilterId.T2,
    FilterId.T3,
    FilterId.T4,
    FilterId.T5,
    FilterId.T6,
)

# These filters read only (x, y, z); their verdict is shared by every exponent.
EXPONENT_FREE = frozenset(
    {FilterId.BASIC_BOUNDS, FilterId.T2, FilterId.T3, FilterId.T4, FilterId.T5, FilterId.T6}
)


@dataclass(frozen=True, slots=True)
class Candidate:
    """A tuple ``(x, y, z, p)`` of positive integers.

    ``p`` must be an odd prime unless ``generalized`` is set, which admits any
    ``p >= 1`` for exercising known solution families. Filters reject
    generalized candidates whose exponent is outside the odd primes.
    """

    x: int
    y: int
    z: int
    p: int
    generalized: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        for name in ("x", "y", "z", "p"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise TypeError(f"{name} must be an int, got {type(v).__name__}")
            if v < 1:
                raise ValueError(f"{name} must be >= 1, got {v}")
        if not self.generalized and not is_odd_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")

    @property
    def in_domain(self) -> bool:
        return is_odd_prime(self.p)

    def swapped(self) -> Candidate:
        return Candidate(self.y, self.x, self.z, self.p, self.generalized)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.x, self.y, self.z, self.p)

    def as_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "z": self.z, "p": self.p}


@dataclass(frozen=True)
class Certificate:
    filter_id: FilterId
    candidate: Candidate
    witness: dict
    external_assumption: bool = False

    def to_record(self) -> dict:
        return {
            "candidate": self.candidate.as_dict(),
            "filter_id": self.filter_id.value,
            "witness": self.witness,
            "external_assumption": self.external_assumption,
        }

    @classmethod
    def from_record(cls, record: dict) -> Certificate:
        cand = record["candidate"]
        return cls(
            filter_id=FilterId(record["filter_id"]),
            candidate=Candidate(cand["x"], cand["y"], cand["z"], cand["p"], generalized=True),
            witness=dict(record["witness"]),
            external_assumption=bool(record["external_assumption"]),
        )

    def describe(self) -> str:
        return describe_witness(self.filter_id, self.witness)


@dataclass(frozen=True)
class Verdict:
    certificate: Certificate | None = None

    @property
    def refuted(self) -> bool:
        return self.certificate is not None

    @property
    def filter_id(self) -> FilterId | None:
        return None if self.certificate is None else self.certificate.filter_id

    def __str__(self) -> str:
        if self.certificate is None:
            return "Inconclusive"
        return f"Refuted by {self.certificate.filter_id}: {self.certificate.describe()}"


INCONCLUSIVE = Verdict()


# -- raw checks --------------------------------------------------------------


def check_basic_bounds(x: int, y: int, z: int) -> dict | None:
    if x >= z:
        return {"violated": "x>=z", "lhs": x, "rhs": z}
    if y >= z:
        return {"violated": "y>=z", "lhs": y, "rhs": z}
    s = x + y
    if s <= z:
        return {"violated": "x+y<=z", "lhs": s, "rhs": z}
    if s >= 2 * z:
        return {"violated": "x+y>=2z", "lhs": s, "rhs": 2 * z}
    return None


def check_t2(x: int, y: int, z: int) -> dict | None:
    """``(z - y) | x`` with ``z - y >= 2`` and ``gcd(x, y) == 1``."""
    d = z - y
    if d < 2 or x % d:
        return None
    if _gcd(x, y) != 1:
        return None
    return {"d": d, "dividend": "x", "quotient": x // d, "gcd_xy": 1}


def check_t2_symmetric(x: int, y: int, z: int) -> dict | None:
    """T2 applied as stated, then with the roles of x and y exchanged."""
    w = check_t2(x, y, z)
    if w is not None:
        return w
    w = check_t2(y, x, z)
    if w is not None:
        w["dividend"] = "y"
    return w


def check_t3(x: int, y: int, z: int) -> dict | None:
    s = x + y
    if _gcd(s, z) == 1:
        return {"clause": "gcd(x+y,z)", "operands": [s, z], "value": 1}
    if z > y and _gcd(z - y, x) == 1:
        return {"clause": "gcd(z-y,x)", "operands": [z - y, x], "value": 1}
    if z > x and _gcd(z - x, y) == 1:
        return {"clause": "gcd(z-x,y)", "operands": [z - x, y], "value": 1}
    return None


_is_prime_cached = lru_cache(maxsize=1 << 16)(is_prime)


def check_t4(x: int, y: int, z: int) -> dict | None:
    if _is_prime_cached(z):
        return {"z": z}
    return None


def check_t5(x: int, y: int, z: int) -> dict | None:
    if _gcd(x, y) != 1:
        return None
    s = x + y
    lower, upper = z + 2, 2 * (z - 1)
    if lower <= s <= upper:
        return None
    return {"g": 1, "s": s, "lower": lower, "upper": upper, "r": s - z if s > z else None}


def check_t6(x: int, y: int, z: int) -> dict | None:
    if z - y == 1:
        return {"gap": "z-y", "value": 1}
    if z - x == 1:
        return {"gap": "z-x", "value": 1}
    return None


def check_modular(x: int, y: int, z: int, p: int, m: int) -> dict | None:
    lhs = (pow(x, p, m) + pow(y, p, m)) % m
    rhs = pow(z, p, m)
    if lhs == rhs:
        return None
    return {"m": m, "lhs_residue": lhs, "rhs_residue": rhs}


def check_modular_many(x: int, y: int, z: int, p: int, moduli: Sequence[int]) -> dict | None:
    for m in moduli:
        w = check_modular(x, y, z, p, m)
        if w is not None:
            return w
    return None


def check_t1_external(x: int, y: int, p: int) -> dict | None:
    if p in (3, 5) or _gcd(x, y) != 1:
        return None
    return {"gcd_xy": 1, "p": p, "reduction_witness": None, "assumes": EXTERNAL_ASSUMPTION}


# -- Candidate-level filters -------------------------------------------------


def _require_domain(c: Candidate) -> None:
    if not c.in_domain:
        raise ValueError(f"filters apply only to odd prime exponents, got p={c.p}")


def _verdict(fid: FilterId, c: Candidate, witness: dict | None) -> Verdict:
    if witness is None:
        return INCONCLUSIVE
    return Verdict(Certificate(fid, c, witness, fid is FilterId.T1_EXTERNAL))


def filter_basic_bounds(c: Candidate) -> Verdict:
    _require_domain(c)
    return _verdict(FilterId.BASIC_BOUNDS, c, check_basic_bounds(c.x, c.y, c.z))


def filter_t2(c: Candidate) -> Verdict:
    """Single orientation: ``z - y`` must divide ``x``. Pipelines mirror it."""
    _require_domain(c)
    return _verdict(FilterId.T2, c, check_t2(c.x, c.y, c.z))


def filter_t3(c: Candidate) -> Verdict:
    _require_domain(c)
    return _verdict(FilterId.T3, c, check_t3(c.x, c.y, c.z))


def filter_t4(c: Candidate) -> Verdict:
    _require_domain(c)
    return _verdict(FilterId.T4, c, check_t4(c.x, c.y, c.z))


def filter_t5(c: Candidate) -> Verdict:
    _require_domain(c)
    return _verdict(FilterId.T5, c, check_t5(c.x, c.y, c.z))


def filter_t6(c: Candidate) -> Verdict:
    _require_domain(c)
    return _verdict(FilterId.T6, c, check_t6(c.x, c.y, c.z))


def filter_modular(c: Candidate, m: int) -> Verdict:
    if isinstance(m, bool) or not isinstance(m, int) or m < 2:
        raise ValueError(f"modulus must be an int >= 2, got {m!r}")
    return _verdict(FilterId.MODULAR, c, check_modular(c.x, c.y, c.z, c.p, m))


def filter_t1_external(c: Candidate) -> Verdict:
    """Refutes coprime candidates with ``p`` outside {3, 5}.

    Sound only if the cited nonexistence result for ``a**p - 4b**p = c**2``
    holds; certificates are flagged ``external_assumption``.
    """
    _require_domain(c)
    return _verdict(FilterId.T1_EXTERNAL, c, check_t1_external(c.x, c.y, c.p))


def euclid_step_check(x: int, y: int, z: int) -> bool:
    """``gcd(x + y, z) == gcd(z, x + y - z)`` for ``z < x + y < 2z``."""
    s = x + y
    if not (z < s < 2 * z):
        raise ValueError(f"need z < x+y < 2z, got x={x}, y={y}, z={z}")
    return _gcd(s, z) == _gcd(z, s - z)


# -- pipelines ---------------------------------------------------------------


def parse_filter_id(name: str | FilterId) -> FilterId:
    if isinstance(name, FilterId):
        return name
    try:
        return FilterId(str(name).strip().upper())
    except ValueError:
        raise ConfigError(f"unknown filter id: {name!r}") from None


def validate_pipeline(
    pipeline: Iterable[str | FilterId], allow_external: bool = False
) -> tuple[FilterId, ...]:
    ids = tuple(parse_filter_id(f) for f in pipeline)
    if not ids:
        raise ConfigError("pipeline must not be empty")
    if len(set(ids)) != len(ids):
        raise ConfigError(f"pipeline has duplicate filters: {[str(f) for f in ids]}")
    if FilterId.T1_EXTERNAL in ids and not allow_external:
        raise ConfigError(
            "T1_EXTERNAL depends on an external theorem; pass allow_external=True to enable it"
        )
    return ids


def validate_moduli(moduli: Iterable[int]) -> tuple[int, ...]:
    out = tuple(moduli)
    for m in out:
        if isinstance(m, bool) or not isinstance(m, int) or m < 2:
            raise ConfigError(f"moduli must be ints >= 2, got {m!r}")
    return out


EXPONENT_FREE_CHECKS: dict[FilterId, Callable[[int, int, int], "dict | None"]] = {
    FilterId.BASIC_BOUNDS: check_basic_bounds,
    FilterId.T2: check_t2_symmetric,
    FilterId.T3: check_t3,
    FilterId.T4: check_t4,
    FilterId.T5: check_t5,
    FilterId.T6: check_t6,
}

RawCheck = Callable[[int, int, int, int], "dict | None"]


def raw_check(fid: FilterId, moduli: Sequence[int] = DEFAULT_MODULI) -> RawCheck:
    """A ``(x, y, z, p) -> witness | None`` callable for one pipeline step."""
    if fid is FilterId.BASIC_BOUNDS:
        return lambda x, y, z, p: check_basic_bounds(x, y, z)
    if fid is FilterId.T2:
        return lambda x, y, z, p: check_t2_symmetric(x, y, z)
    if fid is FilterId.T3:
        return lambda x, y, z, p: check_t3(x, y, z)
    if fid is FilterId.T4:
        return lambda x, y, z, p: check_t4(x, y, z)
    if fid is FilterId.T5:
        return lambda x, y, z, p: check_t5(x, y, z)
    if fid is FilterId.T6:
        return lambda x, y, z, p: check_t6(x, y, z)
    if fid is FilterId.MODULAR:
        mods = tuple(moduli)
        return lambda x, y, z, p: check_modular_many(x, y, z, p, mods)
    if fid is FilterId.T1_EXTERNAL:
        return lambda x, y, z, p: check_t1_external(x, y, p)
    raise ConfigError(f"unknown filter id: {fid!r}")


def evaluate(
    c: Candidate,
    pipeline: Sequence[str | FilterId] = DEFAULT_PIPELINE,
    moduli: Sequence[int] = DEFAULT_MODULI,
    allow_external: bool = False,
) -> Verdict:
    """Run filters in order and return the first refutation, else inconclusive.

    T2 is tried in both orientations so the combined verdict is symmetric in
    ``x`` and ``y``.
    """
    ids = validate_pipeline(pipeline, allow_external)
    mods = validate_moduli(moduli)
    _require_domain(c)
    for fid in ids:
        witness = raw_check(fid, mods)(c.x, c.y, c.z, c.p)
        if witness is not None:
            return _verdict(fid, c, witness)
    return INCONCLUSIVE


# -- human-readable witnesses ------------------------------------------------


def describe_witness(fid: FilterId, w: dict) -> str:
    if fid is FilterId.BASIC_BOUNDS:
        return f"bound violated: {w['violated']} ({w['lhs']} vs {w['rhs']})"
    if fid is FilterId.T2:
        gap = "z-y" if w["dividend"] == "x" else "z-x"
        return f"{gap}={w['d']} divides {w['dividend']} with gcd(x,y)=1"
    if fid is FilterId.T3:
        a, b = w["operands"]
        return f"{w['clause']}=gcd({a},{b})=1"
    if fid is FilterId.T4:
        return f"z={w['z']} is prime"
    if fid is FilterId.T5:
        return f"gcd(x,y)=1 and x+y={w['s']} outside [{w['lower']}, {w['upper']}]"
    if fid is FilterId.T6:
        return f"{w['gap']}=1"
    if fid is FilterId.MODULAR:
        return (
            f"x^p+y^p = {w['lhs_residue']} != {w['rhs_residue']} = z^p (mod {w['m']})"
        )
    if fid is FilterId.T1_EXTERNAL:
        return f"gcd(x,y)=1 and p={w['p']} not in {{3,5}}; assumes {w['assumes']}"
    raise ValueError(f"unknown filter id: {fid!r}")


def certificate_line(cert: Certificate) -> str:
    """Compact one-line JSON form used by certificate streams (no newline)."""
    return json.dumps(cert.to_record(), separators=(",", ":"))
