"""Independent re-verification of serialized refutation certificates.

Works on the plain record form (as written to a certificate stream) and
recomputes every claim from the candidate fields. Nothing here calls into the
filter implementations.
"""
from __future__ import annotations

import json
from math import gcd
from typing import Iterable

from .arith import is_prime as _is_prime_large

_SMALL_PRIME_CUTOFF = 1 << 40


def _is_prime(n: int) -> bool:
    if n >= _SMALL_PRIME_CUTOFF:
        return _is_prime_large(n)
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    k = 5
    while k * k <= n:
        if n % k == 0 or n % (k + 2) == 0:
            return False
        k += 6
    return True


def _int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def check_record(record: dict) -> str | None:
    """Return ``None`` if the certificate holds, otherwise the reason it does not."""
    try:
        cand = record["candidate"]
        x, y, z, p = cand["x"], cand["y"], cand["z"], cand["p"]
        fid = record["filter_id"]
        w = record["witness"]
        external = record["external_assumption"]
    except (KeyError, TypeError) as exc:
        return f"malformed record: {exc!r}"
    if not all(_int(v) and v >= 1 for v in (x, y, z, p)):
        return "candidate fields must be positive ints"
    if not isinstance(w, dict):
        return "witness must be an object"
    if external is not (fid == "T1_EXTERNAL"):
        return "external_assumption flag must be set exactly for T1_EXTERNAL"
    if fid != "MODULAR" and not (p >= 3 and _is_prime(p)):
        return f"exponent {p} is not an odd prime"
    checker = _CHECKERS.get(fid)
    if checker is None:
        return f"unknown filter id {fid!r}"
    try:
        return checker(x, y, z, p, w)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        return f"malformed witness: {exc!r}"


def _basic_bounds(x, y, z, p, w):
    expected = {
        "x>=z": (x, z, x >= z),
        "y>=z": (y, z, y >= z),
        "x+y<=z": (x + y, z, x + y <= z),
        "x+y>=2z": (x + y, 2 * z, x + y >= 2 * z),
    }.get(w["violated"])
    if expected is None:
        return f"unknown inequality {w['violated']!r}"
    lhs, rhs, holds = expected
    if (w["lhs"], w["rhs"]) != (lhs, rhs):
        return "bound operands do not match candidate"
    return None if holds else "claimed inequality does not hold"


def _t2(x, y, z, p, w):
    if w["dividend"] == "x":
        d, target = z - y, x
    elif w["dividend"] == "y":
        d, target = z - x, y
    else:
        return f"bad dividend {w['dividend']!r}"
    if w["d"] != d:
        return "divisor does not match the gap"
    if d < 2:
        return "gap must be at least 2"
    if target % d != 0 or w["quotient"] * d != target:
        return "divisibility claim fails"
    if gcd(x, y) != 1 or w["gcd_xy"] != 1:
        return "gcd(x, y) is not 1"
    return None


def _t3(x, y, z, p, w):
    clause = w["clause"]
    if clause == "gcd(x+y,z)":
        ops = [x + y, z]
    elif clause == "gcd(z-y,x)":
        if z <= y:
            return "clause needs z > y"
        ops = [z - y, x]
    elif clause == "gcd(z-x,y)":
        if z <= x:
            return "clause needs z > x"
        ops = [z - x, y]
    else:
        return f"unknown clause {clause!r}"
    if list(w["operands"]) != ops:
        return "gcd operands do not match candidate"
    if w["value"] != 1 or gcd(*ops) != 1:
        return "gcd is not 1"
    return None


def _t4(x, y, z, p, w):
    if w["z"] != z:
        return "z does not match candidate"
    return None if _is_prime(z) else "z is not prime"


def _t5(x, y, z, p, w):
    s = x + y
    if gcd(x, y) != 1 or w["g"] != 1:
        return "gcd(x, y) is not 1"
    if (w["s"], w["lower"], w["upper"]) != (s, z + 2, 2 * (z - 1)):
        return "sum or bounds do not match candidate"
    if w["r"] != (s - z if s > z else None):
        return "r does not equal x+y-z"
    if z + 2 <= s <= 2 * (z - 1):
        return "x+y lies inside the admissible interval"
    return None


def _t6(x, y, z, p, w):
    gap = {"z-y": z - y, "z-x": z - x}.get(w["gap"])
    if gap is None:
        return f"unknown gap {w['gap']!r}"
    return None if gap == 1 == w["value"] else "gap is not 1"


def _modular(x, y, z, p, w):
    m = w["m"]
    if not _int(m) or m < 2:
        return "modulus must be >= 2"
    # full powers for small p, modular exponentiation above
    lhs = (x**p + y**p) % m if p < 64 else (pow(x, p, m) + pow(y, p, m)) % m
    rhs = z**p % m if p < 64 else pow(z, p, m)
    if (w["lhs_residue"], w["rhs_residue"]) != (lhs, rhs):
        return "residues do not match"
    return None if lhs != rhs else "residues agree"


def _t1_external(x, y, z, p, w):
    if gcd(x, y) != 1 or w["gcd_xy"] != 1:
        return "gcd(x, y) is not 1"
    if p in (3, 5) or w["p"] != p:
        return "exponent excluded or mismatched"
    if not w.get("assumes"):
        return "external assumption not named"
    return None


_CHECKERS = {
    "BASIC_BOUNDS": _basic_bounds,
    "T2": _t2,
    "T3": _t3,
    "T4": _t4,
    "T5": _t5,
    "T6": _t6,
    "MODULAR": _modular,
    "T1_EXTERNAL": _t1_external,
}


def recheck(record: dict) -> bool:
    return check_record(record) is None


def recheck_lines(lines: Iterable[str]) -> tuple[int, list[tuple[int, str]]]:
    """Check a stream of JSON lines; returns (count, [(line_no, reason), ...])."""
    count = 0
    failures = []
    for i, line in enumerate(lines, 1):
        if not line.strip():
            continue
        count += 1
        try:
            reason = check_record(json.loads(line))
        except json.JSONDecodeError as exc:
            reason = f"invalid JSON: {exc}"
        if reason is not None:
            failures.append((i, reason))
    return count, failures

