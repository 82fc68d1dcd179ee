"""Exact integer primitives shared by every other module.

All values are plain Python ``int`` objects, so arithmetic is exact at any size.
"""
from __future__ import annotations

import math
from functools import lru_cache

__all__ = [
    "gcd",
    "perfect_square_root",
    "is_prime",
    "is_odd_prime",
    "odd_primes_up_to",
    "binomial",
    "pow",
]

_builtin_pow = pow

TRIAL_DIVISION_LIMIT = 1 << 32
# Strong-pseudoprime test on the first 13 prime bases has no false positives below this bound.
_MR_DETERMINISTIC_LIMIT = 3317044064679887385961981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def _require_int(name: str, value) -> None:
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"{name} must be an int, got {type(value).__name__}")


def _require_natural(name: str, value) -> None:
    _require_int(name, value)
    if value < 0:
        raise ValueError(f"{name} must be >= 0, got {value}")


def gcd(a: int, b: int) -> int:
    """Greatest common divisor of two non-negative integers.

    ``gcd(0, 0)`` raises ``ValueError``: it never arises from a valid
    candidate, so hitting it means an enumeration bug upstream.
    """
    _require_natural("a", a)
    _require_natural("b", b)
    if a == 0 and b == 0:
        raise ValueError("gcd(0, 0) is undefined")
    return math.gcd(a, b)


def perfect_square_root(n: int) -> int | None:
    """Return ``r`` with ``r * r == n``, or ``None`` if ``n`` is not a square.

    Negative input is never a square and yields ``None``.
    """
    _require_int("n", n)
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    # every prime up to sqrt(2**32)
    return tuple(_sieve(1 << 16))


def _sieve(limit: int) -> list[int]:
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = bytes(len(range(i * i, limit + 1, i)))
    return [i for i, f in enumerate(flags) if f]


def _trial_division(n: int) -> bool:
    for q in _small_primes():
        if q * q > n:
            return True
        if n % q == 0:
            return n == q
    return True


def _strong_probable_prime(n: int, base: int) -> bool:
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = _builtin_pow(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _half_mod(v: int, n: int) -> int:
    v %= n
    if v & 1:
        v += n
    return v // 2


def _strong_lucas_probable_prime(n: int) -> bool:
    # Selfridge parameters: first D in 5, -7, 9, -11, ... with (D/n) = -1
    d_param = 5
    while True:
        j = _jacobi(d_param, n)
        if j == -1:
            break
        if j == 0 and abs(d_param) != n:
            return False
        d_param = -d_param - 2 if d_param > 0 else -d_param + 2
    p_param, q_param = 1, (1 - d_param) // 4

    d = n + 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1

    u, v, qk = 1, p_param, q_param % n
    for bit in bin(d)[3:]:
        u, v = u * v % n, (v * v - 2 * qk) % n
        qk = qk * qk % n
        if bit == "1":
            u, v = _half_mod(p_param * u + v, n), _half_mod(d_param * u + p_param * v, n)
            qk = qk * q_param % n
    if u == 0 or v == 0:
        return True
    for _ in range(s - 1):
        v = (v * v - 2 * qk) % n
        qk = qk * qk % n
        if v == 0:
            return True
    return False


def is_prime(n: int) -> bool:
    """Exact primality.

    Trial division below 2**32; above that a strong-pseudoprime test on a
    fixed witness set that is proven exact below ~3.3e24. Past that bound a
    strong Lucas test is added (Baillie-PSW), which is still deterministic
    and has no known counterexample.
    """
    _require_int("n", n)
    if n < 2:
        return False
    if n < TRIAL_DIVISION_LIMIT:
        return _trial_division(n)
    for q in _MR_BASES:
        if n % q == 0:
            return False
    if not all(_strong_probable_prime(n, b) for b in _MR_BASES):
        return False
    if n < _MR_DETERMINISTIC_LIMIT:
        return True
    if math.isqrt(n) ** 2 == n:
        return False
    return _strong_lucas_probable_prime(n)


@lru_cache(maxsize=4096)
def is_odd_prime(n: int) -> bool:
    """Membership in the exponent domain: primes >= 3."""
    return n >= 3 and is_prime(n)


def odd_primes_up_to(limit: int) -> list[int]:
    """All primes ``3 <= p <= limit`` in ascending order."""
    _require_int("limit", limit)
    return [q for q in _sieve(limit) if q != 2]


def binomial(n: int, k: int) -> int:
    _require_natural("n", n)
    _require_natural("k", k)
    if k > n:
        raise ValueError(f"binomial requires k <= n, got n={n}, k={k}")
    return math.comb(n, k)


def pow(base: int, exp: int) -> int:  # noqa: A001 - deliberately mirrors the builtin
    """Exact ``base ** exp`` for naturals; ``0 ** 0`` is rejected."""
    _require_natural("base", base)
    _require_natural("exp", exp)
    if base == 0 and exp == 0:
        raise ValueError("0 ** 0 is undefined")
    return base**exp
