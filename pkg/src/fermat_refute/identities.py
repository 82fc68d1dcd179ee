"""Algebraic identities behind the refutation filters, evaluated exactly.

Each function computes one side of an identity term by term so it can be
checked against direct exponentiation.
"""
from __future__ import annotations

from dataclasses import dataclass

from .arith import gcd, perfect_square_root
from .errors import InternalConsistencyError, NotASolutionError


@dataclass(frozen=True)
class ReductionWitness:
    """The triple ``(a, b, c)`` with ``a**p - 4 * b**p == c**2``."""

    a: int
    b: int
    c: int
    p: int

    def holds(self) -> bool:
        return self.a**self.p - 4 * self.b**self.p == self.c**2

    def as_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "p": self.p}


def _check_positive(**values: int) -> None:
    for name, v in values.items():
        if isinstance(v, bool) or not isinstance(v, int):
            raise TypeError(f"{name} must be an int")
        if v < 1:
            raise ValueError(f"{name} must be >= 1, got {v}")


def alt_factor_sum(x: int, y: int, n: int) -> int:
    """Cofactor of ``x + y`` in ``x**n + y**n`` for odd ``n``.

    Returns ``sum((-1)**i * x**i * y**(n-1-i) for i in range(n))``.
    """
    _check_positive(x=x, y=y, n=n)
    if n % 2 == 0:
        raise ValueError(f"alternating factorization needs odd n, got {n}")
    total = 0
    sign = 1
    xi = 1
    for i in range(n):
        total += sign * xi * y ** (n - 1 - i)
        xi *= x
        sign = -sign
    if total <= 0:
        raise InternalConsistencyError(f"alternating sum not positive: {total}")
    return total


def diff_factor_sum(z: int, y: int, n: int) -> int:
    """Cofactor of ``z - y`` in ``z**n - y**n``."""
    _check_positive(z=z, y=y, n=n)
    if z <= y:
        raise ValueError(f"need z > y, got z={z}, y={y}")
    total = 0
    zi = 1
    for i in range(n):
        total += zi * y ** (n - 1 - i)
        zi *= z
    return total


def binomial_gap_expansion(y: int, a: int, p: int) -> int:
    """Interior binomial terms: ``(y + a)**p - y**p - a**p``, term by term."""
    _check_positive(y=y, a=a)
    if isinstance(p, bool) or not isinstance(p, int) or p < 2:
        raise ValueError(f"p must be an int >= 2, got {p!r}")
    total = 0
    coeff = 1
    for j in range(1, p):
        coeff = coeff * (p - j + 1) // j
        total += coeff * y**j * a ** (p - j)
    return total


def discriminant(x: int, y: int, z: int, p: int) -> int:
    """``z**(2p) - 4 * (x*y)**p``; equals ``(x**p - y**p)**2`` on any solution."""
    _check_positive(x=x, y=y, z=z, p=p)
    return z ** (2 * p) - 4 * (x * y) ** p


def pairwise_coprime(x: int, y: int, z: int) -> bool:
    _check_positive(x=x, y=y, z=z)
    return gcd(x, y) == 1 and gcd(y, z) == 1 and gcd(x, z) == 1


def theorem1_reduce(x: int, y: int, z: int, p: int) -> ReductionWitness:
    """Map a coprime solution of ``x**p + y**p == z**p`` to ``(z**2, x*y, c)``.

    Works for any exponent ``p >= 1``; the construction does not depend on
    ``p`` being prime, which is what makes the ``p = 1`` and ``p = 2``
    solution families usable as test inputs.

    Raises:
        NotASolutionError: the tuple is not a solution, ``gcd(x, y) != 1``,
            or ``x == y`` (which forces the discriminant to vanish).
        InternalConsistencyError: the discriminant of a verified solution is
            not a positive square, or ``gcd(a, b) != 1``.
    """
    _check_positive(x=x, y=y, z=z, p=p)
    if x**p + y**p != z**p:
        raise NotASolutionError(f"not a solution: {x}^{p} + {y}^{p} != {z}^{p}")
    if gcd(x, y) != 1:
        raise NotASolutionError(f"gcd(x, y) = {gcd(x, y)} != 1")
    if x == y:
        raise NotASolutionError("x == y contradicts gcd(x, y) = 1 for a solution")
    d = discriminant(x, y, z, p)
    c = perfect_square_root(d)
    if c is None or c == 0:
        raise InternalConsistencyError(f"discriminant {d} of a solution is not a positive square")
    witness = ReductionWitness(a=z * z, b=x * y, c=c, p=p)
    if gcd(witness.a, witness.b) != 1:
        raise InternalConsistencyError(f"gcd(a, b) != 1 for {witness}")
    return witness
