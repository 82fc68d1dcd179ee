import math

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from fermat_refute import arith


@pytest.mark.parametrize("a, b, expected", [(12, 18, 6), (7, 7, 7), (35, 64, 1), (5, 0, 5), (0, 9, 9)])
def test_gcd_examples(a, b, expected):
    assert arith.gcd(a, b) == expected


def test_gcd_zero_zero_is_an_error():
    with pytest.raises(ValueError):
        arith.gcd(0, 0)


@given(st.integers(0, 10**30), st.integers(1, 10**30))
def test_gcd_euclidean_step(a, b):
    assert arith.gcd(a, b) == arith.gcd(b, a % b)


@pytest.mark.parametrize("n, root", [(49, 7), (48, None), (14161, 119), (0, 0), (1, 1), (-4, None)])
def test_perfect_square_root(n, root):
    assert arith.perfect_square_root(n) == root


@given(st.integers(0, 10**60))
def test_square_root_of_square(n):
    assert arith.perfect_square_root(n * n) == n


@given(st.integers(0, 10**60))
def test_square_detection_matches_isqrt(n):
    assert (arith.perfect_square_root(n) is not None) == (math.isqrt(n) ** 2 == n)


def test_square_root_is_exact_beyond_float_range():
    r = 10**200 + 7
    assert arith.perfect_square_root(r * r) == r
    assert arith.perfect_square_root(r * r + 1) is None


@pytest.mark.parametrize("n, expected", [(1, False), (2, True), (9, False), (97, True), (561, False)])
def test_is_prime_examples(n, expected):
    assert arith.is_prime(n) is expected


def test_is_prime_agrees_with_sympy_below_20000():
    assert [n for n in range(20000) if arith.is_prime(n)] == list(sympy.primerange(0, 20000))


@pytest.mark.parametrize(
    "n",
    [
        2**32 - 5,  # largest prime below 2**32
        2**32 + 15,
        2**61 - 1,
        2**89 - 1,
        2**127 - 1,
        10**30 + 57,
    ],
)
def test_is_prime_large_primes(n):
    assert arith.is_prime(n) == sympy.isprime(n)
    assert arith.is_prime(n)


@pytest.mark.parametrize(
    "n",
    [
        2**32 + 1,  # 641 * 6700417
        3215031751,  # strong pseudoprime to bases 2, 3, 5, 7
        3825123056546413051,  # strong pseudoprime to bases 2..23
        318665857834031151167461,  # strong pseudoprime to bases 2..37
        (2**61 - 1) * (2**89 - 1),
        (10**15 + 37) ** 2,
    ],
)
def test_is_prime_rejects_composites_and_pseudoprimes(n):
    assert not arith.is_prime(n)


@given(st.integers(2**32, 2**80))
@settings(max_examples=200)
def test_is_prime_matches_sympy_above_trial_division(n):
    assert arith.is_prime(n) == sympy.isprime(n)


def test_odd_primes_up_to_examples():
    assert arith.odd_primes_up_to(12) == [3, 5, 7, 11]
    assert arith.odd_primes_up_to(2) == []
    assert arith.odd_primes_up_to(31) == [3, 5, 7, 11, 13, 17, 19, 23, 29, 31]


@pytest.mark.parametrize("limit", [0, 1, 3, 100, 1000])
def test_odd_primes_agree_with_is_prime(limit):
    assert set(arith.odd_primes_up_to(limit)) == {n for n in range(3, limit + 1) if arith.is_prime(n)}


@pytest.mark.parametrize("n, k, expected", [(5, 2, 10), (9, 0, 1), (7, 3, 35)])
def test_binomial(n, k, expected):
    assert arith.binomial(n, k) == expected


def test_binomial_rejects_k_above_n():
    with pytest.raises(ValueError):
        arith.binomial(3, 4)


@given(st.integers(2, 200).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n - 1))))
def test_pascal_rule(nk):
    n, k = nk
    assert arith.binomial(n, k) == arith.binomial(n - 1, k - 1) + arith.binomial(n - 1, k)


@pytest.mark.parametrize("base, exp, expected", [(2, 10, 1024), (123456789, 1, 123456789), (7, 3, 343), (0, 5, 0)])
def test_pow(base, exp, expected):
    assert arith.pow(base, exp) == expected


def test_pow_zero_to_zero_is_an_error():
    with pytest.raises(ValueError):
        arith.pow(0, 0)
