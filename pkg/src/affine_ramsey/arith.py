"""Integer helpers: primality, next prime, exact square tests."""

from __future__ import annotations

from math import gcd, isqrt, prod

import gmpy2

_SMALL_PRIMES = [p for p in range(2, 1000) if all(p % q for q in range(2, isqrt(p) + 1))]
_MR_BASES = _SMALL_PRIMES[:13]  # 2..41
# Miller-Rabin with the first 13 prime bases is exact below this bound
# (Sorenson & Webster 2015).
MR_DETERMINISTIC_BOUND = 3_317_044_064_679_887_385_961_981
_PRIMORIAL = prod(_SMALL_PRIMES)


def _strong_probable_prime(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def primality_method(n: int) -> str:
    """Name of the test :func:`is_prime` applies to ``n``."""
    if n < _SMALL_PRIMES[-1] ** 2:
        return "trial-division"
    if n < MR_DETERMINISTIC_BOUND:
        return "deterministic-miller-rabin"
    return "bpsw"


def is_prime(n: int) -> bool:
    """Primality test; exact below ``MR_DETERMINISTIC_BOUND``, BPSW above it."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < _SMALL_PRIMES[-1] ** 2:
        return True
    if n < MR_DETERMINISTIC_BOUND:
        return all(_strong_probable_prime(n, a) for a in _MR_BASES)
    return bool(gmpy2.is_strong_bpsw_prp(gmpy2.mpz(n)))


def next_prime(n: int) -> int:
    """Least prime strictly greater than ``n``."""
    c = n + 1
    if c <= 2:
        return 2
    if c % 2 == 0:
        c += 1
    while True:
        if c < _SMALL_PRIMES[-1] ** 2:
            if is_prime(c):
                return c
        elif gcd(c, _PRIMORIAL) == 1 and is_prime(c):
            return c
        c += 2


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def zrank(a: int) -> int:
    """Position of ``a`` in the enumeration 0, 1, -1, 2, -2, ..."""
    return 2 * a - 1 if a > 0 else -2 * a


def zunrank(i: int) -> int:
    return (i + 1) // 2 if i % 2 else -(i // 2)


def v2(n: int) -> int:
    """2-adic valuation of a nonzero integer."""
    return (n & -n).bit_length() - 1
