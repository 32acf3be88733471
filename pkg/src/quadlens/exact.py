"""Exact integer arithmetic and elementary number theory.

Everything downstream (continued fractions, intersection numbers,
correction terms, linking forms) is exact rational or integer work, so
this module fixes the arithmetic carrier once:

* rationals are ``fractions.Fraction`` (re-exported as ``ExactRational``);
  Python integers are arbitrary precision, so overflow cannot happen
  silently anywhere in the pure-Python paths.  The fixed-width fast
  paths live in :mod:`quadlens.kernels` and guard their own bounds.
* modular square roots are computed per prime power (Tonelli-Shanks at
  odd primes, the dyadic case split at 2, Hensel lifting) and glued by
  the Chinese remainder theorem.  A brute-force scan is kept alongside
  as the test oracle.

All functions are pure; the only cache is inside :func:`factorize`'s
prime table, built once at import.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

ExactRational = Fraction

# Trial division handles everything the scans need; the guard is here so
# a silly call cannot wander into an effectively-unbounded Pollard run.
FACTOR_BOUND = 1 << 62


class NotCoprime(ValueError):
    """Arguments that must be coprime are not."""


class OutOfRange(ValueError):
    """Argument outside the supported range."""


def gcd(a: int, b: int) -> int:
    """Greatest common divisor, non-negative; ``gcd(0, 0) == 0``."""
    return math.gcd(a, b)


def mod_inverse(a: int, m: int) -> int:
    """The inverse of ``a`` modulo ``m``, normalized to ``[1, m)``.

    Raises :class:`NotCoprime` when ``gcd(a, m) != 1`` and
    :class:`OutOfRange` for moduli below 2.
    """
    if m < 2:
        raise OutOfRange(f"modulus must be >= 2, got {m}")
    try:
        return pow(a, -1, m)
    except ValueError as exc:
        raise NotCoprime(f"{a} is not invertible modulo {m}") from exc


def is_perfect_square(n: int) -> int | None:
    """Return ``r`` with ``r*r == n``, or ``None`` if ``n`` is not a square.

    Negative inputs return ``None`` (convenient for signed quantities
    that are only squares when positive).
    """
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


# --------------------------------------------------------------------------
# factorization

def _sieve_primes(limit: int) -> list[int]:
    flags = bytearray([1]) * limit
    flags[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit - 1) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(range(i * i, limit, i)))
    return [i for i in range(limit) if flags[i]]


_SMALL_PRIMES = _sieve_primes(1 << 16)

# Deterministic Miller-Rabin witness set for n < 3.3e24 (covers FACTOR_BOUND).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """A nontrivial factor of odd composite ``n`` (Brent's variant)."""
    if n % 2 == 0:
        return 2
    seed = 1
    while True:
        seed += 1
        y, c, m = seed, seed, 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


@dataclass(frozen=True)
class Factorization:
    """Complete prime factorization: ``base == prod(p**e)``, primes ascending."""

    base: int
    factors: tuple[tuple[int, int], ...]

    def distinct_primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def factorize(n: int, bound: int = FACTOR_BOUND) -> Factorization:
    """Complete prime factorization of ``n >= 2`` below ``bound``."""
    if n < 2:
        raise OutOfRange(f"factorize requires n >= 2, got {n}")
    if n > bound:
        raise OutOfRange(f"{n} exceeds the factorization bound {bound}")
    base = n
    factors: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    # Anything left is free of prime factors below 2^16: prime, or a
    # composite that Pollard rho splits quickly.
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return Factorization(base, tuple(sorted(factors.items())))


# --------------------------------------------------------------------------
# square roots modulo m

def _tonelli_shanks(a: int, p: int) -> int | None:
    """A square root of ``a`` modulo an odd prime ``p``, or ``None``."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # write p-1 = q * 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t * t % p, 1
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def _sqrt_mod_prime_power(a: int, p: int, e: int) -> int | None:
    """A root of ``x^2 = a`` mod ``p^e`` for ``a`` coprime to ``p``."""
    if a % (p ** e) == 1:
        return 1
    if p == 2:
        if e == 1:
            return 1  # a is odd
        if e == 2:
            return 1 if a % 4 == 1 else None
        if a % 8 != 1:
            return None
        # lift from 2^3 upward: adjust by the top live bit when stuck
        x, k = 1, 3
        while k < e:
            if (x * x - a) % (1 << (k + 1)):
                x += 1 << (k - 1)
            k += 1
        return x % (1 << e)
    x = _tonelli_shanks(a, p)
    if x is None:
        return None
    pk = p
    while pk < p ** e:
        # Hensel: x -> x - (x^2 - a) / (2x), exact one-step lift p^k -> p^2k
        pk2 = min(pk * pk, p ** e)
        x = (x - (x * x - a) * pow(2 * x, -1, pk2)) % pk2
        pk = pk2
    return x


def _crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int]:
    h = (r2 - r1) * pow(m1, -1, m2) % m2
    return r1 + m1 * h, m1 * m2


def sqrt_mod(a: int, m: int) -> int | None:
    """A solution ``x`` in ``[0, m)`` of ``x^2 = a (mod m)``, or ``None``.

    Requires ``gcd(a, m) == 1``.  Solvability is decided locally: Euler's
    criterion at odd primes (Hensel lifting is then automatic), the
    classical case split at 2 (always solvable mod 2; needs ``a = 1 mod 4``
    at 4, ``a = 1 mod 8`` beyond), and the local roots are combined by CRT.
    """
    if m < 2:
        raise OutOfRange(f"modulus must be >= 2, got {m}")
    a %= m
    if math.gcd(a, m) != 1:
        raise NotCoprime(f"sqrt_mod requires gcd(a, m) = 1, got a={a}, m={m}")
    if a == 1:
        return 1
    root, mod = 0, 1
    for p, e in factorize(m).factors:
        x = _sqrt_mod_prime_power(a, p, e)
        if x is None:
            return None
        root, mod = _crt_pair(root, mod, x, p ** e)
    return root % m


def sqrt_mod_brute(a: int, m: int) -> int | None:
    """Test oracle: first root of ``x^2 = a (mod m)`` by direct scan."""
    a %= m
    for x in range(m):
        if x * x % m == a:
            return x
    return None
