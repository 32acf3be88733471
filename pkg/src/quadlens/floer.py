"""Correction terms of lens spaces and the spin sum-to--1/4 test.

``d_invariant`` implements the standard recursion

    d(p, q, i) = 1/4 - (2i + 1 - p - q)^2 / (4pq) - d(q, p mod q, i mod q)

with base ``d(1, 0, 0) = 0``, valid for ``0 < q < p`` and labels
``0 <= i < p + q``.  The spin structures of ``L(p, q)`` sit at the
integer values among ``(q-1)/2`` and ``(p+q-1)/2`` — one when ``p`` is
odd, two when ``p`` is even.

A type whose order product is even must, if realized, bound a spin
filling forcing some spin structure on the disjoint-union link to have
total correction term exactly -1/4; ``spin_d_check`` searches the (at
most two) candidates.  For odd order products the condition is void and
the check passes vacuously.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd


class InvalidArgs(ValueError):
    pass


_memo: dict[tuple[int, int, int], Fraction] = {}


def d_invariant(p: int, q: int, i: int) -> Fraction:
    """Correction term of L(p, q) at spin^c label i, exact."""
    if p == 1:
        if q == 0 and i == 0:
            return Fraction(0)
        raise InvalidArgs(f"base case is (1, 0, 0), got ({p}, {q}, {i})")
    if not (0 < q < p and gcd(p, q) == 1):
        raise InvalidArgs(f"need 0 < q < p coprime, got ({p}, {q})")
    if not (0 <= i < p + q):
        raise InvalidArgs(f"label {i} outside [0, {p + q})")
    return _d(p, q, i)


def _d(p: int, q: int, i: int) -> Fraction:
    if p == 1:
        return Fraction(0)
    key = (p, q, i)
    cached = _memo.get(key)
    if cached is None:
        cached = (
            Fraction(1, 4)
            - Fraction((2 * i + 1 - p - q) ** 2, 4 * p * q)
            - _d(q, p % q, i % q)
        )
        _memo[key] = cached
    return cached


def clear_memo() -> None:
    _memo.clear()


def spin_structures(p: int, q: int) -> list[int]:
    """Labels of the spin structures of L(p, q), ascending."""
    if not (0 < q < p and gcd(p, q) == 1):
        raise InvalidArgs(f"need 0 < q < p coprime, got ({p}, {q})")
    return [x // 2 for x in (q - 1, p + q - 1) if x % 2 == 0]


def spin_d_applicable(stype) -> bool:
    """The condition constrains types whose order product is even."""
    return stype.order_product % 2 == 0


def spin_d_check(stype) -> tuple[bool, tuple[int, int, int, int] | None]:
    """(pass, witness): witness labels sum to -1/4 when pass is genuine.

    Vacuous pass (no witness) when the order product is odd.
    """
    if not spin_d_applicable(stype):
        return True, None
    label_choices = [spin_structures(lp.p, lp.q) for lp in stype.pairs]
    for combo in itertools.product(*label_choices):
        total = sum(
            _d(lp.p, lp.q, i) for lp, i in zip(stype.pairs, combo)
        )
        if total == Fraction(-1, 4):
            return True, tuple(combo)
    return False, None
