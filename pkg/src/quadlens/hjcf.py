"""Hirzebruch-Jung (negative-regular) continued fractions.

``p/q = a1 - 1/(a2 - 1/(... - 1/al))`` with every ``ai >= 2``; the
expansion exists and is unique for coprime ``p > q > 0``.  The linear
plumbing with weights ``-a1, ..., -al`` bounds the lens space ``L(p, q)``,
so these words are the combinatorial backbone of everything downstream.

Two classical facts used heavily here:

* evaluating a word from the left through the continuant recurrence
  ``K_j = a_j*K_{j-1} - K_{j-2}`` gives ``K_l = p`` and ``K_{l-1}`` equal
  to the inverse of ``q`` modulo ``p``;
* a run of ``k`` twos followed by ``x`` evaluates to
  ``((k+1)x - k) / (kx - (k-1))``, which makes one-parameter families
  ``[head, 2^k, middle, m+k, tail]`` evaluate to quadratic polynomials in
  ``k`` whose leading coefficients are controlled by the head and tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import is_perfect_square


class InvalidPair(ValueError):
    """Not a coprime pair p > q > 0."""


def _check_pair(p: int, q: int) -> None:
    if not (p > q > 0) or math.gcd(p, q) != 1:
        raise InvalidPair(f"need coprime p > q > 0, got ({p}, {q})")


def hj_expand(p: int, q: int) -> list[int]:
    """The unique expansion ``[a1, ..., al]`` of ``p/q`` with all ``ai >= 2``.

    Each step takes ``a = ceil(p/q)`` and recurses on ``(q, a*q - p)``.
    """
    _check_pair(p, q)
    word = []
    while q:
        a = -(-p // q)  # ceil division
        word.append(a)
        p, q = q, a * q - p
    return word


def hj_eval(word: list[int]) -> tuple[int, int]:
    """Evaluate a coefficient word back to a coprime pair ``(p, q)``.

    Inverse of :func:`hj_expand` on valid words; the empty word evaluates
    to ``(1, 0)``, the value that terminates the correction-term
    recursion (the 3-sphere).
    """
    p, q = 1, 0
    for a in reversed(word):
        p, q = a * p - q, p
    return p, q


def hj_continuants(word: list[int]) -> tuple[int, int]:
    """``(p, q_inv)``: the value's numerator and the inverse of q mod p.

    Left-to-right continuants ``K_j = a_j*K_{j-1} - K_{j-2}`` satisfy
    ``K_l = p`` and ``q * K_{l-1} = 1 (mod p)``.
    """
    km1, k = 0, 1
    for a in word:
        km1, k = k, a * k - km1
    return k, km1


def dual_cf(p: int, q: int) -> list[int]:
    """Expansion of ``p/(p-q)``, the word of the reversed-orientation chain."""
    _check_pair(p, q)
    return hj_expand(p, p - q)


# --------------------------------------------------------------------------
# parametric families [head, 2^(k+offset), middle, pivot+k, tail]

class OutOfRange(ValueError):
    pass


class NotQuadratic(ValueError):
    pass


class LemmaMismatch(ValueError):
    pass


@dataclass(frozen=True)
class FamilyPattern:
    """One-parameter family of words ``[head, 2^(k+twos_offset), middle,
    pivot_base + k, tail]``."""

    head: tuple[int, ...]
    middle: tuple[int, ...]
    pivot_base: int
    tail: tuple[int, ...]
    twos_offset: int = 0


def instantiate_family(pat: FamilyPattern, k: int) -> list[int]:
    twos = k + pat.twos_offset
    pivot = pat.pivot_base + k
    if twos < 0 or pivot < 2:
        raise OutOfRange(f"k={k} leaves the pattern outside valid words")
    return [*pat.head, *([2] * twos), *pat.middle, pivot, *pat.tail]


def _eval_formal(word: list[int]) -> Fraction | None:
    """Formal continued-fraction value; None if a division blows up."""
    val: Fraction | None = None
    for a in reversed(word):
        if val is None:
            val = Fraction(a)
        elif val == 0:
            return None
        else:
            val = a - 1 / val
    return val


def _fit_quadratic(samples: list[tuple[int, int]]) -> tuple[int, int, int]:
    """Exact quadratic through >= 4 integer samples, verified on all."""
    (k0, v0), (k1, v1), (k2, v2) = samples[:3]
    # Lagrange interpolation with exact rationals
    d, e, f = Fraction(0), Fraction(0), Fraction(0)
    for (ki, vi), (kj, _), (kl, _) in (
        ((k0, v0), (k1, v1), (k2, v2)),
        ((k1, v1), (k0, v0), (k2, v2)),
        ((k2, v2), (k0, v0), (k1, v1)),
    ):
        denom = (ki - kj) * (ki - kl)
        d += Fraction(vi, denom)
        e += Fraction(-vi * (kj + kl), denom)
        f += Fraction(vi * kj * kl, denom)
    if d.denominator != 1 or e.denominator != 1 or f.denominator != 1:
        raise NotQuadratic(f"no integer quadratic through {samples[:3]}")
    di, ei, fi = int(d), int(e), int(f)
    for k, v in samples:
        if di * k * k + ei * k + fi != v:
            raise NotQuadratic(f"sample {(k, v)} deviates from fit {(di, ei, fi)}")
    return di, ei, fi


@dataclass(frozen=True)
class FamilyQuadratics:
    """p, q, q^{-1} of a family as integer quadratics in k, plus the
    leading-coefficient ratios predicted by the head/tail words."""

    p_poly: tuple[int, int, int]
    q_poly: tuple[int, int, int]
    qinv_poly: tuple[int, int, int]
    ratio_p_over_q: Fraction | None
    ratio_p_over_qinv: Fraction | None  # None encodes the infinite ratio (d3 = 0)


def family_quadratics(pat: FamilyPattern, sample_ks: list[int]) -> FamilyQuadratics:
    """Fit exact quadratics for ``(p(k), q(k), q(k)^{-1} mod p(k))``.

    The leading coefficients must reproduce the classical ratios: head
    with its last entry decremented for ``d1/d2`` (1 when the head is
    empty) and the reversed tail for ``d1/d3`` (``d3 = 0`` when the tail
    is empty).  A violated ratio raises :class:`LemmaMismatch`.
    """
    if len(sample_ks) < 4:
        raise OutOfRange("need at least 4 sample points")
    rows = []
    for k in sample_ks:
        word = instantiate_family(pat, k)
        p, q = hj_eval(word)
        _, qinv = hj_continuants(word)
        rows.append((k, p, q, qinv % p))
    p_poly = _fit_quadratic([(k, p) for k, p, _, _ in rows])
    q_poly = _fit_quadratic([(k, q) for k, _, q, _ in rows])
    qinv_poly = _fit_quadratic([(k, qi) for k, _, _, qi in rows])

    d1, d2, d3 = p_poly[0], q_poly[0], qinv_poly[0]
    if pat.head:
        pred_pq = _eval_formal([*pat.head[:-1], pat.head[-1] - 1])
    else:
        pred_pq = Fraction(1)
    if pred_pq is not None:
        if d2 == 0 or Fraction(d1, d2) != pred_pq:
            raise LemmaMismatch(f"d1/d2 = {d1}/{d2}, predicted {pred_pq}")
    if pat.tail:
        pred_pqi = _eval_formal(list(reversed(pat.tail)))
        if pred_pqi is not None and (d3 == 0 or Fraction(d1, d3) != pred_pqi):
            raise LemmaMismatch(f"d1/d3 = {d1}/{d3}, predicted {pred_pqi}")
    else:
        pred_pqi = None
        if d3 != 0:
            raise LemmaMismatch(f"tail empty but d3 = {d3} != 0")
    return FamilyQuadratics(
        p_poly, q_poly, qinv_poly,
        pred_pq if isinstance(pred_pq, Fraction) else None,
        pred_pqi,
    )


def pell_square_ks(A: int, B: int, C: int, bound: int) -> list[int]:
    """All ``k`` in ``[0, bound]`` with ``A*k^2 + B*k + C`` a perfect square."""
    if A <= 0:
        raise OutOfRange("leading coefficient must be positive")
    out = []
    for k in range(bound + 1):
        v = A * k * k + B * k + C
        if v >= 0 and is_perfect_square(v) is not None:
            out.append(k)
    return out
