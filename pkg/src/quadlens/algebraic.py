"""Algebraic and torsion-linking obstructions for a singularity type.

Four checks live here, all exact:

* the orbifold Euler characteristic bound ``0 < K^2 <= 3 e_orb``,
* squareness of ``D = p1 p2 p3 p4 * K^2``,
* representability of ``-q`` as a square modulo ``p1 p2 p3 p4``, where
  ``q`` collects the four numerators over a common denominator, and
* a residue prefilter on ``p4 mod 30`` equivalent to solvability of the
  linking condition at the primes 2, 3, 5 for the order-(2,3,5,p4) scan.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .exact import is_perfect_square, mod_inverse, sqrt_mod
from .hjcf import hj_expand
from .singtypes import SingularityType


@dataclass(frozen=True)
class AlgebraicReport:
    e_orb: Fraction
    k_square: Fraction
    obmy_pass: bool
    obmy_boundary: bool  # equality K^2 == 3 e_orb (passes; see obmy_check)
    D: Fraction
    D_square_root: int | None
    linking_q: int
    linking_modulus: int
    linking_pass: bool
    linking_witness: int | None


def e_orb(stype: SingularityType) -> Fraction:
    """Orbifold Euler characteristic: 3 minus one correction per point."""
    total = Fraction(3)
    for p in stype.orders:
        total -= Fraction(p - 1, p)
    return total


def k_square(stype: SingularityType) -> Fraction:
    """Self-intersection of the canonical class, from the dual expansions.

    Each pair contributes the coefficient sum minus three times the
    length of the expansion of ``p/(p - q)``, and a correction
    ``(q + q^{-1} - 2)/p``; the smooth part contributes 9.
    """
    total = Fraction(9)
    for lp in stype.pairs:
        dual = hj_expand(lp.p, lp.p - lp.q)
        q_inv = mod_inverse(lp.q, lp.p)
        total += sum(dual) - 3 * len(dual)
        total -= Fraction(lp.q + q_inv - 2, lp.p)
    return total


def obmy_check(stype: SingularityType) -> bool:
    """True iff ``0 < K^2 <= 3 e_orb``.

    The upper bound is non-strict: a type achieving equality is kept as
    a candidate rather than discarded.  ``AlgebraicReport.obmy_boundary``
    records equality so the strict convention can be recovered.
    """
    k2 = k_square(stype)
    return 0 < k2 <= 3 * e_orb(stype)


def d_squareness(stype: SingularityType) -> tuple[Fraction, int | None]:
    """``D = P * K^2`` and its integer square root when one exists."""
    D = stype.order_product * k_square(stype)
    root = None
    if D > 0 and D.denominator == 1:
        root = is_perfect_square(int(D))
    return D, root


def linking_q(stype: SingularityType) -> int:
    """Numerator sum q1*p2*p3*p4 + ... + p1*p2*p3*q4."""
    P = stype.order_product
    return sum(lp.q * (P // lp.p) for lp in stype.pairs)


def linking_check(stype: SingularityType) -> tuple[int, bool, int | None]:
    """Pass iff ``-q`` is a square modulo ``P = p1 p2 p3 p4``.

    Returns ``(q, pass, witness)`` with ``witness^2 = -q (mod P)`` when
    solvable.  ``q`` is always a unit mod ``P``: modulo any prime
    divisor of one order, all terms but one vanish and the remaining
    one is a product of units.
    """
    P = stype.order_product
    q = linking_q(stype)
    assert gcd(q, P) == 1, (q, P)
    witness = sqrt_mod(-q % P, P)
    return q, witness is not None, witness


_PREFILTER_RESIDUES = {1: (1, 19), 2: (7, 13), 4: (1, 19)}


def residue_prefilter(q3: int, p4: int) -> bool:
    """Admissibility of ``p4 mod 30`` for orders (2, 3, 5, p4).

    For the linking condition to be solvable at the primes 2, 3 and 5
    simultaneously, ``p4`` must fall in two residue classes mod 30
    determined by ``q3``; every other residue fails for every ``q4``.
    """
    if q3 not in _PREFILTER_RESIDUES:
        raise ValueError(f"q3 must be 1, 2 or 4, got {q3}")
    if gcd(p4, 30) != 1:
        raise ValueError(f"p4 must be coprime to 30, got {p4}")
    return p4 % 30 in _PREFILTER_RESIDUES[q3]


def algebraic_report(stype: SingularityType) -> AlgebraicReport:
    eo = e_orb(stype)
    k2 = k_square(stype)
    D, root = d_squareness(stype)
    q, link_ok, witness = linking_check(stype)
    return AlgebraicReport(
        e_orb=eo,
        k_square=k2,
        obmy_pass=0 < k2 <= 3 * eo,
        obmy_boundary=k2 == 3 * eo,
        D=D,
        D_square_root=root,
        linking_q=q,
        linking_modulus=stype.order_product,
        linking_pass=link_ok,
        linking_witness=witness,
    )
